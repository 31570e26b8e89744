"""The Abel transform turns the spherical transform into an ordinary Fourier transform.

For a radial function f on the disk, Af(t) is a weighted horocycle
integral. Its Euclidean Fourier transform in t coincides with the spherical
transform of f, which integrates f against spherical functions.
"""
import numpy as np

from symradon.abel import RadialField, abel_grid, abel_invert, euclidean_fourier, spherical_function, \
    spherical_transform
from symradon.geometry import PhantomSpec

f = RadialField.from_phantom(PhantomSpec("gaussian-of-distance", width=0.7))
g = abel_grid(f)
print("Abel transform samples (even in t):")
for t in (0.0, 0.5, 1.0, 2.0):
    i = np.argmin(np.abs(g.t - t))
    j = np.argmin(np.abs(g.t + t))
    print(f"  t = {g.t[i]:+.3f}: {g.values[i]:.8f}    t = {g.t[j]:+.3f}: {g.values[j]:.8f}")

lam = np.array([0.0, 1.0, 2.5, 5.0])
fourier = euclidean_fourier(g, lam)
spherical = spherical_transform(f, lam)
print("\nFourier transform of Af against the spherical transform of f:")
for l, a, b in zip(lam, fourier, spherical):
    print(f"  lambda = {l:3.1f}   {a.real:+.10f}   {b.real:+.10f}   diff {abs(a - b):.1e}")

print("\nSpherical functions are even in lambda and equal 1 at the origin:")
for l in (0.0, 1.5):
    print(f"  phi_{l}(0) = {spherical_function(l, 0.0).real:.3f}   "
          f"phi_{l}(1.2) = {spherical_function(l, 1.2).real:+.8f}   phi_-{l}(1.2) = {spherical_function(-l, 1.2).real:+.8f}")

back = abel_invert(g)
r = np.array([0.0, 0.5, 1.0])
print("\nInverting the Abel transform:", np.round(back(r), 6), "vs", np.round(f(r), 6))
