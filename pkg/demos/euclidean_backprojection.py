"""Recover a Gaussian in the plane from its line integrals.

The line integral of exp(-|x|^2) at distance p from the origin is
sqrt(pi) exp(-p^2). Averaging those integrals over the lines at distance p
from a point x gives F_x(p); the value f(x) is -(1/pi) int F_x'(p) dp / p.
"""
import math

import numpy as np

from symradon.euclid_radon import dual_at_distance, invert_xray, sinogram
from symradon.geometry import PhantomSpec, phantom, plane_at_distance

f = phantom(PhantomSpec("gaussian-of-distance", space="R2", center=[0.3, -0.2], width=0.9))
phi = sinogram(f, d=1)

print("Average of line integrals at distance p from the origin:")
for p in (0.0, 0.5, 1.0, 2.0):
    print(f"  p = {p:3.1f}   F(p) = {dual_at_distance(phi, [0.0, 0.0], p):.6f}")

print("\nPointwise reconstruction:")
rng = np.random.default_rng(1)
for x in rng.uniform(-1.5, 1.5, size=(5, 2)):
    est = invert_xray(phi, x)
    print(f"  x = ({x[0]:+.2f}, {x[1]:+.2f})   f = {float(f(x)):.6f}   recovered = {est.value:.6f}"
          f"   |diff| = {abs(est.value - float(f(x))):.1e}")

centered = sinogram(phantom(PhantomSpec("gaussian-of-distance", space="R2")), 1)
print(f"\nCentered unit Gaussian, recovered at the origin: {invert_xray(centered, [0.0, 0.0]).value:.8f} (exact 1)")
print(f"its line integral through the center: {centered(plane_at_distance([0, 0], [[0.0, 1.0]], [1.0, 0.0], 0.0)):.8f}"
      f" = sqrt(pi) = {math.sqrt(math.pi):.8f}")
