"""Fourier analysis on the disk: the transform, Plancherel, inversion and decay.

The transform pairs f with the eigenfunctions exp((i lambda + 1/2) A(z, b))
of the Laplacian, one for each spectral parameter lambda and boundary point b.
"""
import numpy as np

from symradon.calibration import expected_constants
from symradon.geometry import PhantomSpec, phantom
from symradon.hfourier import SpectralGrid, hfourier_invert, plancherel_check, riemann_lebesgue_scan

kappa = expected_constants()["kappa"]
f = phantom(PhantomSpec("gaussian-of-distance", center=0.3 + 0.2j, width=0.8))
F = SpectralGrid.from_field(f)
print(f"spectral grid: lambda in [0, {F.lam[-1]:g}] step {F.lam[1]:g}, {F.J} boundary angles")
print(f"share of spectral mass at the band edge: {F.tail_fraction():.1e}")

lhs, rhs, ratio = plancherel_check(f, kappa, F)
print(f"\nPlancherel: ||f||^2 = {lhs:.10f}, kappa * spectral energy = {rhs:.10f}, ratio = {ratio:.10f}")

z = np.array([0j, 0.3 + 0.2j, -0.4 + 0.3j])
print("\nInversion from the spectral grid:")
for zi, v in zip(z, hfourier_invert(F, z, kappa)):
    print(f"  z = {zi:.2f}   f = {float(f(zi)):.6f}   recovered = {v:.6f}")

print("\nRiemann-Lebesgue: sup of |f~(xi + i eta, b)| over |eta| <= 1/2 and b")
xi = [1.0, 10.0, 20.0, 40.0]
for name, s in [("smooth bump", PhantomSpec("compact-bump", support_radius=2.0)),
                ("ball indicator", PhantomSpec("indicator", support_radius=1.0))]:
    table = riemann_lebesgue_scan(phantom(s), xi, np.linspace(-0.5, 0.5, 5), np.linspace(0, 2 * np.pi, 8,
                                                                                          endpoint=False))
    print(f"  {name:15s}" + "".join(f"  xi={x:<4g} {v:.2e}" for x, v in zip(table.xi, table.sup)))
