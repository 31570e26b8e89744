"""Horocycle transform on the Poincare disk: forward, dual, inversion, Plancherel, range and support.

Haar measures are normalized as ``dn = ds / pi`` on horocycles and
``dx = dA / pi`` on the disk (``ds`` arclength, ``dA`` hyperbolic area);
with these the Abel, spherical and Fourier identities hold without extra
constants and ``|c(lambda)|^-2 = pi lambda tanh(pi lambda)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.interpolate import CubicSpline

from .geometry import Horocycle, ScalarField, busemann, cayley, hyp_distance, inverse_cayley
from .numerics import (
    RHO,
    WEYL_ORDER,
    EvenGridFunction,
    MissingDecayError,
    Multiplier,
    QuadratureSpec,
    apply_multiplier,
    c_density_grid,
    dft,
    dual_grid,
    panel_rule,
)


def horocycle_integrals(f: ScalarField, t, theta, spec: QuadratureSpec | None = None):
    """``f-hat(xi_{t, theta}) = int_xi f dn`` for broadcast arrays ``t`` and ``theta``.

    Computed in the half plane where the horocycle is ``{Im w = e^t}``.  With
    ``s_c`` the point closest to the center ``c`` and ``D`` its distance,
    ``cosh d(c, xi(s)) = cosh D cosh^2 v`` under ``s = s_c + sigma sinh v``, so
    the distance grows linearly in ``v`` and a Gauss rule in ``v`` on the arc
    inside the cutoff ball resolves the integrand uniformly.
    """
    spec = spec or QuadratureSpec()
    if f.decay is None:
        raise MissingDecayError(f"{f.name} has no decay metadata")
    t, theta = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(theta, dtype=float))
    wc = cayley(np.asarray(f.center, dtype=complex) * np.exp(-1j * theta))
    et = np.exp(t)
    coshD = 1 + (et - wc.imag) ** 2 / (2 * et * wc.imag)
    ratio = math.cosh(f.radius) / coshD
    live = ratio > 1
    out = np.zeros(t.shape)
    if not np.any(live):
        return out
    vmax = np.arccosh(np.sqrt(ratio[live]))[:, None]
    sigma = np.sqrt(2 * wc.imag[live] * coshD[live] / et[live])[:, None]
    x, w = panel_rule(-1.0, 1.0, spec.gauss_order, spec.panel_count)
    v = vmax * x
    s = (wc.real[live] / et[live])[:, None] + sigma * np.sinh(v)
    z = np.exp(1j * theta[live])[:, None] * inverse_cayley(et[live][:, None] * (s + 1j))
    out[live] = np.sum(f(z) * w * np.cosh(v), axis=-1) * (sigma * vmax)[:, 0] / np.pi
    return out


def horocycle_forward(f: ScalarField, xi: Horocycle, spec: QuadratureSpec | None = None) -> float:
    return float(horocycle_integrals(f, xi.t, xi.theta, spec))


def boundary_samples(z, J: int = 64) -> int:
    """Circle samples needed to resolve the Poisson kernel at ``z`` (a power of two, at least ``J``)."""
    d = float(np.max(hyp_distance(np.asarray(z), 0j), initial=0.0))
    need = 16 * math.exp(d)
    return max(J, 1 << int(math.ceil(math.log2(need))))


def horocycle_dual(phi: Callable, z, J: int = 64):
    """``(1/2pi) int phi(A(z, theta), theta) P(z, theta) d theta``.

    ``phi(t, theta)`` is evaluated on the horocycles through ``z``; ``z`` may
    be an array.  The number of circle samples grows with the distance of
    ``z`` from the origin so the Poisson kernel stays resolved.
    """
    z = np.asarray(z, dtype=complex)
    M = boundary_samples(z, J)
    theta = 2 * np.pi * np.arange(M) / M
    A = busemann(z[..., None], theta)
    return np.mean(phi(A, theta) * np.exp(A), axis=-1)


@dataclass(frozen=True)
class HorocycleSinogram:
    """Samples ``psi(t_k, theta_j)``; rows follow the t-grid of :class:`EvenGridFunction`."""

    values: np.ndarray
    T: float

    @property
    def N(self) -> int:
        return self.values.shape[0]

    @property
    def J(self) -> int:
        return self.values.shape[1]

    @property
    def t(self) -> np.ndarray:
        return -self.T + (2 * self.T / self.N) * np.arange(self.N)

    @property
    def theta(self) -> np.ndarray:
        return 2 * np.pi * np.arange(self.J) / self.J

    @classmethod
    def from_field(cls, f: ScalarField, spec: QuadratureSpec | None = None, J: int = 64):
        spec = spec or QuadratureSpec()
        if J & (J - 1):
            raise ValueError("J must be a power of two")
        t = -spec.grid_T + (2 * spec.grid_T / spec.grid_N) * np.arange(spec.grid_N)
        theta = 2 * np.pi * np.arange(J) / J
        vals = horocycle_integrals(f, t[:, None], theta[None, :], spec)
        return cls(vals, spec.grid_T)

    def column(self, j: int) -> EvenGridFunction:
        return EvenGridFunction(self.values[:, j], self.T, even=False)

    def __add__(self, other: "HorocycleSinogram") -> "HorocycleSinogram":
        return HorocycleSinogram(self.values + other.values, self.T)

    def __mul__(self, a: float) -> "HorocycleSinogram":
        return HorocycleSinogram(a * self.values, self.T)

    __rmul__ = __mul__

    def interpolant(self) -> Callable:
        """Smooth interpolant ``(t, theta) -> psi``: cubic splines in ``t`` of the ``theta``-Fourier modes."""
        coef = np.fft.fft(self.values, axis=1) / self.J
        n = np.fft.fftfreq(self.J, 1.0 / self.J)
        # the Nyquist mode is split evenly between +-J/2 to keep the result real
        nyq = self.J // 2
        spline = CubicSpline(self.t, coef, axis=0)
        real = np.isrealobj(self.values)

        def evaluate(t, theta):
            t, theta = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(theta, dtype=float))
            c = spline(t)  # t.shape + (J,)
            phase = np.exp(1j * n * theta[..., None])
            phase[..., nyq] = np.cos(nyq * theta)
            out = np.sum(c * phase, axis=-1)
            return out.real if real else out

        return evaluate

    def to_csv(self, path):
        with open(path, "w") as fh:
            fh.write("t,theta,value\n")
            for tk, row in zip(self.t, self.values):
                for th, v in zip(self.theta, row):
                    fh.write(f"{tk:.12g},{th:.12g},{v:.17g}\n")

    @classmethod
    def from_csv(cls, path) -> "HorocycleSinogram":
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        ts = np.unique(data[:, 0])
        J = data.shape[0] // ts.size
        N = ts.size
        dt = ts[1] - ts[0]
        return cls(data[:, 2].reshape(N, J), float(N * dt / 2))


# ---------------------------------------------------------------- inversion


def _conjugated_multiplier(values: np.ndarray, T: float, m: Multiplier) -> np.ndarray:
    """``e^{-rho t} M(e^{rho t} psi)`` applied to every column of ``values``."""
    t = -T + (2 * T / values.shape[0]) * np.arange(values.shape[0])
    w = np.exp(RHO * t)[:, None]
    g = EvenGridFunction((w * values).T, T, even=False)
    out = apply_multiplier(g, m)
    return np.asarray(out.values).T.real / w


def lambda_filter(psi: HorocycleSinogram) -> HorocycleSinogram:
    """Apply the composite multiplier ``|c(lambda)|^-2`` in ``t``, conjugated by ``e^{rho t}``."""
    m = c_density_grid(psi.T, psi.N)
    return HorocycleSinogram(_conjugated_multiplier(psi.values, psi.T, m), psi.T)


def lambda_invert(psi: HorocycleSinogram, z, filtered: HorocycleSinogram | None = None):
    """Reconstruct ``f(z)`` from its horocycle transform: ``(1/w)`` times the dual of the filtered sinogram.

    Pass ``filtered`` (from :func:`lambda_filter`) to reuse it across calls.
    """
    g = filtered or lambda_filter(psi)
    return horocycle_dual(g.interpolant(), z, psi.J) / WEYL_ORDER


# ---------------------------------------------------------------- Plancherel


def l2_norm_squared(f: ScalarField, order: int = 64, angles: int = 64) -> float:
    """``int_X |f|^2 dx`` with ``dx = dA / pi``, by polar quadrature about the field center."""
    from .geometry import mobius

    R = f.radius
    r, wr = panel_rule(0.0, R, order, 2)
    a = 2 * np.pi * np.arange(angles) / angles
    z = mobius(f.center, np.tanh(r[:, None] / 2) * np.exp(1j * a[None, :]))
    vals = np.abs(f(z)) ** 2
    return float(2 * np.sum(wr * np.sinh(r) * vals.mean(axis=1)))


def xi_norm_squared(psi: HorocycleSinogram, kappa: float) -> float:
    """``||Lambda psi||^2`` on horocycle space, computed on the Fourier side.

    ``kappa * mean_theta int |c(lambda)|^-2 |F(e^{rho t} psi)(lambda)|^2 d lambda``.
    """
    t = psi.t[:, None]
    spec = dft(EvenGridFunction((np.exp(RHO * t) * psi.values).T, psi.T, even=False))
    dens = c_density_grid(psi.T, psi.N).values
    dlam = np.pi / psi.T
    return float(kappa * dlam * np.mean(np.sum(dens * np.abs(spec) ** 2, axis=-1)))


def plancherel_horocycle(f: ScalarField, kappa: float, spec: QuadratureSpec | None = None, J: int = 64):
    """``(w ||f||^2, ||Lambda f-hat||^2, ratio)``; the ratio is ``None`` for the zero field."""
    lhs = WEYL_ORDER * l2_norm_squared(f)
    rhs = xi_norm_squared(HorocycleSinogram.from_field(f, spec, J), kappa)
    return lhs, rhs, (lhs / rhs if rhs != 0 else None)


# ---------------------------------------------------------------- duality


def duality_pair(f: ScalarField, phi: Callable, mu: float = 1.0, spec: QuadratureSpec | None = None,
                 order: int = 48, J: int = 64):
    """``(int_X f phi-check dx, int f-hat phi e^{mu t} dt d theta / 2pi)``.

    The left side is a polar quadrature on the disk with the dual evaluated
    pointwise; the right side integrates the forward transform over
    horocycle space.  ``mu = 1`` is the exponent that balances the two.
    """
    from .geometry import mobius

    spec = spec or QuadratureSpec()
    R = f.radius
    r, wr = panel_rule(0.0, R, order, 2)
    a = 2 * np.pi * np.arange(J) / J
    z = mobius(f.center, np.tanh(r[:, None] / 2) * np.exp(1j * a[None, :]))
    check = np.stack([horocycle_dual(phi, row, J) for row in z])
    lhs = float(2 * np.sum(wr * np.sinh(r) * np.mean(f(z) * check, axis=1)))
    reach = float(hyp_distance(f.center, 0j)) + R
    t, wt = panel_rule(-reach, reach, order, 4)
    fhat = horocycle_integrals(f, t[:, None], a[None, :], spec)
    rhs = float(np.sum(wt * np.exp(mu * t) * np.mean(fhat * phi(t[:, None], a[None, :]), axis=1)))
    return lhs, rhs


def measure_mu_exponent(f: ScalarField, phi: Callable, candidates=(-1.0, 0.0, 1.0), **kw):
    """The exponent ``mu`` in ``e^{mu t} dt d theta`` that balances the duality identity."""
    lhs = None
    errs = {}
    for mu in candidates:
        lhs, rhs = duality_pair(f, phi, mu, **kw)
        errs[mu] = abs(lhs - rhs) / abs(lhs)
    best = min(errs, key=errs.get)
    return best, errs


# ---------------------------------------------------------------- range law


@dataclass(frozen=True)
class RangeCoefficients:
    """Fourier modes ``psi_n(t)`` with ``psi(t, theta) = sum_n psi_n(t) e^{i n theta}``."""

    coef: np.ndarray  # (N, J) in FFT order along the second axis
    T: float

    @property
    def J(self) -> int:
        return self.coef.shape[1]

    def mode(self, n: int) -> np.ndarray:
        return self.coef[:, n % self.J]

    def reconstruct(self) -> np.ndarray:
        return np.fft.ifft(self.coef * self.J, axis=1)


def range_coefficients(psi: HorocycleSinogram) -> RangeCoefficients:
    return RangeCoefficients(np.fft.fft(psi.values, axis=1) / psi.J, psi.T)


def s_multiplier(n: int, lam, mu: float = 2.0):
    """``prod_{k=1}^{|n|} (i mu lam + 2k - 1) / (i mu lam - 2k + 1)``, unimodular on the real line."""
    x = 1j * mu * np.asarray(lam, dtype=float)
    out = np.ones(np.shape(x), dtype=complex)
    for k in range(1, abs(n) + 1):
        out *= (x + 2 * k - 1) / (x - 2 * k + 1)
    return out


@dataclass(frozen=True)
class RangeResidual:
    value: float
    band_size: int

    @property
    def inconclusive(self) -> bool:
        return self.band_size == 0


def range_multiplier_check(coeffs: RangeCoefficients, n: int, kappa0: float = 0.5, mu: float = 2.0,
                           parity: bool = True) -> RangeResidual:
    """Sup over the band of ``|F(Psi_n(-t)) - sigma S_n(mu lambda) F(Psi_n)| / max |F(Psi_n)|``.

    ``Psi_n = e^{kappa0 t} psi_n`` and ``sigma = (-1)^n`` when ``parity`` is set.
    """
    if n == 0:
        raise ValueError("the range multiplier is defined for n != 0")
    N = coeffs.coef.shape[0]
    t = -coeffs.T + (2 * coeffs.T / N) * np.arange(N)
    Psi = np.exp(kappa0 * t) * coeffs.mode(n)
    F = dft(EvenGridFunction(Psi, coeffs.T, even=False))
    lam = dual_grid(coeffs.T, N)
    F_reflected = F[-np.arange(N) % N]  # F(Psi(-t))(lam) = F(Psi)(-lam)
    sigma = (-1) ** abs(n) if parity else 1
    scale = np.max(np.abs(F))
    band = np.abs(F) >= 1e-8 * scale
    if not np.any(band) or scale == 0:
        return RangeResidual(0.0, 0)
    res = np.abs(F_reflected - sigma * s_multiplier(n, lam, mu) * F)[band]
    return RangeResidual(float(np.max(res) / scale), int(np.sum(band)))


def evenness_defect(coeffs: RangeCoefficients, kappa0: float) -> float:
    """Relative oddness of ``e^{kappa0 t} psi_0(t)``."""
    N = coeffs.coef.shape[0]
    t = -coeffs.T + (2 * coeffs.T / N) * np.arange(N)
    Psi = (np.exp(kappa0 * t) * coeffs.mode(0)).real
    mirrored = np.roll(Psi[::-1], 1)
    scale = np.max(np.abs(Psi))
    return float(np.max(np.abs(Psi - mirrored)) / scale) if scale else 0.0


def resolve_range_normalization(coeffs: RangeCoefficients, n: int = 1, tol: float = 1e-2):
    """Search ``kappa0 in {1/2, 1}``, ``mu in {1, 2}`` and the parity sign.

    Returns the accepted ``(kappa0, mu, parity)`` (or ``None``) and a table of
    ``(evenness defect, residual)`` per candidate.
    """
    table = {}
    accepted = None
    for kappa0 in (0.5, 1.0):
        even = evenness_defect(coeffs, kappa0)
        for mu in (1.0, 2.0):
            for parity in (False, True):
                res = range_multiplier_check(coeffs, n, kappa0, mu, parity).value
                table[(kappa0, mu, parity)] = (even, res)
                if accepted is None and even <= tol and res <= tol:
                    accepted = (kappa0, mu, parity)
    return accepted, table


# ---------------------------------------------------------------- support


@dataclass(frozen=True)
class SupportReport:
    external_sup: float
    enclosing_sup: float
    outside_sup: float
    tol: float

    @property
    def external_vanishes(self) -> bool:
        return self.external_sup <= self.tol

    @property
    def enclosing_vanishes(self) -> bool:
        return self.enclosing_sup <= self.tol

    @property
    def function_vanishes(self) -> bool:
        return self.outside_sup <= 1e-3

    @property
    def consistent(self) -> bool:
        """The three conditions agree, and positive-side vanishing comes with negative-side vanishing."""
        flags = {self.external_vanishes, self.enclosing_vanishes, self.function_vanishes}
        return len(flags) == 1


def support_scan(f: ScalarField, R: float, delta: float = 0.2, spec: QuadratureSpec | None = None,
                 J: int = 64, n_t: int = 64, probes: int = 12, tol: float = 1e-6) -> SupportReport:
    """Check vanishing of ``f-hat`` on external (``t > R + delta``) and enclosing (``t < -(R + delta)``)
    horocycles, and of the reconstruction of ``f`` outside the ball ``B_{R + delta}``.
    """
    spec = spec or QuadratureSpec()
    reach = float(hyp_distance(f.center, 0j)) + f.radius + 1.0
    theta = 2 * np.pi * np.arange(J) / J
    tt = np.linspace(R + delta, max(reach, R + delta + 1.0), n_t)
    ext = np.max(np.abs(horocycle_integrals(f, tt[:, None], theta, spec)))
    enc = np.max(np.abs(horocycle_integrals(f, -tt[:, None], theta, spec)))
    psi = HorocycleSinogram.from_field(f, spec, J)
    g = lambda_filter(psi)
    rng_r = np.linspace(R + delta, R + delta + 1.0, 3)
    ang = 2 * np.pi * (np.arange(probes) + 0.5) / probes
    z = (np.tanh(rng_r[:, None] / 2) * np.exp(1j * ang[None, :])).ravel()
    outside = np.max(np.abs(lambda_invert(psi, z, g)))
    return SupportReport(float(ext), float(enc), float(outside), tol)
