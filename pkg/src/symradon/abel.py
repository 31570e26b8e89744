"""Abel transform, spherical functions and the spherical transform on radial functions of H^2.

Normalizations follow :mod:`symradon.horocycle`: ``dn = ds / pi`` and
``dx = dA / pi``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.polynomial import chebyshev

from .geometry import PhantomSpec, busemann, hyp_distance, mobius, phantom
from .numerics import (
    RHO,
    WEYL_ORDER,
    Decay,
    EvenGridFunction,
    MissingDecayError,
    apply_multiplier,
    c_density_grid,
    panel_rule,
)


@dataclass(frozen=True)
class RadialField:
    """``f(x) = func(d(o, x))`` with decay metadata about the origin."""

    func: Callable[[np.ndarray], np.ndarray]
    decay: Decay | None
    name: str = "radial"

    def __call__(self, r):
        return self.func(np.asarray(r, dtype=float))

    @property
    def radius(self) -> float:
        if self.decay is None:
            raise MissingDecayError(f"{self.name} has no decay metadata")
        return self.decay.cutoff()

    def on_disk(self, z):
        return self.func(hyp_distance(z, 0j))

    @classmethod
    def from_phantom(cls, spec: PhantomSpec) -> "RadialField":
        """The radial profile of a phantom centered at the origin."""
        if spec.space != "H2" or (spec.center not in (None, 0, 0j)):
            raise ValueError("radial fields must be centered at the origin of H2")
        f = phantom(spec)
        return cls(lambda r: f(np.tanh(np.asarray(r) / 2) + 0j), f.decay, spec.kind)

    @classmethod
    def tabulate(cls, g: Callable, radius: float, degree: int = 160, name: str = "tabulated"):
        """Chebyshev interpolant of the even function ``g`` on ``[0, radius]``, zero beyond.

        Used to turn expensive oracles (dual transforms, brute-force
        convolutions) into cheap radial fields.
        """
        k = np.arange(degree + 1)
        x = np.cos(np.pi * (k + 0.5) / (degree + 1))
        r = radius * (x + 1) / 2
        coef = chebyshev.chebfit(x, np.asarray(g(r), dtype=float), degree)

        def func(s):
            s = np.abs(np.asarray(s, dtype=float))
            out = chebyshev.chebval(np.clip(2 * s / radius - 1, -1, 1), coef)
            return np.where(s <= radius, out, 0.0)

        return cls(func, Decay(support_radius=radius), name)


def circle_samples(t: float, minimum: int = 64) -> int:
    """Power-of-two sample count resolving the Poisson kernel at distance ``t`` from the origin."""
    return max(minimum, 1 << int(math.ceil(math.log2(16 * math.exp(abs(t)) + 1))))


def spherical_function(lam, t, M: int | None = None):
    """``phi_lam(t) = (1/2pi) int exp((i lam + 1/2) A(tanh(t/2), e^{i theta})) d theta``."""
    lam = np.asarray(lam, dtype=complex)
    t = np.asarray(t, dtype=float)
    tb = np.broadcast_to(t, np.broadcast(lam, t).shape)
    out = np.empty(tb.shape, dtype=complex)
    for idx in np.ndindex(tb.shape):
        tt = float(tb[idx])
        m = M or circle_samples(tt)
        theta = 2 * np.pi * np.arange(m) / m
        A = busemann(math.tanh(tt / 2), theta)
        ll = lam if lam.ndim == 0 else lam[idx]
        out[idx] = np.mean(np.exp((1j * ll + RHO) * A))
    return out if out.ndim else complex(out)


def _horocycle_reach(t, R):
    """Half-length in ``s`` of the horocycle ``xi_{t,0}`` inside the ball of radius ``R``."""
    return np.sqrt(np.clip(2 * (np.cosh(R) - np.cosh(t)) * np.exp(-t), 0.0, None))


def horocycle_radius(t, s):
    """``d(o, e^t (s + i))`` in the half plane: ``cosh r = cosh t + s^2 e^t / 2``."""
    u = np.sinh(t / 2) ** 2 + s * s * np.exp(t) / 4
    return 2 * np.arcsinh(np.sqrt(u))


def abel_forward(f: RadialField, t, order: int = 64):
    """``(Af)(t) = e^{t/2} int_N f(a_t n o) dn`` with ``dn = ds / pi``."""
    R = f.radius
    t = np.asarray(t, dtype=float)
    S = _horocycle_reach(t, R)
    x, w = panel_rule(0.0, 1.0, order, 1)
    s = S[..., None] * x
    vals = f(horocycle_radius(t[..., None], s))
    # the integrand is even in s
    return 2 * np.exp(t / 2) * S * np.sum(w * vals, axis=-1) / np.pi


def abel_grid(f: RadialField, T: float = 24.0, N: int = 4096) -> EvenGridFunction:
    return EvenGridFunction.sample(lambda t: abel_forward(f, t), T, N, even=True)


def spherical_transform(f: RadialField, lam, order: int = 64):
    """``f~(lam) = int_X f(x) phi_{-lam}(x) dx = 2 int_0^R f(r) phi_{-lam}(r) sinh r dr``."""
    lam = np.atleast_1d(np.asarray(lam, dtype=complex))
    R = f.radius
    r, wr = panel_rule(0.0, R, order, 2)
    fr = f(r)
    out = np.zeros(lam.shape, dtype=complex)
    for rk, wk, fk in zip(r, wr, fr):
        if fk == 0:
            continue
        m = circle_samples(rk)
        theta = 2 * np.pi * np.arange(m) / m
        A = busemann(math.tanh(rk / 2), theta)
        phi = np.mean(np.exp(np.multiply.outer(-1j * lam + RHO, A)), axis=-1)
        out += 2 * wk * fk * math.sinh(rk) * phi
    return out


def euclidean_fourier(g: EvenGridFunction, lam):
    """``int g(t) e^{-i lam t} dt`` at arbitrary ``lam`` by the trapezoid rule on the grid."""
    lam = np.asarray(lam, dtype=float)
    return g.dt * (np.exp(-1j * np.multiply.outer(lam, g.t)) @ np.asarray(g.values))


def L_apply(g: EvenGridFunction) -> EvenGridFunction:
    """The operator with Fourier multiplier ``|c(lambda)|^-2``."""
    return apply_multiplier(g, c_density_grid(g.T, g.N))


def _as_callable(g):
    if isinstance(g, EvenGridFunction):
        spline = g.interpolator()
        return lambda t: np.nan_to_num(spline(t))
    return g


def abel_dual(g, z, M: int | None = None):
    """``(A*g)(z) = (1/2pi) int g(A(z, theta)) e^{rho A(z, theta)} d theta`` for even ``g``.

    ``g`` is a callable or an :class:`EvenGridFunction`; ``z`` may be an array.
    """
    g = _as_callable(g)
    z = np.asarray(z, dtype=complex)
    d = float(np.max(hyp_distance(z, 0j), initial=0.0))
    m = M or circle_samples(d)
    theta = 2 * np.pi * np.arange(m) / m
    A = busemann(z[..., None], theta)
    return np.mean(g(A) * np.exp(RHO * A), axis=-1)


def dual_profile(g):
    """``r -> (A*g)(tanh(r/2))`` evaluated radius by radius (each with its own circle rule)."""
    g = _as_callable(g)

    def profile(r):
        r = np.atleast_1d(np.asarray(r, dtype=float))
        return np.array([np.real(abel_dual(g, math.tanh(x / 2) + 0j)) for x in r])

    return profile


def abel_invert(g: EvenGridFunction) -> RadialField:
    """``f = (1/w) A*(L g)`` as a radial oracle (for ``g = Af``)."""
    profile = dual_profile(L_apply(g))

    def func(r):
        r = np.asarray(r, dtype=float)
        return profile(r.ravel()).reshape(r.shape) / WEYL_ORDER

    return RadialField(func, None, "abel-inverse")


def radial_convolution(f1: RadialField, f2: RadialField, z, order: int = 64, angles: int = 128):
    """``(f1 x f2)(z) = int_X f1(d(o, y)) f2(d(y, z)) dy`` by polar quadrature about ``o``.

    A direct two-dimensional quadrature, independent of any transform.
    """
    z = np.asarray(z, dtype=complex)
    R = f1.radius
    r, wr = panel_rule(0.0, R, order, 2)
    a = 2 * np.pi * np.arange(angles) / angles
    y = np.tanh(r[:, None] / 2) * np.exp(1j * a[None, :])
    f1r = f1(r) * np.sinh(r) * wr
    out = np.empty(z.shape)
    for idx in np.ndindex(z.shape):
        vals = f2(hyp_distance(y, z[idx]))
        out[idx] = 2 * np.sum(f1r * np.mean(vals, axis=1))
    return out if out.ndim else float(out)


def convolution_field(f1: RadialField, f2: RadialField, radius: float | None = None, degree: int = 96):
    """``f1 x f2`` tabulated as a radial field (brute-force values on Chebyshev nodes)."""
    radius = radius or (f1.radius + f2.radius)
    return RadialField.tabulate(lambda r: radial_convolution(f1, f2, np.tanh(r / 2) + 0j), radius, degree,
                                f"{f1.name}x{f2.name}")


def grid_convolve(g1: EvenGridFunction, g2: EvenGridFunction) -> EvenGridFunction:
    """Euclidean convolution ``int g1(s) g2(t - s) ds`` on the periodic grid."""
    a = np.fft.fft(np.fft.ifftshift(np.asarray(g1.values)))
    b = np.fft.fft(np.fft.ifftshift(np.asarray(g2.values)))
    out = np.fft.fftshift(np.fft.ifft(a * b)).real * g1.dt
    even = g1.even and g2.even
    if even:
        out = 0.5 * (out + np.roll(out[::-1], 1))
    return EvenGridFunction(out, g1.T, even)


@dataclass(frozen=True)
class DualAbelResiduals:
    inversion: float
    convolution: float


def check_dual_abel_inversion(phi: EvenGridFunction, psi: EvenGridFunction, f0: RadialField, probes=None,
                              degree: int = 96) -> DualAbelResiduals:
    """Residuals of ``A*(L phi) = w f0`` (with ``phi = A f0``) and of
    ``A*(phi * psi) = (1/w) A*(L phi) x A*psi``.

    The convolution on the right is computed by brute-force quadrature of
    tabulated radial fields.
    """
    if probes is None:
        probes = np.tanh(np.linspace(0.0, 1.5, 5) / 2) + 0j
    probes = np.asarray(probes, dtype=complex)
    Lphi = L_apply(phi)
    dual_Lphi = np.real(abel_dual(Lphi, probes))
    res1 = float(np.max(np.abs(dual_Lphi - WEYL_ORDER * f0.on_disk(probes))))

    lhs = np.real(abel_dual(grid_convolve(phi, psi), probes))
    F1 = RadialField.tabulate(dual_profile(Lphi), f0.radius, degree, "A*(L phi)")
    reach = f0.radius + float(np.max(hyp_distance(probes, 0j)))
    F2 = RadialField.tabulate(dual_profile(psi), reach, degree, "A*psi")
    rhs = radial_convolution(F1, F2, probes) / WEYL_ORDER
    scale = max(np.max(np.abs(rhs)), 1e-300)
    res2 = float(np.max(np.abs(lhs - rhs)) / scale) if np.any(rhs) else float(np.max(np.abs(lhs)))
    return DualAbelResiduals(res1, res2)
