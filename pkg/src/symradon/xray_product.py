"""X-ray transform and its inversion on the rank-two space H^2 x H^2.

Geodesics at distance ``p`` from the origin that lie in a flat through the
origin are indexed by ``(alpha, beta, phi)``: ``alpha`` and ``beta`` rotate
the two factors and ``phi`` rotates the geodesic inside the flat.
"""
from __future__ import annotations

import numpy as np

from .geometry import FlatGeodesic, ScalarField, radial_geodesic_window
from .numerics import Estimate, MissingDecayError, QuadratureSpec, d_dp, panel_rule, weighted_tail_integral


def _factor_interval(coef, offset, mid, half):
    """``s``-interval on which ``offset + coef * s`` lies in ``[mid - half, mid + half]``."""
    small = np.abs(coef) < 1e-12
    safe = np.where(small, 1.0, coef)
    a = (mid - half - offset) / safe
    b = (mid + half - offset) / safe
    lo, hi = np.minimum(a, b), np.maximum(a, b)
    inside = (np.abs(offset - mid) <= half) & (half > 0)
    lo = np.where(small, np.where(inside, -np.inf, 0.0), lo)
    hi = np.where(small, np.where(inside, np.inf, 0.0), hi)
    return lo, hi


def flat_geodesic_integrals(f: ScalarField, alpha, beta, phi, p, spec: QuadratureSpec | None = None):
    """``int f(gamma(s)) ds`` for the flat geodesics with the given (broadcast) parameters."""
    spec = spec or QuadratureSpec()
    if f.decay is None:
        raise MissingDecayError(f"{f.name} has no decay metadata")
    alpha, beta, phi, p = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (alpha, beta, phi, p)))
    R = f.radius
    c1, c2 = f.center
    m1, h1 = radial_geodesic_window(alpha, c1, R)
    m2, h2 = radial_geodesic_window(beta, c2, R)
    cp, sp = np.cos(phi), np.sin(phi)
    # u1 = p cos phi - s sin phi, u2 = p sin phi + s cos phi
    lo1, hi1 = _factor_interval(-sp, p * cp, m1, h1)
    lo2, hi2 = _factor_interval(cp, p * sp, m2, h2)
    lo, hi = np.maximum(lo1, lo2), np.minimum(hi1, hi2)
    empty = ~(hi > lo)
    lo, hi = np.where(empty, 0.0, lo), np.where(empty, 0.0, hi)
    s, w = panel_rule(lo, hi, spec.gauss_order, spec.panel_count)
    u1 = p[..., None] * cp[..., None] - s * sp[..., None]
    u2 = p[..., None] * sp[..., None] + s * cp[..., None]
    z1 = np.tanh(u1 / 2) * np.exp(1j * alpha)[..., None]
    z2 = np.tanh(u2 / 2) * np.exp(1j * beta)[..., None]
    return np.sum(w * f((z1, z2)), axis=-1)


def product_xray_forward(f: ScalarField, gamma: FlatGeodesic, spec: QuadratureSpec | None = None) -> float:
    """Arclength integral of ``f`` along ``gamma``."""
    return float(flat_geodesic_integrals(f, gamma.alpha, gamma.beta, gamma.phi, gamma.p, spec))


def _angles(M: int):
    return 2 * np.pi * np.arange(M) / M


def omega_average(phi, p, M: int = 16):
    """Average of ``phi(alpha, beta, phi_angle, p)`` over the geodesics at distance ``p``.

    ``phi`` is vectorized over its four arguments; the three angles are
    averaged by the trapezoid rule with ``M`` points each.  ``p`` may be an
    array.
    """
    a = _angles(M)
    A, B, P = np.meshgrid(a, a, a, indexing="ij")
    p = np.asarray(p, dtype=float)
    out = np.array([np.mean(phi(A, B, P, pp)) for pp in p.ravel()])
    return out.reshape(p.shape) if p.ndim else float(out[0])


def xray_oracle(f: ScalarField, spec: QuadratureSpec | None = None):
    """The X-ray transform of ``f`` as a function of ``(alpha, beta, phi, p)``."""
    return lambda a, b, ph, p: flat_geodesic_integrals(f, a, b, ph, p, spec)


def _upper(f: ScalarField) -> float:
    from .geometry import product_distance

    return float(product_distance((0j, 0j), f.center)) + f.radius


def invert_product_xray(f: ScalarField, spec: QuadratureSpec | None = None, M: int = 16) -> Estimate:
    """Reconstruct ``f(o)``: ``-(1/pi) int_0^inf d/dp [omega_p average of f-hat] dp / p``.

    To reconstruct at another point ``x``, pass ``f.translated(x)``.
    """
    spec = spec or QuadratureSpec()
    fhat = xray_oracle(f, spec)
    F = lambda p: omega_average(fhat, p, M)
    integrand = lambda p: d_dp(F, p, spec.fd_step, even=True)
    est = weighted_tail_integral(integrand, "p", spec, upper=_upper(f))
    return Estimate(-est.value / np.pi, est.error / np.pi, est.flagged)
