"""Geodesic and totally geodesic plane transforms on H^2 and H^3, with inversion."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .geometry import (
    HypGeodesic,
    ScalarField,
    TotallyGeodesicPlane,
    boost,
    disk_to_hyperboloid,
    geodesic_window,
    hyperboloid_distance,
    hyperboloid_to_disk,
    orthonormal_complement,
    plane_polar_frame,
    sphere_rule,
    unboost,
)
from .numerics import (
    Estimate,
    MissingDecayError,
    QuadratureSpec,
    d_dp,
    iterated_r2_derivative,
    panel_rule,
    weighted_tail_integral,
)

DEFAULT_DIRECTIONS = {(2, 1): (64,), (3, 1): (8, 16, 16), (3, 2): (16, 32)}


def to_hyperboloid(space: str, x):
    """Hyperboloid coordinates of a point given in the native model of ``space``."""
    if space == "H2":
        return disk_to_hyperboloid(x)
    return np.asarray(x, dtype=float)


def evaluate_on_hyperboloid(f: ScalarField, P):
    return f(hyperboloid_to_disk(P)) if f.space == "H2" else f(P)


@dataclass(frozen=True)
class HypSinogramOracle:
    """Lazily evaluated function on geodesics (``d = 1``) or planes (``d = 2``) of H^n.

    ``func(X, frames)`` takes hyperboloid base points ``(..., n+1)`` and
    Lorentz-orthonormal tangent frames ``(..., d, n+1)`` at them.
    """

    func: Callable[[np.ndarray, np.ndarray], np.ndarray]
    n: int
    d: int
    center: np.ndarray | None = None
    radius: float | None = None

    def __call__(self, sub: HypGeodesic | TotallyGeodesicPlane) -> float:
        if isinstance(sub, HypGeodesic):
            return float(self.func(sub.X, sub.V[None]))
        return float(self.func(sub.X, np.stack([sub.V1, sub.V2])))

    def batch(self, X, frames):
        return self.func(X, frames)

    def __add__(self, other):
        return HypSinogramOracle(lambda X, F: self.func(X, F) + other.func(X, F), self.n, self.d,
                                 self.center, self.radius)

    def __mul__(self, a: float):
        return HypSinogramOracle(lambda X, F: a * self.func(X, F), self.n, self.d, self.center, self.radius)

    __rmul__ = __mul__


def _submanifold_integrals(f: ScalarField, X, frames, spec: QuadratureSpec, angles: int = 8):
    if f.decay is None:
        raise MissingDecayError(f"{f.name} has no decay metadata")
    X = np.asarray(X, dtype=float)
    frames = np.asarray(frames, dtype=float)
    c = to_hyperboloid(f.space, f.center)
    R = f.radius
    x, w = panel_rule(-1.0, 1.0, spec.gauss_order, spec.panel_count)
    if frames.shape[-2] == 1:
        V = frames[..., 0, :]
        window = geodesic_window(X, V, c, R)
        if window is None:
            return np.zeros(X.shape[:-1])
        mid, half = window
        s = np.asarray(mid)[..., None] + np.asarray(half)[..., None] * x
        P = X[..., None, :] * np.cosh(s)[..., None] + V[..., None, :] * np.sinh(s)[..., None]
        return np.sum(evaluate_on_hyperboloid(f, P) * w, axis=-1) * half
    # geodesic polar coordinates about the point of the plane closest to the center
    Y, W1, W2, coshD = plane_polar_frame(X, frames[..., 0, :], frames[..., 1, :], c)
    ratio = math.cosh(R) / coshD
    rmax = np.where(ratio > 1, np.arccosh(np.maximum(ratio, 1.0)), 0.0)
    r = 0.5 * (x + 1) * rmax[..., None]
    wr = 0.5 * w * rmax[..., None] * np.sinh(r)
    a = 2 * np.pi * np.arange(angles) / angles
    dirs = np.cos(a)[:, None] * W1[..., None, :] + np.sin(a)[:, None] * W2[..., None, :]
    P = (Y[..., None, None, :] * np.cosh(r)[..., None, :, None]
         + dirs[..., :, None, :] * np.sinh(r)[..., None, :, None])
    vals = evaluate_on_hyperboloid(f, P)
    return 2 * np.pi * np.mean(np.sum(vals * wr[..., None, :], axis=-1), axis=-1)


def hyp_sinogram(f: ScalarField, d: int = 1, spec: QuadratureSpec | None = None) -> HypSinogramOracle:
    """The totally geodesic transform of ``f`` (geodesics for ``d = 1``, planes for ``d = 2``)."""
    spec = spec or QuadratureSpec()
    if f.decay is None:
        raise MissingDecayError(f"{f.name} has no decay metadata")
    n = 2 if f.space == "H2" else 3
    if d == 2 and n != 3:
        raise ValueError("plane integrals need H3")
    return HypSinogramOracle(lambda X, F: _submanifold_integrals(f, X, F, spec), n, d,
                             to_hyperboloid(f.space, f.center), f.radius)


def tg_forward(f: ScalarField, sub: HypGeodesic | TotallyGeodesicPlane,
               spec: QuadratureSpec | None = None) -> float:
    """Integral of ``f`` over a geodesic or a totally geodesic plane (Riemannian measure)."""
    spec = spec or QuadratureSpec()
    if isinstance(sub, HypGeodesic):
        return float(_submanifold_integrals(f, sub.X, sub.V[None], spec))
    return float(_submanifold_integrals(f, sub.X, np.stack([sub.V1, sub.V2]), spec))


def _family(n: int, d: int, directions, pole):
    """Spatial unit normals ``u``, tangent frames at the foot and weights, for base point ``o``.

    The submanifold at signed distance ``p`` has foot ``(cosh p, sinh p u)``
    and, since the frame vectors are orthogonal to ``u``, the same frame.
    """
    if (n, d) == (2, 1):
        (M,) = directions
        a = 2 * np.pi * np.arange(M) / M
        u = np.stack([np.cos(a), np.sin(a)], axis=-1)
        v = np.stack([-np.sin(a), np.cos(a)], axis=-1)
        return u, v[:, None, :], np.full(M, 1.0 / M)
    if (n, d) == (3, 2):
        n_polar, n_az = directions
        u, w = sphere_rule(n_polar, n_az, pole)
        e1, e2 = orthonormal_complement(u)
        return u, np.stack([e1, e2], axis=-2), w
    if (n, d) == (3, 1):
        n_polar, n_az, n_circ = directions
        v, w = sphere_rule(n_polar, n_az, pole)
        e1, e2 = orthonormal_complement(v)
        b = 2 * np.pi * np.arange(n_circ) / n_circ
        u = np.cos(b)[None, :, None] * e1[:, None, :] + np.sin(b)[None, :, None] * e2[:, None, :]
        frames = np.broadcast_to(v[:, None, None, :], u.shape[:2] + (1, 3))
        ww = np.broadcast_to(w[:, None] / n_circ, u.shape[:2])
        return u.reshape(-1, 3), frames.reshape(-1, 1, 3), ww.ravel()
    raise ValueError(f"unsupported (n, d) = {(n, d)}")


def _h2_direction_count(phi: HypSinogramOracle, X0) -> int:
    """Enough directions to put about 32 samples across the support as seen from ``X0``."""
    (M,) = DEFAULT_DIRECTIONS[(2, 1)]
    if phi.center is None or phi.radius is None:
        return M
    D = float(hyperboloid_distance(X0, phi.center))
    if D <= phi.radius:
        return M
    aperture = 2 * math.asin(math.sinh(phi.radius) / math.sinh(D))
    need = 2 ** math.ceil(math.log2(32 * 2 * math.pi / aperture))
    return int(min(max(M, need), 4096))


def hyp_dual_at_distance(phi: HypSinogramOracle, x, p, directions=None):
    """Average of ``phi`` over the geodesics (or planes) at distance ``p`` from ``x``.

    ``x`` is a disk point for H^2 and a hyperboloid point for H^3.  Negative
    ``p`` gives the same average, so the result is even in ``p``.  On H^2 the
    default direction count grows when the support looks small from ``x``.
    """
    X0 = to_hyperboloid("H2" if phi.n == 2 else "H3", x)
    if directions is None and phi.n == 2:
        directions = _h2_direction_count(phi, X0)
    directions = directions or DEFAULT_DIRECTIONS[(phi.n, phi.d)]
    if isinstance(directions, int):
        directions = (directions,)
    pole = None
    if phi.n == 3:
        pole = (0.0, 0.0, 1.0)
        if phi.center is not None:
            v = unboost(X0, phi.center)[1:]
            if np.linalg.norm(v) > 1e-9:
                pole = tuple(v)
    u, frames, w = _family(phi.n, phi.d, directions, pole)
    zeros = np.zeros(frames.shape[:-1] + (1,))
    frames = boost(X0, np.concatenate([zeros, frames], axis=-1))
    p = np.asarray(p, dtype=float)
    flat = p.ravel()
    out = np.empty(flat.shape)
    chunk = max(1, 4096 // len(w))
    for i in range(0, flat.size, chunk):
        pp = flat[i : i + chunk][:, None, None]
        feet = np.concatenate([np.cosh(pp) + 0 * u[..., :1], np.sinh(pp) * u], axis=-1)
        feet = boost(X0, feet)
        fr = np.broadcast_to(frames, (feet.shape[0],) + frames.shape)
        out[i : i + chunk] = phi.batch(feet, fr) @ w
    return out.reshape(p.shape) if p.ndim else float(out[0])


def _upper(phi: HypSinogramOracle, x, spec: QuadratureSpec) -> float:
    if phi.center is None or phi.radius is None:
        return spec.p_cutoff_high
    X0 = to_hyperboloid("H2" if phi.n == 2 else "H3", x)
    return float(hyperboloid_distance(X0, phi.center)) + phi.radius


def invert_hyp_xray(phi: HypSinogramOracle, x, spec: QuadratureSpec | None = None,
                    directions=None) -> Estimate:
    """Reconstruct ``f(x)`` from geodesic integrals: ``-(1/pi) int_0^inf F'(p) dp / sinh p``."""
    spec = spec or QuadratureSpec()
    if phi.d != 1:
        raise ValueError("invert_hyp_xray needs geodesic integrals")
    F = lambda p: hyp_dual_at_distance(phi, x, p, directions)
    integrand = lambda p: d_dp(F, p, spec.fd_step, even=True)
    est = weighted_tail_integral(integrand, "sinh", spec, upper=_upper(phi, x, spec))
    return Estimate(-est.value / np.pi, est.error / np.pi, est.flagged)


def plane_moment(phi: HypSinogramOracle, x, spec: QuadratureSpec, directions=None):
    """``G(q) = int_{sqrt q}^inf t^2 F(arccosh t) dt`` for ``q >= 1`` (vectorized).

    Integrated in the distance variable ``p = arccosh t``.
    """
    P = _upper(phi, x, spec)
    F = lambda p: hyp_dual_at_distance(phi, x, p, directions)
    edges = np.linspace(0, P, 9)
    nodes, w = panel_rule(edges[:-1], edges[1:], 16)
    weight = lambda p: np.cosh(p) ** 2 * np.sinh(p)
    total = float(np.sum(w * weight(nodes) * F(nodes)))

    def G(r):
        lim = np.arccosh(np.maximum(np.asarray(r, dtype=float), 1.0))
        hx, hw = panel_rule(np.zeros_like(lim), lim, 16)
        return total - np.sum(hw * weight(hx) * F(hx), axis=-1)

    return G


def invert_hyp_tg(phi: HypSinogramOracle, x, C_d: float | None, spec: QuadratureSpec | None = None,
                  directions=None) -> Estimate:
    """Reconstruct ``f(x)`` from totally geodesic plane integrals in H^3.

    ``C_d * [(d/d(r^2))^2 int_r^inf t^2 F(arccosh t) dt]_{r=1}`` where
    ``F(p)`` is the average over planes at distance ``p``.  The derivative is
    one-sided in ``r^2 >= 1``, since the distance variable starts at ``t = 1``.
    """
    if C_d is None:
        raise ValueError("the hyperbolic plane inversion constant has not been calibrated")
    spec = spec or QuadratureSpec()
    if (phi.n, phi.d) != (3, 2):
        raise ValueError("invert_hyp_tg is implemented for planes in H3")
    G = plane_moment(phi, x, spec, directions)
    est = iterated_r2_derivative(G, 2, 1.0, spec.fd_step, one_sided=True)
    return Estimate(C_d * est.value, abs(C_d) * est.error, est.flagged)
