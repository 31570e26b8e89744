"""Line and plane transforms on R^2 and R^3: forward, dual at distance p, inversion."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .geometry import DPlane, ScalarField, orthonormal_complement, sphere_rule
from .numerics import (
    Estimate,
    MissingDecayError,
    QuadratureSpec,
    d_dp,
    integrate_circle,
    iterated_r2_derivative,
    panel_rule,
    weighted_tail_integral,
)

# direction sample counts for the averages over planes at distance p
DEFAULT_DIRECTIONS = {(2, 1): (64,), (3, 1): (6, 12, 12), (3, 2): (16, 32)}


@dataclass(frozen=True)
class SinogramOracle:
    """Lazily evaluated function on d-planes of R^n.

    ``func(bases, frames)`` takes base points ``(..., n)`` and orthonormal
    frames ``(..., d, n)``.  ``center`` and ``radius`` describe where the
    originating field lives; they are only used to place quadrature nodes.
    """

    func: Callable[[np.ndarray, np.ndarray], np.ndarray]
    n: int
    d: int
    center: np.ndarray | None = None
    radius: float | None = None

    def __call__(self, plane: DPlane) -> float:
        return float(self.func(plane.base, plane.frame))

    def batch(self, bases, frames):
        return self.func(bases, frames)

    def __add__(self, other):
        return SinogramOracle(lambda b, f: self.func(b, f) + other.func(b, f), self.n, self.d,
                              self.center, self.radius)

    def __mul__(self, a: float):
        return SinogramOracle(lambda b, f: a * self.func(b, f), self.n, self.d, self.center, self.radius)

    __rmul__ = __mul__


def constant_sinogram(c: float, n: int, d: int) -> SinogramOracle:
    return SinogramOracle(lambda b, f: np.full(np.shape(b)[:-1], float(c)), n, d)


def _plane_integrals(f: ScalarField, bases, frames, spec: QuadratureSpec, angles: int = 8):
    """Integrals of ``f`` over the planes ``bases + span(frames)`` (vectorized)."""
    if f.decay is None:
        raise MissingDecayError(f"{f.name} has no decay metadata")
    bases = np.asarray(bases, dtype=float)
    frames = np.asarray(frames, dtype=float)
    R = f.radius
    c = np.asarray(f.center, dtype=float)
    d = frames.shape[-2]
    rel = c - bases
    inplane = np.einsum("...kn,...n->...k", frames, rel)
    D2 = np.sum(rel * rel, axis=-1) - np.sum(inplane * inplane, axis=-1)
    half = np.sqrt(np.clip(R * R - D2, 0.0, None))
    foot = bases + np.einsum("...k,...kn->...n", inplane, frames)
    order, panels = spec.gauss_order, spec.panel_count
    if d == 1:
        x, w = panel_rule(-1.0, 1.0, order, panels)
        s = half[..., None] * x
        pts = foot[..., None, :] + s[..., None] * frames[..., 0, None, :]
        vals = f(pts)
        return np.sum(vals * w, axis=-1) * half
    # polar coordinates about the point of the plane closest to the center
    r, wr = panel_rule(0.0, 1.0, order, panels)
    a = 2 * np.pi * np.arange(angles) / angles
    dirs = np.cos(a)[:, None] * frames[..., None, 0, :] + np.sin(a)[:, None] * frames[..., None, 1, :]
    rr = half[..., None] * r  # (..., order)
    pts = foot[..., None, None, :] + rr[..., None, :, None] * dirs[..., :, None, :]
    vals = f(pts)  # (..., angles, order)
    radial = np.sum(vals * (wr * r), axis=-1) * half[..., None] ** 2
    return 2 * np.pi * np.mean(radial, axis=-1)


def sinogram(f: ScalarField, d: int, spec: QuadratureSpec | None = None) -> SinogramOracle:
    """The d-plane transform of ``f`` as a lazily evaluated oracle."""
    spec = spec or QuadratureSpec()
    n = len(np.atleast_1d(f.center))
    if f.decay is None:
        raise MissingDecayError(f"{f.name} has no decay metadata")
    return SinogramOracle(lambda b, fr: _plane_integrals(f, b, fr, spec), n, d,
                          np.asarray(f.center, dtype=float), f.radius)


def dplane_forward(f: ScalarField, xi: DPlane, spec: QuadratureSpec | None = None) -> float:
    """Integral of ``f`` over the plane ``xi`` with respect to d-dimensional Lebesgue measure."""
    spec = spec or QuadratureSpec()
    return float(_plane_integrals(f, xi.base, xi.frame, spec))


def _family(n: int, d: int, x, directions, pole):
    """Unit normals ``u``, frames and weights of the planes at signed distance ``p`` from ``x``.

    The planes are ``x + p u + span(frame)``.
    """
    if (n, d) == (2, 1):
        (M,) = directions
        a = 2 * np.pi * np.arange(M) / M
        u = np.stack([np.cos(a), np.sin(a)], axis=-1)
        frames = np.stack([-np.sin(a), np.cos(a)], axis=-1)[:, None, :]
        return u, frames, np.full(M, 1.0 / M)
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


def _pole(phi: SinogramOracle, x):
    if phi.center is None:
        return (0.0, 0.0, 1.0)
    v = np.asarray(phi.center, dtype=float) - x
    return tuple(v) if np.linalg.norm(v) > 1e-9 else (0.0, 0.0, 1.0)


def dual_at_distance(phi: SinogramOracle, x, p, directions=None):
    """Average of ``phi`` over the d-planes at distance ``p`` from ``x``.

    ``p`` may be an array, and negative ``p`` gives the same average (the
    direction sets are symmetric), so the result is even in ``p``.
    """
    x = np.asarray(x, dtype=float)
    directions = directions or DEFAULT_DIRECTIONS[(phi.n, phi.d)]
    if isinstance(directions, int):
        directions = (directions,) if phi.n == 2 else DEFAULT_DIRECTIONS[(phi.n, phi.d)]
    u, frames, w = _family(phi.n, phi.d, x, directions, _pole(phi, x) if phi.n == 3 else None)
    p = np.asarray(p, dtype=float)
    flat = p.ravel()
    out = np.empty(flat.shape)
    chunk = max(1, 4096 // len(w))
    for i in range(0, flat.size, chunk):
        pp = flat[i : i + chunk]
        bases = x + pp[:, None, None] * u[None]
        fr = np.broadcast_to(frames, (pp.size,) + frames.shape)
        out[i : i + chunk] = phi.batch(bases, fr) @ w
    return out.reshape(p.shape) if p.ndim else float(out[0])


def _upper(phi: SinogramOracle, x, spec: QuadratureSpec) -> float:
    if phi.center is None or phi.radius is None:
        return spec.p_cutoff_high
    return float(np.linalg.norm(np.asarray(x) - phi.center)) + phi.radius


def invert_xray(phi: SinogramOracle, x, spec: QuadratureSpec | None = None, directions=None) -> Estimate:
    """Reconstruct ``f(x)`` from its line integrals: ``-(1/pi) int_0^inf F'(p) dp / p``.

    ``F(p)`` is the average over lines at distance ``p`` from ``x``; valid for
    lines in R^2 and R^3 alike.
    """
    spec = spec or QuadratureSpec()
    if phi.d != 1:
        raise ValueError("invert_xray needs line integrals")
    F = lambda p: dual_at_distance(phi, x, p, directions)
    integrand = lambda p: d_dp(F, p, spec.fd_step, even=True)
    est = weighted_tail_integral(integrand, "p", spec, upper=_upper(phi, x, spec))
    return Estimate(-est.value / np.pi, est.error / np.pi, est.flagged)


def plane_moment(phi: SinogramOracle, x, spec: QuadratureSpec, directions=None):
    """``G(q) = int_{sqrt q}^inf p F(p) dp`` as a function of ``q`` (vectorized)."""
    P = _upper(phi, x, spec)
    F = lambda p: dual_at_distance(phi, x, p, directions)
    nodes, w = panel_rule(np.linspace(0, P, 9)[:-1], np.linspace(0, P, 9)[1:], 16)
    total = float(np.sum(w * nodes * F(nodes)))

    def G(r):
        r = np.asarray(r, dtype=float)
        hx, hw = panel_rule(np.zeros_like(r), r, 16)
        return total - np.sum(hw * hx * F(hx), axis=-1)

    return G


def invert_dplane(phi: SinogramOracle, x, c_d: float | None, spec: QuadratureSpec | None = None,
                  directions=None) -> Estimate:
    """Reconstruct ``f(x)`` from plane integrals in R^3.

    ``c_d * [(d/d(r^2))^2 int_r^inf p F(p) dp]_{r=0}`` with ``F`` the average
    over planes at distance ``p`` and ``c_d`` the frozen calibrated constant.
    """
    if c_d is None:
        raise ValueError("the plane inversion constant has not been calibrated")
    spec = spec or QuadratureSpec()
    if (phi.n, phi.d) != (3, 2):
        raise ValueError("invert_dplane is implemented for planes in R^3")
    G = plane_moment(phi, x, spec, directions)
    est = iterated_r2_derivative(G, 2, 0.0, spec.fd_step)
    return Estimate(c_d * est.value, abs(c_d) * est.error, est.flagged)


def duality_check(f: ScalarField, phi: Callable[[np.ndarray], np.ndarray], n_lines: int = 64,
                  order: int = 48):
    """``(int f(x) phi-check(x) dx, int f-hat(xi) phi(xi) d xi)`` for lines in R^2.

    ``phi`` is a function of the signed offset ``p`` only, and the line
    measure is ``d omega dp`` with ``d omega`` the normalized angle measure
    on the circle.  The left side integrates over the plane in Cartesian
    coordinates; the right side integrates the line transform over
    ``(angle, offset)``.
    """
    R = f.radius
    c = np.asarray(f.center, dtype=float)
    # phi-check(x) is the average of phi over lines through x, i.e. of phi(<x, u>)
    a = 2 * np.pi * np.arange(n_lines) / n_lines
    u = np.stack([np.cos(a), np.sin(a)], axis=-1)
    gx, gw = panel_rule(np.array([-R, 0.0]), np.array([0.0, R]), order)
    gx, gw = gx.ravel(), gw.ravel()
    X = c + np.stack(np.meshgrid(gx, gx, indexing="ij"), axis=-1)
    W = np.outer(gw, gw)
    check = np.mean(phi(X @ u.T), axis=-1)
    lhs = float(np.sum(W * f(X) * check))
    # right side: offsets p, lines {p u + s u_perp}
    off = c @ u.T
    px = off[:, None] + gx[None, :]
    bases = px[..., None] * u[:, None, :]
    frames = np.broadcast_to(np.stack([-np.sin(a), np.cos(a)], axis=-1)[:, None, None, :],
                             bases.shape[:2] + (1, 2))
    fhat = _plane_integrals(f, bases, frames, QuadratureSpec())
    rhs = float(np.mean(np.sum(fhat * phi(px) * gw, axis=-1)))
    return lhs, rhs
