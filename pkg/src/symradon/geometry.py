"""Coordinate models, integration submanifolds and phantoms.

Point conventions, used throughout the package:

* ``R2``/``R3``: real arrays of shape ``(..., n)``.
* ``H2``: complex arrays of Poincare-disk coordinates (curvature -1).
* ``H3``: hyperboloid arrays of shape ``(..., 4)`` in R^{3,1}; the H^2
  hyperboloid (``(..., 3)``) is used internally for geodesic families.
* ``H2xH2``: pairs ``(z1, z2)`` of disk arrays.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from .numerics import Decay

SPACES = ("R2", "R3", "H2", "H3", "H2xH2")


# ------------------------------------------------------------------ Euclid


@dataclass(frozen=True)
class DPlane:
    """Affine ``d``-plane ``base + span(frame)`` in R^n."""

    frame: np.ndarray
    base: np.ndarray

    def __post_init__(self):
        frame = np.atleast_2d(np.asarray(self.frame, dtype=float))
        object.__setattr__(self, "frame", frame)
        object.__setattr__(self, "base", np.asarray(self.base, dtype=float))
        d, n = frame.shape
        if d not in (1, 2) or d >= n or self.base.shape != (n,):
            raise ValueError("DPlane needs d in {1, 2}, d < n and a base point in R^n")
        if not np.allclose(frame @ frame.T, np.eye(d), atol=1e-12, rtol=0):
            raise ValueError("DPlane frame is not orthonormal")

    @property
    def d(self) -> int:
        return self.frame.shape[0]

    def points(self, *coords):
        return self.base + sum(np.multiply.outer(c, v) for c, v in zip(coords, self.frame))

    def distance(self, x) -> float:
        y = np.asarray(x, dtype=float) - self.base
        return float(np.linalg.norm(y - self.frame.T @ (self.frame @ y)))


def plane_at_distance(x, frame, u, p: float) -> DPlane:
    """The plane parallel to ``frame`` through ``x + p u``; ``u`` must be a unit normal."""
    frame = np.atleast_2d(np.asarray(frame, dtype=float))
    u = np.asarray(u, dtype=float)
    if abs(np.linalg.norm(u) - 1) > 1e-12 or np.max(np.abs(frame @ u)) > 1e-12:
        raise ValueError("u must be a unit vector orthogonal to the frame")
    return DPlane(frame, np.asarray(x, dtype=float) + p * u)


def orthonormal_complement(u):
    """Two unit vectors completing ``u`` (shape ``(..., 3)``) to an orthonormal frame."""
    u = np.asarray(u, dtype=float)
    helper = np.where(np.abs(u[..., :1]) < 0.9, np.array([1.0, 0, 0]), np.array([0, 1.0, 0]))
    e1 = np.cross(u, helper)
    e1 /= np.linalg.norm(e1, axis=-1, keepdims=True)
    e2 = np.cross(u, e1)
    return e1, e2


def sphere_rule(n_polar: int = 16, n_azimuth: int = 32, pole=(0.0, 0.0, 1.0)):
    """Directions and weights (summing to 1) for averages over S^2.

    Gauss-Legendre in the cosine of the polar angle times the trapezoid rule in
    azimuth, with the polar axis along ``pole``.
    """
    x, w = np.polynomial.legendre.leggauss(n_polar)
    phi = 2 * np.pi * np.arange(n_azimuth) / n_azimuth
    st = np.sqrt(1 - x**2)
    local = np.stack(
        [np.outer(st, np.cos(phi)), np.outer(st, np.sin(phi)), np.outer(x, np.ones_like(phi))], axis=-1
    ).reshape(-1, 3)
    weights = np.outer(w / 2, np.full(n_azimuth, 1.0 / n_azimuth)).ravel()
    pole = np.asarray(pole, dtype=float)
    pole = pole / np.linalg.norm(pole)
    e1, e2 = orthonormal_complement(pole)
    rot = np.stack([e1, e2, pole], axis=1)
    return local @ rot.T, weights


# ------------------------------------------------------ hyperboloid model


def mink(x, y):
    """Lorentz product ``x0 y0 - <x', y'>`` along the last axis."""
    x = np.asarray(x)
    y = np.asarray(y)
    return x[..., 0] * y[..., 0] - np.sum(x[..., 1:] * y[..., 1:], axis=-1)


def origin(n: int) -> np.ndarray:
    e = np.zeros(n + 1)
    e[0] = 1.0
    return e


def boost(X, Y):
    """Apply the transvection taking the origin to ``X`` to the vectors ``Y``."""
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    x0, xs = X[..., :1], X[..., 1:]
    y0, ys = Y[..., :1], Y[..., 1:]
    dot = np.sum(xs * ys, axis=-1, keepdims=True)
    return np.concatenate([x0 * y0 + dot, xs * y0 + ys + xs * dot / (1 + x0)], axis=-1)


def unboost(X, Y):
    """Inverse of :func:`boost`: the transvection taking ``X`` to the origin."""
    X = np.asarray(X, dtype=float)
    Xinv = np.concatenate([X[..., :1], -X[..., 1:]], axis=-1)
    return boost(Xinv, Y)


def hyperboloid_distance(x, y):
    return np.arccosh(np.maximum(mink(x, y), 1.0))


def polar_point(direction, r):
    """``exp_o(r * direction)`` on the hyperboloid for unit spatial ``direction``."""
    direction = np.asarray(direction, dtype=float)
    r = np.asarray(r, dtype=float)[..., None]
    return np.concatenate([np.cosh(r), np.sinh(r) * direction], axis=-1)


def disk_to_hyperboloid(z):
    z = np.asarray(z, dtype=complex)
    r2 = np.abs(z) ** 2
    return np.stack([(1 + r2) / (1 - r2), 2 * z.real / (1 - r2), 2 * z.imag / (1 - r2)], axis=-1)


def hyperboloid_to_disk(X):
    X = np.asarray(X, dtype=float)
    return (X[..., 1] + 1j * X[..., 2]) / (1 + X[..., 0])


def ball_to_hyperboloid(b):
    b = np.asarray(b, dtype=float)
    r2 = np.sum(b * b, axis=-1, keepdims=True)
    return np.concatenate([(1 + r2) / (1 - r2), 2 * b / (1 - r2)], axis=-1)


def hyperboloid_to_ball(X):
    X = np.asarray(X, dtype=float)
    return X[..., 1:] / (1 + X[..., :1])


# ------------------------------------------------------------ disk model


def check_disk(z):
    z = np.asarray(z)
    if np.any(np.abs(z) >= 1):
        raise ValueError("point outside the open unit disk")
    return z


@dataclass(frozen=True)
class HypPoint:
    z: complex

    def __post_init__(self):
        if not abs(self.z) < 1:
            raise ValueError("HypPoint must lie in the open unit disk")
        object.__setattr__(self, "z", complex(self.z))

    @property
    def half_plane(self) -> complex:
        return cayley(self.z)

    @classmethod
    def from_half_plane(cls, w: complex) -> "HypPoint":
        return cls(inverse_cayley(w))


def cayley(z):
    z = np.asarray(z, dtype=complex)
    return 1j * (1 + z) / (1 - z)


def inverse_cayley(w):
    w = np.asarray(w, dtype=complex)
    return (w - 1j) / (w + 1j)


def mobius(a, z):
    """Transvection of the disk moving 0 to ``a``: ``(z + a) / (1 + conj(a) z)``."""
    a = np.asarray(a, dtype=complex)
    z = np.asarray(z, dtype=complex)
    return (z + a) / (1 + np.conj(a) * z)


def hyp_distance(z, w):
    """Distance in the curvature -1 disk."""
    z = check_disk(np.asarray(z, dtype=complex))
    w = check_disk(np.asarray(w, dtype=complex))
    q = np.abs(z - w) / np.abs(1 - np.conj(w) * z)
    return 2 * np.arctanh(np.minimum(q, 1.0))


def half_plane_distance(w1, w2):
    w1 = np.asarray(w1, dtype=complex)
    w2 = np.asarray(w2, dtype=complex)
    # the asinh form keeps full precision for nearby points
    return 2 * np.arcsinh(np.abs(w1 - w2) / (2 * np.sqrt(w1.imag * w2.imag)))


def busemann(z, theta):
    """``A(z, e^{i theta}) = log((1 - |z|^2) / |z - e^{i theta}|^2)``.

    The signed distance from the origin to the horocycle through ``z`` tangent
    at ``e^{i theta}``; positive on the side of the tangency point.
    """
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z) >= 1):
        raise ValueError("busemann: point outside the open unit disk")
    return np.log1p(-np.abs(z) ** 2) - 2 * np.log(np.abs(z - np.exp(1j * np.asarray(theta))))


def poisson_kernel(z, theta):
    return np.exp(busemann(z, theta))


def hyperbolic_laplacian(u, z, h: float = 1e-3):
    """Five-point finite-difference Laplace-Beltrami operator of the disk at ``z``."""
    z = np.asarray(z, dtype=complex)
    s = u(z + h) + u(z - h) + u(z + 1j * h) + u(z - 1j * h) - 4 * u(z)
    return (1 - np.abs(z) ** 2) ** 2 / 4 * s / h**2


# -------------------------------------------------------- curves/surfaces


@dataclass(frozen=True)
class HypGeodesic:
    """Unit-speed geodesic ``s -> X cosh s + V sinh s`` on the hyperboloid of H^n."""

    X: np.ndarray
    V: np.ndarray

    def __post_init__(self):
        X = np.asarray(self.X, dtype=float)
        V = np.asarray(self.V, dtype=float)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "V", V)
        if abs(mink(X, X) - 1) > 1e-9 or abs(mink(X, V)) > 1e-9 or abs(mink(V, V) + 1) > 1e-9:
            raise ValueError("HypGeodesic needs a hyperboloid point and a unit tangent")

    @property
    def n(self) -> int:
        return self.X.shape[-1] - 1

    @classmethod
    def through_disk_point(cls, z: complex, direction: float) -> "HypGeodesic":
        """Geodesic of H^2 through the disk point ``z`` with Euclidean heading ``direction``."""
        X = disk_to_hyperboloid(z)
        V = boost(X, np.array([0.0, math.cos(direction), math.sin(direction)]))
        return cls(X, V)

    def hyperboloid_points(self, s):
        s = np.asarray(s, dtype=float)[..., None]
        return self.X * np.cosh(s) + self.V * np.sinh(s)

    def points(self, s):
        """Points in the native model: disk for H^2, hyperboloid for H^3."""
        P = self.hyperboloid_points(s)
        return hyperboloid_to_disk(P) if self.n == 2 else P

    def window(self, center_hyperboloid, radius: float):
        """``(s_mid, half)`` of the parameters within ``radius`` of a center, or ``None``."""
        return geodesic_window(self.X, self.V, center_hyperboloid, radius)


def geodesic_window(X, V, c, radius):
    """Vectorized :meth:`HypGeodesic.window`; empty windows get ``half = 0``.

    Along the geodesic ``cosh d(gamma(s), c) = cosh D cosh(s - s_mid)``.
    """
    a = mink(X, c)
    b = mink(V, c)
    coshD = np.sqrt(np.maximum(a * a - b * b, 1.0))
    s_mid = -np.arctanh(np.clip(b / a, -1 + 1e-16, 1 - 1e-16))
    ratio = math.cosh(radius) / coshD
    half = np.where(ratio > 1, np.arccosh(np.maximum(ratio, 1.0)), 0.0)
    if np.ndim(half) == 0:
        return None if half == 0 else (float(s_mid), float(half))
    return s_mid, half


@dataclass(frozen=True)
class TotallyGeodesicPlane:
    """Totally geodesic H^2 inside H^3: ``X cosh r + (cos a V1 + sin a V2) sinh r``."""

    X: np.ndarray
    V1: np.ndarray
    V2: np.ndarray

    def __post_init__(self):
        for name in ("X", "V1", "V2"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        gram = np.array([[mink(a, b) for b in (self.X, self.V1, self.V2)] for a in (self.X, self.V1, self.V2)])
        if not np.allclose(gram, np.diag([1.0, -1.0, -1.0]), atol=1e-9):
            raise ValueError("TotallyGeodesicPlane needs a point and an orthonormal tangent pair")

    @property
    def normal(self) -> np.ndarray:
        return unit_normal(self.X, self.V1, self.V2)

    def points(self, r, a):
        r = np.asarray(r, dtype=float)[..., None]
        a = np.asarray(a, dtype=float)[..., None]
        return self.X * np.cosh(r) + (np.cos(a) * self.V1 + np.sin(a) * self.V2) * np.sinh(r)

    def boundary_circle(self):
        """Center (unit vector) and angular radius of the plane's circle at infinity of the ball."""
        N = self.normal
        nvec = N[1:] / np.linalg.norm(N[1:])
        # the plane meets the sphere at infinity where <(1, w), N> = 0
        cos_rad = N[0] / np.linalg.norm(N[1:])
        return nvec, float(np.arccos(np.clip(cos_rad, -1, 1)))


def unit_normal(X, V1, V2):
    """Spacelike unit Lorentz normal of ``span(X, V1, V2)`` in R^{3,1}."""
    M = np.stack([X, V1, V2], axis=-2) * np.array([1.0, -1.0, -1.0, -1.0])
    # the null space of the Lorentz-lowered rows
    _, _, vt = np.linalg.svd(M)
    N = vt[..., -1, :]
    return N / np.sqrt(-mink(N, N))[..., None]


def plane_polar_frame(X, V1, V2, c):
    """Foot of ``c`` on the plane, an orthonormal tangent pair there, and ``cosh`` of the distance."""
    N = unit_normal(X, V1, V2)
    k = mink(c, N)
    Y = (c + k[..., None] * N) / np.sqrt(1 + k * k)[..., None]
    W1 = V1 - mink(V1, Y)[..., None] * Y
    W1 = W1 / np.sqrt(-mink(W1, W1))[..., None]
    W2 = V2 - mink(V2, Y)[..., None] * Y + mink(V2, W1)[..., None] * W1
    W2 = W2 / np.sqrt(-mink(W2, W2))[..., None]
    return Y, W1, W2, np.sqrt(1 + k * k)


@dataclass(frozen=True)
class Horocycle:
    """``xi_{t, theta}``: the horocycle tangent at ``e^{i theta}`` with signed distance ``t``."""

    t: float
    theta: float

    def points(self, s):
        return horocycle_point(self, s)

    def window(self, c: complex, radius: float):
        mid, half = horocycle_window(self.t, self.theta, c, radius)
        return None if half == 0 else (float(mid), float(half))


def horocycle_point(xi: Horocycle, s):
    """Unit-speed point of ``xi`` at arclength ``s``.

    In the half plane with the tangency point sent to infinity the horocycle is
    ``{Im w = e^t}`` and ``w = e^t (s + i)``.
    """
    s = np.asarray(s, dtype=float)
    w = np.exp(xi.t) * (s + 1j)
    return np.exp(1j * xi.theta) * inverse_cayley(w)


def horocycle_window(t, theta, c, radius):
    """Arclength interval of ``xi_{t,theta}`` within ``radius`` of ``c`` (vectorized)."""
    t = np.asarray(t, dtype=float)
    wc = cayley(np.asarray(c, dtype=complex) * np.exp(-1j * np.asarray(theta)))
    et = np.exp(t)
    rhs = 2 * et * wc.imag * (math.cosh(radius) - 1) - (et - wc.imag) ** 2
    half = np.where(rhs > 0, np.sqrt(np.maximum(rhs, 0.0)) / et, 0.0)
    return wc.real / et, half


# --------------------------------------------------------- product space


@dataclass(frozen=True)
class ProductPoint:
    z1: complex
    z2: complex

    def __post_init__(self):
        HypPoint(self.z1)
        HypPoint(self.z2)


def product_distance(x, y):
    return np.hypot(hyp_distance(x[0], y[0]), hyp_distance(x[1], y[1]))


@dataclass(frozen=True)
class FlatGeodesic:
    """Geodesic of H^2 x H^2 in the flat through the origin fixed by ``(alpha, beta)``.

    ``s -> (exp((p cos phi - s sin phi) X_alpha), exp((p sin phi + s cos phi) Y_beta))``
    with ``p`` its distance from the origin.
    """

    alpha: float
    beta: float
    phi: float
    p: float

    def coordinates(self, s):
        s = np.asarray(s, dtype=float)
        u1 = self.p * np.cos(self.phi) - s * np.sin(self.phi)
        u2 = self.p * np.sin(self.phi) + s * np.cos(self.phi)
        return u1, u2

    def points(self, s):
        u1, u2 = self.coordinates(s)
        return np.tanh(u1 / 2) * np.exp(1j * self.alpha), np.tanh(u2 / 2) * np.exp(1j * self.beta)


def radial_geodesic_window(direction, c, radius):
    """Interval of ``u`` with ``d(tanh(u/2) e^{i direction}, c) <= radius`` (vectorized).

    The geodesic through the origin is ``u -> (cosh u, sinh u e)`` on the hyperboloid.
    """
    C = disk_to_hyperboloid(c)
    direction = np.asarray(direction, dtype=float)
    a = C[..., 0] + 0 * direction
    b = -(C[..., 1] * np.cos(direction) + C[..., 2] * np.sin(direction))
    coshD = np.sqrt(np.maximum(a * a - b * b, 1.0))
    mid = -np.arctanh(np.clip(b / a, -1 + 1e-16, 1 - 1e-16))
    ratio = math.cosh(radius) / coshD
    half = np.where(ratio > 1, np.arccosh(np.maximum(ratio, 1.0)), 0.0)
    return mid, half


# ----------------------------------------------------------------- fields


def distance_squared(space: str, x, c):
    if space in ("R2", "R3"):
        return np.sum((np.asarray(x, dtype=float) - c) ** 2, axis=-1)
    if space == "H2":
        return hyp_distance(x, c) ** 2
    if space == "H3":
        return hyperboloid_distance(x, c) ** 2
    if space == "H2xH2":
        return hyp_distance(x[0], c[0]) ** 2 + hyp_distance(x[1], c[1]) ** 2
    raise ValueError(f"unknown space {space!r}")


def space_origin(space: str):
    return {
        "R2": np.zeros(2),
        "R3": np.zeros(3),
        "H2": 0j,
        "H3": origin(3),
        "H2xH2": (0j, 0j),
    }[space]


@dataclass(frozen=True)
class ScalarField:
    """A function on one of the model spaces with honest decay metadata.

    ``decay`` is relative to ``center``: the field vanishes (compact) or is
    below ``bound * exp(-rate d^2)`` at distance ``d`` from the center.
    """

    func: Callable[[Any], np.ndarray]
    space: str
    center: Any
    decay: Decay | None
    name: str = "field"

    def __call__(self, x):
        return self.func(x)

    @property
    def radius(self) -> float:
        """Radius about ``center`` outside of which the field is negligible."""
        if self.decay is None:
            raise ValueError(f"{self.name} has no decay metadata")
        return self.decay.cutoff()

    def __add__(self, other: "ScalarField") -> "ScalarField":
        if other.space != self.space:
            raise ValueError("cannot add fields on different spaces")
        gap = math.sqrt(float(distance_squared(self.space, other.center, self.center)))
        rad = max(self.radius, gap + other.radius)
        decay = Decay(support_radius=rad, bound=self.decay.bound + other.decay.bound)
        if not (self.decay.compact and other.decay.compact):
            # still rapidly decreasing; keep a Gaussian bound with a matching cutoff
            decay = Decay(gaussian_rate=math.log(1e17) / rad**2, bound=decay.bound)
        return ScalarField(lambda x: self.func(x) + other.func(x), self.space, self.center, decay,
                           f"{self.name}+{other.name}")

    def __mul__(self, a: float) -> "ScalarField":
        a = float(a)
        decay = None if self.decay is None else Decay(
            self.decay.support_radius, self.decay.gaussian_rate, abs(a) * self.decay.bound)
        return ScalarField(lambda x: a * self.func(x), self.space, self.center, decay, f"{a}*{self.name}")

    __rmul__ = __mul__

    def translated(self, to) -> "ScalarField":
        """``f o g`` where ``g`` is the transvection taking the origin to ``to``."""
        s = self.space
        if s in ("R2", "R3"):
            v = np.asarray(to, dtype=float)
            return ScalarField(lambda x: self.func(np.asarray(x) + v), s, self.center - v, self.decay,
                               self.name)
        if s == "H2":
            return ScalarField(lambda z: self.func(mobius(to, z)), s, complex(mobius(-to, self.center)),
                               self.decay, self.name)
        if s == "H3":
            to = np.asarray(to, dtype=float)
            return ScalarField(lambda X: self.func(boost(to, X)), s, unboost(to, self.center), self.decay,
                               self.name)
        if s == "H2xH2":
            a, b = to
            return ScalarField(lambda x: self.func((mobius(a, x[0]), mobius(b, x[1]))), s,
                               (complex(mobius(-a, self.center[0])), complex(mobius(-b, self.center[1]))),
                               self.decay, self.name)
        raise ValueError(s)


def zero_field(space: str) -> ScalarField:
    c = space_origin(space)
    if space in ("R2", "R3", "H3"):
        func = lambda x: np.zeros(np.shape(x)[:-1])
    elif space == "H2":
        func = lambda z: np.zeros(np.shape(z))
    else:
        func = lambda x: np.zeros(np.broadcast(x[0], x[1]).shape)
    return ScalarField(func, space, c, Decay(support_radius=0.0, bound=0.0), "zero")


PHANTOM_KINDS = ("gaussian-of-distance", "compact-bump", "translated-bump", "ring", "separable-product",
                 "indicator")


@dataclass(frozen=True)
class PhantomSpec:
    """Parameters of a test function.

    ``width`` is the Gaussian length scale (or the ring half-thickness);
    ``support_radius`` bounds the compact kinds.  Bumps are normalized so the
    value at the center equals ``amplitude``.
    """

    kind: str
    space: str = "H2"
    center: Any = None
    width: float = 1.0
    amplitude: float = 1.0
    support_radius: float | None = None

    def __post_init__(self):
        if self.kind not in PHANTOM_KINDS:
            raise ValueError(f"unknown phantom kind {self.kind!r}")
        if self.space not in SPACES:
            raise ValueError(f"unknown space {self.space!r}")
        if not self.width > 0:
            raise ValueError("width must be positive")
        compact = self.kind in ("compact-bump", "translated-bump", "ring", "indicator")
        if compact and not (self.support_radius and self.support_radius > 0):
            raise ValueError(f"{self.kind} needs a positive support_radius")
        if self.kind == "ring" and self.support_radius <= 2 * self.width:
            raise ValueError("ring needs support_radius > 2 * width")
        if self.kind == "separable-product" and self.space != "H2xH2":
            raise ValueError("separable-product lives on H2xH2")


def _bump(r2_over_R2):
    """``e * exp(-1/(1 - x))`` for ``x < 1``, else 0; equal to 1 at ``x = 0``."""
    x = np.asarray(r2_over_R2, dtype=float)
    inside = x < 1
    safe = np.where(inside, x, 0.0)
    return np.where(inside, np.exp(1.0 - 1.0 / (1.0 - safe)), 0.0)


def _normalize_center(space, center):
    if center is None:
        return space_origin(space)
    if space in ("R2", "R3"):
        return np.asarray(center, dtype=float)
    if space == "H2":
        return complex(check_disk(complex(center)))
    if space == "H3":
        c = np.asarray(center, dtype=float)
        return ball_to_hyperboloid(c) if c.shape == (3,) else c
    return (complex(center[0]), complex(center[1]))


def phantom(spec: PhantomSpec) -> ScalarField:
    """Build the :class:`ScalarField` described by ``spec``.

    For ``H3`` the center may be given in ball coordinates (length 3) or on the
    hyperboloid (length 4).
    """
    space = spec.space
    c = _normalize_center(space, spec.center)
    amp, w, R = spec.amplitude, spec.width, spec.support_radius
    kind = spec.kind

    if kind in ("gaussian-of-distance", "separable-product"):
        func = lambda x: amp * np.exp(-distance_squared(space, x, c) / w**2)
        decay = Decay(gaussian_rate=1.0 / w**2, bound=abs(amp))
    elif kind in ("compact-bump", "translated-bump"):
        func = lambda x: amp * _bump(distance_squared(space, x, c) / R**2)
        decay = Decay(support_radius=R, bound=abs(amp))
    elif kind == "ring":
        r0 = R - w

        def func(x):
            r = np.sqrt(distance_squared(space, x, c))
            return amp * _bump(((r - r0) / w) ** 2)

        decay = Decay(support_radius=R, bound=abs(amp))
    else:  # indicator
        func = lambda x: amp * (distance_squared(space, x, c) < R**2).astype(float)
        decay = Decay(support_radius=R, bound=abs(amp))
    return ScalarField(func, space, c, decay, kind)
