"""Verification pipelines: each turns one family of identities into report rows."""
from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import abel, euclid_radon, hfourier, horocycle, hyp_radon, xray_product
from .calibration import Constants, calibrate, calibrate_plane_constant, expected_constants
from .geometry import (
    Decay,
    PhantomSpec,
    ScalarField,
    boost,
    hyperbolic_laplacian,
    mobius,
    phantom,
    poisson_kernel,
    polar_point,
)
from .numerics import (
    QuadratureSpec,
    c_density,
    c_density_closed_form,
    d_dp,
    integrate_circle,
    panel_rule,
)

CSV_HEADER = "check_id,paper_anchor,value,reference,abs_err,rel_err,tolerance,pass,runtime_ms"


@dataclass(frozen=True)
class ReportRow:
    """One named residual.

    ``mode`` selects the error that is compared with ``tolerance``:
    ``"abs"`` and ``"rel"`` use ``|value - reference|`` (divided by
    ``|reference|`` for ``"rel"``), ``"upper"`` uses the excess
    ``max(0, value - reference)`` of a one-sided bound.  Negative controls set
    ``expect_fail``; they pass when the error exceeds the tolerance.
    """

    check_id: str
    paper_anchor: str
    value: float
    reference: float
    tolerance: float
    mode: str = "abs"
    expect_fail: bool = False
    runtime_ms: float | None = None

    @property
    def abs_err(self) -> float:
        if self.mode == "upper":
            return max(0.0, self.value - self.reference)
        return abs(self.value - self.reference)

    @property
    def rel_err(self) -> float:
        return self.abs_err / abs(self.reference) if self.reference else math.nan

    @property
    def error(self) -> float:
        return self.rel_err if self.mode == "rel" else self.abs_err

    @property
    def within(self) -> bool:
        return bool(self.error <= self.tolerance)

    @property
    def passed(self) -> bool:
        return self.within != self.expect_fail

    def csv_fields(self) -> list[str]:
        # runtime is left blank so that reports are byte-identical across runs
        nums = [f"{v:.10g}" for v in (self.value, self.reference, self.abs_err, self.rel_err, self.tolerance)]
        return [self.check_id, self.paper_anchor, *nums, str(self.passed).lower(), ""]


@dataclass
class RunContext:
    """Everything a pipeline needs: quadrature, optional phantom override, parameters and constants."""

    quad: QuadratureSpec = field(default_factory=QuadratureSpec)
    phantom: PhantomSpec | None = None
    params: dict = field(default_factory=dict)
    seed: int = 0
    constants: Constants | None = None
    jobs: int = 1
    out: Path | None = None

    def param(self, key, default):
        return self.params.get(key, default)

    def rng(self, salt: int) -> np.random.Generator:
        return np.random.default_rng([self.seed, salt])

    def primary(self, default: PhantomSpec) -> PhantomSpec:
        """The configured phantom if it lives on the same space as ``default``."""
        if self.phantom is not None and self.phantom.space == default.space:
            return self.phantom
        return default

    def map(self, fn, items):
        items = list(items)
        if self.jobs <= 1 or len(items) < 2:
            return [fn(x) for x in items]
        with ThreadPoolExecutor(self.jobs) as pool:
            return list(pool.map(fn, items))

    def need_constants(self) -> Constants:
        if self.constants is None:
            raise LookupError("no frozen constants: run the calibrate subcommand first")
        return self.constants


class _Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.ms = 1e3 * (time.perf_counter() - self.start)


def _row(check_id, anchor, value, reference, tolerance, mode="abs", expect_fail=False, timer=None):
    return ReportRow(check_id, anchor, float(value), float(reference), float(tolerance), mode, expect_fail,
                     None if timer is None else timer.ms)


# ------------------------------------------------------------------ probes


def euclidean_probes(center, count, rng, radius=1.5):
    center = np.asarray(center, dtype=float)
    u = rng.normal(size=(count, center.size))
    u /= np.linalg.norm(u, axis=1, keepdims=True)
    return center + radius * rng.uniform(0, 1, (count, 1)) * u


def disk_probes(center, count, rng, radius=1.5):
    r = radius * rng.uniform(0, 1, count)
    a = rng.uniform(0, 2 * np.pi, count)
    return mobius(complex(center), np.tanh(r / 2) * np.exp(1j * a))


def hyperboloid_probes(center, count, rng, radius=1.0):
    u = rng.normal(size=(count, 3))
    u /= np.linalg.norm(u, axis=1, keepdims=True)
    return boost(center, polar_point(u, radius * rng.uniform(0, 1, count)))


def _max_error(ctx, f, probes, reconstruct):
    vals = ctx.map(reconstruct, probes)
    return max(abs(v - float(f(x))) for v, x in zip(vals, probes))


# ------------------------------------------------------------------ Euclidean


def euclid_invert(ctx: RunContext) -> list[ReportRow]:
    rows = []
    quad = ctx.quad
    n_probes = ctx.param("probes", 25)
    for salt, space in enumerate(("R2", "R3")):
        spec = ctx.primary(PhantomSpec("gaussian-of-distance", space=space, center=[0.2, -0.1, 0.1][: int(space[1])]))
        f = phantom(spec)
        phi = euclid_radon.sinogram(f, 1, quad)
        pts = euclidean_probes(f.center, n_probes, ctx.rng(10 + salt))
        with _Timer() as tm:
            err = _max_error(ctx, f, pts, lambda x: euclid_radon.invert_xray(phi, x, quad).value)
        rows.append(_row(f"euclid.xray.{space}.max_abs_err", "line-integral inversion in R^n", err, 0, 1e-3,
                         timer=tm))

    consts = ctx.need_constants()
    f = phantom(ctx.primary(PhantomSpec("gaussian-of-distance", space="R3", center=[0.1, 0.0, -0.2])))
    phi = euclid_radon.sinogram(f, 2, quad)
    pts = euclidean_probes(f.center, ctx.param("plane_probes", 5), ctx.rng(12), radius=1.0)
    with _Timer() as tm:
        err = _max_error(ctx, f, pts, lambda x: euclid_radon.invert_dplane(phi, x, consts.c_d_3_2, quad).value)
    rows.append(_row("euclid.dplane.R3.max_abs_err", "plane-integral inversion in R^3", err, 0, 5e-3, timer=tm))

    others = [PhantomSpec("gaussian-of-distance", space="R3", center=[0.3, -0.2, 0.1], width=0.8,
                          amplitude=1.5),
              PhantomSpec("compact-bump", space="R3", center=[0.1, 0.2, 0.0], support_radius=2.0)]
    for k, spec in enumerate(others):
        with _Timer() as tm:
            c = calibrate_plane_constant("R3", spec, quad)
        rows.append(_row(f"euclid.dplane.constant_agreement.{k + 1}", "plane inversion constant c(2)", c,
                         consts.c_d_3_2, 1e-3, mode="rel", timer=tm))

    f = phantom(PhantomSpec("gaussian-of-distance", space="R2", center=[0.3, -0.2], width=0.7))
    test = lambda p: np.exp(-(p ** 2) / 2) * (1 + 0.2 * p)
    lhs, rhs = euclid_radon.duality_check(f, test)
    rows.append(_row("euclid.duality.R2", "transform/dual-transform duality", lhs, rhs, 1e-6, mode="rel"))
    return rows


# ------------------------------------------------------------------ hyperbolic


def hyp_invert(ctx: RunContext) -> list[ReportRow]:
    rows = []
    quad = ctx.quad
    f = phantom(ctx.primary(PhantomSpec("gaussian-of-distance", space="H2", center=0.2 - 0.1j)))
    phi = hyp_radon.hyp_sinogram(f, 1, quad)
    pts = disk_probes(f.center, ctx.param("probes", 20), ctx.rng(20))
    with _Timer() as tm:
        err = _max_error(ctx, f, pts, lambda z: hyp_radon.invert_hyp_xray(phi, z, quad).value)
    rows.append(_row("hyp.xray.H2.max_abs_err", "geodesic-integral inversion in H^n", err, 0, 5e-3, timer=tm))

    f = phantom(ctx.primary(PhantomSpec("gaussian-of-distance", space="H3", center=[0.1, 0.0, -0.15])))
    phi = hyp_radon.hyp_sinogram(f, 1, quad)
    pts = hyperboloid_probes(f.center, ctx.param("h3_probes", 5), ctx.rng(21))
    with _Timer() as tm:
        err = _max_error(ctx, f, pts, lambda X: hyp_radon.invert_hyp_xray(phi, X, quad).value)
    rows.append(_row("hyp.xray.H3.max_abs_err", "geodesic-integral inversion in H^n", err, 0, 5e-3, timer=tm))

    consts = ctx.need_constants()
    phi = hyp_radon.hyp_sinogram(f, 2, quad)
    pts = hyperboloid_probes(f.center, ctx.param("plane_probes", 3), ctx.rng(22), radius=0.8)
    with _Timer() as tm:
        err = _max_error(ctx, f, pts, lambda X: hyp_radon.invert_hyp_tg(phi, X, consts.C_d_3_2, quad).value)
    rows.append(_row("hyp.planes.H3.max_abs_err", "totally geodesic plane inversion in H^3", err, 0, 1e-2,
                     timer=tm))

    others = [PhantomSpec("gaussian-of-distance", space="H3", center=[0.2, -0.1, 0.1], width=0.8,
                          amplitude=1.5),
              PhantomSpec("compact-bump", space="H3", center=[0.0, 0.15, 0.1], support_radius=2.0)]
    for k, spec in enumerate(others):
        with _Timer() as tm:
            c = calibrate_plane_constant("H3", spec, quad)
        rows.append(_row(f"hyp.planes.constant_agreement.{k + 1}", "plane inversion constant C(2)", c,
                         consts.C_d_3_2, 1e-3, mode="rel", timer=tm))
    return rows


# ------------------------------------------------------------------ product space


def _product_phantoms(ctx: RunContext):
    c = (0.15 + 0.1j, -0.2j)
    return [
        ("separable_gaussian", phantom(ctx.primary(PhantomSpec("separable-product", space="H2xH2"))), 1.0),
        ("compact_bump", phantom(PhantomSpec("compact-bump", space="H2xH2", support_radius=1.5)), 1.0),
        ("translated_bump",
         phantom(PhantomSpec("translated-bump", space="H2xH2", center=c, amplitude=2.0,
                             support_radius=1.5)).translated(c), 2.0),
    ]


def product_invert(ctx: RunContext) -> list[ReportRow]:
    rows = []
    quad = ctx.quad
    M = ctx.param("product_angles", 16)
    for name, f, ref in _product_phantoms(ctx):
        if name == "separable_gaussian":
            ref = float(f((0j, 0j)))
        with _Timer() as tm:
            value = xray_product.invert_product_xray(f, quad, M).value
        rows.append(_row(f"product.xray.{name}", "rank-two X-ray inversion at the origin", value, ref, 1e-2,
                         mode="rel", timer=tm))

    # a separable field reconstructed on the product agrees with its factors reconstructed on H^2
    c1, c2, w1, w2 = 0.1 + 0.05j, -0.15j, 0.9, 1.1
    g1 = phantom(PhantomSpec("gaussian-of-distance", center=c1, width=w1))
    g2 = phantom(PhantomSpec("gaussian-of-distance", center=c2, width=w2))
    radius = max(g1.radius, g2.radius)
    f = ScalarField(lambda x: g1(x[0]) * g2(x[1]), "H2xH2", (c1, c2),
                    Decay(gaussian_rate=math.log(1e17) / radius**2), "separable")
    with _Timer() as tm:
        value = xray_product.invert_product_xray(f, quad, M).value
    factors = [hyp_radon.invert_hyp_xray(hyp_radon.hyp_sinogram(g, 1, quad), 0j, quad).value for g in (g1, g2)]
    rows.append(_row("product.xray.separable_vs_factors", "rank-two inversion against rank-one factors",
                     value, factors[0] * factors[1], 1e-2, mode="rel", timer=tm))
    return rows


# ------------------------------------------------------------------ horocycles


def _horocycle_phantoms(ctx: RunContext):
    return [
        ctx.primary(PhantomSpec("gaussian-of-distance", center=0.2 + 0.1j, width=0.8)),
        PhantomSpec("gaussian-of-distance", center=-0.3 + 0.25j, width=1.2, amplitude=1.5),
        PhantomSpec("compact-bump", center=0.1 - 0.3j, support_radius=1.5),
        PhantomSpec("translated-bump", center=-0.4j, support_radius=2.0, amplitude=0.7),
        PhantomSpec("ring", center=0.25, support_radius=1.6, width=0.5),
    ]


def horocycle_roundtrip(ctx: RunContext) -> list[ReportRow]:
    from .calibration import reference_duality_test_function

    consts = ctx.need_constants()
    quad = ctx.quad
    J = ctx.param("boundary_samples", 64)
    rows = []
    specs = _horocycle_phantoms(ctx)
    f = phantom(specs[0])
    with _Timer() as tm:
        lhs, rhs = horocycle.duality_pair(f, reference_duality_test_function, consts.horocycle_mu_exponent, quad)
    rows.append(_row("horocycle.duality", "horocycle transform/dual duality", rhs, lhs, 1e-6, mode="rel",
                     timer=tm))

    psi = horocycle.HorocycleSinogram.from_field(f, quad, J)
    if ctx.out is not None:
        psi.to_csv(ctx.out / "horocycle_sinogram.csv")
    pts = disk_probes(f.center, ctx.param("probes", 10), ctx.rng(30))
    with _Timer() as tm:
        rec = horocycle.lambda_invert(psi, pts)
    rows.append(_row("horocycle.inversion.max_abs_err", "horocycle inversion through Lambda",
                     np.max(np.abs(rec - f(pts))), 0, 1e-2, timer=tm))

    ratios = []
    for k, spec in enumerate(specs):
        with _Timer() as tm:
            _, _, ratio = horocycle.plancherel_horocycle(phantom(spec), consts.kappa, quad, J)
        ratios.append(ratio)
        rows.append(_row(f"horocycle.plancherel.{k + 1}.{spec.kind}", "horocycle Plancherel formula", ratio, 1.0,
                         1e-3, mode="rel", timer=tm))
    ratios = np.array(ratios)
    rows.append(_row("horocycle.plancherel.spread", "horocycle Plancherel formula",
                     (ratios.max() - ratios.min()) / ratios.mean(), 0, 1e-3))
    return rows


def horocycle_range(ctx: RunContext) -> list[ReportRow]:
    consts = ctx.need_constants()
    f = phantom(ctx.primary(PhantomSpec("gaussian-of-distance", center=0.3 - 0.2j, width=0.8)))
    psi = horocycle.HorocycleSinogram.from_field(f, ctx.quad, ctx.param("boundary_samples", 64))
    coeffs = horocycle.range_coefficients(psi)
    k0, mu = consts.range_kappa0, consts.range_mu
    rows = [_row("horocycle.range.evenness.n0", "range law, zeroth mode",
                 horocycle.evenness_defect(coeffs, k0), 0, 1e-2)]
    t = psi.t
    for n in (1, 2, 3):
        with _Timer() as tm:
            clean = horocycle.range_multiplier_check(coeffs, n, k0, mu)
        rows.append(_row(f"horocycle.range.residual.n{n}", "range law multiplier", clean.value, 0, 1e-2, timer=tm))
        coef = coeffs.coef.copy()
        coef[:, n] *= 1 + 0.05 * np.tanh(t)
        bad = horocycle.range_multiplier_check(horocycle.RangeCoefficients(coef, coeffs.T), n, k0, mu)
        rows.append(_row(f"horocycle.range.control_inflation.n{n}", "range law multiplier (perturbed mode)",
                         clean.value / bad.value, 0.1, 0.0, mode="upper"))
        lam = np.linspace(-50, 50, 2001)
        rows.append(_row(f"horocycle.range.unimodular.n{n}", "range law multiplier",
                         np.max(np.abs(np.abs(horocycle.s_multiplier(n, lam, mu)) - 1)), 0, 1e-12))
    return rows


def support_scan(ctx: RunContext) -> list[ReportRow]:
    R = ctx.param("R", 1.0)
    delta = ctx.param("delta", 0.2)
    quad = ctx.quad
    f = phantom(ctx.primary(PhantomSpec("compact-bump", support_radius=1.0)))
    with _Timer() as tm:
        rep = horocycle.support_scan(f, R, delta, quad, tol=1e-8)
    rows = [
        _row("support.external_horocycles", "support theorem, external horocycles", rep.external_sup, 0, 1e-8,
             timer=tm),
        _row("support.enclosing_horocycles", "support theorem, enclosing horocycles", rep.enclosing_sup, 0, 1e-8),
        _row("support.reconstruction_outside", "support theorem, function outside the ball", rep.outside_sup, 0,
             1e-3),
        _row("support.sides_consistent", "support theorem, both horocycle families",
             float(rep.consistent), 1.0, 0.0),
    ]
    far = phantom(PhantomSpec("compact-bump", center=math.tanh(1.0), support_radius=1.0))
    ctrl = horocycle.support_scan(far, 1.0, 0.2, quad, tol=1e-8)
    rows.append(_row("support.negative_control.external_horocycles", "support theorem, displaced phantom",
                     ctrl.external_sup, 0, 1e-8, expect_fail=True))
    return rows


# ------------------------------------------------------------------ Abel


def abel_identities(ctx: RunContext) -> list[ReportRow]:
    rows = []
    spec1 = ctx.primary(PhantomSpec("gaussian-of-distance", width=0.7))
    f1 = abel.RadialField.from_phantom(spec1)
    f2 = abel.RadialField.from_phantom(PhantomSpec("compact-bump", support_radius=1.5))
    g1, g2 = abel.abel_grid(f1), abel.abel_grid(f2)
    if ctx.out is not None:
        with open(ctx.out / "abel_grid.csv", "w") as fh:
            fh.write("t,value\n")
            for tt, v in zip(g1.t, np.asarray(g1.values)):
                fh.write(f"{tt:.12g},{v:.17g}\n")

    lam = np.linspace(0, 6, 25)
    with _Timer() as tm:
        lhs = abel.euclidean_fourier(g1, lam)
        rhs = abel.spherical_transform(f1, lam)
    rows.append(_row("abel.intertwining", "Abel transform intertwines Fourier and spherical transforms",
                     np.max(np.abs(lhs - rhs)) / np.max(np.abs(rhs)), 0, 1e-4, timer=tm))

    with _Timer() as tm:
        conv = abel.convolution_field(f1, f2, radius=f1.radius + f2.radius)
        lam = np.array([0.0, 0.5, 1.0, 2.0, 3.0])
        a = abel.spherical_transform(conv, lam)
        b = abel.spherical_transform(f1, lam) * abel.spherical_transform(f2, lam)
    rows.append(_row("abel.homomorphism", "spherical transform of a convolution",
                     np.max(np.abs(a - b)) / np.max(np.abs(b)), 0, 1e-3, timer=tm))
    with _Timer() as tm:
        tt = np.linspace(-4, 4, 41)
        a = abel.abel_grid(conv).interpolator()(tt)
        b = abel.grid_convolve(g1, g2).interpolator()(tt)
    rows.append(_row("abel.convolution", "Abel transform of a convolution",
                     np.max(np.abs(a - b)) / np.max(np.abs(b)), 0, 1e-3, timer=tm))

    psi = abel.abel_grid(abel.RadialField.from_phantom(PhantomSpec("gaussian-of-distance", width=0.5)))
    with _Timer() as tm:
        res = abel.check_dual_abel_inversion(g1, psi, f1)
    rows.append(_row("abel.dual_inversion", "dual Abel transform inverts through L", res.inversion, 0, 1e-3,
                     timer=tm))
    rows.append(_row("abel.dual_convolution", "dual Abel transform of a convolution", res.convolution, 0, 1e-2))

    with _Timer() as tm:
        inv = abel.abel_invert(g1)
        r = np.linspace(0, 2, 9)
        err = np.max(np.abs(inv(r) - f1(r)))
    rows.append(_row("abel.round_trip", "Abel inversion round trip", err, 0, 1e-3, timer=tm))

    f = phantom(PhantomSpec("gaussian-of-distance", width=0.7))
    t = np.array([-1.0, 0.0, 0.7, 1.5])
    h = horocycle.horocycle_integrals(f, t, 0.0, ctx.quad) * np.exp(t / 2)
    rows.append(_row("abel.horocycle_agreement", "Abel transform as weighted horocycle integral",
                     np.max(np.abs(h - abel.abel_forward(f1, t))), 0, 1e-10))
    return rows


# ------------------------------------------------------------------ Fourier


def _fourier_phantoms(ctx: RunContext):
    a = phantom(ctx.primary(PhantomSpec("gaussian-of-distance", center=0.2 + 0.1j, width=0.8)))
    b = phantom(PhantomSpec("gaussian-of-distance", center=-0.3 + 0.25j, width=1.2, amplitude=1.5))
    c = a + phantom(PhantomSpec("gaussian-of-distance", center=0.35j, width=0.9, amplitude=0.5))
    return [("gaussian", a), ("wide_gaussian", b), ("gaussian_sum", c)]


def fourier_plancherel(ctx: RunContext) -> list[ReportRow]:
    consts = ctx.need_constants()
    lam_max = ctx.param("lambda_max", hfourier.LAMBDA_MAX)
    step = ctx.param("lambda_step", hfourier.LAMBDA_STEP)
    J = ctx.param("boundary_samples", hfourier.BOUNDARY_SAMPLES)
    rows = []
    grids = {}
    for name, f in _fourier_phantoms(ctx):
        with _Timer() as tm:
            F = hfourier.SpectralGrid.from_field(f, lam_max, step, J)
            _, _, ratio = hfourier.plancherel_check(f, consts.kappa, F)
        grids[name] = (f, F)
        rows.append(_row(f"fourier.plancherel.{name}", "Fourier Plancherel formula", ratio, 1.0, 1e-3, mode="rel",
                         timer=tm))
        rows.append(_row(f"fourier.band_tail.{name}", "spectral content beyond the band", F.tail_fraction(), 0,
                         1e-8))
    f, F = grids["gaussian"]
    if ctx.out is not None:
        F.to_csv(ctx.out / "spectral_grid.csv")
    pts = disk_probes(f.center, ctx.param("probes", 20), ctx.rng(40))
    with _Timer() as tm:
        rec = hfourier.hfourier_invert(F, pts, consts.kappa)
    rows.append(_row("fourier.inversion.max_abs_err", "Fourier inversion", np.max(np.abs(rec - f(pts))), 0, 1e-3,
                     timer=tm))

    _, _, ratio = horocycle.plancherel_horocycle(f, consts.kappa, ctx.quad)
    rows.append(_row("fourier.kappa_shared_with_horocycles", "one Plancherel constant for both transforms",
                     ratio, 1.0, 1e-3, mode="rel"))

    lam = 1.3
    boundary = lambda th: 0.5 + np.cos(2 * th) + 0.3 * np.sin(3 * th)
    u = lambda z: hfourier.poisson_transform(boundary, lam, z)
    z = np.array([0.1 + 0.2j, -0.4 + 0.1j, 0.3 - 0.5j, 0.0j, 0.6j])
    lap = hyperbolic_laplacian(u, z)
    eig = -(lam**2 + 0.25) * u(z)
    rows.append(_row("fourier.poisson_eigenfunction", "Poisson transform eigenfunctions",
                     np.max(np.abs(lap - eig)) / np.max(np.abs(eig)), 0, 1e-4))
    rows.append(_row("fourier.holomorphy", "holomorphy in the spectral parameter",
                     hfourier.cauchy_riemann_residual(f, 1.0 + 0.2j), 0, 1e-6))
    return rows


def rl_scan(ctx: RunContext) -> list[ReportRow]:
    rough = phantom(ctx.primary(PhantomSpec("indicator", support_radius=1.0)))
    theta = 2 * np.pi * np.arange(8) / 8
    with _Timer() as tm:
        table = hfourier.riemann_lebesgue_scan(rough, [1.0, 40.0], np.linspace(-0.5, 0.5, 5), theta)
    rows = [_row("fourier.riemann_lebesgue.rough", "decay of the Fourier transform", table.ratio(40.0, 1.0),
                 0.1, 0.0, mode="upper", timer=tm)]
    smooth = phantom(PhantomSpec("compact-bump", support_radius=2.0))
    table = hfourier.riemann_lebesgue_scan(smooth, [1.0, 40.0], np.linspace(-0.5, 0.5, 5), theta)
    rows.append(_row("fourier.riemann_lebesgue.smooth", "decay of the Fourier transform", table.ratio(40.0, 1.0),
                     1e-4, 0.0, mode="upper"))
    f = phantom(PhantomSpec("gaussian-of-distance", center=0.2 - 0.3j, width=0.8))
    norm = hfourier.l1_norm(f)
    for k, lam in enumerate([0.0, 1.0 + 0.3j, 2.0 - 0.5j, 0.5 + 0.5j, 3.0 - 0.2j]):
        rows.append(_row(f"fourier.l1_bound.{k + 1}", "L1 bound in the tube",
                         hfourier.boundary_l1(f, lam) / norm, 1.0, 1e-9, mode="upper"))
    return rows


# ------------------------------------------------------------------ constants and oracles


def calibration_rows(consts: Constants) -> list[ReportRow]:
    """Compare the frozen constants with their closed-form values."""
    exact = expected_constants()
    anchors = {"c_d_3_2": "plane inversion constant c(2)", "C_d_3_2": "plane inversion constant C(2)",
               "kappa": "Plancherel constant", "horocycle_mu_exponent": "horocycle-space measure",
               "range_kappa0": "range law normalization", "range_mu": "range law normalization"}
    return [_row(f"calibration.{k}", anchors[k], getattr(consts, k), exact[k], 1e-6, mode="rel") for k in exact]


def oracle_hygiene(ctx: RunContext) -> list[ReportRow]:
    rows = []
    lam = np.linspace(0.1, 8, 40)
    a = c_density(lam, (18.0, 20.0))
    b = c_density(lam, (22.0, 24.0))
    rows.append(_row("oracle.c_density.cutoff_independence", "Plancherel density",
                     np.max(np.abs(a - b) / np.abs(a)), 0, 1e-6))
    rows.append(_row("oracle.c_density.closed_form", "Plancherel density",
                     np.max(np.abs(a - c_density_closed_form(lam)) / np.abs(a)), 0, 1e-6))

    # fourth-order differences: halving the step divides the error by 16
    F = lambda p: np.cosh(p) * np.exp(-0.3 * p * p)
    exact = lambda p: np.sinh(p) * np.exp(-0.3 * p * p) - 0.6 * p * F(p)
    p0 = 0.7
    errs = [abs(d_dp(F, p0, h) - exact(p0)) for h in (0.1, 0.05)]
    rows.append(_row("oracle.finite_difference.order", "finite-difference convergence order",
                     math.log2(errs[0] / errs[1]), 4.0, 0.3))

    # Gauss-Legendre panels on a smooth integrand converge geometrically
    g = lambda s: np.exp(-s * s) * np.cos(3 * s)
    ref = math.sqrt(math.pi) * math.exp(-9 / 4)
    errs = []
    for order in (12, 24):
        x, w = panel_rule(-8.0, 8.0, order, 2)
        errs.append(abs(np.sum(w * g(x)) - ref))
    rows.append(_row("oracle.gauss_legendre.geometric", "Gauss-Legendre convergence", errs[1] / errs[0], 0,
                     1e-4))

    # the periodic trapezoid rule is spectrally accurate on the Poisson kernel
    z = 0.6 + 0.2j
    ref = (1 + abs(z) ** 2) / (1 - abs(z) ** 2)
    errs = [abs(integrate_circle(lambda th: poisson_kernel(z, th) ** 2, M) - ref) for M in (32, 128)]
    rows.append(_row("oracle.trapezoid.spectral", "periodic trapezoid convergence", errs[1], 0, 1e-12))
    return rows


PIPELINES = {
    "euclid-invert": euclid_invert,
    "hyp-invert": hyp_invert,
    "product-invert": product_invert,
    "horocycle-roundtrip": horocycle_roundtrip,
    "horocycle-range": horocycle_range,
    "support-scan": support_scan,
    "abel-identities": abel_identities,
    "fourier-plancherel": fourier_plancherel,
    "rl-scan": rl_scan,
}

PIPELINE_SPACES = {
    "euclid-invert": ("R2", "R3"),
    "hyp-invert": ("H2", "H3"),
    "product-invert": ("H2xH2",),
    "horocycle-roundtrip": ("H2",),
    "horocycle-range": ("H2",),
    "support-scan": ("H2",),
    "abel-identities": ("H2",),
    "fourier-plancherel": ("H2",),
    "rl-scan": ("H2",),
}


def run_all(ctx: RunContext) -> list[ReportRow]:
    """Every pipeline, calibrating first when no constants were supplied."""
    if ctx.constants is None:
        ctx.constants = calibrate(ctx.quad)
    rows = calibration_rows(ctx.constants)
    for fn in PIPELINES.values():
        rows.extend(fn(ctx))
    rows.extend(oracle_hygiene(ctx))
    return rows

