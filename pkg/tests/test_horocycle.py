import math

import numpy as np
import pytest
from scipy import integrate

from oracles import HOROCYCLE_MU, KAPPA, RANGE_KAPPA0, RANGE_MU
from symradon.calibration import reference_duality_test_function
from symradon.geometry import Horocycle, PhantomSpec, phantom, zero_field
from symradon.horocycle import (
    HorocycleSinogram,
    duality_pair,
    evenness_defect,
    horocycle_dual,
    horocycle_forward,
    horocycle_integrals,
    lambda_filter,
    lambda_invert,
    measure_mu_exponent,
    plancherel_horocycle,
    range_coefficients,
    range_multiplier_check,
    resolve_range_normalization,
    s_multiplier,
    support_scan,
)
from symradon.numerics import QuadratureSpec


def gaussian(center=None, width=1.0, amplitude=1.0):
    return phantom(PhantomSpec("gaussian-of-distance", center=center, width=width, amplitude=amplitude))


def bump(center=None, R=1.0):
    return phantom(PhantomSpec("compact-bump", center=center, support_radius=R))


def horocycle_oracle(t):
    # arclength s from the point nearest the origin: cosh d = cosh t + s^2 e^t / 2
    g = lambda s: math.exp(-math.acosh(math.cosh(t) + s * s * math.exp(t) / 2) ** 2)
    return 2 * integrate.quad(g, 0, np.inf, epsabs=1e-15, epsrel=1e-13, limit=200)[0] / math.pi


@pytest.fixture(scope="module")
def small_spec():
    return QuadratureSpec(grid_N=2048)


class TestForward:
    @pytest.mark.parametrize("t", [-1.0, 0.0, 0.4, 1.5])
    def test_gaussian_against_adaptive_oracle(self, t):
        np.testing.assert_allclose(horocycle_forward(gaussian(), Horocycle(t, 0.7)), horocycle_oracle(t), rtol=1e-10)

    def test_radial_field_is_rotation_invariant(self):
        vals = horocycle_integrals(gaussian(), 0.3, np.linspace(0, 2 * np.pi, 7))
        np.testing.assert_allclose(vals, vals[0], rtol=1e-13)

    def test_zero_field(self):
        assert np.all(horocycle_integrals(zero_field("H2"), np.array([0.0, 1.0]), 0.0) == 0)

    def test_linearity(self):
        # a sum is integrated on one window about the first center, so the bump needs finer panels
        spec = QuadratureSpec(panel_count=16)
        f, g = gaussian(0.2j), bump(-0.3 + 0j, 1.2)
        t, th = np.array([-0.5, 0.2, 1.0]), np.array([0.1, 2.0, 4.0])
        np.testing.assert_allclose(horocycle_integrals(f + 3.0 * g, t, th, spec),
                                   horocycle_integrals(f, t, th, spec) + 3 * horocycle_integrals(g, t, th, spec),
                                   rtol=1e-7)


class TestDual:
    def test_dual_of_constant(self):
        z = np.array([0j, 0.5 + 0.2j, -0.9j])
        np.testing.assert_allclose(horocycle_dual(lambda t, th: 1 + 0 * t, z), 1.0, rtol=1e-12)

    def test_duality_with_unit_exponent(self):
        lhs, rhs = duality_pair(gaussian(0.2 + 0.1j, 0.8), reference_duality_test_function, HOROCYCLE_MU)
        np.testing.assert_allclose(lhs, rhs, rtol=1e-6)

    def test_measured_exponent(self):
        best, errs = measure_mu_exponent(gaussian(0.2 + 0.1j, 0.8), reference_duality_test_function)
        assert best == HOROCYCLE_MU
        assert errs[0.0] > 1e-2 and errs[-1.0] > 1e-2


@pytest.fixture(scope="module")
def reconstruction(small_spec):
    f = gaussian(0.3 - 0.2j, 0.9, amplitude=2.0)
    psi = HorocycleSinogram.from_field(f, small_spec)
    return f, psi, lambda_filter(psi)


@pytest.fixture(scope="module")
def coeffs(small_spec):
    return range_coefficients(HorocycleSinogram.from_field(gaussian(0.3 + 0.2j, 0.8), small_spec))


class TestInversion:
    def test_pointwise(self, reconstruction):
        f, psi, g = reconstruction
        z = np.array([0j, 0.3 - 0.2j, 0.5 + 0.4j])
        np.testing.assert_allclose(lambda_invert(psi, z, g), f(z), atol=1e-2)

    def test_filter_is_reused(self, reconstruction):
        f, psi, g = reconstruction
        np.testing.assert_allclose(lambda_invert(psi, 0.1j, g), lambda_invert(psi, 0.1j), rtol=1e-13)

    def test_csv_round_trip(self, reconstruction, tmp_path):
        _, psi, _ = reconstruction
        psi.to_csv(tmp_path / "psi.csv")
        back = HorocycleSinogram.from_csv(tmp_path / "psi.csv")
        assert back.T == pytest.approx(psi.T, rel=1e-12)
        np.testing.assert_array_equal(back.values, psi.values)

    def test_interpolant_reproduces_samples(self, reconstruction):
        _, psi, _ = reconstruction
        k = np.arange(0, psi.N, 97)
        vals = psi.interpolant()(psi.t[k][:, None], psi.theta[None, :])
        np.testing.assert_allclose(vals, psi.values[k], atol=1e-12)

    def test_sample_count_must_be_power_of_two(self):
        with pytest.raises(ValueError):
            HorocycleSinogram.from_field(gaussian(), J=48)


class TestPlancherel:
    @pytest.mark.parametrize("f", [gaussian(), gaussian(0.4j, 0.6), bump(0.2 + 0j, 1.5)],
                             ids=["centered", "shifted", "bump"])
    def test_norms_agree(self, f):
        lhs, rhs, ratio = plancherel_horocycle(f, KAPPA)
        assert ratio == pytest.approx(1.0, rel=1e-3)

    def test_zero_field_has_no_ratio(self, small_spec):
        assert plancherel_horocycle(zero_field("H2"), KAPPA, small_spec)[2] is None


class TestRange:
    def test_multiplier_is_unimodular(self):
        lam = np.linspace(-20, 20, 401)
        for n in (1, 2, 5):
            np.testing.assert_allclose(np.abs(s_multiplier(n, lam, RANGE_MU)), 1.0, atol=1e-12)

    def test_zero_mode_is_even(self, coeffs):
        assert evenness_defect(coeffs, RANGE_KAPPA0) <= 1e-8

    @pytest.mark.parametrize("n", [1, 2, 3, -2])
    def test_modes_satisfy_the_range_law(self, coeffs, n):
        res = range_multiplier_check(coeffs, n, RANGE_KAPPA0, RANGE_MU)
        assert not res.inconclusive and res.value <= 1e-2

    def test_wrong_parity_fails(self, coeffs):
        assert range_multiplier_check(coeffs, 1, RANGE_KAPPA0, RANGE_MU, parity=False).value > 0.1

    def test_normalization_search(self, coeffs):
        accepted, table = resolve_range_normalization(coeffs)
        assert accepted == (RANGE_KAPPA0, RANGE_MU, True)
        assert len(table) == 8

    def test_zero_mode_is_rejected(self, coeffs):
        with pytest.raises(ValueError):
            range_multiplier_check(coeffs, 0)

    def test_zero_field_is_inconclusive(self, small_spec):
        coeffs = range_coefficients(HorocycleSinogram.from_field(zero_field("H2"), small_spec))
        assert range_multiplier_check(coeffs, 1).inconclusive


class TestSupport:
    def test_centered_bump(self, small_spec):
        rep = support_scan(bump(R=1.0), 1.0, 0.2, small_spec, tol=1e-8)
        assert rep.external_vanishes and rep.enclosing_vanishes and rep.function_vanishes
        assert rep.consistent

    def test_displaced_bump_is_detected(self, small_spec):
        rep = support_scan(bump(math.tanh(1.0), 1.0), 1.0, 0.2, small_spec, tol=1e-8)
        assert not rep.external_vanishes
        assert rep.consistent
