import math

import numpy as np
import pytest

from oracles import SQRT_PI
from symradon.geometry import FlatGeodesic, PhantomSpec, phantom
from symradon.xray_product import (
    flat_geodesic_integrals,
    invert_product_xray,
    omega_average,
    product_xray_forward,
    xray_oracle,
)


def separable(center=(0j, 0j), width=1.0, amplitude=1.0):
    return phantom(PhantomSpec("separable-product", space="H2xH2", center=center, width=width,
                               amplitude=amplitude))


class TestForward:
    @pytest.mark.parametrize("p", [0.0, 0.5, 1.7])
    @pytest.mark.parametrize("phi", [0.0, 0.3, math.pi / 2])
    def test_separable_gaussian_closed_form(self, p, phi):
        # in flat coordinates the squared distance to the origin is p^2 + s^2
        val = product_xray_forward(separable(), FlatGeodesic(0.4, -1.1, phi, p))
        np.testing.assert_allclose(val, SQRT_PI * math.exp(-p * p), rtol=1e-10)

    def test_vectorized_matches_scalar(self):
        f = separable(center=(0.2j, -0.1 + 0j), width=0.8)
        a, b, ph, p = np.array([0.1, 2.0]), np.array([0.5, -1.0]), np.array([0.2, 1.0]), np.array([0.3, 0.9])
        batch = flat_geodesic_integrals(f, a, b, ph, p)
        singles = [product_xray_forward(f, FlatGeodesic(*args)) for args in zip(a, b, ph, p)]
        np.testing.assert_allclose(batch, singles, rtol=1e-13)

    def test_geodesic_missing_the_support(self):
        f = phantom(PhantomSpec("compact-bump", space="H2xH2", support_radius=0.5))
        assert product_xray_forward(f, FlatGeodesic(0.0, 0.0, 0.7, 1.0)) == 0.0

    def test_linearity(self):
        f, g = separable(), separable(center=(0.3 + 0j, 0j), width=0.7)
        gamma = FlatGeodesic(0.2, 0.4, 0.6, 0.5)
        lhs = product_xray_forward(f + 2.0 * g, gamma)
        rhs = product_xray_forward(f, gamma) + 2 * product_xray_forward(g, gamma)
        np.testing.assert_allclose(lhs, rhs, rtol=1e-8)


def test_omega_average_of_radial_field():
    avg = omega_average(xray_oracle(separable()), np.array([0.3, 1.0]), M=8)
    np.testing.assert_allclose(avg, SQRT_PI * np.exp(-np.array([0.09, 1.0])), rtol=1e-10)


class TestInversion:
    def test_separable_gaussian(self):
        assert invert_product_xray(separable(amplitude=1.5)).value == pytest.approx(1.5, rel=1e-6)

    def test_off_center_point_through_translation(self):
        f = separable(center=(0.2 + 0j, -0.1j), width=0.9)
        x = (0.1 + 0.1j, 0.05 + 0j)
        est = invert_product_xray(f.translated(x))
        assert est.value == pytest.approx(float(f(x)), rel=1e-2)

    def test_compact_bump(self):
        f = phantom(PhantomSpec("compact-bump", space="H2xH2", support_radius=1.0))
        assert invert_product_xray(f).value == pytest.approx(1.0, rel=1e-2)
