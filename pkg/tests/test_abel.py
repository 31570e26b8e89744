import math

import numpy as np
import pytest
from scipy import integrate

from symradon.abel import (
    RadialField,
    abel_dual,
    abel_forward,
    abel_grid,
    abel_invert,
    check_dual_abel_inversion,
    euclidean_fourier,
    grid_convolve,
    horocycle_radius,
    radial_convolution,
    spherical_function,
    spherical_transform,
)
from symradon.geometry import Horocycle, PhantomSpec, phantom
from symradon.horocycle import horocycle_forward
from symradon.numerics import EvenGridFunction


def radial_gaussian(width=1.0):
    return RadialField.from_phantom(PhantomSpec("gaussian-of-distance", width=width))


def laplace_integral(lam, t):
    # spherical function as a Legendre function of cosh t with degree -1/2 + i lam
    nu = -0.5 + 1j * lam
    g = lambda th: (math.cosh(t) + math.sinh(t) * math.cos(th)) ** nu
    re = integrate.quad(lambda th: g(th).real, 0, math.pi, epsabs=1e-13, limit=200)[0]
    im = integrate.quad(lambda th: g(th).imag, 0, math.pi, epsabs=1e-13, limit=200)[0]
    return complex(re, im) / math.pi


class TestSphericalFunction:
    def test_value_at_origin(self):
        np.testing.assert_allclose(spherical_function(np.array([0.0, 1.0, 3.5]), 0.0), 1.0, rtol=1e-14)

    def test_trivial_representation(self):
        np.testing.assert_allclose(spherical_function(-0.5j, np.array([0.3, 1.0, 2.5])), 1.0, rtol=1e-12)

    def test_even_in_lambda(self):
        np.testing.assert_allclose(spherical_function(1.7, 1.2), spherical_function(-1.7, 1.2), rtol=1e-12)

    @pytest.mark.parametrize("lam,t", [(0.0, 0.8), (1.3, 0.8), (2.5, 2.0)])
    def test_against_laplace_integral(self, lam, t):
        np.testing.assert_allclose(spherical_function(lam, t), laplace_integral(lam, t), rtol=1e-10)


class TestAbelTransform:
    @pytest.mark.parametrize("t", [0.0, 0.6, 2.0])
    def test_against_adaptive_oracle(self, t):
        f = radial_gaussian(0.7)
        g = lambda s: float(f(horocycle_radius(t, s)))
        ref = 2 * math.exp(t / 2) * integrate.quad(g, 0, np.inf, epsabs=1e-15, limit=200)[0] / math.pi
        np.testing.assert_allclose(abel_forward(f, t), ref, rtol=1e-10)

    def test_even_in_t(self):
        f = RadialField.from_phantom(PhantomSpec("compact-bump", support_radius=1.5))
        t = np.array([0.2, 0.9, 1.4])
        np.testing.assert_allclose(abel_forward(f, t), abel_forward(f, -t), rtol=1e-12)

    def test_matches_weighted_horocycle_integral(self):
        spec = PhantomSpec("gaussian-of-distance", width=0.7)
        t = 0.45
        direct = math.exp(t / 2) * horocycle_forward(phantom(spec), Horocycle(t, 0.0))
        np.testing.assert_allclose(abel_forward(RadialField.from_phantom(spec), t), direct, rtol=1e-10)

    def test_radial_fields_must_be_centered(self):
        with pytest.raises(ValueError):
            RadialField.from_phantom(PhantomSpec("gaussian-of-distance", center=0.1j))


class TestSphericalTransform:
    def test_total_mass_at_trivial_parameter(self):
        f = radial_gaussian(0.8)
        ref = 2 * integrate.quad(lambda r: float(f(r)) * math.sinh(r), 0, 12, epsabs=1e-14)[0]
        np.testing.assert_allclose(spherical_transform(f, -0.5j)[0], ref, rtol=1e-10)

    def test_intertwines_with_euclidean_fourier(self):
        f = radial_gaussian(0.7)
        lam = np.array([0.0, 0.7, 2.0, 4.5])
        np.testing.assert_allclose(euclidean_fourier(abel_grid(f), lam), spherical_transform(f, lam), rtol=1e-6)


class TestConvolution:
    def test_grid_convolution_of_gaussians(self):
        a, b = 1.0, 2.0
        g1 = EvenGridFunction.sample(lambda t: np.exp(-a * t * t), 24.0, 4096)
        g2 = EvenGridFunction.sample(lambda t: np.exp(-b * t * t), 24.0, 4096)
        out = grid_convolve(g1, g2)
        exact = math.sqrt(math.pi / (a + b)) * np.exp(-a * b / (a + b) * out.t**2)
        np.testing.assert_allclose(out.values, exact, atol=1e-12)

    def test_value_at_origin_is_inner_product(self):
        f1, f2 = radial_gaussian(0.7), RadialField.from_phantom(PhantomSpec("compact-bump", support_radius=1.5))
        ref = 2 * integrate.quad(lambda r: float(f1(r) * f2(r)) * math.sinh(r), 0, 1.5, epsabs=1e-14)[0]
        np.testing.assert_allclose(radial_convolution(f1, f2, 0j), ref, rtol=1e-6)

    def test_commutative(self):
        f1, f2 = radial_gaussian(0.7), RadialField.from_phantom(PhantomSpec("compact-bump", support_radius=1.5))
        z = np.array([0.2 + 0j, 0.5j])
        np.testing.assert_allclose(radial_convolution(f1, f2, z), radial_convolution(f2, f1, z), rtol=1e-6)


class TestInversion:
    def test_dual_of_constant_is_a_spherical_function(self):
        z = np.array([0j, 0.6 + 0.1j])
        r = 2 * np.arctanh(np.abs(z))
        np.testing.assert_allclose(abel_dual(lambda t: 1 + 0 * t, z), spherical_function(0.0, r), rtol=1e-12)

    def test_round_trip(self):
        f = radial_gaussian(0.7)
        back = abel_invert(abel_grid(f))
        r = np.array([0.0, 0.4, 1.0])
        np.testing.assert_allclose(back(r), f(r), atol=1e-3)

    def test_dual_inversion_residuals(self):
        f0 = radial_gaussian(0.7)
        psi = abel_grid(radial_gaussian(0.5))
        res = check_dual_abel_inversion(abel_grid(f0), psi, f0)
        assert res.inversion <= 1e-3 and res.convolution <= 1e-2

    def test_tabulated_field(self):
        F = RadialField.tabulate(lambda r: np.exp(-r * r), 3.0, 64)
        r = np.array([0.0, 1.1, 2.9, 3.5])
        np.testing.assert_allclose(F(r), np.where(r <= 3.0, np.exp(-r * r), 0.0), atol=1e-12)
