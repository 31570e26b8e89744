import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import LN_3
from symradon.geometry import (
    DPlane,
    FlatGeodesic,
    Horocycle,
    HypGeodesic,
    HypPoint,
    PhantomSpec,
    TotallyGeodesicPlane,
    ball_to_hyperboloid,
    boost,
    busemann,
    cayley,
    disk_to_hyperboloid,
    half_plane_distance,
    horocycle_point,
    horocycle_window,
    hyp_distance,
    hyperbolic_laplacian,
    hyperboloid_distance,
    hyperboloid_to_ball,
    hyperboloid_to_disk,
    mink,
    mobius,
    origin,
    phantom,
    plane_at_distance,
    plane_polar_frame,
    polar_point,
    product_distance,
    sphere_rule,
    unboost,
    zero_field,
)

disk_points = st.builds(lambda r, a: r * complex(math.cos(a), math.sin(a)),
                        st.floats(0, 0.95), st.floats(0, 2 * math.pi))


class TestEuclideanPlanes:
    def test_axis_aligned_line(self):
        line = plane_at_distance([0.0, 0.0], [[0.0, 1.0]], [1.0, 0.0], 2.0)
        np.testing.assert_allclose(line.points(np.array([-1.0, 3.0])), [[2.0, -1.0], [2.0, 3.0]])
        assert line.distance([0.0, 0.0]) == pytest.approx(2.0)

    def test_zero_offset_contains_point(self):
        x = np.array([0.3, -1.0, 2.0])
        plane = plane_at_distance(x, [[1.0, 0, 0], [0, 1.0, 0]], [0, 0, 1.0], 0.0)
        assert plane.distance(x) == pytest.approx(0.0, abs=1e-15)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.floats(0, 5))
    def test_distance_of_random_plane(self, seed, p):
        rng = np.random.default_rng(seed)
        q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
        x = rng.normal(size=3)
        plane = plane_at_distance(x, q[:, :2].T, q[:, 2], p)
        assert abs(plane.distance(x) - p) <= 1e-12

    def test_rejects_non_orthonormal_frame(self):
        with pytest.raises(ValueError):
            DPlane([[1.0, 1.0]], [0.0, 0.0])

    def test_sphere_rule_integrates_polynomials(self):
        u, w = sphere_rule(8, 16, pole=(1.0, 2.0, 0.5))
        np.testing.assert_allclose(np.sum(w), 1.0)
        np.testing.assert_allclose(np.sum(w * u[:, 0] ** 2), 1 / 3, rtol=1e-13)
        np.testing.assert_allclose(np.sum(w[:, None] * u, axis=0), 0, atol=1e-14)


class TestDisk:
    def test_distance_closed_form(self):
        assert hyp_distance(0j, 0.5) == pytest.approx(LN_3, rel=1e-15)

    def test_distance_to_self(self):
        assert hyp_distance(0.3 + 0.4j, 0.3 + 0.4j) == 0

    @settings(max_examples=50, deadline=None)
    @given(disk_points, disk_points, disk_points)
    def test_triangle_inequality(self, a, b, c):
        assert hyp_distance(a, c) <= hyp_distance(a, b) + hyp_distance(b, c) + 1e-12

    @settings(max_examples=50, deadline=None)
    @given(disk_points, disk_points)
    def test_cayley_is_isometry(self, a, b):
        d = hyp_distance(a, b)
        assert abs(half_plane_distance(cayley(a), cayley(b)) - d) <= 1e-12 * max(1.0, d)

    @settings(max_examples=30, deadline=None)
    @given(disk_points, disk_points, disk_points)
    def test_mobius_is_isometry(self, a, z, w):
        np.testing.assert_allclose(hyp_distance(mobius(a, z), mobius(a, w)), hyp_distance(z, w), atol=1e-9)

    def test_rejects_points_outside(self):
        with pytest.raises(ValueError):
            HypPoint(1.2)
        with pytest.raises(ValueError):
            hyp_distance(1.0, 0.0)

    def test_half_plane_round_trip(self):
        p = HypPoint(0.2 - 0.5j)
        assert HypPoint.from_half_plane(p.half_plane).z == pytest.approx(p.z)

    def test_hyperboloid_round_trip(self):
        z = np.array([0.1 + 0.2j, -0.7j])
        X = disk_to_hyperboloid(z)
        np.testing.assert_allclose(mink(X, X), 1.0)
        np.testing.assert_allclose(hyperboloid_to_disk(X), z)
        np.testing.assert_allclose(hyperboloid_distance(X[0], X[1]), hyp_distance(z[0], z[1]))


class TestBusemann:
    def test_origin(self):
        np.testing.assert_allclose(busemann(0j, np.linspace(0, 6, 7)), 0, atol=1e-15)

    @pytest.mark.parametrize("t", [0.3, 1.0, 2.5])
    @pytest.mark.parametrize("theta", [0.0, 1.1])
    def test_toward_and_away_from_tangency(self, t, theta):
        z = math.tanh(t / 2) * np.exp(1j * theta)
        assert busemann(z, theta) == pytest.approx(t, rel=1e-12)
        assert busemann(-z, theta) == pytest.approx(-t, rel=1e-12)

    def test_eigenfunction_of_laplacian(self):
        rng = np.random.default_rng(7)
        z = 0.8 * np.sqrt(rng.uniform(0, 1, 20)) * np.exp(2j * np.pi * rng.uniform(0, 1, 20))
        lam, theta = 1.7, 0.4
        u = lambda w: np.exp((1j * lam + 0.5) * busemann(w, theta))
        lap = hyperbolic_laplacian(u, z)
        np.testing.assert_allclose(lap, -(lam**2 + 0.25) * u(z), rtol=1e-4)


class TestHorocycles:
    def test_origin_lies_on_zero_horocycle(self):
        assert abs(horocycle_point(Horocycle(0.0, 0.0), 0.0)) <= 1e-15

    @pytest.mark.parametrize("t,theta", [(0.7, 0.0), (-1.2, 2.0), (2.0, 4.0)])
    def test_closest_point(self, t, theta):
        np.testing.assert_allclose(horocycle_point(Horocycle(t, theta), 0.0), math.tanh(t / 2) * np.exp(1j * theta),
                                   atol=1e-14)

    def test_unit_speed(self):
        xi = Horocycle(0.6, 1.3)
        s = np.random.default_rng(1).uniform(-3, 3, 20)
        h = 1e-5
        speed = hyp_distance(xi.points(s + h), xi.points(s - h)) / (2 * h)
        np.testing.assert_allclose(speed, 1.0, atol=1e-8)

    def test_incidence(self):
        xi = Horocycle(-0.8, 2.2)
        s = np.linspace(-4, 4, 17)
        np.testing.assert_allclose(busemann(xi.points(s), xi.theta), xi.t, atol=1e-10)

    def test_window_matches_distances(self):
        c, R = 0.3 - 0.2j, 1.5
        mid, half = horocycle_window(0.4, 0.9, c, R)
        xi = Horocycle(0.4, 0.9)
        np.testing.assert_allclose(hyp_distance(xi.points(np.array([mid - half, mid + half])), c), R, rtol=1e-9)
        assert Horocycle(5.0, 0.0).window(0j, 1.0) is None


class TestHyperboloid:
    def test_boost_moves_origin(self):
        X = ball_to_hyperboloid(np.array([0.2, -0.1, 0.3]))
        np.testing.assert_allclose(boost(X, origin(3)), X, atol=1e-14)
        np.testing.assert_allclose(unboost(X, X), origin(3), atol=1e-14)

    def test_ball_round_trip(self):
        b = np.array([0.1, 0.5, -0.3])
        np.testing.assert_allclose(hyperboloid_to_ball(ball_to_hyperboloid(b)), b)

    def test_polar_point_distance(self):
        P = polar_point(np.array([0.0, 0.6, 0.8]), 1.7)
        assert hyperboloid_distance(origin(3), P) == pytest.approx(1.7)

    def test_geodesic_is_unit_speed(self):
        g = HypGeodesic.through_disk_point(0.2 + 0.1j, 0.7)
        s = np.array([-1.0, 0.5, 2.0])
        np.testing.assert_allclose(hyp_distance(g.points(s), g.points(s + 0.3)), 0.3, rtol=1e-10)

    def test_geodesic_window_pythagoras(self):
        g = HypGeodesic(origin(2), np.array([0.0, 1.0, 0.0]))
        c = disk_to_hyperboloid(0.5j)
        mid, half = g.window(c, 2.0)
        ends = g.hyperboloid_points(np.array([mid - half, mid + half]))
        np.testing.assert_allclose(hyperboloid_distance(ends, c), 2.0, rtol=1e-10)

    def test_plane_foot_and_distance(self):
        X = origin(3)
        V1, V2 = np.array([0, 1.0, 0, 0]), np.array([0, 0, 1.0, 0])
        plane = TotallyGeodesicPlane(X, V1, V2)
        c = polar_point(np.array([0.0, 0.0, 1.0]), 0.9)
        Y, _, _, coshD = plane_polar_frame(X, V1, V2, c)
        assert math.acosh(coshD) == pytest.approx(0.9)
        np.testing.assert_allclose(mink(Y, plane.normal), 0, atol=1e-14)
        center, radius = plane.boundary_circle()
        assert radius == pytest.approx(math.pi / 2)


class TestProduct:
    def test_flat_geodesic_unit_speed(self):
        gamma = FlatGeodesic(0.3, 1.2, 0.8, 0.5)
        s = np.linspace(-2, 2, 9)
        a, b = gamma.points(s), gamma.points(s + 1e-3)
        np.testing.assert_allclose(product_distance(a, b), 1e-3, rtol=1e-6)

    def test_distance_from_origin(self):
        gamma = FlatGeodesic(0.3, 1.2, 0.8, 0.5)
        s = np.linspace(-3, 3, 601)
        d = product_distance(gamma.points(s), (0j, 0j))
        assert d.min() == pytest.approx(0.5, abs=1e-12)


class TestPhantoms:
    def test_gaussian_at_origin(self):
        f = phantom(PhantomSpec("gaussian-of-distance"))
        assert f(0j) == 1.0
        assert f(0.5) == pytest.approx(math.exp(-(LN_3**2)))

    def test_bump_support(self):
        f = phantom(PhantomSpec("compact-bump", support_radius=1.0))
        z = np.tanh(np.linspace(1.0, 3.0, 5) / 2) + 0j
        np.testing.assert_array_equal(f(z), 0.0)

    def test_translated_bump_amplitude(self):
        f = phantom(PhantomSpec("translated-bump", center=0.3 + 0.4j, amplitude=2.5, support_radius=1.0))
        assert f(0.3 + 0.4j) == pytest.approx(2.5)

    @pytest.mark.parametrize("space,center", [("R2", [1.0, 2.0]), ("R3", [0.0, 1.0, 0.5]),
                                              ("H3", [0.1, 0.2, 0.0]), ("H2xH2", (0.1j, -0.2))])
    def test_every_space(self, space, center):
        f = phantom(PhantomSpec("gaussian-of-distance", space=space, center=center, amplitude=3.0))
        assert float(f(f.center)) == pytest.approx(3.0)

    def test_ring_vanishes_at_center(self):
        f = phantom(PhantomSpec("ring", support_radius=2.0, width=0.5))
        assert f(0j) == 0.0
        assert f(math.tanh(1.5 / 2) + 0j) == pytest.approx(1.0)

    @pytest.mark.parametrize("kw", [
        {"kind": "spiral"},
        {"kind": "compact-bump"},
        {"kind": "ring", "support_radius": 1.0, "width": 0.6},
        {"kind": "separable-product", "space": "H2"},
        {"kind": "gaussian-of-distance", "space": "H4"},
    ])
    def test_invalid_specs(self, kw):
        with pytest.raises(ValueError):
            PhantomSpec(**kw)

    def test_translation_composes_with_isometry(self):
        f = phantom(PhantomSpec("gaussian-of-distance", center=0.4j))
        g = f.translated(0.4j)
        assert g(0j) == pytest.approx(1.0)
        assert abs(g.center) < 1e-15

    def test_sum_and_scale_keep_decay(self):
        f = phantom(PhantomSpec("compact-bump", support_radius=1.0))
        g = phantom(PhantomSpec("compact-bump", center=0.5, support_radius=1.0))
        h = f + 2 * g
        assert h(0.5) == pytest.approx(f(0.5) + 2.0)
        assert h.radius >= hyp_distance(0j, 0.5) + 1.0 - 1e-12

    def test_zero_field(self):
        assert zero_field("H2")(np.array([0.1, 0.2j])).tolist() == [0.0, 0.0]
