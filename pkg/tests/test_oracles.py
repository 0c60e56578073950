"""Engineering oracles: pressure, wall stress, hull geometry, pool sampling.

Expected values are frozen from independent routes: hand arithmetic for the
pressure head and the stress concentration factor b^2/(b^2-a^2) = 25/9,
dense grid scans for the wall maximum, and closed-form solids of revolution
for the quadrature.
"""

import math

import numpy as np
import pytest

from batchal import oracles


class TestCrushPressure:
    def test_reference_depth(self):
        # 1027 * 9.81 * 500 * 1.5
        assert oracles.crush_pressure(500.0) == pytest.approx(7.5561525e6, rel=1e-9)

    def test_zero_depth_and_linearity(self):
        assert oracles.crush_pressure(0.0) == 0.0
        assert oracles.crush_pressure(2000.0) == pytest.approx(
            2.0 * oracles.crush_pressure(1000.0), rel=1e-12)

    def test_negative_depth_rejected(self):
        with pytest.raises(ValueError):
            oracles.crush_pressure(-1.0)

    def test_custom_constants(self):
        consts = oracles.VesselConstants(rho=1000.0, g=10.0, safety_factor=2.0)
        assert oracles.crush_pressure(100.0, consts) == 2e6


class TestLameStresses:
    A, T = 0.040, 0.010
    P = 7.5561525e6  # crush pressure at 500 m

    def test_frozen_inner_surface_values(self):
        # b^2/(b^2-a^2) = 0.0025/0.0009 = 25/9; at r=a the tangential term
        # doubles: sigma_t = -p*(25/9)*2, sigma_l = -p*25/9.
        st, sr, sl = oracles.lame_stresses(self.A, self.T, self.P, self.A)
        assert st == pytest.approx(-self.P * 50.0 / 9.0, rel=1e-12)
        assert st == pytest.approx(-4.198e7, rel=1e-3)
        assert sl == pytest.approx(-2.099e7, rel=1e-3)
        assert sr == pytest.approx(0.0, abs=1e-6)

    def test_radial_stress_boundary_conditions(self):
        b = self.A + self.T
        _, sr_in, _ = oracles.lame_stresses(self.A, self.T, self.P, self.A)
        _, sr_out, _ = oracles.lame_stresses(self.A, self.T, self.P, b)
        assert sr_in == pytest.approx(0.0, abs=1e-6)
        assert sr_out == pytest.approx(-self.P, rel=1e-12)

    def test_longitudinal_between_radial_and_tangential(self):
        for r in np.linspace(self.A, self.A + self.T, 7):
            st, sr, sl = oracles.lame_stresses(self.A, self.T, self.P, r)
            assert st <= sl <= sr

    def test_outside_wall_rejected(self):
        with pytest.raises(ValueError):
            oracles.lame_stresses(self.A, self.T, self.P, self.A - 1e-6)
        with pytest.raises(ValueError):
            oracles.lame_stresses(self.A, self.T, self.P, self.A + self.T + 1e-6)
        with pytest.raises(ValueError):
            oracles.lame_stresses(-1.0, self.T, self.P, self.A)


class TestVonMises:
    def test_uniaxial(self):
        assert oracles.von_mises(-1.0, 0.0, 0.0) == pytest.approx(1.0, rel=1e-12)

    def test_permutation_invariant(self):
        rng = np.random.default_rng(3)
        for _ in range(25):
            s = rng.standard_normal(3) * 1e7
            base = oracles.von_mises(*s)
            for perm in ((0, 2, 1), (1, 0, 2), (2, 1, 0), (1, 2, 0), (2, 0, 1)):
                assert oracles.von_mises(*s[list(perm)]) == pytest.approx(base, rel=1e-12)

    def test_hydrostatic_state_is_stress_free(self):
        assert oracles.von_mises(-5e6, -5e6, -5e6) == 0.0


class TestMaxVesselStress:
    def test_frozen_reference_design(self):
        got = oracles.max_vessel_stress(500.0, 0.100, 0.040, 0.010)
        # sqrt(3) * 7.5561525e6 * 25/9
        assert got == pytest.approx(math.sqrt(3.0) * 7.5561525e6 * 25.0 / 9.0, rel=1e-12)
        assert got == pytest.approx(3.636e7, rel=5e-3)

    def test_matches_dense_radial_scan(self):
        depth, a, t = 1300.0, 0.07, 0.02
        p = oracles.crush_pressure(depth)
        scan = max(oracles.von_mises(*oracles.lame_stresses(a, t, p, r))
                   for r in np.linspace(a, a + t, 1000))
        closed = oracles.max_vessel_stress(depth, 0.3, a, t)
        assert abs(scan - closed) / closed < 1e-9

    def test_length_is_inactive(self):
        lo = oracles.max_vessel_stress(800.0, 0.050, 0.04, 0.01)
        hi = oracles.max_vessel_stress(800.0, 0.600, 0.04, 0.01)
        assert lo == hi

    def test_zero_depth_means_zero_stress(self):
        assert oracles.max_vessel_stress(0.0, 0.1, 0.04, 0.01) == 0.0

    def test_scales_with_depth(self):
        one = oracles.max_vessel_stress(500.0, 0.1, 0.04, 0.01)
        two = oracles.max_vessel_stress(1000.0, 0.1, 0.04, 0.01)
        assert two == pytest.approx(2.0 * one, rel=1e-12)


class TestMyringRadius:
    CASES = [
        (0.2, 0.5, 0.15, 0.1, 2.0, 0.3),
        (0.1, 0.05, 0.3, 0.18, 1.0, 0.0),
        (0.5, 1.2, 0.4, 0.07, 4.5, 0.8),
    ]

    @pytest.mark.parametrize("a,b,c,D,n,th", CASES)
    def test_endpoints(self, a, b, c, D, n, th):
        r = lambda x: oracles.myring_radius(x, a, b, c, D, n, th)
        assert abs(r(0.0)) <= 1e-12 * D
        assert r(a) == pytest.approx(D / 2.0, rel=1e-12)
        assert abs(r(a + b + c)) <= 1e-12 * D

    @pytest.mark.parametrize("a,b,c,D,n,th", CASES)
    def test_cylinder_section_is_flat(self, a, b, c, D, n, th):
        for x in np.linspace(a, a + b, 9):
            assert oracles.myring_radius(x, a, b, c, D, n, th) == pytest.approx(
                D / 2.0, rel=1e-12)

    @pytest.mark.parametrize("a,b,c,D,n,th", CASES)
    def test_profile_nonnegative(self, a, b, c, D, n, th):
        for x in np.linspace(0.0, a + b + c, 200):
            assert oracles.myring_radius(x, a, b, c, D, n, th) >= 0.0

    def test_domain_validation(self):
        with pytest.raises(ValueError):
            oracles.myring_radius(-0.1, 0.2, 0.5, 0.15, 0.1, 2.0, 0.3)
        with pytest.raises(ValueError):
            oracles.myring_radius(1.0, 0.2, 0.5, 0.15, 0.1, 2.0, 0.3)
        with pytest.raises(ValueError):
            oracles.myring_radius(0.1, 0.2, 0.5, 0.15, 0.1, 0.5, 0.3)
        with pytest.raises(ValueError):
            oracles.myring_radius(0.1, 0.2, 0.5, 0.15, 0.1, 2.0, 1.6)


class TestHullVolume:
    def test_elliptic_nose_closed_form(self):
        # n = 2 makes the nose a half ellipsoid of revolution; shrink the
        # tail so its leftover volume stays below the comparison tolerance.
        a, D, tiny = 0.3, 0.1, 1e-6
        got = oracles.hull_volume(a, tiny, tiny, D, 2.0, 0.0)
        expect = (2.0 / 3.0) * math.pi * (D / 2.0) ** 2 * a
        assert got == pytest.approx(expect, rel=1e-4)

    def test_cylinder_section_contributes_exactly(self):
        base = oracles.hull_volume(0.2, 0.5, 0.15, 0.1, 2.0, 0.3)
        longer = oracles.hull_volume(0.2, 1.5, 0.15, 0.1, 2.0, 0.3)
        assert longer - base == pytest.approx(math.pi * 0.05 ** 2 * 1.0, rel=1e-9)

    @pytest.mark.parametrize("a,b,c,D,n,th", TestMyringRadius.CASES + [
        (0.3, 0.2, 0.2, 0.15, 5.0, 0.6),   # flattest nose: hardest integrand
    ])
    def test_interval_doubling_converges(self, a, b, c, D, n, th):
        v1 = oracles.hull_volume(a, b, c, D, n, th, n_intervals=20000)
        v2 = oracles.hull_volume(a, b, c, D, n, th, n_intervals=40000)
        assert abs(v2 - v1) / v2 < 1e-6

    def test_matches_profile_quadrature(self):
        a, b, c, D, n, th = 0.2, 0.5, 0.15, 0.1, 3.0, 0.4
        xs = np.linspace(0, a + b + c, 200001)
        rr = np.array([oracles.myring_radius(x, a, b, c, D, n, th) for x in xs]) ** 2
        riemann = math.pi * np.trapezoid(rr, xs)
        got = oracles.hull_volume(a, b, c, D, n, th)
        assert got == pytest.approx(riemann, rel=1e-5)

    def test_too_few_intervals_rejected(self):
        with pytest.raises(ValueError):
            oracles.hull_volume(0.2, 0.5, 0.15, 0.1, 2.0, 0.3, n_intervals=100)


class TestDesignSpace:
    def test_bounds_validation(self):
        with pytest.raises(ValueError):
            oracles.Dimension("x", 1.0, 1.0)
        with pytest.raises(ValueError):
            oracles.DesignSpace((oracles.Dimension("x", 0, 1),
                                 oracles.Dimension("x", 0, 2)))

    def test_normalize_maps_to_unit_box(self):
        space = oracles.DesignSpace((oracles.Dimension("u", 10.0, 20.0),
                                     oracles.Dimension("v", -1.0, 1.0)))
        out = space.normalize([[10.0, 1.0], [20.0, -1.0], [15.0, 0.0]])
        assert np.allclose(out, [[0.0, 1.0], [1.0, 0.0], [0.5, 0.5]])

    def test_replace_bounds(self):
        space = oracles.make_oracle("vessel_max_stress").space
        tighter = space.replace_bounds("depth", 200.0, 400.0)
        assert tighter.dims[0].lo == 200.0 and tighter.dims[0].hi == 400.0
        with pytest.raises(ValueError):
            space.replace_bounds("no_such_dim", 0.0, 1.0)


class TestSamplePool:
    def test_within_bounds_and_deterministic(self):
        space = oracles.make_oracle("myring_volume").space
        a = oracles.sample_pool(space, 500, seed=7)
        b = oracles.sample_pool(space, 500, seed=7)
        c = oracles.sample_pool(space, 500, seed=8)
        assert np.array_equal(a, b)
        assert not np.array_equal(a, c)
        assert np.all(a >= space.lows) and np.all(a < space.highs)

    def test_per_dimension_means_hit_midpoints(self):
        space = oracles.DesignSpace((oracles.Dimension("u", 0.0, 2.0),
                                     oracles.Dimension("v", 100.0, 300.0)))
        x = oracles.sample_pool(space, 100_000, seed=0)
        mid = (space.lows + space.highs) / 2.0
        span = space.highs - space.lows
        assert np.all(np.abs(x.mean(axis=0) - mid) < 0.01 * span)

    def test_vessel_constraint_holds_for_every_sample(self):
        space = oracles.make_oracle("vessel_max_stress").space
        x = oracles.sample_pool(space, 20_000, seed=3)
        assert np.all(x[:, 3] < x[:, 2])


class TestOracleRegistry:
    def test_vessel_label_matches_scalar_form(self):
        oracle = oracles.make_oracle("vessel_max_stress")
        pts = oracles.sample_pool(oracle.space, 50, seed=1)
        got = oracle.label(pts)
        expect = [oracles.max_vessel_stress(*p) for p in pts]
        assert np.allclose(got, expect, rtol=1e-12)

    def test_myring_label_matches_volume(self):
        oracle = oracles.make_oracle("myring_volume")
        pts = oracles.sample_pool(oracle.space, 5, seed=2)
        got = oracle.label(pts)
        expect = [oracles.hull_volume(*p) for p in pts]
        assert np.allclose(got, expect, rtol=1e-12)

    def test_label_rejects_out_of_space_points(self):
        oracle = oracles.make_oracle("vessel_max_stress")
        with pytest.raises(ValueError):
            oracle.label(np.array([[50.0, 0.1, 0.04, 0.01]]))  # too shallow
        with pytest.raises(ValueError):
            oracle.label(np.array([[500.0, 0.1, 0.03, 0.04]]))  # wall >= bore

    def test_unknown_name_rejected(self):
        with pytest.raises(ValueError):
            oracles.make_oracle("nonexistent")

    def test_labels_are_deterministic(self):
        oracle = oracles.make_oracle("vessel_max_stress")
        pts = oracles.sample_pool(oracle.space, 20, seed=4)
        assert np.array_equal(oracle.label(pts), oracle.label(pts))
