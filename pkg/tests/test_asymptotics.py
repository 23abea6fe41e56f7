"""Limit-formula tests; finite differences and the exact core act as
independent oracles."""

import math
import warnings

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aztec import exactcore as ec
from aztec.asymptotics import (
    DecayReport,
    SingularAdjacentWarning,
    arctan_placement,
    average_height,
    biased_arctan_placement,
    biased_creation_rate_envelope,
    biased_directional_placements,
    creation_rate_estimate,
    decay_bound_check,
    directional_placements,
    height_tilt,
    level_curve,
    near_singular,
    nearest_lattice_location,
    tilt_to_position,
    wave_kernel,
)
from aztec.errors import DomainError, NumericalError

interior_points = st.tuples(
    st.floats(-0.69, 0.69), st.floats(-0.69, 0.69)
).filter(lambda q: q[0] ** 2 + q[1] ** 2 < 0.48)


class TestArctan:
    def test_point_values(self):
        assert arctan_placement(0.0, 0.0) == pytest.approx(0.25, abs=1e-15)
        assert arctan_placement(0.0, 2 / 3) == pytest.approx(0.75, abs=1e-15)

    def test_frozen_regions(self):
        assert arctan_placement(0.6, -0.4) == 0.0
        assert arctan_placement(0.0, 0.8) == 1.0
        assert arctan_placement(0.7, 0.3) == 0.0

    def test_singular_point_value_and_warning(self):
        with pytest.warns(SingularAdjacentWarning):
            assert arctan_placement(0.5, 0.5) == 0.5
        with pytest.warns(SingularAdjacentWarning):
            arctan_placement(-0.52, 0.48)
        assert near_singular(0.49, 0.51)
        assert not near_singular(0.3, 0.3)

    def test_domain(self):
        with pytest.raises(DomainError):
            arctan_placement(0.9, 0.9)

    @given(interior_points)
    @settings(max_examples=300)
    def test_rotation_and_reflection(self, q):
        x, y = q
        pn, pe, ps, pw = directional_placements(x, y)
        assert pn + pe + ps + pw == pytest.approx(1.0, abs=1e-12)
        assert arctan_placement(x, y) == pytest.approx(arctan_placement(-x, y), abs=1e-12)

    def test_directional_examples(self):
        assert directional_placements(0, 0) == pytest.approx((0.25,) * 4, abs=1e-14)
        pn, pe, ps, pw = directional_placements(0, 0.8)
        assert (pn, pe, ps, pw) == pytest.approx((1.0, 0.0, 0.0, 0.0), abs=1e-14)


class TestBiasedArctan:
    def test_reduces_to_uniform(self):
        for q in ((0.1, 0.2), (-0.3, 0.1), (0.0, 0.55)):
            assert biased_arctan_placement(*q, 0.5) == pytest.approx(
                arctan_placement(*q), abs=1e-14
            )

    def test_midline_value(self):
        for p in (0.2, 1 / 3, 0.7):
            assert biased_arctan_placement(0.0, 1 - p, p) == pytest.approx(0.5, abs=1e-14)

    def test_directional_sum(self):
        pn, pe, ps, pw = biased_directional_placements(0.1, -0.2, 1 / 3)
        assert pn + pe + ps + pw == pytest.approx(1.0, abs=1e-12)

    def test_against_exact_grid(self):
        # formula within o(1) of the exact value at a moderate order
        p = 1 / 3
        n = 121
        x = 0.9 * math.sqrt(p)
        ell, m = nearest_lattice_location(x, 0.0, n)
        from fractions import Fraction

        exact = float(ec.biased_placement_probability(ell, m, n, Fraction(1, 3)))
        assert abs(exact - biased_arctan_placement(ell / n, m / n, p)) < 0.03

    def test_domain(self):
        with pytest.raises(DomainError):
            biased_arctan_placement(0.1, 0.1, 1.5)


class TestHeightFunction:
    def test_corner_values(self):
        assert average_height(0, 1) == pytest.approx(2, abs=1e-14)
        assert average_height(0, -1) == pytest.approx(2, abs=1e-14)
        assert average_height(1, 0) == pytest.approx(0, abs=1e-14)
        assert average_height(-1, 0) == pytest.approx(0, abs=1e-14)

    def test_level_one_segments(self):
        for u in (-0.4, -0.1, 0.2, 0.45):
            assert average_height(u, u) == pytest.approx(1.0, abs=1e-12)
            assert average_height(u, -u) == pytest.approx(1.0, abs=1e-12)

    def test_boundary_trace(self):
        for k in range(65):
            x = -1 + k / 32
            for sign in (1, -1):
                assert average_height(x, sign * (1 - abs(x))) == pytest.approx(
                    2 - 2 * abs(x), abs=1e-9
                )

    @given(interior_points)
    @settings(max_examples=60)
    def test_tilt_matches_finite_differences(self, q):
        x, y = q
        if x * x + y * y > 0.44:
            return
        s, t = height_tilt(x, y)
        h = 1e-4
        sf = (average_height(x + h, y) - average_height(x - h, y)) / (2 * h)
        tf = (average_height(x, y + h) - average_height(x, y - h)) / (2 * h)
        assert s == pytest.approx(sf, abs=1e-6)
        assert t == pytest.approx(tf, abs=1e-6)

    def test_tilt_examples(self):
        assert height_tilt(0, 0) == pytest.approx((0.0, 0.0), abs=1e-14)
        assert height_tilt(0, 0.8) == pytest.approx((0.0, 2.0), abs=1e-14)

    def test_tilt_range(self):
        s, t = height_tilt(0.1, -0.3)
        assert abs(s) + abs(t) < 2


class TestTiltInversion:
    def test_center(self):
        assert tilt_to_position(0.0, 0.0) == pytest.approx((0.0, 0.0), abs=1e-10)

    def test_round_trip_example(self):
        s, t = height_tilt(0.2, -0.3)
        assert tilt_to_position(s, t) == pytest.approx((0.2, -0.3), abs=1e-8)

    @given(interior_points)
    @settings(max_examples=60, deadline=None)
    def test_round_trip(self, q):
        x, y = q
        s, t = height_tilt(x, y)
        xr, yr = tilt_to_position(s, t)
        assert (xr, yr) == pytest.approx((x, y), abs=1e-8)

    def test_diagonal(self):
        s, t = height_tilt(-0.31, 0.31)
        assert s == pytest.approx(t, abs=1e-12)
        assert tilt_to_position(s, t) == pytest.approx((-0.31, 0.31), abs=1e-8)

    def test_domain(self):
        with pytest.raises(DomainError):
            tilt_to_position(1.5, 0.6)


class TestWaveKernel:
    def test_values(self):
        assert wave_kernel(0, 0, 1) == pytest.approx(1 / math.pi, abs=1e-15)
        assert wave_kernel(1, 1, 1) == 0.0
        assert wave_kernel(0.5, 0.5, 1) == math.inf

    def test_domain(self):
        with pytest.raises(DomainError):
            wave_kernel(0, 0, 0)

    def test_wave_equation_residual(self):
        h = 1e-3
        for (x, y, t) in ((0.1, 0.05, 1.0), (-0.2, 0.1, 1.3)):
            u = wave_kernel
            utt = (u(x, y, t + h) - 2 * u(x, y, t) + u(x, y, t - h)) / h**2
            lap = (
                u(x + h, y, t) + u(x - h, y, t) + u(x, y + h, t) + u(x, y - h, t) - 4 * u(x, y, t)
            ) / h**2
            assert utt == pytest.approx(0.5 * lap, abs=1e-3)


class TestLevelCurves:
    def test_degenerate_cases(self):
        assert level_curve(0.5).mix == pytest.approx(0.0, abs=1e-15)
        assert level_curve(1e-7).mix == pytest.approx(1.0, abs=1e-3)

    def test_quarter_level_passes_through_known_points(self):
        lc = level_curve(0.25)
        assert lc.implicit(0.0, 0.0) == pytest.approx(0.0, abs=1e-12)
        assert lc.implicit(0.0, 2 / 3) == pytest.approx(0.0, abs=1e-12)

    def test_sampled_points_hit_level(self):
        for p in (0.1, 0.2, 0.3, 0.4, 0.6, 0.7, 0.8, 0.9):
            lc = level_curve(p)
            for (x, y) in lc.points(128):
                if near_singular(x, y) or x * x + y * y >= 0.5 - 1e-9:
                    continue
                v = arctan_placement(x, y)
                assert min(abs(v - p), abs(v - (1 - p))) < 1e-9

    def test_domain(self):
        with pytest.raises(DomainError):
            level_curve(0.0)


class TestSaddle:
    def test_envelope_at_center(self):
        sd = creation_rate_estimate(0, 0, 201)
        assert sd.envelope == pytest.approx(4 / (math.pi * 200), abs=1e-15)
        assert abs(sd.z1) ** 2 == pytest.approx(1.0, abs=1e-12)

    def test_z1_circle_invariant(self):
        for (ell, m, order) in ((10, 20, 101), (-30, 14, 201), (5, -41, 151)):
            n = order - 1
            if (ell + m - n) % 2:
                m += 1
            sd = creation_rate_estimate(ell, m, order)
            u = (ell + m) / n
            assert abs(sd.z1) ** 2 == pytest.approx((1 + u) / (1 - u), rel=1e-10)

    def test_estimate_error_scaling(self):
        errs = {}
        for order in (101, 201):
            n = order - 1
            ell, m = round(0.1 * n), round(0.1 * n)
            if (ell + m - n) % 2:
                m += 1
            sd = creation_rate_estimate(ell, m, order)
            errs[order] = abs(float(ec.creation_rate(ell, m, order)) - sd.estimate)
        assert 2 < errs[101] / errs[201] < 8

    def test_envelope_bound(self):
        order = 201
        n = order - 1
        for ell in range(-100, 101, 13):
            for m in range(-100, 101, 13):
                if (ell + m - n) % 2 or 2 * (ell * ell + m * m) >= 0.9 * n * n:
                    continue
                sd = creation_rate_estimate(ell, m, order)
                assert sd.estimate >= 0
                assert float(ec.creation_rate(ell, m, order)) <= sd.envelope * (1 + 1e-9)

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            creation_rate_estimate(80, 80, 101)  # outside the circle
        with pytest.raises(DomainError):
            creation_rate_estimate(1, 0, 101)  # parity

    def test_biased_envelope(self):
        # at p = 1/2 the two envelope normalizations coincide
        sd = creation_rate_estimate(0, 0, 201)
        assert biased_creation_rate_envelope(0, 0, 201, 0.5) == pytest.approx(
            sd.envelope, abs=1e-15
        )
        assert biased_creation_rate_envelope(0, 0, 201, 1 / 3) == pytest.approx(
            2 / (math.pi * 200 * math.sqrt(2 / 9)), rel=1e-12
        )

    def test_biased_envelope_bounds_exact(self):
        from fractions import Fraction

        p = Fraction(1, 3)
        order = 121
        n = order - 1
        for (x, y) in ((0.0, 0.0), (0.2, 0.1), (-0.3, 0.2), (0.1, -0.4)):
            ell, m = nearest_lattice_location(x, y, order)
            env = biased_creation_rate_envelope(ell, m, order, float(p))
            assert float(ec.biased_creation_rate(ell, m, order, p)) <= env * 1.05

    def test_biased_envelope_domain(self):
        with pytest.raises(DomainError):
            biased_creation_rate_envelope(100, 0, 121, 1 / 3)


class TestDecay:
    def test_outside_circle_required(self):
        with pytest.raises(DomainError):
            decay_bound_check(0.1, 0.1, [40, 60, 80])

    def test_decay_report(self):
        rep = decay_bound_check(0.6, 0.4, list(range(40, 121, 20)))
        assert isinstance(rep, DecayReport)
        assert rep.creation_slope < 0
        assert rep.creation_r2 > 0.99
        assert rep.defect_kind == "Pl"

    def test_north_defect(self):
        rep = decay_bound_check(0.0, 0.9, [40, 60, 80, 100])
        assert rep.defect_kind == "1-Pl"
        assert rep.defect_slope < 0
