"""Monte Carlo aggregation tests (fixed seeds throughout)."""

import math

import numpy as np
import pytest

from aztec import exactcore as ec
from aztec import shuffle, stats
from aztec.regions import (
    all_horizontal_tiling,
    all_vertical_tiling,
    aztec_diamond,
    height_from_tiling,
    polar_classify,
)


class TestEmpiricalGrid:
    def test_frequencies_in_range_and_csv(self):
        g = stats.empirical_placement(2, 500, seed=11)
        for ell, m in g.locations():
            assert 0.0 <= g.frequency(ell, m) <= 1.0
        csv = g.to_csv(ec.placement_grid(2))
        assert csv.startswith("ell,m,exact,empirical,stderr")
        assert "3/4" in csv or "1/4" in csv

    def test_matches_exact_order2(self):
        g = stats.empirical_placement(2, 6000, seed=42)
        f = g.frequency(0, 1)
        assert abs(f - 0.75) < 4 * stats.binomial_stderr(0.75, 6000)

    def test_binomial_stderr(self):
        # agrees with the exact binomial standard deviation of the mean
        n, p = 1600, 0.3
        rng = np.random.default_rng(0)
        draws = rng.binomial(n, p, size=4000) / n
        assert draws.std() == pytest.approx(stats.binomial_stderr(p, n), rel=0.1)
        assert stats.binomial_stderr(0.5, 100) == pytest.approx(0.05)


class TestHeightGrid:
    def test_matches_reference_implementation(self):
        for n in (2, 4, 7):
            for seed in (0, 1):
                canon = shuffle.sample_canon(n, seed)
                hg = stats.height_grid(canon, n)
                hf = height_from_tiling(shuffle.canon_to_tiling(canon, n))
                for (vx, vy), h in hf.items():
                    assert hg[vy + n, vx + n] == h

    def test_anchor_values(self):
        n = 6
        hg = stats.height_grid(shuffle.sample_canon(n, 9), n)
        assert hg[2 * n, n] == 2 * n  # north middle (0, n)
        assert hg[n, -n + n] == 0  # west middle (-n, 0)


class TestPolarAndArctic:
    def test_extremal_tilings_degenerate(self):
        for t in (all_horizontal_tiling(5), all_vertical_tiling(5)):
            canon = shuffle.tiling_to_canon(t)
            rep = stats.arctic_report(canon, 5)
            assert rep.degenerate
            assert rep.max_deviation == 0.0

    def test_cell_labels_match_bfs(self):
        for n, seed in ((4, 0), (6, 3), (8, 5)):
            canon = shuffle.sample_canon(n, seed)
            lab = stats.polar_cell_labels(canon, n)
            ref = polar_classify(shuffle.canon_to_tiling(canon, n))
            klass_code = {"N": 1, "S": 2, "E": 3, "W": 4, "temperate": 0}
            for d, klass in ref.items():
                (x1, y1), _ = d
                assert lab[y1 + n, x1 + n] == klass_code[klass]

    def test_arctic_deviation_shrinks(self):
        med = {}
        for n in (16, 64):
            devs = [
                stats.arctic_report(shuffle.sample_canon(n, s), n).max_deviation
                for s in range(30)
            ]
            med[n] = sorted(devs)[15]
        assert med[64] < med[16]

    def test_biased_report_uses_ellipse(self):
        canon = shuffle.sample_canon(48, 2, p=0.25)
        rep = stats.arctic_report(canon, 48, bias=0.25)
        assert not rep.degenerate
        assert rep.max_deviation < 0.45


class TestConcentration:
    def test_path_length(self):
        assert stats.boundary_path_length(64, (0, 0)) == 64
        assert stats.boundary_path_length(8, (0, 7)) == 1
        assert stats.boundary_path_length(8, (8, 0)) == 0

    def test_variance_report(self):
        rep = stats.height_concentration(16, (0, 0), 400, seed=21)
        assert rep.m == 16
        assert rep.bound == 64 * 16
        assert rep.sample_variance < rep.bound
        assert rep.within_bounds

    def test_difference_report(self):
        rep = stats.height_difference_concentration(16, (0, 0), (4, 2), 400, seed=22)
        assert rep.m == 6
        assert rep.sample_variance <= rep.bound
        assert rep.within_bounds


class TestConvergence:
    def test_rows_decrease(self):
        rows = stats.convergence_report([16, 32])
        assert rows[1].supnorm < rows[0].supnorm
        assert rows[0].central_target == pytest.approx(0.25)

    def test_biased_rows(self):
        rows = stats.convergence_report([15, 30], bias=1 / 3)
        assert rows[1].supnorm < rows[0].supnorm

    def test_csv(self):
        rows = stats.convergence_report([10])
        out = stats.convergence_csv(rows)
        assert out.startswith("n,supnorm,")

    def test_mean_height_error_small(self):
        err = stats.mean_height_error(32, 80, seed=5)
        assert err < 0.12


class TestChiSquare:
    def test_uniform_sane(self):
        rng = np.random.default_rng(1)
        counts = np.bincount(rng.integers(0, 8, size=8000), minlength=8)
        assert stats.chi_square_pvalue(counts, [1 / 8] * 8) > 0.001

    def test_detects_bias(self):
        counts = [2000, 1000, 1000, 1000, 1000, 1000, 1000, 1000]
        assert stats.chi_square_pvalue(counts, [1 / 8] * 8) < 1e-6


class TestFrozenCorners:
    def test_polar_space_frequencies(self):
        # deep inside the polar caps the north-going frequency is ~1 at
        # the top of the diamond and ~0 at its sides
        n = 48
        g = stats.empirical_placement(n, 150, seed=3)
        top = (0, 43)       # normalized (0, 0.9), well above the circle
        side = (43, 0)      # normalized (0.9, 0), frozen east
        assert (sum(top) - (n - 1)) % 2 == 0 and (sum(side) - (n - 1)) % 2 == 0
        assert g.frequency(*top) > 0.97
        assert g.frequency(*side) < 0.03
