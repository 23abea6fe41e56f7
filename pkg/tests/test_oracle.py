"""Enumeration-oracle tests."""

from fractions import Fraction as F

import pytest

from aztec import exactcore as ec
from aztec.errors import DomainError, ResourceCapError
from aztec.oracle import (
    block_lemma_check,
    count_tilings,
    enumerate_tilings,
    exact_statistics,
    patch_entropy,
    tiling_from_index,
    tiling_index,
)
from aztec.regions import Region, aztec_diamond, height_from_tiling


def rectangle(w, h, parity=0):
    return Region(frozenset((x, y) for x in range(w) for y in range(h)), white_parity=parity)


class TestEnumeration:
    def test_diamond_counts(self):
        for n, want in ((1, 2), (2, 8), (3, 64), (4, 1024), (5, 32768)):
            assert count_tilings(aztec_diamond(n)) == want

    def test_enumeration_matches_count(self):
        for n in (1, 2, 3):
            e = enumerate_tilings(aztec_diamond(n))
            assert sum(1 for _ in e.domino_sets()) == e.count

    def test_square_and_unbalanced(self):
        assert count_tilings(rectangle(2, 2)) == 2
        lshape = Region(frozenset({(0, 0), (1, 0), (0, 1)}), white_parity=0)
        assert count_tilings(lshape) == 0

    def test_cap(self):
        with pytest.raises(ResourceCapError):
            enumerate_tilings(aztec_diamond(5), cap=40)
        enumerate_tilings(aztec_diamond(5), cap=60)

    def test_canonical_order_deterministic(self):
        region = aztec_diamond(2)
        first = list(enumerate_tilings(region).domino_sets())
        second = list(enumerate_tilings(region).domino_sets())
        assert first == second
        # horizontal-first at the lowest-leftmost square (bottom row)
        assert first[0][0] == ((-1, -2), (0, -2))

    def test_index_round_trip(self):
        region = aztec_diamond(2)
        for i in range(8):
            assert tiling_index(tiling_from_index(region, i)) == i
        with pytest.raises(DomainError):
            tiling_from_index(region, 8)


class TestStatistics:
    def test_paper_values(self):
        st1 = exact_statistics(aztec_diamond(1))
        assert st1.north_placements() == {(0, 0): F(1, 2)}
        st2 = exact_statistics(aztec_diamond(2))
        assert st2.north_placements() == {
            (0, 1): F(3, 4),
            (0, -1): F(1, 4),
            (1, 0): F(1, 4),
            (-1, 0): F(1, 4),
        }

    def test_incidence_sums_equal_one(self):
        for region in (aztec_diamond(3), rectangle(4, 3)):
            sums = exact_statistics(region).incidence_sums()
            assert all(v == 1 for v in sums.values())

    def test_biased_order1(self):
        for p in (F(1, 3), F(3, 5)):
            st = exact_statistics(aztec_diamond(1), bias=p)
            assert st.north_placements()[(0, 0)] == p

    def test_dp_path_matches_enumeration(self):
        region = aztec_diamond(3)
        via_enum = exact_statistics(region, cap=48).placement
        via_dp = exact_statistics(region, cap=10, with_pairs=False).placement
        assert via_enum == via_dp

    def test_bias_domain(self):
        with pytest.raises(DomainError):
            exact_statistics(aztec_diamond(1), bias=F(7, 5))


class TestBlockLemma:
    def test_small_diamonds(self):
        for n in (1, 2, 3):
            assert block_lemma_check(aztec_diamond(n), cap=48)

    def test_rectangle(self):
        assert count_tilings(rectangle(3, 2)) == 3
        assert block_lemma_check(rectangle(3, 2))


class TestStochasticDomination:
    def test_pinned_vertex_monotone(self):
        # conditioning a 4x4 square's center vertex on the higher of its
        # two height classes raises every expected height
        region = rectangle(4, 4)
        tilings = list(enumerate_tilings(region, cap=16).tilings)
        heights = [height_from_tiling(t).heights for t in tilings]
        v0 = (2, 2)
        values = sorted({h[v0] for h in heights})
        assert len(values) >= 2
        lo_val, hi_val = values[0], values[0] + 4
        assert hi_val in values
        lo_set = [h for h in heights if h[v0] == lo_val]
        hi_set = [h for h in heights if h[v0] == hi_val]
        assert lo_set and hi_set
        for v in heights[0]:
            e_lo = sum(h[v] for h in lo_set) / len(lo_set)
            e_hi = sum(h[v] for h in hi_set) / len(hi_set)
            assert e_lo <= e_hi + 1e-12


class TestPatchEntropy:
    def test_unique_tiling_region_has_zero_entropy(self):
        region = rectangle(2, 1)
        samples = [next(enumerate_tilings(region).tilings) for _ in range(40)]
        assert patch_entropy(samples, list(region.squares)) == 0.0

    def test_low_power_warning(self):
        import pytest as _pytest
        from aztec.oracle import StatisticalPowerWarning

        region = rectangle(2, 1)
        samples = [next(enumerate_tilings(region).tilings) for _ in range(5)]
        with _pytest.warns(StatisticalPowerWarning):
            patch_entropy(samples, list(region.squares))

    def test_frozen_corner_vs_center(self):
        from aztec.shuffle import canon_to_tiling, sample_canon

        n = 24
        samples = [canon_to_tiling(sample_canon(n, s), n) for s in range(60)]
        corner_patch = [(sx, sy) for sx in range(-2, 2) for sy in range(n - 4, n - 2)]
        corner_patch = [sq for sq in corner_patch if sq in aztec_diamond(n).squares]
        center_patch = [(sx, sy) for sx in range(-2, 2) for sy in range(-2, 2)]
        e_corner = patch_entropy(samples, corner_patch)
        e_center = patch_entropy(samples, center_patch)
        assert e_corner <= 0.02
        assert e_center > 0.1

    def test_too_few_samples(self):
        with pytest.raises(DomainError):
            patch_entropy([], [(0, 0)])


class TestAverageHeights:
    def test_exact_average_height_from_placements(self):
        # walking south from the top of a column, the expected height
        # increment across a north-going space with probability p is
        # 1 - 4p (a domino drops the height by 3, an empty space raises
        # it by 1), and 4p - 1 across a south-going space; summing these
        # from the boundary must reproduce the enumeration's exact
        # average heights, with south-space probabilities read off north
        # locations via the 180-degree rotation
        from aztec.regions import boundary_heights

        for n in (1, 2, 3):
            region = aztec_diamond(n)
            tilings = list(enumerate_tilings(region, cap=48).tilings)
            heights = [height_from_tiling(t).heights for t in tilings]
            total = len(tilings)
            bnd = boundary_heights(region)
            for vx in range(-n, n + 1):
                vy_top = n + 1 - max(abs(vx), 1)
                expected = F(bnd[(vx, vy_top)])
                for vy in range(vy_top - 1, -vy_top - 1, -1):
                    if (vx - 1 + vy) % 2 == n % 2:
                        expected += 1 - 4 * ec.placement_probability(vx, vy, n)
                    else:
                        expected += 4 * ec.placement_probability(-vx, -vy - 1, n) - 1
                    avg = F(sum(h[(vx, vy)] for h in heights), total)
                    assert avg == expected, (n, vx, vy)
