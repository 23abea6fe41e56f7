"""Geometry layer tests: regions, colorings, tilings, heights."""

import pytest

from aztec.errors import DomainError, InfeasibleBoundaryError, TilingIntegrityError
from aztec.oracle import count_tilings, enumerate_tilings
from aztec.regions import (
    EAST,
    NORTH,
    SOUTH,
    TEMPERATE,
    WEST,
    Region,
    Tiling,
    all_horizontal_tiling,
    all_vertical_tiling,
    aztec_diamond,
    boundary_heights,
    classify_space,
    height_from_tiling,
    is_white_square,
    max_extension,
    min_extension,
    north_space_at,
    polar_classify,
    polar_classify_by_heights,
    space_location,
    tiling_from_height,
)


def rectangle(w, h, parity=0):
    return Region(frozenset((x, y) for x in range(w) for y in range(h)), white_parity=parity)


class TestRegion:
    def test_diamond_sizes(self):
        assert len(aztec_diamond(1)) == 4
        assert len(aztec_diamond(2)) == 12
        assert len(aztec_diamond(64)) == 8320

    def test_order_domain(self):
        with pytest.raises(DomainError):
            aztec_diamond(0)

    def test_coloring_convention(self):
        # leftmost square of each top-half row is white
        for n in (1, 2, 3, 6):
            r = aztec_diamond(n)
            for sy in range(0, n):
                width = n - sy
                leftmost = (-width, sy)
                assert leftmost in r.squares
                assert r.is_white(leftmost), (n, sy)

    def test_paper_color_examples(self):
        # centers (-1/2, 1/2) at n=1 and (-1/2, 3/2) at n=2 are white
        assert is_white_square((-1, 0), 1)
        assert is_white_square((-1, 1), 2)

    def test_neighbors_alternate(self):
        r = aztec_diamond(3)
        for (sx, sy) in r.squares:
            if (sx + 1, sy) in r.squares:
                assert r.is_white((sx, sy)) != r.is_white((sx + 1, sy))

    def test_connectivity_required(self):
        with pytest.raises(DomainError):
            Region(frozenset({(0, 0), (2, 0)}), white_parity=0)

    def test_holes_rejected(self):
        ring = {(x, y) for x in range(3) for y in range(3)} - {(1, 1)}
        with pytest.raises(DomainError):
            Region(frozenset(ring), white_parity=0)

    def test_color_balance_of_tileable_regions(self):
        for region in (aztec_diamond(2), rectangle(4, 3)):
            if count_tilings(region) > 0:
                w, b = region.color_counts()
                assert w == b


class TestSpaces:
    def test_classification_rule(self):
        # horizontal pair with white left square is north-going
        assert classify_space((0, 0), (1, 0), white_parity=0) == NORTH
        assert classify_space((0, 1), (1, 1), white_parity=0) == SOUTH
        # vertical pair with white upper square is west-going
        assert classify_space((0, 0), (0, 1), white_parity=1) == WEST
        assert classify_space((0, 0), (0, 1), white_parity=0) == EAST

    def test_order1_space_locations(self):
        r = aztec_diamond(1)
        north = [d for d in r.spaces() if classify_space(*d, r.white_parity) == NORTH]
        assert len(north) == 1
        assert space_location(north[0], r.white_parity) == (0, 0)

    def test_order2_north_locations(self):
        r = aztec_diamond(2)
        locs = {
            space_location(d, r.white_parity)
            for d in r.spaces()
            if classify_space(*d, r.white_parity) == NORTH
        }
        assert locs == {(0, 1), (0, -1), (1, 0), (-1, 0)}

    def test_location_parity(self):
        for n in (1, 2, 3, 4):
            r = aztec_diamond(n)
            for d in r.spaces():
                if classify_space(*d, r.white_parity) == NORTH:
                    ell, m = space_location(d, r.white_parity)
                    assert (ell + m - (n - 1)) % 2 == 0
                    assert abs(ell) + abs(m) <= n - 1

    def test_north_space_inverse(self):
        assert north_space_at(0, 0) == ((-1, 0), (0, 0))

    def test_north_location_rejects_other_classes(self):
        from aztec.regions import north_location

        r = aztec_diamond(1)
        north = [d for d in r.spaces() if classify_space(*d, r.white_parity) == NORTH]
        assert north_location(north[0], r.white_parity) == (0, 0)
        south = [d for d in r.spaces() if classify_space(*d, r.white_parity) == SOUTH]
        with pytest.raises(DomainError):
            north_location(south[0], r.white_parity)

    def test_clockwise_rotation_cycles_classes(self):
        # rotating a space 90 degrees clockwise advances N -> E -> S -> W
        cycle = {NORTH: EAST, EAST: SOUTH, SOUTH: WEST, WEST: NORTH}
        for n in (1, 2, 3):
            r = aztec_diamond(n)
            for d in r.spaces():
                (a1, b1), (a2, b2) = d
                rot = tuple(sorted(((b1, -a1 - 1), (b2, -a2 - 1))))
                assert classify_space(*rot, r.white_parity) == cycle[
                    classify_space(*d, r.white_parity)
                ]


class TestTilingSerialization:
    def test_round_trip(self):
        t = all_horizontal_tiling(3)
        assert Tiling.from_text(t.to_text()).dominoes == t.dominoes

    def test_region_header_round_trip(self):
        region = rectangle(2, 2)
        t = next(enumerate_tilings(region).tilings)
        t2 = Tiling.from_text(t.to_text())
        assert t2.dominoes == t.dominoes
        assert t2.region.white_parity == region.white_parity

    def test_rejects_garbage(self):
        with pytest.raises(TilingIntegrityError):
            Tiling.from_text("aztec 2\n0 0 X\n")
        with pytest.raises(TilingIntegrityError):
            Tiling.from_text("aztec 2\n0 1 N\n")  # incomplete cover

    def test_overlap_rejected(self):
        r = aztec_diamond(1)
        with pytest.raises(TilingIntegrityError):
            Tiling(r, frozenset({((-1, 0), (0, 0)), ((-1, -1), (-1, 0))}))


class TestHeights:
    def test_anchor_convention(self):
        for n in (1, 2, 5):
            h = height_from_tiling(all_horizontal_tiling(n))
            assert h[(-n, 0)] == 0
            assert h[(0, n)] == 2 * n

    def test_boundary_heights_agree_across_tilings(self):
        region = aztec_diamond(2)
        bnd = boundary_heights(region)
        for t in enumerate_tilings(region).tilings:
            h = height_from_tiling(t)
            for v, val in bnd.items():
                assert h[v] == val

    def test_round_trip_exhaustive_small_regions(self):
        regions = [
            aztec_diamond(1),
            aztec_diamond(2),
            rectangle(2, 2),
            rectangle(3, 2),
            rectangle(4, 2),
            rectangle(2, 6),
            rectangle(4, 3),
        ]
        # an L-shaped, simply connected region with 14 squares
        ell_sq = frozenset(
            {(x, y) for x in range(4) for y in range(2)}
            | {(x, y) for x in range(2) for y in range(2, 5)}
        )
        regions.append(Region(ell_sq, white_parity=0))
        for region in regions:
            assert len(region.squares) <= 14
            for t in enumerate_tilings(region, cap=14).tilings:
                hf = height_from_tiling(t)
                assert tiling_from_height(hf).dominoes == t.dominoes
                assert hf.check_lipschitz()

    def test_mod4_rigidity(self):
        region = aztec_diamond(3)
        hfs = [height_from_tiling(t) for t in enumerate_tilings(region, cap=48).tilings]
        ref = hfs[0]
        for hf in hfs[1:]:
            for v, val in ref.items():
                assert (hf[v] - val) % 4 == 0

    def test_minimal_maximal(self):
        # all-horizontal gives the pointwise smallest heights
        region = aztec_diamond(2)
        hmin = height_from_tiling(all_horizontal_tiling(2)).heights
        hmax = height_from_tiling(all_vertical_tiling(2)).heights
        for t in enumerate_tilings(region).tilings:
            h = height_from_tiling(t)
            for v, val in h.items():
                assert hmin[v] <= val <= hmax[v]

    def test_bad_heights_rejected(self):
        hf = height_from_tiling(all_horizontal_tiling(1))
        broken = dict(hf.heights)
        broken[(0, 0)] += 2
        from aztec.regions import HeightFunction

        with pytest.raises(TilingIntegrityError):
            tiling_from_height(HeightFunction(hf.region, broken, hf.anchor))


class TestExtensions:
    def test_extremal_tilings(self):
        for n in (1, 2, 3, 4):
            region = aztec_diamond(n)
            bnd = boundary_heights(region)
            assert min_extension(region, bnd).heights == height_from_tiling(
                all_horizontal_tiling(n)
            ).heights
            assert max_extension(region, bnd).heights == height_from_tiling(
                all_vertical_tiling(n)
            ).heights

    def test_extension_lattice(self):
        region = aztec_diamond(3)
        bnd = boundary_heights(region)
        lo = min_extension(region, bnd).heights
        hi = max_extension(region, bnd).heights
        for t in enumerate_tilings(region, cap=48).tilings:
            h = height_from_tiling(t)
            for v, val in h.items():
                assert lo[v] <= val <= hi[v]

    def test_pinned_interior_vertex(self):
        # pinning an interior vertex restricts the extension range
        region = aztec_diamond(2)
        bnd = boundary_heights(region)
        hs = sorted(
            {height_from_tiling(t)[(0, 0)] for t in enumerate_tilings(region).tilings}
        )
        assert len(hs) >= 2
        pinned = dict(bnd)
        pinned[(0, 0)] = hs[0]
        assert max_extension(region, pinned)[(0, 0)] == hs[0]

    def test_infeasible_boundary(self):
        region = aztec_diamond(2)
        bnd = dict(boundary_heights(region))
        bnd[(2, 0)] += 4  # breaks the boundary walk constraints
        with pytest.raises(InfeasibleBoundaryError):
            max_extension(region, bnd)

    def test_missing_boundary_vertex(self):
        region = aztec_diamond(2)
        bnd = dict(boundary_heights(region))
        bnd.pop((2, 0))
        with pytest.raises(DomainError):
            min_extension(region, bnd)

    def test_row_removed_diamond_is_rigid(self):
        # an Aztec diamond with one full row removed (top half dropped
        # down) has a unique, all-horizontal brickwork tiling
        n = 3
        squares = set()
        for sx, sy in aztec_diamond(n).squares:
            if sy <= -1:
                squares.add((sx, sy))
            elif sy >= 1:
                squares.add((sx, sy - 1))
        region = Region(frozenset(squares), white_parity=n % 2)
        assert count_tilings(region) == 1
        only = next(enumerate_tilings(region, cap=48).tilings)
        assert all(s1[1] == s2[1] for (s1, s2) in only.dominoes)
        bnd = boundary_heights(region)
        assert min_extension(region, bnd).heights == max_extension(region, bnd).heights


class TestPolar:
    def test_all_horizontal_everything_polar(self):
        for n in (1, 2, 3, 4):
            t = all_horizontal_tiling(n)
            labels = polar_classify(t)
            for d, lab in labels.items():
                assert lab in (NORTH, SOUTH)
                assert lab == (NORTH if d[0][1] >= 0 else SOUTH)

    def test_definitions_agree(self):
        # adjacency-chain definition == heights-match definition
        for n in (1, 2, 3):
            region = aztec_diamond(n)
            for t in enumerate_tilings(region, cap=48).tilings:
                assert polar_classify(t) == polar_classify_by_heights(t)

    def test_agree_on_order4_samples(self):
        from aztec.shuffle import sample_uniform

        for seed in range(12):
            t = sample_uniform(4, seed)
            assert polar_classify(t) == polar_classify_by_heights(t)
