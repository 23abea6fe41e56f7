"""Regions, colorings, domino spaces, tilings and height functions.

Geometry conventions
--------------------
* A lattice square is named by its lower-left corner ``(sx, sy)``; its
  center is ``(sx + 1/2, sy + 1/2)``.  The Aztec diamond of order n is
  the set of squares whose centers satisfy ``|cx| + |cy| <= n``.
* A checkerboard coloring is a parity bit: square ``(sx, sy)`` is white
  iff ``(sx + sy) % 2 == white_parity``.  For the order-n diamond,
  ``white_parity = n % 2`` makes the leftmost square of every row in the
  top half white.
* A domino space is a canonically ordered pair of adjacent squares (left
  then right, or bottom then top).  Horizontal spaces are north-going
  when the left square is white, else south-going; vertical spaces are
  west-going when the upper square is white, else east-going.
* Height functions live on lattice vertices.  Across a directed edge
  with a black square on its left the height rises by 1, or drops by 3
  exactly when a domino of the tiling straddles the edge.  Dominos sit
  on the edges where the height jumps by 3.

Region, Tiling and HeightFunction values are immutable after
construction, so they are safe to share between threads.
"""

from __future__ import annotations

import heapq
from collections import deque
from functools import lru_cache
from dataclasses import dataclass
from typing import Iterator, Mapping

from .errors import (
    DomainError,
    InfeasibleBoundaryError,
    TilingIntegrityError,
)

Square = tuple[int, int]
Domino = tuple[Square, Square]
Vertex = tuple[int, int]

NORTH, SOUTH, EAST, WEST = "N", "S", "E", "W"
TEMPERATE = "temperate"

__all__ = [
    "Square",
    "Domino",
    "Vertex",
    "NORTH",
    "SOUTH",
    "EAST",
    "WEST",
    "TEMPERATE",
    "Region",
    "aztec_diamond",
    "is_white_square",
    "classify_space",
    "space_location",
    "north_location",
    "north_space_at",
    "Tiling",
    "all_horizontal_tiling",
    "all_vertical_tiling",
    "HeightFunction",
    "height_from_tiling",
    "tiling_from_height",
    "min_extension",
    "max_extension",
    "polar_classify",
    "polar_classify_by_heights",
]


def _canonical(sq1: Square, sq2: Square) -> Domino:
    dx, dy = sq2[0] - sq1[0], sq2[1] - sq1[1]
    if (dx, dy) in ((1, 0), (0, 1)):
        return (sq1, sq2)
    if (dx, dy) in ((-1, 0), (0, -1)):
        return (sq2, sq1)
    raise DomainError(f"squares {sq1} and {sq2} are not adjacent")


@dataclass(frozen=True)
class Region:
    """A finite, simply connected union of lattice squares with a fixed
    checkerboard coloring."""

    squares: frozenset
    white_parity: int
    order_hint: int | None = None

    def __post_init__(self):
        if not self.squares:
            raise DomainError("region must contain at least one square")
        if self.white_parity not in (0, 1):
            raise DomainError("white_parity must be 0 or 1")
        self._check_simply_connected()

    def _check_simply_connected(self):
        sqs = self.squares
        start = next(iter(sqs))
        seen = {start}
        queue = deque([start])
        while queue:
            x, y = queue.popleft()
            for nb in ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)):
                if nb in sqs and nb not in seen:
                    seen.add(nb)
                    queue.append(nb)
        if len(seen) != len(sqs):
            raise DomainError("region is not connected")
        # no holes: the complement within a padded bounding box must be a
        # single component reachable from the frame
        xs = [s[0] for s in sqs]
        ys = [s[1] for s in sqs]
        x0, x1 = min(xs) - 1, max(xs) + 1
        y0, y1 = min(ys) - 1, max(ys) + 1
        outside = {(x0, y0)}
        queue = deque([(x0, y0)])
        while queue:
            x, y = queue.popleft()
            for nb in ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)):
                nx, ny = nb
                if x0 <= nx <= x1 and y0 <= ny <= y1 and nb not in sqs and nb not in outside:
                    outside.add(nb)
                    queue.append(nb)
        total = (x1 - x0 + 1) * (y1 - y0 + 1)
        if len(outside) + len(sqs) != total:
            raise DomainError("region is not simply connected (it has a hole)")

    def __contains__(self, sq: Square) -> bool:
        return sq in self.squares

    def __len__(self) -> int:
        return len(self.squares)

    def is_white(self, sq: Square) -> bool:
        """Color under the region's checkerboard (defined on the whole
        plane, so callers may ask about squares outside the region)."""
        return (sq[0] + sq[1]) % 2 == self.white_parity

    def color_counts(self) -> tuple[int, int]:
        """(white, black) square counts."""
        white = sum(1 for sq in self.squares if self.is_white(sq))
        return white, len(self.squares) - white

    def vertices(self) -> set:
        verts = set()
        for x, y in self.squares:
            verts.update(((x, y), (x + 1, y), (x, y + 1), (x + 1, y + 1)))
        return verts

    def vertex_edges(self) -> Iterator[tuple[Vertex, Vertex]]:
        """Every unit edge bounding at least one region square, oriented
        rightward or upward."""
        seen = set()
        for x, y in self.squares:
            for e in (
                ((x, y), (x + 1, y)),
                ((x, y + 1), (x + 1, y + 1)),
                ((x, y), (x, y + 1)),
                ((x + 1, y), (x + 1, y + 1)),
            ):
                if e not in seen:
                    seen.add(e)
                    yield e

    def boundary_vertices(self) -> set:
        """Vertices incident to at least one unit edge on the region's
        topological boundary."""
        out = set()
        for (u, v), (left, right) in self._edges_with_sides():
            if (left in self.squares) != (right in self.squares):
                out.add(u)
                out.add(v)
        return out

    def _edges_with_sides(self):
        for u, v in self.vertex_edges():
            if v[0] == u[0] + 1:  # horizontal edge, pointing +x
                left = (u[0], u[1])       # square above
                right = (u[0], u[1] - 1)  # square below
            else:  # vertical edge, pointing +y
                left = (u[0] - 1, u[1])   # square to the west
                right = (u[0], u[1])      # square to the east
            yield (u, v), (left, right)

    def spaces(self) -> Iterator[Domino]:
        """All domino spaces (pairs of adjacent region squares)."""
        for x, y in self.squares:
            if (x + 1, y) in self.squares:
                yield ((x, y), (x + 1, y))
            if (x, y + 1) in self.squares:
                yield ((x, y), (x, y + 1))


@lru_cache(maxsize=64)
def aztec_diamond(n: int) -> Region:
    """The order-n Aztec diamond: 2n(n+1) squares with |cx|+|cy| <= n."""
    if n < 1:
        raise DomainError("diamond order must be >= 1")
    squares = frozenset(
        (sx, sy)
        for sx in range(-n, n)
        for sy in range(-n, n)
        if abs(2 * sx + 1) + abs(2 * sy + 1) <= 2 * n
    )
    return Region(squares, white_parity=n % 2, order_hint=n)


def is_white_square(sq: Square, n: int) -> bool:
    """Color of a square in the order-n diamond's checkerboard."""
    return (sq[0] + sq[1]) % 2 == n % 2


def classify_space(sq1: Square, sq2: Square, white_parity: int) -> str:
    """N/S/E/W class of the domino space covering two adjacent squares."""
    (x1, y1), (x2, y2) = _canonical(sq1, sq2)
    if y1 == y2:  # horizontal: left square white -> north-going
        left_white = (x1 + y1) % 2 == white_parity
        return NORTH if left_white else SOUTH
    upper_white = (x2 + y2) % 2 == white_parity
    return WEST if upper_white else EAST


def space_location(domino: Domino, white_parity: int) -> tuple[int, int]:
    """Integer location of a space: bottom-edge midpoint for horizontal
    spaces, left-edge midpoint for vertical ones."""
    (x1, y1), (x2, y2) = _canonical(*domino)
    if y1 == y2:
        return (x1 + 1, y1)
    return (x1, y1 + 1)


def north_location(domino: Domino, white_parity: int) -> tuple[int, int]:
    """Location of a north-going space; callers rotate other classes to
    north first."""
    if classify_space(*domino, white_parity) != NORTH:
        raise DomainError(f"{domino} is not a north-going space")
    return space_location(domino, white_parity)


def north_space_at(ell: int, m: int) -> Domino:
    """The horizontal space whose bottom-edge midpoint is (ell, m)."""
    return ((ell - 1, m), (ell, m))


@dataclass(frozen=True)
class Tiling:
    """A perfect domino cover of a region."""

    region: Region
    dominoes: frozenset  # of canonical Domino pairs

    def __post_init__(self):
        covered: set = set()
        for d in self.dominoes:
            sq1, sq2 = _canonical(*d)
            if d != (sq1, sq2):
                raise TilingIntegrityError(f"domino {d} is not in canonical order")
            for sq in d:
                if sq not in self.region.squares:
                    raise TilingIntegrityError(f"domino square {sq} lies outside the region")
                if sq in covered:
                    raise TilingIntegrityError(f"square {sq} is covered twice")
                covered.add(sq)
        if len(covered) != len(self.region.squares):
            raise TilingIntegrityError("tiling does not cover the region")

    def klass(self, domino: Domino) -> str:
        return classify_space(*domino, self.region.white_parity)

    def domino_of(self, sq: Square) -> Domino:
        for d in self.dominoes:
            if sq in d:
                return d
        raise KeyError(sq)

    def horizontal_count(self) -> int:
        return sum(1 for (s1, s2) in self.dominoes if s1[1] == s2[1])

    def north_locations(self) -> set:
        """Locations (ell, m) of occupied north-going spaces."""
        par = self.region.white_parity
        return {
            space_location(d, par)
            for d in self.dominoes
            if classify_space(*d, par) == NORTH
        }

    # -- serialization ------------------------------------------------

    def to_text(self, version: str | None = None) -> str:
        """Text format: optional comment lines, a header ('aztec n' or
        'region <square count>'), then one 'ell m K' line per domino."""
        par = self.region.white_parity
        lines = []
        if version:
            lines.append(f"# aztec-tilings {version}")
        n = self.region.order_hint
        if n is not None:
            lines.append(f"aztec {n}")
        else:
            lines.append(f"region {len(self.region.squares)}")
        for d in sorted(self.dominoes):
            ell, m = space_location(d, par)
            lines.append(f"{ell} {m} {classify_space(*d, par)}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Tiling":
        lines = [ln.strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln and not ln.startswith("#")]
        if not lines:
            raise TilingIntegrityError("empty tiling file")
        head = lines[0].split()
        entries = []
        for ln in lines[1:]:
            parts = ln.split()
            if len(parts) != 3 or parts[2] not in (NORTH, SOUTH, EAST, WEST):
                raise TilingIntegrityError(f"bad domino line: {ln!r}")
            entries.append((int(parts[0]), int(parts[1]), parts[2]))
        dominoes = set()
        for ell, m, k in entries:
            if k in (NORTH, SOUTH):
                dominoes.add(((ell - 1, m), (ell, m)))
            else:
                dominoes.add(((ell, m - 1), (ell, m)))
        squares = frozenset(sq for d in dominoes for sq in d)
        if head[0] == "aztec":
            n = int(head[1])
            region = aztec_diamond(n)
            if squares != region.squares:
                raise TilingIntegrityError("dominos do not cover the stated diamond")
        elif head[0] == "region":
            count = int(head[1])
            if count != len(squares):
                raise TilingIntegrityError("square count mismatch in header")
            # recover the coloring from any class letter
            ell, m, k = entries[0]
            if k == NORTH:
                par = (ell - 1 + m) % 2
            elif k == SOUTH:
                par = (ell + m) % 2
            elif k == WEST:
                par = (ell + m + 1) % 2
            else:
                par = (ell + m) % 2
            region = Region(squares, white_parity=par)
        else:
            raise TilingIntegrityError(f"unknown header: {lines[0]!r}")
        tiling = cls(region, frozenset(dominoes))
        want = set(entries)
        for d in tiling.dominoes:
            got = (*space_location(d, tiling.region.white_parity), tiling.klass(d))
            if got not in want:
                raise TilingIntegrityError(f"inconsistent class for domino {d}")
        return tiling


def all_horizontal_tiling(n: int) -> Tiling:
    """Brickwork tiling by horizontal dominoes (the minimal tiling)."""
    region = aztec_diamond(n)
    dominoes = set()
    for sy in range(-n, n):
        width = n - abs(2 * sy + 1) // 2  # squares span [-width, width)
        for sx in range(-width, width, 2):
            dominoes.add(((sx, sy), (sx + 1, sy)))
    return Tiling(region, frozenset(dominoes))


def all_vertical_tiling(n: int) -> Tiling:
    """Brickwork tiling by vertical dominoes (the maximal tiling)."""
    region = aztec_diamond(n)
    dominoes = set()
    for sx in range(-n, n):
        height = n - abs(2 * sx + 1) // 2
        for sy in range(-height, height, 2):
            dominoes.add(((sx, sy), (sx, sy + 1)))
    return Tiling(region, frozenset(dominoes))


# ---------------------------------------------------------------------------
# Height functions


@dataclass(frozen=True)
class HeightFunction:
    """Integer heights on the vertices of a tiled region."""

    region: Region
    heights: Mapping
    anchor: tuple | None = None  # (vertex, value)

    def __getitem__(self, vertex: Vertex) -> int:
        return self.heights[vertex]

    def items(self):
        return self.heights.items()

    def to_csv(self) -> str:
        lines = ["vx,vy,h"]
        for (vx, vy), h in sorted(self.heights.items()):
            lines.append(f"{vx},{vy},{h}")
        return "\n".join(lines) + "\n"

    def check_lipschitz(self) -> bool:
        """Whether |h(u) - h(v)| <= 2d + 1 holds for every vertex pair at
        sup-norm distance d (quadratic scan; meant for small regions)."""
        hs = list(self.heights.items())
        for i, ((x1, y1), h1) in enumerate(hs):
            for (x2, y2), h2 in hs[i + 1 :]:
                d = max(abs(x1 - x2), abs(y1 - y2))
                if abs(h1 - h2) > 2 * d + 1:
                    return False
        return True


def default_anchor(region: Region) -> tuple:
    """Anchor convention: for Aztec diamonds the west-edge middle vertex
    (-n, 0) gets height 0; other regions anchor their smallest boundary
    vertex at 0."""
    n = region.order_hint
    if n is not None:
        return ((-n, 0), 0)
    return (min(region.boundary_vertices()), 0)


def _edge_delta(region: Region, crossed: bool, left_sq: Square) -> int:
    """Height increment along a directed edge given the square on its
    left (plane coloring) and whether a domino straddles the edge."""
    if region.is_white(left_sq):
        return 3 if crossed else -1
    return -3 if crossed else 1


def _edge_squares(u: Vertex, v: Vertex) -> tuple[Square, Square]:
    """(left square, right square) of the directed edge u -> v."""
    if v == (u[0] + 1, u[1]):      # east
        return (u[0], u[1]), (u[0], u[1] - 1)
    if v == (u[0] - 1, u[1]):      # west
        return (u[0] - 1, u[1] - 1), (u[0] - 1, u[1])
    if v == (u[0], u[1] + 1):      # north
        return (u[0] - 1, u[1]), (u[0], u[1])
    if v == (u[0], u[1] - 1):      # south
        return (u[0], u[1] - 1), (u[0] - 1, u[1] - 1)
    raise DomainError(f"{u} -> {v} is not a unit edge")


def height_from_tiling(tiling: Tiling, anchor: tuple | None = None) -> HeightFunction:
    """The unique height function of a tiling with the given anchor.

    For Aztec diamonds the default anchor puts 0 on the west-edge middle
    vertex, which makes the north-edge middle vertex come out at 2n.
    """
    region = tiling.region
    if anchor is None:
        anchor = default_anchor(region)
    (av, aval) = anchor
    verts = region.vertices()
    if av not in verts:
        raise DomainError(f"anchor vertex {av} is not a vertex of the region")
    crossed = set()
    for (s1, s2) in tiling.dominoes:
        if s1[1] == s2[1]:  # horizontal domino crosses the shared vertical edge
            crossed.add(((s2[0], s2[1]), (s2[0], s2[1] + 1)))
        else:               # vertical domino crosses the shared horizontal edge
            crossed.add(((s2[0], s2[1]), (s2[0] + 1, s2[1])))
    heights = {av: aval}
    queue = deque([av])
    sqs = region.squares
    while queue:
        u = queue.popleft()
        hu = heights[u]
        x, y = u
        for v in ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)):
            if v in heights or v not in verts:
                continue
            left, right = _edge_squares(u, v)
            if left not in sqs and right not in sqs:
                continue
            edge = (u, v) if (u < v) else (v, u)
            delta = _edge_delta(region, edge in crossed, left)
            heights[v] = hu + delta
            queue.append(v)
    if len(heights) != len(verts):
        raise TilingIntegrityError("vertex graph of the region is not connected")
    hf = HeightFunction(region, heights, anchor)
    _validate_heights(hf)
    return hf


def _validate_heights(hf: HeightFunction) -> None:
    """Check the local height rules; raise TilingIntegrityError on failure.

    Boundary edges must step by exactly 1; interior edges by 1 or 3 with
    the sign fixed by the black-on-left rule.
    """
    region = hf.region
    h = hf.heights
    sqs = region.squares
    for (u, v), (left, right) in region._edges_with_sides():
        if u not in h or v not in h:
            raise TilingIntegrityError(f"missing height at {u} or {v}")
        d = h[v] - h[u]
        interior = left in sqs and right in sqs
        allowed = (
            ((1, -3) if region.is_white(right) else (-1, 3))
            if interior
            else ((1,) if region.is_white(right) else (-1,))
        )
        if d not in allowed:
            raise TilingIntegrityError(
                f"height step {d} along {u}->{v} violates the local rule"
            )


def tiling_from_height(hf: HeightFunction) -> Tiling:
    """The tiling whose dominoes sit on the |dh| = 3 edges."""
    _validate_heights(hf)
    region = hf.region
    h = hf.heights
    dominoes = set()
    for x, y in region.squares:
        # a domino pairs this square rightward iff the shared vertical
        # edge jumps by 3; upward iff the shared horizontal edge does
        if (x + 1, y) in region.squares:
            if abs(h[(x + 1, y + 1)] - h[(x + 1, y)]) == 3:
                dominoes.add(((x, y), (x + 1, y)))
        if (x, y + 1) in region.squares:
            if abs(h[(x + 1, y + 1)] - h[(x, y + 1)]) == 3:
                dominoes.add(((x, y), (x, y + 1)))
    try:
        return Tiling(region, frozenset(dominoes))
    except TilingIntegrityError as exc:
        raise TilingIntegrityError(f"height map does not encode a tiling: {exc}") from exc


# ---------------------------------------------------------------------------
# Extremal extensions of partial height functions


def _constraint_arcs(region: Region):
    """Directed arcs (u, v, w) meaning h(v) <= h(u) + w, for interior
    edges: +1 along the white-on-right direction, +3 backward."""
    sqs = region.squares
    for (u, v), (left, right) in region._edges_with_sides():
        if left in sqs and right in sqs:
            if region.is_white(right):  # black on left of u->v
                yield (u, v, 1)
                yield (v, u, 3)
            else:
                yield (v, u, 1)
                yield (u, v, 3)


def _multi_dijkstra(seeds: Mapping, adj: Mapping) -> dict:
    """min over seeds s of (seed value + shortest path s -> w).

    Edge weights are positive; seed values may be negative, handled by a
    uniform shift.
    """
    shift = -min(seeds.values())
    dist = {}
    heap = [(val + shift, v) for v, val in seeds.items()]
    heapq.heapify(heap)
    while heap:
        d, v = heapq.heappop(heap)
        if v in dist:
            continue
        dist[v] = d
        for w, weight in adj.get(v, ()):
            if w not in dist:
                heapq.heappush(heap, (d + weight, w))
    return {v: d - shift for v, d in dist.items()}


def _extension(region: Region, partial: Mapping, side: str) -> HeightFunction:
    boundary = region.boundary_vertices()
    if not boundary <= set(partial):
        missing = next(iter(boundary - set(partial)))
        raise DomainError(f"partial height data must cover the boundary (missing {missing})")
    verts = region.vertices()
    bad = set(partial) - verts
    if bad:
        raise DomainError(f"partial heights given off the region: {sorted(bad)[:3]}")

    fwd: dict = {}
    rev: dict = {}
    for u, v, w in _constraint_arcs(region):
        fwd.setdefault(u, []).append((v, w))
        rev.setdefault(v, []).append((u, w))

    if side == "max":
        result = _multi_dijkstra(dict(partial), fwd)
    else:
        neg = {v: -val for v, val in partial.items()}
        result = {v: -d for v, d in _multi_dijkstra(neg, rev).items()}

    missing = verts - set(result)
    if missing:
        raise InfeasibleBoundaryError(
            "constraint graph does not reach every vertex", witness=sorted(missing)[:3]
        )
    for v, val in partial.items():
        if result[v] != val:
            raise InfeasibleBoundaryError(
                f"fixed height at {v} is unreachable: wanted {val}, forced {result[v]}",
                witness=(v, val, result[v]),
            )
    hf = HeightFunction(region, result, anchor=None)
    try:
        _validate_heights(hf)
    except TilingIntegrityError as exc:
        raise InfeasibleBoundaryError(
            f"boundary data admits no height-function extension ({exc})",
            witness=str(exc),
        ) from exc
    return hf


def max_extension(region: Region, partial: Mapping) -> HeightFunction:
    """Pointwise highest height function extending the partial data."""
    return _extension(region, partial, "max")


def min_extension(region: Region, partial: Mapping) -> HeightFunction:
    """Pointwise lowest height function extending the partial data."""
    return _extension(region, partial, "min")


def boundary_heights(region: Region, anchor: tuple | None = None) -> dict:
    """Heights along the boundary, identical for every tiling of the region."""
    if anchor is None:
        anchor = default_anchor(region)
    av, aval = anchor
    boundary = region.boundary_vertices()
    if av not in boundary:
        raise DomainError("anchor must be a boundary vertex")
    sqs = region.squares
    adj: dict = {}
    for (u, v), (left, right) in region._edges_with_sides():
        if (left in sqs) != (right in sqs):
            step = 1 if region.is_white(right) else -1
            adj.setdefault(u, []).append((v, step))
            adj.setdefault(v, []).append((u, -step))
    heights = {av: aval}
    queue = deque([av])
    while queue:
        u = queue.popleft()
        for v, step in adj.get(u, ()):
            if v not in heights:
                heights[v] = heights[u] + step
                queue.append(v)
    if set(heights) != boundary:
        raise TilingIntegrityError("boundary walk did not visit every boundary vertex")
    return heights


# ---------------------------------------------------------------------------
# Polar regions


_CLASS_STEPS = {
    NORTH: (1, 0),
    SOUTH: (-1, 0),
    EAST: (0, 1),
    WEST: (0, -1),
}


def _domino_cells(d: Domino) -> tuple[Square, Square]:
    return d


def _cell_neighbors(sq: Square):
    x, y = sq
    return ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1))


def polar_classify(tiling: Tiling) -> dict:
    """Label every domino N/S/E/W-polar or temperate.

    A domino is K-polar when it is K-going and linked to the region
    boundary through a chain of edge-adjacent K-going dominoes.
    """
    region = tiling.region
    sqs = region.squares
    par = region.white_parity
    by_class: dict = {NORTH: [], SOUTH: [], EAST: [], WEST: []}
    cell_owner = {}
    for d in tiling.dominoes:
        by_class[classify_space(*d, par)].append(d)
        for sq in d:
            cell_owner[sq] = d
    labels = {d: TEMPERATE for d in tiling.dominoes}
    for klass, members in by_class.items():
        member_set = set(members)
        seeds = []
        for d in members:
            if any(
                nb not in sqs
                for sq in d
                for nb in _cell_neighbors(sq)
                if nb not in d
            ):
                seeds.append(d)
        seen = set(seeds)
        queue = deque(seeds)
        while queue:
            d = queue.popleft()
            labels[d] = klass
            for sq in d:
                for nb in _cell_neighbors(sq):
                    other = cell_owner.get(nb)
                    if other is not None and other in member_set and other not in seen:
                        seen.add(other)
                        queue.append(other)
    return labels


def polar_classify_by_heights(tiling: Tiling) -> dict:
    """Equivalent polar labels via heights: a horizontal domino is polar
    iff its vertex heights match the all-horizontal (minimal) tiling, a
    vertical one iff they match the all-vertical (maximal) tiling."""
    region = tiling.region
    n = region.order_hint
    if n is None:
        raise DomainError("height-based polar classification needs an Aztec diamond")
    h = height_from_tiling(tiling).heights
    hmin = height_from_tiling(all_horizontal_tiling(n)).heights
    hmax = height_from_tiling(all_vertical_tiling(n)).heights
    labels = {}
    par = region.white_parity
    for d in tiling.dominoes:
        (x1, y1), (x2, y2) = d
        verts = {(x1, y1), (x1, y1 + 1), (x2 + 1, y2), (x2 + 1, y2 + 1),
                 (x1 + 1, y1), (x2, y2 + 1)}
        verts = {v for v in verts if v in h}
        klass = classify_space(*d, par)
        if klass in (NORTH, SOUTH):
            ref = hmin
        else:
            ref = hmax
        labels[d] = klass if all(h[v] == ref[v] for v in verts) else TEMPERATE
    return labels
