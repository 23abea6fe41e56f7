"""Random tiling generation for Aztec diamonds by domino shuffling.

One growth step maps a tiling of order k to one of order k+1:

1. destruction - every 2x2 block holding two dominoes that slide toward
   each other (a north-going directly below a south-going, or an
   east-going directly left of a west-going) is removed;
2. sliding - each surviving domino moves one lattice unit in its facing
   direction into the larger diamond;
3. creation - the uncovered area decomposes uniquely into 2x2 blocks,
   and each block is filled independently with two horizontal dominoes
   with probability p (1/2 for the uniform distribution) and two
   vertical ones otherwise.

The creation blocks pair consecutive empty cells along the (1,1)
diagonals whose parity matches the new order, which is what
``_creation_anchors`` exploits to find the decomposition with array
operations only.

Tilings travel through this module as dense "canon" arrays: an order-k
tiling is an int8 array of shape (2k, 2k) where cell [i, j] is the
square with corner (j-k, i-k), and a domino is recorded only on its
canonical square (left square for horizontal dominoes, bottom square
for vertical ones) as one of the class codes N/S/E/W below.

Randomness comes from the counter-based Philox generator keyed by
(seed, growth step), so each step's creation choices form their own
stream: identical (order, bias, seed) triples give bit-identical
tilings, and distinct seeds can run fully in parallel.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import DomainError, TilingIntegrityError
from .regions import EAST, NORTH, SOUTH, WEST, Tiling, aztec_diamond

CODE_EMPTY, CODE_N, CODE_S, CODE_E, CODE_W = 0, 1, 2, 3, 4
_CODE_TO_KLASS = {CODE_N: NORTH, CODE_S: SOUTH, CODE_E: EAST, CODE_W: WEST}
_KLASS_TO_CODE = {v: k for k, v in _CODE_TO_KLASS.items()}

__all__ = [
    "CODE_EMPTY",
    "CODE_N",
    "CODE_S",
    "CODE_E",
    "CODE_W",
    "sample_uniform",
    "sample_biased",
    "sample_canon",
    "shuffle_step",
    "canon_to_tiling",
    "tiling_to_canon",
    "coverage",
    "check_canon",
    "diamond_cell_mask",
]


@lru_cache(maxsize=256)
def diamond_cell_mask(k: int) -> np.ndarray:
    """Boolean (2k, 2k) mask of cells inside the order-k diamond."""
    i, j = np.mgrid[0 : 2 * k, 0 : 2 * k]
    mask = (np.abs(2 * j - 2 * k + 1) + np.abs(2 * i - 2 * k + 1)) <= 2 * k
    mask.setflags(write=False)
    return mask


@lru_cache(maxsize=256)
def _anchor_parity_mask(k: int) -> np.ndarray:
    """Cells with i + j = k + 1 (mod 2): where creation anchors may sit
    (their squares are black in the order-k coloring)."""
    m = 2 * k
    i, j = np.mgrid[0:m, 0:m]
    mask = ((i + j) & 1) == ((k + 1) & 1)
    mask.setflags(write=False)
    return mask


def _creation_anchors(empty: np.ndarray, new_order: int) -> tuple:
    """Bottom-left corners of the 2x2 creation blocks.

    Candidate cells satisfy i + j = new_order + 1 (mod 2); along each
    (1,1) diagonal of that parity, empty cells pair up consecutively
    from the start of each run, so anchors sit at the even offsets.
    Starting from the run starts, each further anchor lies two diagonal
    steps above a known one; runs are short, so this converges fast.
    """
    cand = empty & _anchor_parity_mask(new_order)
    anchors = cand.copy()
    anchors[1:, 1:] &= ~cand[:-1, :-1]  # run starts
    frontier = anchors
    while True:
        nxt = np.zeros_like(frontier)
        nxt[2:, 2:] = frontier[:-2, :-2]
        nxt &= cand
        nxt &= ~anchors
        if not nxt.any():
            break
        anchors |= nxt
        frontier = nxt
    return np.nonzero(anchors)


def coverage(canon: np.ndarray) -> np.ndarray:
    """Boolean mask of cells covered by some domino."""
    hor = (canon == CODE_N) | (canon == CODE_S)
    ver = (canon == CODE_E) | (canon == CODE_W)
    cov = hor | ver
    cov[:, 1:] |= hor[:, :-1]
    cov[1:, :] |= ver[:-1, :]
    return cov


def check_canon(canon: np.ndarray, order: int) -> None:
    """Assert the canon array is a perfect cover of the order-n diamond."""
    if canon.shape != (2 * order, 2 * order):
        raise TilingIntegrityError("canon array has the wrong shape")
    hor = (canon == CODE_N) | (canon == CODE_S)
    ver = (canon == CODE_E) | (canon == CODE_W)
    count = hor.astype(np.int8) + ver.astype(np.int8)
    count[:, 1:] += hor[:, :-1]
    count[1:, :] += ver[:-1, :]
    mask = diamond_cell_mask(order)
    if not ((count == 1) == mask).all():
        raise TilingIntegrityError("canon array is not an exact cover of the diamond")
    # horizontal dominoes may not stick out of the right edge, nor
    # vertical ones out of the top
    if hor[:, -1].any() or ver[-1, :].any():
        raise TilingIntegrityError("domino sticks out of the grid")


def shuffle_step(canon: np.ndarray, order: int, p: float, rng) -> np.ndarray:
    """One destruction / slide / creation step: order k -> k + 1."""
    k = order
    new_k = k + 1
    new = np.zeros((2 * new_k, 2 * new_k), dtype=np.int8)
    if k > 0:
        cn = canon.copy()
        bad_h = (cn[:-1, :] == CODE_N) & (cn[1:, :] == CODE_S)
        cn[:-1, :][bad_h] = CODE_EMPTY
        cn[1:, :][bad_h] = CODE_EMPTY
        bad_v = (cn[:, :-1] == CODE_E) & (cn[:, 1:] == CODE_W)
        cn[:, :-1][bad_v] = CODE_EMPTY
        cn[:, 1:][bad_v] = CODE_EMPTY
        # slide by one unit: N up, S down, E right, W left (grown grid is
        # offset by +1 in both indices)
        new[2:, 1:-1][cn == CODE_N] = CODE_N
        new[:-2, 1:-1][cn == CODE_S] = CODE_S
        new[1:-1, 2:][cn == CODE_E] = CODE_E
        new[1:-1, :-2][cn == CODE_W] = CODE_W
    empty = diamond_cell_mask(new_k) & ~coverage(new)
    ai, aj = _creation_anchors(empty, new_k)
    horizontal = rng.random(len(ai)) < p
    hi, hj = ai[horizontal], aj[horizontal]
    vi, vj = ai[~horizontal], aj[~horizontal]
    # a creation block's bottom-left square is black, so the horizontal
    # fill is S below N and the vertical fill is W left of E
    new[hi, hj] = CODE_S
    new[hi + 1, hj] = CODE_N
    new[vi, vj] = CODE_W
    new[vi, vj + 1] = CODE_E
    return new


def _step_rng(seed: int, step: int):
    key = np.array([seed & 0xFFFFFFFFFFFFFFFF, step], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def sample_canon(n: int, seed: int, p=None, check: bool = False, trace=None) -> np.ndarray:
    """Random order-n tiling as a canon array (the fast path).

    ``trace``, if given, is called as ``trace(order, canon)`` after every
    growth step; it backs the CLI's per-step debugging dump.
    """
    if n < 1:
        raise DomainError("diamond order must be >= 1")
    if p is None:
        pf = 0.5
    else:
        pq = Fraction(p)
        if not 0 < pq < 1:
            raise DomainError("bias must lie strictly between 0 and 1")
        pf = float(pq)
    canon = np.zeros((0, 0), dtype=np.int8)
    for k in range(n):
        canon = shuffle_step(canon, k, pf, _step_rng(seed, k))
        if check:
            check_canon(canon, k + 1)
        if trace is not None:
            trace(k + 1, canon)
    return canon


def sample_uniform(n: int, seed: int) -> Tiling:
    """Uniform random tiling of the order-n diamond (seed-reproducible)."""
    return canon_to_tiling(sample_canon(n, seed), n)


def sample_biased(n: int, p, seed: int) -> Tiling:
    """Random tiling under the Gibbs distribution with bias p."""
    return canon_to_tiling(sample_canon(n, seed, p=p), n)


def canon_to_tiling(canon: np.ndarray, order: int) -> Tiling:
    """Convert a canon array to a validated Tiling object."""
    region = aztec_diamond(order)
    k = order
    dominoes = set()
    for code in (CODE_N, CODE_S):
        for i, j in zip(*np.nonzero(canon == code)):
            sq = (int(j) - k, int(i) - k)
            dominoes.add((sq, (sq[0] + 1, sq[1])))
    for code in (CODE_E, CODE_W):
        for i, j in zip(*np.nonzero(canon == code)):
            sq = (int(j) - k, int(i) - k)
            dominoes.add((sq, (sq[0], sq[1] + 1)))
    return Tiling(region, frozenset(dominoes))


def tiling_to_canon(tiling: Tiling) -> np.ndarray:
    """Inverse of ``canon_to_tiling`` (Aztec regions only)."""
    k = tiling.region.order_hint
    if k is None:
        raise DomainError("canon arrays are defined for Aztec diamonds only")
    canon = np.zeros((2 * k, 2 * k), dtype=np.int8)
    for d in tiling.dominoes:
        (x1, y1), (x2, y2) = d
        i, j = y1 + k, x1 + k
        canon[i, j] = _KLASS_TO_CODE[tiling.klass(d)]
    return canon
