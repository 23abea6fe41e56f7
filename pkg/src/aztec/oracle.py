"""Brute-force ground truth for small regions.

Exhaustive tiling enumeration (canonical order: branch on the
lowest-leftmost uncovered square, horizontal placement first), exact
placement and pair statistics with optional Gibbs bias, a
broken-profile transfer-matrix counter that avoids materializing
tilings, and the empirical local-entropy estimator.

The Gibbs distribution with bias p is realized by weighting a tiling in
proportion to (p/(1-p))^(h/2) with h its number of horizontal dominoes;
h is constant mod 2 over the tilings of a fixed region (every 2x2 flip
moves it by 2), so the exponent offsets stay integral and every weight
is an exact rational.  Flipping one free 2x2 block multiplies the weight
by p/(1-p), which is precisely the conditional-probability property that
defines the distribution.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import DomainError, ResourceCapError
from .regions import (
    NORTH,
    Domino,
    Region,
    Square,
    Tiling,
    classify_space,
    space_location,
)

DEFAULT_SQUARE_CAP = 40

SAMPLE_POWER_FLOOR = 30


class StatisticalPowerWarning(UserWarning):
    """Too few samples to resolve the near-tiling distribution."""

__all__ = [
    "StatisticalPowerWarning",
    "TilingEnumeration",
    "enumerate_tilings",
    "count_tilings",
    "ExactStatistics",
    "exact_statistics",
    "block_lemma_check",
    "patch_entropy",
    "tiling_index",
    "tiling_from_index",
]


def _check_cap(region: Region, cap: int) -> None:
    if len(region.squares) > cap:
        raise ResourceCapError(
            f"region has {len(region.squares)} squares, exceeding the cap of {cap}; "
            "raise `cap` explicitly to force the computation"
        )


def _enumerate(squares: frozenset) -> Iterator[tuple]:
    """All tilings as tuples of canonical dominoes, in canonical order."""
    free = set(squares)
    cur: list = []

    def rec():
        if not free:
            yield tuple(cur)
            return
        sq = min(free, key=lambda s: (s[1], s[0]))
        x, y = sq
        free.discard(sq)
        for other in ((x + 1, y), (x, y + 1)):  # horizontal first
            if other in free:
                free.discard(other)
                cur.append((sq, other))
                yield from rec()
                cur.pop()
                free.add(other)
        free.add(sq)

    yield from rec()


@dataclass
class TilingEnumeration:
    """Count plus a lazily produced sequence of tilings."""

    region: Region
    count: int

    @property
    def tilings(self) -> Iterator[Tiling]:
        for doms in _enumerate(self.region.squares):
            yield Tiling(self.region, frozenset(doms))

    def domino_sets(self) -> Iterator[tuple]:
        """Raw canonical domino tuples, skipping Tiling validation."""
        return _enumerate(self.region.squares)


def enumerate_tilings(region: Region, cap: int = DEFAULT_SQUARE_CAP) -> TilingEnumeration:
    """Exhaustive enumeration; the count comes from the transfer matrix
    so it is available without exhausting the sequence."""
    _check_cap(region, cap)
    return TilingEnumeration(region, count_tilings(region))


def _profile_dp(squares: frozenset):
    """Forward broken-profile DP over the bounding box, row-major from
    the bottom-left.  State bit j says whether cell p+j is already
    covered."""
    xs = [s[0] for s in squares]
    ys = [s[1] for s in squares]
    x0, y0 = min(xs), min(ys)
    wd = max(xs) - x0 + 1
    ncells = wd * (max(ys) - y0 + 1)
    inr = [(x0 + (p % wd), y0 + (p // wd)) in squares for p in range(ncells)]
    layers: list[dict] = [dict() for _ in range(ncells + 1)]
    layers[0][0] = 1
    top = 1 << (wd - 1)
    for p in range(ncells):
        x = p % wd
        nxt = layers[p + 1]
        for mask, cnt in layers[p].items():
            if (mask & 1) or not inr[p]:
                if (mask & 1) and not inr[p]:
                    continue
                m2 = mask >> 1
                nxt[m2] = nxt.get(m2, 0) + cnt
                continue
            if x + 1 < wd and inr[p + 1] and not (mask & 2):
                m2 = (mask | 2) >> 1
                nxt[m2] = nxt.get(m2, 0) + cnt
            if p + wd < ncells and inr[p + wd]:
                m2 = (mask >> 1) | top
                nxt[m2] = nxt.get(m2, 0) + cnt
    return layers, wd, ncells, x0, y0, inr


def count_tilings(region: Region) -> int:
    """Number of domino tilings, via the transfer matrix (no cap; cost
    grows as 2^width, fine up to diamond order ~8)."""
    layers, wd, ncells, _, _, _ = _profile_dp(region.squares)
    return layers[ncells].get(0, 0)


def _placement_counts_dp(region: Region) -> tuple[dict, int]:
    """Exact tilings-containing-each-space counts via a forward and a
    backward sweep of the profile DP."""
    layers, wd, ncells, x0, y0, inr = _profile_dp(region.squares)
    top = 1 << (wd - 1)
    back: list[dict] = [dict() for _ in range(ncells + 1)]
    back[ncells][0] = 1
    for p in range(ncells - 1, -1, -1):
        x = p % wd
        nxt = back[p + 1]
        cur = back[p]
        for mask in layers[p]:
            if (mask & 1) or not inr[p]:
                cur[mask] = nxt.get(mask >> 1, 0)
                continue
            tot = 0
            if x + 1 < wd and inr[p + 1] and not (mask & 2):
                tot += nxt.get((mask | 2) >> 1, 0)
            if p + wd < ncells and inr[p + wd]:
                tot += nxt.get((mask >> 1) | top, 0)
            cur[mask] = tot
    counts: dict = {}
    for p in range(ncells):
        if not inr[p]:
            continue
        x = p % wd
        sq = (x0 + x, y0 + p // wd)
        ph = pv = 0
        for mask, cnt in layers[p].items():
            if mask & 1:
                continue
            if x + 1 < wd and inr[p + 1] and not (mask & 2):
                ph += cnt * back[p + 1].get((mask | 2) >> 1, 0)
            if p + wd < ncells and inr[p + wd]:
                pv += cnt * back[p + 1].get((mask >> 1) | top, 0)
        if ph:
            counts[(sq, (sq[0] + 1, sq[1]))] = ph
        if pv:
            counts[(sq, (sq[0], sq[1] + 1))] = pv
    return counts, layers[ncells].get(0, 0)


@dataclass
class ExactStatistics:
    """Exact placement (and 2x2-block pair) probabilities of a region."""

    region: Region
    total_weight: Fraction
    placement: dict  # Domino -> Fraction
    pair: dict       # (Domino, Domino) -> Fraction, 2x2 block pairs only
    weight_bias: Fraction | None = None

    def north_placements(self) -> dict:
        """(ell, m) -> probability for north-going spaces."""
        par = self.region.white_parity
        out = {}
        for d, prob in self.placement.items():
            if classify_space(*d, par) == NORTH:
                out[space_location(d, par)] = prob
        return out

    def incidence_sums(self) -> dict:
        """Per-square sums of incident placement probabilities."""
        sums: dict = {}
        for (s1, s2), prob in self.placement.items():
            sums[s1] = sums.get(s1, Fraction(0)) + prob
            sums[s2] = sums.get(s2, Fraction(0)) + prob
        return sums

    def to_csv(self) -> str:
        par = self.region.white_parity
        lines = ["ell,m,klass,probability"]
        rows = []
        for d, prob in self.placement.items():
            k = classify_space(*d, par)
            ell, m = space_location(d, par)
            rows.append((k, ell, m, prob))
        for k, ell, m, prob in sorted(rows):
            lines.append(f"{ell},{m},{k},{prob}")
        return "\n".join(lines) + "\n"


def _blocks(region: Region) -> Iterator[tuple]:
    """All 2x2 blocks inside the region, as (corner, h-pair, v-pair)."""
    sqs = region.squares
    for x, y in sqs:
        if (x + 1, y) in sqs and (x, y + 1) in sqs and (x + 1, y + 1) in sqs:
            hpair = (((x, y), (x + 1, y)), ((x, y + 1), (x + 1, y + 1)))
            vpair = (((x, y), (x, y + 1)), ((x + 1, y), (x + 1, y + 1)))
            yield (x, y), hpair, vpair


def exact_statistics(
    region: Region,
    bias=None,
    cap: int = DEFAULT_SQUARE_CAP,
    with_pairs: bool = True,
) -> ExactStatistics:
    """Exact statistics by full enumeration (any bias), or by the
    transfer matrix for the uniform case when enumeration is capped out.

    Pair probabilities cover the 2x2 blocks (both orientations), which is
    what the block-identity check consumes.
    """
    p = None
    if bias is not None:
        p = Fraction(bias)
        if not 0 < p < 1:
            raise DomainError("bias must lie strictly between 0 and 1")
    try:
        _check_cap(region, cap)
        enumerable = True
    except ResourceCapError:
        if p is None and not with_pairs:
            enumerable = False
        else:
            raise
    if not enumerable:
        counts, total = _placement_counts_dp(region)
        if total == 0:
            return ExactStatistics(region, Fraction(0), {}, {})
        placement = {d: Fraction(c, total) for d, c in counts.items()}
        return ExactStatistics(region, Fraction(total), placement, {})

    blocks = list(_blocks(region)) if with_pairs else []
    placement_w: dict = {}
    pair_w: dict = {}
    total_w = 0
    # integer weights: q^(h//2) scaled by the common factor qd^K, where
    # h mod 2 is constant over the tilings of a fixed region
    if p is not None:
        q = p / (1 - p)
        qn, qd = q.numerator, q.denominator
        kmax = len(region.squares) // 2
        wpow = [qn**j * qd ** (kmax - j) for j in range(kmax + 1)]
    for doms in _enumerate(region.squares):
        if p is not None:
            h = sum(1 for (s1, s2) in doms if s1[1] == s2[1])
            w = wpow[h // 2]
        else:
            w = 1
        total_w += w
        for d in doms:
            placement_w[d] = placement_w.get(d, 0) + w
        if blocks:
            dset = set(doms)
            for corner, hpair, vpair in blocks:
                if hpair[0] in dset and hpair[1] in dset:
                    pair_w[hpair] = pair_w.get(hpair, 0) + w
                if vpair[0] in dset and vpair[1] in dset:
                    pair_w[vpair] = pair_w.get(vpair, 0) + w
    if total_w == 0:
        return ExactStatistics(region, Fraction(0), {}, {}, weight_bias=p)
    placement = {d: Fraction(w, total_w) for d, w in placement_w.items()}
    pair = {dd: Fraction(w, total_w) for dd, w in pair_w.items()}
    return ExactStatistics(region, Fraction(total_w), placement, pair, weight_bias=p)


def block_lemma_check(region: Region, cap: int = DEFAULT_SQUARE_CAP) -> bool:
    """Whether, for every 2x2 block {a b / c d}:
    p_{ab,cd} == p_{ac,bd} == p_ab p_cd + p_ac p_bd, exactly."""
    stats = exact_statistics(region, cap=cap, with_pairs=True)
    zero = Fraction(0)
    for corner, hpair, vpair in _blocks(region):
        p_hh = stats.pair.get(hpair, zero)
        p_vv = stats.pair.get(vpair, zero)
        p_ab = stats.placement.get(hpair[1], zero)  # top horizontal
        p_cd = stats.placement.get(hpair[0], zero)  # bottom horizontal
        p_ac = stats.placement.get(vpair[0], zero)  # left vertical
        p_bd = stats.placement.get(vpair[1], zero)  # right vertical
        expected = p_ab * p_cd + p_ac * p_bd
        if p_hh != expected or p_vv != expected:
            return False
    return True


def tiling_index(tiling: Tiling, cap: int = DEFAULT_SQUARE_CAP) -> int:
    """Position of a tiling in the canonical enumeration order."""
    _check_cap(tiling.region, cap)
    target = frozenset(tiling.dominoes)
    for i, doms in enumerate(_enumerate(tiling.region.squares)):
        if frozenset(doms) == target:
            return i
    raise DomainError("tiling does not tile the given region")


def tiling_from_index(region: Region, index: int, cap: int = DEFAULT_SQUARE_CAP) -> Tiling:
    """Inverse of ``tiling_index``."""
    _check_cap(region, cap)
    for i, doms in enumerate(_enumerate(region.squares)):
        if i == index:
            return Tiling(region, frozenset(doms))
    raise DomainError(f"index {index} out of range")


def patch_entropy(samples: Iterable, patch: Sequence[Square]) -> float:
    """Empirical local entropy of a patch, in bits per square.

    ``samples`` yields Tilings (or plain domino iterables); each is
    restricted to the patch, keeping only dominoes fully inside, and the
    Shannon entropy of the resulting near-tiling distribution is divided
    by the patch area.
    """
    patch_set = frozenset(patch)
    if not patch_set:
        raise DomainError("patch must contain at least one square")
    counts: dict = {}
    nsamples = 0
    for sample in samples:
        doms = sample.dominoes if isinstance(sample, Tiling) else sample
        key = frozenset(d for d in doms if d[0] in patch_set and d[1] in patch_set)
        counts[key] = counts.get(key, 0) + 1
        nsamples += 1
    if nsamples < 2:
        raise DomainError("need at least two samples to estimate entropy")
    if nsamples < SAMPLE_POWER_FLOOR:
        warnings.warn(
            f"{nsamples} samples give little statistical power for a patch entropy",
            StatisticalPowerWarning,
            stacklevel=2,
        )
    ent = 0.0
    for c in counts.values():
        f = c / nsamples
        ent -= f * math.log2(f)
    return ent / len(patch_set)
