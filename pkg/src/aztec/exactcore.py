"""Exact rational tiling statistics for Aztec diamonds.

Placement probabilities and creation rates, uniform and biased, computed
in exact arbitrary-precision arithmetic.  A creation rate factors into a
product of two coefficients of ``(1+z)^(n-b) (1-z)^b`` (with ``(1+z)``
replaced by ``(1 + (1-p)/p z)`` in the biased case), and a placement
probability is a telescoping sum of creation rates down the diamond
orders.

Conventions
-----------
* Exact integers are plain ``int``; exact rationals are
  ``fractions.Fraction``.  Unbiased quantities are carried internally as
  integer numerators over a power-of-two denominator and normalized to
  ``Fraction`` at the API boundary.
* A lattice location is a triple ``(ell, m, order)``: the midpoint of the
  bottom edge of a north-going domino space in the diamond of given
  order.  A location carries a nonzero statistic only when
  ``|ell| + |m| <= order - 1`` and ``ell + m ≡ order - 1 (mod 2)``;
  out-of-range locations yield 0 rather than raising, so sums can run
  uniformly.
* Bias values are ``Fraction`` (or int/str convertible) strictly between
  0 and 1; ``p = 1/2`` reduces every biased quantity to its uniform
  counterpart.

All functions are pure; the only shared state is an internal LRU memo of
single creation rates, which CPython's ``functools.lru_cache`` keeps safe
for concurrent readers.  Whole-grid work should go through
``placement_grid`` which evaluates O(order^3) coefficients instead of
O(order^4).
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterator

from .errors import DomainError

__all__ = [
    "krawtchouk_coeff",
    "biased_krawtchouk_coeff",
    "krawtchouk_reciprocity_check",
    "creation_rate",
    "biased_creation_rate",
    "placement_probability",
    "biased_placement_probability",
    "boundary_row_probability",
    "boundary_row_location",
    "rotation_quadruple",
    "valid_location",
    "north_locations",
    "PlacementGrid",
    "placement_grid",
    "format_rational",
]


def _check_bias(p) -> Fraction:
    p = Fraction(p)
    if not 0 < p < 1:
        raise DomainError(f"bias must lie strictly between 0 and 1, got {p}")
    return p


def krawtchouk_coeff(a: int, b: int, n: int) -> int:
    """Coefficient of z^a in (1+z)^(n-b) (1-z)^b, exactly.

    Requires 0 <= b <= n; returns 0 when a < 0 or a > n.
    """
    if not 0 <= b <= n:
        raise DomainError(f"need 0 <= b <= n, got b={b}, n={n}")
    if a < 0 or a > n:
        return 0
    lo = max(0, a - (n - b))
    hi = min(a, b)
    comb = math.comb
    total = 0
    for j in range(lo, hi + 1):
        term = comb(b, j) * comb(n - b, a - j)
        total += -term if j & 1 else term
    return total


def biased_krawtchouk_coeff(a: int, b: int, n: int, p) -> Fraction:
    """Coefficient of z^a in (1 + (1-p)z/p)^(n-b) (1-z)^b, exactly.

    Reduces to ``krawtchouk_coeff`` at p = 1/2.
    """
    p = _check_bias(p)
    if not 0 <= b <= n:
        raise DomainError(f"need 0 <= b <= n, got b={b}, n={n}")
    if a < 0 or a > n:
        return Fraction(0)
    w = (1 - p) / p
    lo = max(0, a - (n - b))
    hi = min(a, b)
    comb = math.comb
    total = Fraction(0)
    for j in range(lo, hi + 1):
        term = comb(b, j) * comb(n - b, a - j) * w ** (a - j)
        total += -term if j & 1 else term
    return total


def krawtchouk_reciprocity_check(a: int, b: int, n: int) -> bool:
    """Whether c(b,a;n) b! (n-b)! == c(a,b;n) a! (n-a)! holds exactly.

    This is an identity, so the function must always return True; it is
    exposed as a self-test hook.
    """
    if not (0 <= a <= n and 0 <= b <= n):
        raise DomainError("need 0 <= a, b <= n")
    fact = math.factorial
    return (
        krawtchouk_coeff(b, a, n) * fact(b) * fact(n - b)
        == krawtchouk_coeff(a, b, n) * fact(a) * fact(n - a)
    )


def valid_location(ell: int, m: int, order: int) -> bool:
    """Whether (ell, m) indexes a north-going space of the order-n diamond."""
    return (
        order >= 1
        and abs(ell) + abs(m) <= order - 1
        and (ell + m - (order - 1)) % 2 == 0
    )


def north_locations(order: int) -> Iterator[tuple[int, int]]:
    """All (ell, m) locations of north-going spaces in the order-n diamond."""
    for ell in range(-(order - 1), order):
        for m in range(-(order - 1) + abs(ell), order - abs(ell)):
            if (ell + m - (order - 1)) % 2 == 0:
                yield ell, m


@lru_cache(maxsize=1 << 16)
def _creation_numerator(ell: int, m: int, order: int) -> int:
    """Numerator of the creation rate over 2^(order-1)."""
    n = order - 1
    a = (ell + m + n) // 2
    b = (ell - m + n) // 2
    if not (0 <= a <= n and 0 <= b <= n):
        return 0
    return krawtchouk_coeff(a, b, n) * krawtchouk_coeff(b, a, n)


def creation_rate(ell: int, m: int, order: int) -> Fraction:
    """Net creation rate Cr(ell, m; order), an exact nonnegative rational.

    Equals 2 (Pl(ell,m;order) - Pl(ell,m-1;order-1)); zero off the valid
    parity class or outside the diamond (including order < 1, so the
    telescoping sums run uniformly).
    """
    if not valid_location(ell, m, order):
        return Fraction(0)
    return Fraction(_creation_numerator(ell, m, order), 1 << (order - 1))


def biased_creation_rate(ell: int, m: int, order: int, p) -> Fraction:
    """Creation rate under the Gibbs distribution with bias p.

    Equals (1/p)(Pl_p(ell,m;order) - Pl_p(ell,m-1;order-1)); agrees with
    ``creation_rate`` at p = 1/2.
    """
    p = _check_bias(p)
    if not valid_location(ell, m, order):
        return Fraction(0)
    n = order - 1
    a = (ell + m + n) // 2
    b = (ell - m + n) // 2
    return (
        biased_krawtchouk_coeff(a, b, n, p)
        * biased_krawtchouk_coeff(b, a, n, p)
        * p**n
    )


def placement_probability(ell: int, m: int, order: int) -> Fraction:
    """Exact probability Pl(ell, m; order) that a uniform random tiling
    places a domino on the north-going space at (ell, m); 0 out of
    range (including order < 1)."""
    if not valid_location(ell, m, order):
        return Fraction(0)
    # Pl = sum_k Cr(ell, m-k; order-k) / 2; every term shares the parity
    # class, and terms vanish once order-k-1 < |ell|.
    total = 0
    for k in range(order - abs(ell)):
        total += _creation_numerator(ell, m - k, order - k) << k
    return Fraction(total, 1 << order)


def biased_placement_probability(ell: int, m: int, order: int, p) -> Fraction:
    """Exact Pl_p(ell, m; order) under the Gibbs distribution with bias p;
    0 out of range."""
    p = _check_bias(p)
    if not valid_location(ell, m, order):
        return Fraction(0)
    total = Fraction(0)
    for k in range(order - abs(ell)):
        total += biased_creation_rate(ell, m - k, order - k, p)
    return p * total


def rotation_quadruple(ell: int, m: int) -> list[tuple[int, int]]:
    """Locations whose north-going probabilities sum to exactly 1.

    The four domino spaces containing the white (left) square of the
    north-going space at (ell, m) are one space of each compass class;
    rotating each back to a north-going space gives these locations.
    The +-1 offsets vanish in the n -> infinity limit, where the sum
    becomes the rotation identity of the limiting formula.
    """
    return [(ell, m), (1 - ell, -m - 1), (-m - 1, ell - 1), (m, -ell)]


def boundary_row_probability(k: int, n: int) -> Fraction:
    """Partial binomial sum 2^(-n) sum_{i=k..n} C(n, i).

    This is the placement probability of the leftmost north-going space in
    the k-th row from the top of the order-n diamond (rows are 1-based;
    k = 0 is the full sum and maps to no row).
    """
    if not 0 <= k <= n:
        raise DomainError(f"need 0 <= k <= n, got k={k}, n={n}")
    return Fraction(sum(math.comb(n, i) for i in range(k, n + 1)), 1 << n)


def boundary_row_location(k: int, n: int) -> tuple[int, int]:
    """(ell, m) of the leftmost north-going space in row k from the top.

    Row k (1-based) of the top half has its leftmost square centered at
    (-(k - 1/2), n - k + 1/2), so the space location is (1-k, n-k).
    """
    if not 1 <= k <= n:
        raise DomainError(f"need 1 <= k <= n, got k={k}, n={n}")
    return 1 - k, n - k


# ---------------------------------------------------------------------------
# Whole-grid computation


def _kraw_matrix(n: int) -> list[list[int]]:
    """Full coefficient matrix K[a][b] = c(a,b;n) via the three-term
    recurrence (a+1) K[a+1] = (n-2b) K[a] - (n-a+1) K[a-1]."""
    rows = [[1] * (n + 1)]
    if n >= 1:
        rows.append([n - 2 * b for b in range(n + 1)])
    for a in range(1, n):
        prev, cur = rows[a - 1], rows[a]
        rows.append(
            [
                ((n - 2 * b) * cur[b] - (n - a + 1) * prev[b]) // (a + 1)
                for b in range(n + 1)
            ]
        )
    return rows[: n + 1]


def _biased_kraw_matrix(n: int, r: int, s: int) -> list[list[int]]:
    """Integer matrix D[a][b] = [z^a] (r + (s-r)z)^(n-b) (1-z)^b.

    The biased coefficient is c_p(a,b;n) = D[a][b] / r^(n-b) for p = r/s.
    All divisions below are exact because the D values are integers.
    """
    rows = [[r ** (n - b) for b in range(n + 1)]]
    if n >= 1:
        row1 = []
        for b in range(n + 1):
            num = ((n - b) * (s - r) - b * r) * r ** (n - b)
            row1.append(num // r)
        rows.append(row1)
    for a in range(1, n):
        prev, cur = rows[a - 1], rows[a]
        nxt = []
        for b in range(n + 1):
            num = ((n - b) * (s - r) - b * r - (s - 2 * r) * a) * cur[b] + (
                s - r
            ) * (a - 1 - n) * prev[b]
            q, rem = divmod(num, r * (a + 1))
            if rem:
                raise AssertionError("biased coefficient recurrence left a remainder")
            nxt.append(q)
        rows.append(nxt)
    return rows[: n + 1]


class PlacementGrid:
    """Exact placement probabilities for every north-going space of one
    diamond, stored as integer numerators over a common denominator."""

    def __init__(self, order: int, numerators: dict, den: int, bias=None):
        self.order = order
        self.bias = bias
        self._num = numerators
        self._den = den

    def numerator(self, ell: int, m: int) -> int:
        return self._num.get((ell, m), 0)

    @property
    def denominator(self) -> int:
        return self._den

    def value(self, ell: int, m: int) -> Fraction:
        return Fraction(self._num.get((ell, m), 0), self._den)

    def float(self, ell: int, m: int) -> float:
        # int/int true division is correctly rounded at any operand size
        return self._num.get((ell, m), 0) / self._den

    def locations(self) -> Iterator[tuple[int, int]]:
        return iter(self._num.keys())

    def items(self) -> Iterator[tuple[tuple[int, int], Fraction]]:
        for loc, num in self._num.items():
            yield loc, Fraction(num, self._den)


def placement_grid(order: int, bias=None) -> PlacementGrid:
    """All Pl (or Pl_p) values at the given order in one dynamic program.

    Runs the telescoping recurrence Pl(ell,m;t) = Pl(ell,m-1;t-1)
    + weight * Cr(ell,m;t) upward from t = 1, evaluating each level's full
    coefficient matrix once, so the whole grid costs O(order^3) coefficient
    evaluations.
    """
    if order < 1:
        raise DomainError("order must be >= 1")
    if bias is None:
        prev: dict = {}
        for t in range(1, order + 1):
            n = t - 1
            K = _kraw_matrix(n)
            cur: dict = {}
            for a in range(n + 1):
                Ka = K[a]
                for b in range(n + 1):
                    loc = (a + b - n, a - b)
                    cur[loc] = 2 * prev.get((loc[0], loc[1] - 1), 0) + Ka[b] * K[b][a]
            prev = cur
        return PlacementGrid(order, prev, 1 << order)

    p = _check_bias(bias)
    r, s = p.numerator, p.denominator
    # Numerators are Pl_p * s^t * r^(t-1); level t adds D * D~ * r^(ell+t).
    prev = {}
    for t in range(1, order + 1):
        n = t - 1
        D = _biased_kraw_matrix(n, r, s)
        cur = {}
        for a in range(n + 1):
            Da = D[a]
            for b in range(n + 1):
                ell = a + b - n
                loc = (ell, a - b)
                cur[loc] = (
                    r * s * prev.get((ell, loc[1] - 1), 0)
                    + Da[b] * D[b][a] * r ** (ell + t)
                )
        prev = cur
    return PlacementGrid(order, prev, s**order * r ** (order - 1), bias=p)


def format_rational(q: Fraction) -> str:
    """Serialize an exact rational as 'numerator/denominator' ('0', '1',
    ... for integers), the format used in CSV output."""
    return str(q)
