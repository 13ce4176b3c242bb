"""Exact (rational) age and ancestor statistics.

The number f(n,r) of size-n trees of age >= r comes from a finite
alternating binomial sum obtained by coefficient extraction.  With
e_k = 2n-4-k and beta_k = n-1-k (so e-beta = n-3 throughout), the term
for k = j(2r-1) is

    binom(e_k, beta_k) + binom(e_k, beta_k - 1) - 2 binom(e_k, beta_k - 2)

with generalized binomials (negative upper index expands (1+u)^e as a
series); the sum stops once beta_k < 0, i.e. k > n-1.  For n >= 3 every
surviving term has e_k >= 0 and the expression coincides with the
upper-index-symmetric form binom(e, n-3) + binom(e, n-2) - 2 binom(e, n-1)
under the convention binom(a,b) = 0 for b < 0 or b > a; the generalized
form is also correct at n = 2, where e_k is negative.

Summing f(n,r) over r collapses, via the signed divisor count
theta(k) = (-1)^(k-1) sigma0_odd(k), to the closed form for the expected
age; the second moment uses E(D^2) = sum (2r-1) P(D >= r).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import series as _series
from . import tree as _tree
from .enumeration import catalan, enumerate_trees
from .errors import CapacityError

__all__ = [
    "DistributionTable",
    "MomentReport",
    "odd_divisor_count",
    "age_count_geq",
    "age_distribution",
    "expected_age",
    "expected_age_via_survivals",
    "age_variance",
    "expected_ancestor_size",
    "ancestor_distribution",
    "age_moment_report",
    "ancestor_moment_report",
    "max_ancestor_size",
]


def _gb(a: int, b: int) -> int:
    """Generalized binomial coefficient with integer upper index."""
    if b < 0:
        return 0
    if a >= 0:
        return math.comb(a, b) if b <= a else 0
    return (-1) ** b * math.comb(b - a - 1, b)


def _extraction_term(n: int, k: int) -> int:
    """[u^(n-1-k)] (1 + u - 2u^2) (1+u)^(2n-4-k)."""
    e = 2 * n - 4 - k
    beta = n - 1 - k
    return _gb(e, beta) + _gb(e, beta - 1) - 2 * _gb(e, beta - 2)


@lru_cache(maxsize=16)
def _extraction_table(n: int) -> tuple[int, ...]:
    """_extraction_term(n, k) for k = 1..n-1 (all later k give 0).

    Built with three running binomials stepped by the exact ratio
    binom(a-1, b-1) = binom(a, b) * b / a, which beats recomputing
    math.comb at every k for large n.
    """
    if n < 2:
        return ()
    if n == 2:
        return (_extraction_term(2, 1),)
    m = n - 2  # beta at k = 1; the upper index stays m + n - 3
    b0 = math.comb(2 * n - 5, m)
    b1 = math.comb(2 * n - 5, m - 1) if m >= 1 else 0
    b2 = math.comb(2 * n - 5, m - 2) if m >= 2 else 0
    out = []
    for _k in range(1, n):
        out.append(b0 + b1 - 2 * b2)
        if m >= 1:
            upper = m + n - 3
            b0 = b0 * m // upper
            b1 = b1 * (m - 1) // upper
            b2 = b2 * (m - 2) // upper if m >= 2 else 0
            m -= 1
    return tuple(out)


def odd_divisor_count(k: int) -> int:
    """Number of odd divisors of k."""
    if k < 1:
        raise ValueError("k must be positive")
    while k % 2 == 0:
        k //= 2
    count = 0
    d = 1
    while d * d <= k:
        if k % d == 0:
            count += 1 if d * d == k else 2
        d += 1
    return count


def age_count_geq(n: int, r: int) -> int:
    """f(n,r): number of size-n Catalan-Stanley trees of age >= r."""
    if n < 1:
        raise ValueError("size must be positive")
    if r < 1:
        raise ValueError("r must be at least 1")
    if n == 1:
        return 0
    table = _extraction_table(n)
    total = 0
    sign = 1
    k = 2 * r - 1
    while k <= n - 1:
        total += sign * table[k - 1]
        sign = -sign
        k += 2 * r - 1
    return total


def _survival_counts(n: int) -> list[int]:
    """[f(n,1), ..., f(n, floor(n/2))]."""
    return [age_count_geq(n, r) for r in range(1, n // 2 + 1)]


def expected_age(n: int) -> Fraction:
    """Closed form: (1/C(n-2)) sum_k (-1)^(k+1) sigma0_odd(k) * term(n,k).

    The sum terminates at k = n-1, beyond which every term vanishes.
    """
    if n < 1:
        raise ValueError("size must be positive")
    if n == 1:
        return Fraction(0)
    table = _extraction_table(n)
    total = 0
    for k in range(1, n):
        term = table[k - 1]
        if term:
            total += (-1) ** (k + 1) * odd_divisor_count(k) * term
    return Fraction(total, catalan(n - 2))


def expected_age_via_survivals(n: int) -> Fraction:
    """Independent route: E D_n = sum_r P(D_n >= r)."""
    if n < 1:
        raise ValueError("size must be positive")
    if n == 1:
        return Fraction(0)
    return Fraction(sum(_survival_counts(n)), catalan(n - 2))


def age_variance(n: int) -> Fraction:
    """V D_n from E(D^2) = sum_r (2r-1) P(D_n >= r)."""
    if n < 1:
        raise ValueError("size must be positive")
    if n == 1:
        return Fraction(0)
    counts = _survival_counts(n)
    total_trees = catalan(n - 2)
    second = Fraction(
        sum((2 * r - 1) * f for r, f in enumerate(counts, start=1)), total_trees
    )
    mean = Fraction(sum(counts), total_trees)
    return second - mean * mean


@dataclass(frozen=True, slots=True)
class DistributionTable:
    """Exact pmf of the age or of an ancestor size at one tree size."""

    size_n: int
    kind: str  # "age" or "ancestor"
    r: int | None
    support: tuple[int, ...]
    masses: tuple[Fraction, ...]

    def __post_init__(self):
        if self.kind not in ("age", "ancestor"):
            raise ValueError("kind must be 'age' or 'ancestor'")
        if len(self.support) != len(self.masses):
            raise ValueError("support and masses differ in length")
        if any(m < 0 for m in self.masses):
            raise ValueError("negative mass")
        if sum(self.masses, Fraction(0)) != 1:
            raise ValueError("masses must sum to 1 exactly")
        if list(self.support) != sorted(set(self.support)):
            raise ValueError("support must be strictly ascending")

    def mass(self, value: int) -> Fraction:
        try:
            return self.masses[self.support.index(value)]
        except ValueError:
            return Fraction(0)

    def mean(self) -> Fraction:
        return sum((v * m for v, m in zip(self.support, self.masses)), Fraction(0))

    def second_factorial_moment(self) -> Fraction:
        return sum(
            (v * (v - 1) * m for v, m in zip(self.support, self.masses)), Fraction(0)
        )

    def variance(self) -> Fraction:
        mean = self.mean()
        second = sum(
            (v * v * m for v, m in zip(self.support, self.masses)), Fraction(0)
        )
        return second - mean * mean

    def to_csv(self) -> str:
        lines = ["value,numerator,denominator"]
        lines += [
            f"{v},{m.numerator},{m.denominator}"
            for v, m in zip(self.support, self.masses)
        ]
        return "\n".join(lines)

    def to_json(self) -> str:
        return json.dumps(
            {
                "n": self.size_n,
                "kind": self.kind,
                "r": self.r,
                "pmf": {str(v): str(m) for v, m in zip(self.support, self.masses)},
            }
        )


@dataclass(frozen=True, slots=True)
class MomentReport:
    """Expectation and variance of one statistic, tagged with its source."""

    n: int
    r: int | None
    expectation: Fraction
    variance: Fraction
    source: str  # formula | series | brute-force

    def __post_init__(self):
        if self.source not in ("formula", "series", "brute-force"):
            raise ValueError("unknown source")
        if self.variance < 0:
            raise ValueError("variance must be nonnegative")

    def to_json(self) -> str:
        return json.dumps(
            {
                "n": self.n,
                "r": self.r,
                "expectation": str(self.expectation),
                "variance": str(self.variance),
                "source": self.source,
            }
        )


def age_distribution(n: int) -> DistributionTable:
    """P(D_n = r) = (f(n,r) - f(n,r+1)) / C(n-2) over r in [1, floor(n/2)]."""
    if n < 1:
        raise ValueError("size must be positive")
    if n == 1:
        return DistributionTable(1, "age", None, (0,), (Fraction(1),))
    counts = _survival_counts(n) + [0]
    total_trees = catalan(n - 2)
    support = []
    masses = []
    for r in range(1, n // 2 + 1):
        mass = Fraction(counts[r - 1] - counts[r], total_trees)
        if mass:
            support.append(r)
            masses.append(mass)
    return DistributionTable(n, "age", None, tuple(support), tuple(masses))


def expected_ancestor_size(n: int, r: int) -> Fraction:
    """E X_{n,r} = binom(2n-2r-4, n-2)/C(n-2) + 1.

    Out-of-range binomials (negative or too small upper index) are 0,
    which covers r past floor(n/2); the formula extends to r = 0, where
    it returns n exactly.
    """
    if n < 1:
        raise ValueError("size must be positive")
    if r < 0:
        raise ValueError("r must be nonnegative")
    if n == 1:
        return Fraction(1)
    upper = 2 * n - 2 * r - 4
    numerator = math.comb(upper, n - 2) if 0 <= n - 2 <= upper else 0
    return Fraction(numerator, catalan(n - 2)) + 1


def max_ancestor_size(n: int, r: int) -> int:
    """Largest attainable r-th ancestor size among size-n trees.

    One reduction removes exactly 1 node only from the 2-chain and at
    least 2 nodes otherwise, while decorations above the active spine
    survive; that forces the maximum to n-2r when n >= 2r+2 (except the
    parity-locked n = 2r+3, where it is 2) and 1 once n <= 2r+1.
    """
    if n < 1:
        raise ValueError("size must be positive")
    if r < 0:
        raise ValueError("r must be nonnegative")
    if r == 0:
        return n
    if n <= 2 * r + 1:
        return 1
    if n == 2 * r + 3:
        return 2
    return n - 2 * r


def ancestor_distribution(n: int, r: int, order: int | None = None) -> DistributionTable:
    """Exact pmf of the r-th ancestor size, read off the z^n slice of G_r."""
    if n < 1:
        raise ValueError("size must be positive")
    if r < 0:
        raise ValueError("r must be nonnegative")
    if n == 1:
        return DistributionTable(1, "ancestor", r, (1,), (Fraction(1),))
    if r == 0:
        return DistributionTable(n, "ancestor", 0, (n,), (Fraction(1),))
    if order is None:
        order = n
    if order < n:
        raise CapacityError(
            f"series order {order} too small for size {n}; requires order >= {n}"
        )
    slice_n = _series.series_G(r, order).slice_z(n)
    total_trees = catalan(n - 2)
    support = tuple(sorted(m for m, c in slice_n.items() if c))
    masses = tuple(Fraction(slice_n[m], total_trees) for m in support)
    return DistributionTable(n, "ancestor", r, support, masses)


def _brute_ages(n: int) -> list[int]:
    return [_tree.age(t) for t in enumerate_trees(n)]


def age_moment_report(n: int, source: str = "formula") -> MomentReport:
    """Age mean/variance via the closed formulas, the survival series, or
    exhaustive enumeration."""
    if source == "formula":
        return MomentReport(n, None, expected_age(n), age_variance(n), source)
    if source == "series":
        if n == 1:
            return MomentReport(1, None, Fraction(0), Fraction(0), source)
        total_trees = catalan(n - 2)
        counts = [
            _series.series_F_geq(r, n).coefficient(n) for r in range(1, n // 2 + 1)
        ]
        mean = Fraction(sum(counts), total_trees)
        second = Fraction(
            sum((2 * r - 1) * f for r, f in enumerate(counts, start=1)), total_trees
        )
        return MomentReport(n, None, mean, second - mean * mean, source)
    if source == "brute-force":
        ages = _brute_ages(n)
        mean = Fraction(sum(ages), len(ages))
        second = Fraction(sum(a * a for a in ages), len(ages))
        return MomentReport(n, None, mean, second - mean * mean, source)
    raise ValueError("unknown source")


def ancestor_moment_report(n: int, r: int, source: str = "series") -> MomentReport:
    """Ancestor-size mean/variance from the joint series or enumeration.

    The mean-only closed form is expected_ancestor_size; no exact closed
    form for the variance exists, so 'formula' is not a valid source here.
    """
    if source == "series":
        table = ancestor_distribution(n, r)
        return MomentReport(n, r, table.mean(), table.variance(), source)
    if source == "brute-force":
        sizes = [_tree.ancestor(t, r).size() for t in enumerate_trees(n)]
        mean = Fraction(sum(sizes), len(sizes))
        second = Fraction(sum(s * s for s in sizes), len(sizes))
        return MomentReport(n, r, mean, second - mean * mean, source)
    raise ValueError("source must be 'series' or 'brute-force'")
