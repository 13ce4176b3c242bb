"""Limiting distribution and asymptotic expansions for large tree size.

The survival probabilities of the age stabilize: P(D_n >= r) is
h(r) - g(r)/n + O(r^5 3^-r n^-2) with the exact rationals

    h(r) = 4 (4^r (3r-1) + 1) / (4^r + 2)^2,
    g(r) = (6*64^r (2r^3-5r^2+4r-1) - 6*16^r (16r^3-24r^2+10r-1)
            + 24*4^r (2r-1) r^2) / (4^r + 2)^4,

so P(D_n = r) telescopes to (h(r)-h(r+1)) - (g(r)-g(r+1))/n + ...  The
limit constants are the sums

    c0 = sum h(r),             c1 = -sum g(r),
    c2 = sum (2r-1) h(r) - c0^2,
    c3 = -sum (2r-1) g(r) - 2 c0 c1,

with E D_n = c0 + c1/n + O(n^-2) and V D_n = c2 + c3/n + O(n^-2).  Terms
decay like poly(r) 4^-r; summation stops when an explicit geometric
majorant of the tail drops below the requested accuracy, so each constant
is rigorous to the requested number of digits.

Ancestor sizes: E X_{n,r} and V X_{n,r} expand in powers of n with
explicit rational (and sqrt(pi)) coefficients; the three resp. four
printed terms are evaluated here with error tags O(n^-3/2) resp. O(1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .errors import CapacityError

__all__ = [
    "AsymptoticEstimate",
    "ConstantSpec",
    "survival_leading",
    "survival_correction",
    "constant_c",
    "constant_digits",
    "prob_age_asym",
    "expected_age_asym",
    "age_variance_asym",
    "expected_ancestor_asym",
    "ancestor_variance_asym",
]

MAX_DIGITS = 60


@dataclass(frozen=True, slots=True)
class AsymptoticEstimate:
    value: float
    order_tag: str
    terms_used: int

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise ValueError("estimate must be finite")
        if self.terms_used < 1:
            raise ValueError("terms_used must be at least 1")


@dataclass(frozen=True, slots=True)
class ConstantSpec:
    index: int
    requested_digits: int

    def __post_init__(self):
        if self.index not in (0, 1, 2, 3):
            raise ValueError("index must be 0..3")
        if self.requested_digits < 1:
            raise ValueError("requested_digits must be positive")
        if self.requested_digits > MAX_DIGITS:
            raise CapacityError(
                f"at most {MAX_DIGITS} digits supported "
                f"(requested {self.requested_digits})"
            )


def survival_leading(r: int) -> Fraction:
    """h(r): limit of P(D_n >= r) as n grows."""
    if r < 1:
        raise ValueError("r must be at least 1")
    p = 4**r
    return Fraction(4 * (p * (3 * r - 1) + 1), (p + 2) ** 2)


def survival_correction(r: int) -> Fraction:
    """g(r): coefficient of -1/n in P(D_n >= r)."""
    if r < 1:
        raise ValueError("r must be at least 1")
    p = 4**r
    numerator = (
        6 * 64**r * (2 * r**3 - 5 * r**2 + 4 * r - 1)
        - 6 * 16**r * (16 * r**3 - 24 * r**2 + 10 * r - 1)
        + 24 * p * (2 * r - 1) * r**2
    )
    return Fraction(numerator, (p + 2) ** 4)


# tail majorants: |term(r)| <= A * r^p * 4^-r, verified directly in tests;
# sum_{r>R} r^p 4^-r <= (R+1)^p 4^-(R+1) * sum_k (1+k)^p 4^-k = majorant * S_p
_MAJORANTS = {
    0: (lambda r: survival_leading(r), 16, 1),
    1: (lambda r: survival_correction(r), 160, 3),
    2: (lambda r: (2 * r - 1) * survival_leading(r), 32, 2),
    3: (lambda r: (2 * r - 1) * survival_correction(r), 320, 4),
}
_GEOMETRIC_SUMS = {
    1: Fraction(16, 9),
    2: Fraction(80, 27),
    3: Fraction(528, 81),
    4: Fraction(4560, 243),
}

_constant_cache: dict[tuple[int, int], mpmath.mpf] = {}


def _sum_with_tail_bound(term, amplitude: int, power: int, digits: int):
    """Sum term(r) until the geometric tail majorant is below 10^-(digits+5)."""
    target = mpmath.mpf(10) ** (-(digits + 5))
    s_p = _GEOMETRIC_SUMS[power]
    total = mpmath.mpf(0)
    r = 1
    terms = 0
    while True:
        value = term(r)
        total += mpmath.mpf(value.numerator) / mpmath.mpf(value.denominator)
        terms += 1
        tail = (
            mpmath.mpf(amplitude * (r + 1) ** power)
            * mpmath.mpf(s_p.numerator)
            / mpmath.mpf(s_p.denominator)
            / mpmath.mpf(4) ** (r + 1)
        )
        if tail < target:
            return total, terms
        r += 1


def _constant(index: int, digits: int) -> mpmath.mpf:
    key = (index, digits)
    cached = _constant_cache.get(key)
    if cached is not None:
        return cached
    with mpmath.workdps(digits + 15):
        term, amplitude, power = _MAJORANTS[index]
        total, _ = _sum_with_tail_bound(term, amplitude, power, digits)
        if index == 1:
            value = -total
        elif index == 0:
            value = total
        elif index == 2:
            c0 = _constant(0, digits + 5)
            value = total - c0 * c0
        else:
            c0 = _constant(0, digits + 5)
            c1 = _constant(1, digits + 5)
            value = -total - 2 * c0 * c1
        result = +value
    _constant_cache[key] = result
    return result


def constant_c(spec: ConstantSpec) -> mpmath.mpf:
    """c0..c3 to the requested number of decimal digits."""
    return _constant(spec.index, spec.requested_digits)


def constant_digits(index: int, digits: int) -> str:
    """Decimal string with `digits` significant digits."""
    value = constant_c(ConstantSpec(index, digits))
    with mpmath.workdps(digits + 15):
        return mpmath.nstr(value, digits, strip_zeros=False)


def _constants_float() -> tuple[float, float, float, float]:
    return tuple(float(_constant(i, 30)) for i in range(4))


def prob_age_asym(n: int, r: int) -> AsymptoticEstimate:
    """Two-term expansion of P(D_n = r)."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if r < 1:
        raise ValueError("r must be at least 1")
    leading = survival_leading(r) - survival_leading(r + 1)
    correction = survival_correction(r) - survival_correction(r + 1)
    return AsymptoticEstimate(float(leading) - float(correction) / n, "O(n^-2)", 2)


def expected_age_asym(n: int) -> AsymptoticEstimate:
    """E D_n ~ c0 + c1/n."""
    if n < 2:
        raise ValueError("n must be at least 2")
    c0, c1, _, _ = _constants_float()
    return AsymptoticEstimate(c0 + c1 / n, "O(n^-2)", 2)


def age_variance_asym(n: int) -> AsymptoticEstimate:
    """V D_n ~ c2 + c3/n."""
    if n < 2:
        raise ValueError("n must be at least 2")
    _, _, c2, c3 = _constants_float()
    return AsymptoticEstimate(c2 + c3 / n, "O(n^-2)", 2)


def expected_ancestor_asym(n: int, r: int) -> AsymptoticEstimate:
    """Three-term expansion of E X_{n,r}; exact (= n) at r = 0."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if r < 0:
        raise ValueError("r must be nonnegative")
    p = 4**r
    linear = Fraction(n, p)
    const = Fraction(2 * p - 2 * r**2 + r - 2, 2 * p)
    inverse = Fraction((2 * r + 1) * (2 * r - 1) * (r - 3) * r, 2 * 4 ** (r + 1))
    value = float(linear) + float(const) + float(inverse) / n
    return AsymptoticEstimate(value, "O(n^-3/2)", 3)


def ancestor_variance_asym(n: int, r: int) -> AsymptoticEstimate:
    """Four-term expansion of V X_{n,r} (n^2, n^3/2, n, n^1/2); identically
    0 at r = 0."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if r < 0:
        raise ValueError("r must be nonnegative")
    p4 = 4**r
    p16 = 16**r
    sqrt_pi = math.sqrt(math.pi)
    quadratic = Fraction((2**r + 1) * (2**r - 1), p16)
    n32_coeff = sqrt_pi * (p4 * (3 * r + 1) - 1) / (3 * p16)
    linear = Fraction(
        18 * p4 * r**2 + 3 * p4 * r - 38 * p4 + 36 * r**2 - 42 * r + 38, 18 * p16
    )
    n12_coeff = 5 * sqrt_pi * (p4 * (3 * r + 1) - 1) / (8 * p16)
    value = (
        float(quadratic) * n * n
        - n32_coeff * n**1.5
        + float(linear) * n
        + n12_coeff * math.sqrt(n)
    )
    return AsymptoticEstimate(value, "O(1)", 4)
