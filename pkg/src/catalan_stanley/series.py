"""Truncated formal power series over exact rationals.

Carriers for the generating functions of the growth process: the plane
tree series T(z) with z + T^2 = T, the class series S(z,t) = z +
zt/(1 - t - T^2) where t marks the rightmost leaves in the branches at
the root, the expansion operator Phi(f)(z,t) = f(z, tT^2/(1-t))/(1-t)
together with its closed r-fold form, the age survival series, and the
ancestor-size series G_r(z,v).

Univariate series hold coefficients 0..N.  Bivariate series are truncated
to the box {z-degree <= N, second-degree <= N}; all operations used here
(sum, product, division by a unit, substitution of a series with positive
z-valuation) only ever move coefficients to higher degrees, so every
stored coefficient is exact.  No floating point enters this module.
"""

from __future__ import annotations

from fractions import Fraction

from .enumeration import catalan

__all__ = [
    "TruncatedSeries",
    "BivariateSeries",
    "series_T",
    "series_S",
    "phi_apply",
    "phi_power",
    "series_F_leq",
    "series_F_geq",
    "series_G",
]

_ZERO = Fraction(0)


class TruncatedSeries:
    """Power series in z, exact up to and including degree `order`."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs, order: int | None = None):
        values = [Fraction(c) for c in coeffs]
        if order is not None:
            if order < 0:
                raise ValueError("order must be nonnegative")
            values = values[: order + 1] + [_ZERO] * (order + 1 - len(values))
        elif not values:
            raise ValueError("empty coefficient list and no order given")
        self._coeffs = tuple(values)

    @classmethod
    def constant(cls, value, order: int) -> "TruncatedSeries":
        return cls([Fraction(value)], order)

    @classmethod
    def z(cls, order: int) -> "TruncatedSeries":
        return cls([0, 1], order)

    @property
    def order(self) -> int:
        return len(self._coeffs) - 1

    def coefficient(self, n: int) -> Fraction:
        if not 0 <= n <= self.order:
            raise ValueError(f"degree {n} outside computed order {self.order}")
        return self._coeffs[n]

    def coefficients(self) -> tuple[Fraction, ...]:
        return self._coeffs

    def valuation(self) -> int | None:
        for i, c in enumerate(self._coeffs):
            if c:
                return i
        return None

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise ValueError("cannot extend a series beyond its computed order")
        return TruncatedSeries(self._coeffs, order)

    def _aligned(self, other: "TruncatedSeries") -> int:
        return min(self.order, other.order)

    def __add__(self, other):
        if isinstance(other, TruncatedSeries):
            n = self._aligned(other)
            return TruncatedSeries(
                [a + b for a, b in zip(self._coeffs, other._coeffs)], n
            )
        return self + TruncatedSeries.constant(other, self.order)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries([-c for c in self._coeffs])

    def __sub__(self, other):
        if isinstance(other, TruncatedSeries):
            return self + (-other)
        return self + (-Fraction(other))

    def __rsub__(self, other):
        return (-self) + Fraction(other)

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            n = self._aligned(other)
            out = [_ZERO] * (n + 1)
            for i, a in enumerate(self._coeffs[: n + 1]):
                if not a:
                    continue
                for j in range(n + 1 - i):
                    b = other._coeffs[j]
                    if b:
                        out[i + j] += a * b
            return TruncatedSeries(out, n)
        scalar = Fraction(other)
        return TruncatedSeries([c * scalar for c in self._coeffs])

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, TruncatedSeries):
            n = self._aligned(other)
            lead = other._coeffs[0]
            if not lead:
                raise ValueError("series division requires a unit denominator")
            out = [_ZERO] * (n + 1)
            for k in range(n + 1):
                acc = self._coeffs[k]
                for i in range(1, k + 1):
                    b = other._coeffs[i]
                    if b:
                        acc -= b * out[k - i]
                out[k] = acc / lead
            return TruncatedSeries(out, n)
        scalar = Fraction(other)
        return self * (Fraction(1) / scalar)

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("only nonnegative integer powers are supported")
        result = TruncatedSeries.constant(1, self.order)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    def shift(self, k: int) -> "TruncatedSeries":
        """Multiply by z^k, dropping what leaves the truncation window."""
        if k < 0:
            raise ValueError("shift must be nonnegative")
        n = self.order
        return TruncatedSeries(([_ZERO] * k + list(self._coeffs))[: n + 1], n)

    def compose(self, inner: "TruncatedSeries") -> "TruncatedSeries":
        """self(inner(z)); inner must have valuation >= 1."""
        val = inner.valuation()
        if val is not None and val < 1:
            raise ValueError("composition requires inner valuation >= 1")
        n = self._aligned(inner)
        result = TruncatedSeries.constant(self._coeffs[n], n)
        inner_n = inner.truncate(n)
        for k in range(n - 1, -1, -1):
            result = result * inner_n + self._coeffs[k]
        return result

    def __eq__(self, other):
        return (
            isinstance(other, TruncatedSeries) and self._coeffs == other._coeffs
        )

    def __hash__(self):
        return hash(self._coeffs)

    def dump(self) -> str:
        """One line per nonzero coefficient: `n <numerator>/<denominator>`."""
        return "\n".join(
            f"{n} {c.numerator}/{c.denominator}"
            for n, c in enumerate(self._coeffs)
            if c
        )

    def __repr__(self):
        return f"TruncatedSeries(order={self.order}, {list(self._coeffs[:8])}...)"


class BivariateSeries:
    """Series in z and one marker variable, boxed at degree `order` in each."""

    __slots__ = ("_coeffs", "_order", "_var")

    def __init__(self, coeffs, order: int, var: str = "t"):
        if order < 0:
            raise ValueError("order must be nonnegative")
        if var not in ("t", "v"):
            raise ValueError("second variable must be 't' or 'v'")
        box: dict[tuple[int, int], Fraction] = {}
        for (i, j), c in dict(coeffs).items():
            if not 0 <= i or not 0 <= j:
                raise ValueError(f"negative exponent in monomial ({i}, {j})")
            if i > order or j > order:
                continue
            frac = Fraction(c)
            if frac:
                box[(i, j)] = frac
        self._coeffs = box
        self._order = order
        self._var = var

    @classmethod
    def constant(cls, value, order: int, var: str = "t") -> "BivariateSeries":
        return cls({(0, 0): Fraction(value)}, order, var)

    @classmethod
    def monomial(cls, i: int, j: int, order: int, var: str = "t", value=1) -> "BivariateSeries":
        return cls({(i, j): Fraction(value)}, order, var)

    @classmethod
    def from_univariate(cls, f: TruncatedSeries, order: int, var: str = "t") -> "BivariateSeries":
        data = {(i, 0): c for i, c in enumerate(f.coefficients()[: order + 1]) if c}
        return cls(data, order, var)

    @property
    def order(self) -> int:
        return self._order

    @property
    def var(self) -> str:
        return self._var

    def coefficient(self, i: int, j: int) -> Fraction:
        if not (0 <= i <= self._order and 0 <= j <= self._order):
            raise ValueError(f"monomial ({i}, {j}) outside computed box {self._order}")
        return self._coeffs.get((i, j), _ZERO)

    def items(self):
        """Nonzero coefficients in sorted monomial order."""
        return sorted(self._coeffs.items())

    def z_valuation(self) -> int | None:
        return min((i for (i, _j) in self._coeffs), default=None)

    def _check_compatible(self, other: "BivariateSeries") -> None:
        if self._var != other._var:
            raise ValueError(f"mixing variables {self._var!r} and {other._var!r}")
        if self._order != other._order:
            raise ValueError("mixing truncation orders")

    def __add__(self, other):
        if isinstance(other, BivariateSeries):
            self._check_compatible(other)
            out = dict(self._coeffs)
            for key, c in other._coeffs.items():
                out[key] = out.get(key, _ZERO) + c
            return BivariateSeries(out, self._order, self._var)
        return self + BivariateSeries.constant(other, self._order, self._var)

    __radd__ = __add__

    def __neg__(self):
        return BivariateSeries(
            {k: -c for k, c in self._coeffs.items()}, self._order, self._var
        )

    def __sub__(self, other):
        if isinstance(other, BivariateSeries):
            return self + (-other)
        return self + (-Fraction(other))

    def __rsub__(self, other):
        return (-self) + Fraction(other)

    def __mul__(self, other):
        if isinstance(other, BivariateSeries):
            self._check_compatible(other)
            n = self._order
            out: dict[tuple[int, int], Fraction] = {}
            for (i1, j1), c1 in self._coeffs.items():
                for (i2, j2), c2 in other._coeffs.items():
                    i, j = i1 + i2, j1 + j2
                    if i > n or j > n:
                        continue
                    key = (i, j)
                    out[key] = out.get(key, _ZERO) + c1 * c2
            return BivariateSeries(out, n, self._var)
        scalar = Fraction(other)
        return BivariateSeries(
            {k: c * scalar for k, c in self._coeffs.items()}, self._order, self._var
        )

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("only nonnegative integer powers are supported")
        result = BivariateSeries.constant(1, self._order, self._var)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    def __truediv__(self, other):
        if not isinstance(other, BivariateSeries):
            return self * (Fraction(1) / Fraction(other))
        self._check_compatible(other)
        lead = other._coeffs.get((0, 0), _ZERO)
        if not lead:
            raise ValueError("series division requires a unit denominator")
        n = self._order
        denom = [(k, c) for k, c in other._coeffs.items() if k != (0, 0)]
        out: dict[tuple[int, int], Fraction] = {}
        # graded long division: lower total degrees are settled before use
        for total in range(2 * n + 1):
            for i in range(max(0, total - n), min(total, n) + 1):
                j = total - i
                acc = self._coeffs.get((i, j), _ZERO)
                for (a, b), c in denom:
                    if a <= i and b <= j:
                        q = out.get((i - a, j - b))
                        if q is not None:
                            acc -= c * q
                if acc:
                    out[(i, j)] = acc / lead
        return BivariateSeries(out, n, self._var)

    def _rows(self) -> dict[int, "BivariateSeries"]:
        """Split by second-variable degree; each row has second-degree 0."""
        rows: dict[int, dict[tuple[int, int], Fraction]] = {}
        for (i, j), c in self._coeffs.items():
            rows.setdefault(j, {})[(i, 0)] = c
        return {
            j: BivariateSeries(data, self._order, self._var)
            for j, data in rows.items()
        }

    def substitute_second(self, g: "BivariateSeries") -> "BivariateSeries":
        """Replace the second variable by g(z, second); g needs z-valuation >= 1."""
        self._check_compatible(g)
        val = g.z_valuation()
        if val is not None and val < 1:
            raise ValueError("substitution requires z-valuation >= 1")
        rows = self._rows()
        if not rows:
            return BivariateSeries({}, self._order, self._var)
        top = max(rows)
        result = rows.get(top, BivariateSeries({}, self._order, self._var))
        for j in range(top - 1, -1, -1):
            result = result * g
            if j in rows:
                result = result + rows[j]
        return result

    def substitute_second_univariate(self, h: TruncatedSeries) -> TruncatedSeries:
        """Replace the second variable by a z-series of valuation >= 1."""
        val = h.valuation()
        if val is not None and val < 1:
            raise ValueError("substitution requires valuation >= 1")
        n = min(self._order, h.order)
        rows: dict[int, list[Fraction]] = {}
        for (i, j), c in self._coeffs.items():
            if i <= n:
                rows.setdefault(j, [_ZERO] * (n + 1))[i] = c
        if not rows:
            return TruncatedSeries([], n)
        top = max(rows)
        h_n = h.truncate(n)
        result = TruncatedSeries(rows.get(top, [_ZERO]), n)
        for j in range(top - 1, -1, -1):
            result = result * h_n
            if j in rows:
                result = result + TruncatedSeries(rows[j], n)
        return result

    def diagonal(self) -> TruncatedSeries:
        """Set the second variable equal to z."""
        out = [_ZERO] * (self._order + 1)
        for (i, j), c in self._coeffs.items():
            if i + j <= self._order:
                out[i + j] += c
        return TruncatedSeries(out, self._order)

    def slice_z(self, n: int) -> dict[int, Fraction]:
        """Coefficients of z^n as a map from second-variable degree."""
        if not 0 <= n <= self._order:
            raise ValueError(f"degree {n} outside computed order {self._order}")
        return {j: c for (i, j), c in sorted(self._coeffs.items()) if i == n}

    def __eq__(self, other):
        return (
            isinstance(other, BivariateSeries)
            and self._var == other._var
            and self._coeffs == other._coeffs
        )

    def __hash__(self):
        return hash((self._var, tuple(sorted(self._coeffs.items()))))

    def dump(self) -> str:
        """One line per nonzero coefficient: `n,m <numerator>/<denominator>`."""
        return "\n".join(
            f"{i},{j} {c.numerator}/{c.denominator}" for (i, j), c in self.items()
        )

    def __repr__(self):
        return (
            f"BivariateSeries(order={self._order}, var={self._var!r}, "
            f"{len(self._coeffs)} terms)"
        )


def series_T(order: int) -> TruncatedSeries:
    """Plane tree series: [z^n] T = C(n-1) for n >= 1; satisfies z + T^2 = T."""
    if order < 0:
        raise ValueError("order must be nonnegative")
    return TruncatedSeries([0] + [catalan(n - 1) for n in range(1, order + 1)], order)


def series_S(order: int) -> BivariateSeries:
    """Catalan-Stanley class series S(z,t) = z + zt/(1 - t - T^2)."""
    if order < 1:
        raise ValueError("order must be at least 1")
    t_sq = BivariateSeries.from_univariate(series_T(order) ** 2, order)
    den = (
        BivariateSeries.constant(1, order)
        - BivariateSeries.monomial(0, 1, order)
        - t_sq
    )
    return (
        BivariateSeries.monomial(1, 1, order) / den
        + BivariateSeries.monomial(1, 0, order)
    )


def _require_t(f: BivariateSeries) -> None:
    if f.var != "t":
        raise ValueError("operator input must use second variable 't'")


def phi_apply(f: BivariateSeries, order: int | None = None) -> BivariateSeries:
    """Expansion operator: Phi(f)(z,t) = f(z, tT^2/(1-t)) / (1-t).

    Enumerates all trees reducing into the family counted by f.
    """
    _require_t(f)
    n = f.order if order is None else order
    if n > f.order:
        _reject_extend(f, n)
    if n < f.order:
        f = BivariateSeries(dict(f.items()), n, f.var)
    one_minus_t = BivariateSeries.constant(1, n) - BivariateSeries.monomial(0, 1, n)
    t_sq = BivariateSeries.from_univariate(series_T(n) ** 2, n)
    g = BivariateSeries.monomial(0, 1, n) * t_sq / one_minus_t
    return f.substitute_second(g) / one_minus_t


def _reject_extend(f: BivariateSeries, order: int):
    raise ValueError(
        f"cannot extend a series computed to order {f.order} up to {order}"
    )


def _geometric_t_powers(order: int, r: int) -> TruncatedSeries:
    """(1 - T^{2r}) / (1 - T^2) written as the polynomial sum_{k<r} T^{2k}."""
    t = series_T(order)
    total = TruncatedSeries.constant(0, order)
    power = TruncatedSeries.constant(1, order)
    t_sq = t * t
    for _ in range(r):
        total = total + power
        power = power * t_sq
    return total


def phi_power(f: BivariateSeries, r: int, order: int | None = None) -> BivariateSeries:
    """Closed form of the r-fold expansion.

    Phi^r(f)(z,t) = W * f(z, t T^{2r} W) with
    W = 1 / (1 - t(1-T^{2r})/(1-T^2)); Phi^0 is the identity (the closed
    form degenerates to 0/0 there, so r = 0 is special-cased).
    """
    _require_t(f)
    if r < 0:
        raise ValueError("r must be nonnegative")
    n = f.order if order is None else order
    if n > f.order:
        _reject_extend(f, n)
    if n < f.order:
        f = BivariateSeries(dict(f.items()), n, f.var)
    if r == 0:
        return f
    geometric = BivariateSeries.from_univariate(_geometric_t_powers(n, r), n)
    w_den = BivariateSeries.constant(1, n) - BivariateSeries.monomial(0, 1, n) * geometric
    t_pow = BivariateSeries.from_univariate(series_T(n) ** (2 * r), n)
    inner = BivariateSeries.monomial(0, 1, n) * t_pow / w_den
    return f.substitute_second(inner) / w_den


def series_F_leq(r: int, order: int) -> BivariateSeries:
    """Trees of age <= r: F_r(z,t) = z / (1 - t(1-T^{2r})/(1-T^2))."""
    if r < 0:
        raise ValueError("r must be nonnegative")
    geometric = BivariateSeries.from_univariate(_geometric_t_powers(order, r), order)
    den = (
        BivariateSeries.constant(1, order)
        - BivariateSeries.monomial(0, 1, order) * geometric
    )
    return BivariateSeries.monomial(1, 0, order) / den


def series_F_geq(r: int, order: int) -> TruncatedSeries:
    """Trees of age >= r by size: z(1+T) T^{2r-1} / (1 + T^{2r-1})."""
    if r < 1:
        raise ValueError("r must be at least 1")
    t = series_T(order)
    t_pow = t ** (2 * r - 1)
    numerator = (TruncatedSeries.constant(1, order) + t).shift(1) * t_pow
    return numerator / (TruncatedSeries.constant(1, order) + t_pow)


def series_G(r: int, order: int) -> BivariateSeries:
    """Joint series of size (z) and r-th ancestor size (v).

    Built from the closed-form expansion applied to S(zv, tv) with t set
    to z afterwards, which collapses to
    G_r(z,v) = W(z) * S(zv, z T^{2r} W(z) v),
    W(z) = 1 / (1 - z(1-T^{2r})/(1-T^2)).
    """
    if r < 0:
        raise ValueError("r must be nonnegative")
    n = order
    t = series_T(n)
    w = TruncatedSeries.constant(1, n) / (
        TruncatedSeries.constant(1, n) - _geometric_t_powers(n, r).shift(1)
    )
    u_coeffs = (t ** (2 * r) * w).shift(1).coefficients()
    u = BivariateSeries({(i, 1): c for i, c in enumerate(u_coeffs) if c}, n, "v")
    t_zv = BivariateSeries(
        {(i, i): c for i, c in enumerate(t.coefficients()) if c}, n, "v"
    )
    zv = BivariateSeries.monomial(1, 1, n, "v")
    den = BivariateSeries.constant(1, n, "v") - u - t_zv * t_zv
    s_at = zv + zv * u / den
    return BivariateSeries.from_univariate(w, n, "v") * s_at
