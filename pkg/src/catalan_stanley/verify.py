"""Cross-module verification harness.

Every closed formula in the package has at least one independent route:
exhaustive enumeration for small sizes, coefficient extraction from the
series engine, the binomial sums, and the sampler.  This module runs all
of those comparisons and reports each as a named check; the CLI `verify`
subcommand maps a failed check to a nonzero exit status.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from . import asymptotics
from . import tree as tree_ops
from .enumeration import (
    count_trees,
    enumerate_trees,
    plane_trees,
    sample_reduced_sizes,
    sample_trees,
    SamplerConfig,
    sample_tree,
)
from .series import (
    BivariateSeries,
    TruncatedSeries,
    phi_apply,
    phi_power,
    series_F_geq,
    series_F_leq,
    series_G,
    series_S,
    series_T,
)
from .stats import (
    age_count_geq,
    age_distribution,
    ancestor_distribution,
    age_variance,
    expected_age,
    expected_age_via_survivals,
    expected_ancestor_size,
    max_ancestor_size,
)
from .tree import dyck_to_tree, has_odd_returns, is_catalan_stanley, tree_to_dyck

__all__ = ["Check", "VerifyReport", "run_verification", "REFERENCE_CONSTANT_DIGITS"]

# published 50-digit reference values for c0..c3
REFERENCE_CONSTANT_DIGITS = (
    "2.7182536428679528526648361928219367344585435680344",
    "-4.2220971510158840823821873477600478080816411210406",
    "0.91845604214374797357797147814019496503688953933967",
    "-9.1621753200836274996912436568310268988536534594942",
)

_LADDER = (100, 200, 400, 800)


@dataclass(frozen=True, slots=True)
class Check:
    name: str
    params: str
    passed: bool
    lhs: str
    rhs: str

    def to_line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name} [{self.params}] lhs={self.lhs} rhs={self.rhs}"


@dataclass
class VerifyReport:
    checks: list[Check] = field(default_factory=list)

    def add(self, name: str, params: str, lhs, rhs, passed: bool | None = None) -> None:
        if passed is None:
            passed = lhs == rhs
        self.checks.append(Check(name, params, passed, str(lhs), str(rhs)))

    @property
    def num_passed(self) -> int:
        return sum(c.passed for c in self.checks)

    @property
    def num_failed(self) -> int:
        return len(self.checks) - self.num_passed

    @property
    def ok(self) -> bool:
        return self.num_failed == 0

    def to_text(self) -> str:
        lines = [c.to_line() for c in self.checks]
        lines.append(f"passed {self.num_passed} failed {self.num_failed}")
        return "\n".join(lines)

    def to_json(self) -> str:
        return json.dumps(
            {
                "checks": [
                    {
                        "name": c.name,
                        "params": c.params,
                        "passed": c.passed,
                        "lhs": c.lhs,
                        "rhs": c.rhs,
                    }
                    for c in self.checks
                ],
                "passed": self.num_passed,
                "failed": self.num_failed,
            }
        )


@dataclass
class _Census:
    """Everything the checks need from one exhaustive enumeration pass."""

    n: int
    count: int
    all_valid: bool
    roundtrip_ok: bool
    age_formula: Counter
    age_iterated: Counter
    age_match: bool
    closure_ok: bool
    contraction_ok: bool
    ancestor_sizes: dict[int, Counter]
    ancestor_sum: dict[int, int]


def _build_census(n: int, max_r: int) -> _Census:
    age_formula: Counter = Counter()
    age_iterated: Counter = Counter()
    ancestor_sizes: dict[int, Counter] = {r: Counter() for r in range(1, max_r + 1)}
    ancestor_sum = {r: 0 for r in range(1, max_r + 1)}
    count = 0
    all_valid = True
    roundtrip_ok = True
    closure_ok = True
    contraction_ok = True
    age_match = True
    for tau in enumerate_trees(n):
        count += 1
        if not is_catalan_stanley(tau):
            all_valid = False
        if dyck_to_tree(tree_to_dyck(tau)) != tau:
            roundtrip_ok = False
        by_formula = tree_ops.age(tau)
        age_formula[by_formula] += 1
        # reduction chain: sizes after each application, down to the root
        steps = 0
        current = tau
        chain_sizes = []
        while not current.is_leaf:
            following = tree_ops.reduce(current)
            if not is_catalan_stanley(following):
                closure_ok = False
            before, after = current.size(), following.size()
            if before >= 3 and after > before - 2:
                contraction_ok = False
            if before == 2 and after != 1:
                contraction_ok = False
            current = following
            steps += 1
            chain_sizes.append(after)
        age_iterated[steps] += 1
        if by_formula != steps:
            age_match = False
        for r in range(1, max_r + 1):
            size_r = chain_sizes[r - 1] if r <= len(chain_sizes) else 1
            ancestor_sizes[r][size_r] += 1
            ancestor_sum[r] += size_r
    return _Census(
        n,
        count,
        all_valid,
        roundtrip_ok,
        age_formula,
        age_iterated,
        age_match,
        closure_ok,
        contraction_ok,
        ancestor_sizes,
        ancestor_sum,
    )


def _check_tree_layer(report: VerifyReport, censuses: dict[int, _Census], max_size: int) -> None:
    for n in range(2, max_size + 1):
        c = censuses[n]
        report.add(f"count({n})", f"n={n}", c.count, count_trees(n))
        report.add(f"enumerated_valid({n})", f"n={n}", c.all_valid, True)
        if n <= 12:
            report.add(f"bijection_roundtrip({n})", f"n={n}", c.roundtrip_ok, True)
        report.add(f"closure({n})", f"n={n}", c.closure_ok, True)
        report.add(f"contraction({n})", f"n={n}", c.contraction_ok, True)
        report.add(
            f"age_consistency({n})",
            f"n={n}",
            (c.age_match, sorted(c.age_formula.items())),
            (True, sorted(c.age_iterated.items())),
        )
        ages = sorted(c.age_formula)
        report.add(
            f"age_bounds({n})",
            f"n={n}",
            (ages[0], ages[-1]),
            (1, n // 2),
        )
    for n in range(1, min(10, max_size) + 1):
        flags_ok = all(
            is_catalan_stanley(tau) == has_odd_returns(tree_to_dyck(tau))
            for tau in plane_trees(n)
        )
        report.add(f"parity_correspondence({n})", f"n={n}", flags_ok, True)


def _check_stats_layer(
    report: VerifyReport, censuses: dict[int, _Census], max_size: int, max_r: int, order: int
) -> None:
    survival_series = {
        r: series_F_geq(r, max_size) for r in range(1, max_r + 1)
    }
    for n in range(2, max_size + 1):
        c = censuses[n]
        for r in range(1, max_r + 1):
            brute = sum(v for a, v in c.age_formula.items() if a >= r)
            formula = age_count_geq(n, r)
            report.add(f"f({n},{r})={brute}", f"n={n} r={r}", brute, formula)
            report.add(
                f"f_series({n},{r})",
                f"n={n} r={r}",
                brute,
                survival_series[r].coefficient(n),
            )
        total = c.count
        brute_mean = Fraction(sum(a * v for a, v in c.age_formula.items()), total)
        table = age_distribution(n)
        report.add(
            f"expected_age({n})",
            f"n={n}",
            (expected_age(n), table.mean()),
            (brute_mean, brute_mean),
        )
        brute_second = Fraction(
            sum(a * a * v for a, v in c.age_formula.items()), total
        )
        report.add(
            f"age_variance({n})",
            f"n={n}",
            age_variance(n),
            brute_second - brute_mean * brute_mean,
        )
        brute_pmf = {
            a: Fraction(v, total) for a, v in sorted(c.age_formula.items())
        }
        report.add(
            f"age_pmf({n})",
            f"n={n}",
            dict(zip(table.support, table.masses)),
            brute_pmf,
        )
        for r in range(1, min(3, max_r) + 1):
            brute_mean_r = Fraction(c.ancestor_sum[r], total)
            report.add(
                f"ancestor_mean({n},{r})",
                f"n={n} r={r}",
                expected_ancestor_size(n, r),
                brute_mean_r,
            )
            dist = ancestor_distribution(n, r)
            brute_sizes = {
                m: Fraction(v, total) for m, v in sorted(c.ancestor_sizes[r].items())
            }
            report.add(
                f"ancestor_pmf({n},{r})",
                f"n={n} r={r}",
                dict(zip(dist.support, dist.masses)),
                brute_sizes,
            )
        for r in range(1, max_r + 1):
            sizes = sorted(c.ancestor_sizes[r])
            upper = n - 2 * (r - 1) - 1
            within = sizes[0] >= 1 and sizes[-1] <= max(upper, 1)
            report.add(
                f"ancestor_bounds({n},{r})",
                f"n={n} r={r}",
                (within, sizes[0], sizes[-1]),
                (True, 1, max_ancestor_size(n, r)),
            )
    for n in _LADDER:
        report.add(
            f"expected_age_vs_survivals({n})",
            f"n={n}",
            expected_age(n),
            expected_age_via_survivals(n),
        )


def _check_series_layer(report: VerifyReport, max_r: int, order: int) -> None:
    t = series_T(order)
    report.add(
        "T_functional_equation",
        f"order={order}",
        TruncatedSeries.z(order) + t * t,
        t,
    )
    s = series_S(order)
    diagonal = s.diagonal()
    counts = TruncatedSeries(
        [0] + [count_trees(n) for n in range(1, order + 1)], order
    )
    report.add("S_diagonal_counts", f"order={order}", diagonal, counts)

    fixed_order = min(order, 20)
    s_fixed = series_S(fixed_order)
    report.add(
        "phi_fixed_point", f"order={fixed_order}", phi_apply(s_fixed), s_fixed
    )

    iter_order = min(order, 12)
    z_mono = BivariateSeries.monomial(1, 0, iter_order)
    zt_mono = BivariateSeries.monomial(1, 1, iter_order)
    s_small = series_S(iter_order)
    for r in range(0, min(5, max_r) + 1):
        for label, f in (("z", z_mono), ("zt", zt_mono), ("S", s_small)):
            iterated = f
            for _ in range(r):
                iterated = phi_apply(iterated)
            report.add(
                f"phi_power_vs_iterated({label},{r})",
                f"r={r} order={iter_order}",
                phi_power(f, r),
                iterated,
            )
    for r in range(0, max_r + 1):
        report.add(
            f"F_leq_is_phi_power({r})",
            f"r={r} order={order}",
            series_F_leq(r, order),
            phi_power(BivariateSeries.monomial(1, 0, order), r),
        )
    s_diag = series_S(order).diagonal()
    previous = series_F_leq(0, order).diagonal()
    monotone = True
    for r in range(1, order // 2 + 2):
        current = series_F_leq(r, order).diagonal()
        if any(
            current.coefficient(n) < previous.coefficient(n)
            for n in range(order + 1)
        ):
            monotone = False
        previous = current
    report.add("F_leq_monotone", f"order={order}", monotone, True)
    report.add(
        "F_leq_stabilizes",
        f"order={order}",
        series_F_leq(order // 2 + 1, order).diagonal(),
        s_diag,
    )
    for r in range(1, max_r + 1):
        report.add(
            f"F_geq_identity({r})",
            f"r={r} order={order}",
            series_F_geq(r, order),
            s_diag - series_F_leq(r - 1, order).diagonal(),
        )
    g0 = series_G(0, min(order, 12))
    diag_ok = all(i == j for (i, j), _c in g0.items()) and all(
        g0.coefficient(n, n) == count_trees(n) for n in range(1, g0.order + 1)
    )
    report.add("G0_is_diagonal", f"order={g0.order}", diag_ok, True)


def _check_asymptotics_layer(report: VerifyReport) -> None:
    for i in range(4):
        computed = asymptotics.constant_digits(i, 30)
        with mpmath.workdps(60):
            close = bool(
                abs(mpmath.mpf(computed) - mpmath.mpf(REFERENCE_CONSTANT_DIGITS[i]))
                < mpmath.mpf(10) ** -28
            )
        report.add(f"constant_c{i}_digits", "digits=30", close, True)

    with mpmath.workdps(60):
        telescoped = mpmath.mpf(0)
        for r in range(1, 200):
            h_r = asymptotics.survival_leading(r)
            h_next = asymptotics.survival_leading(r + 1)
            telescoped += mpmath.mpf(
                (h_r - h_next).numerator
            ) / mpmath.mpf((h_r - h_next).denominator)
        report.add(
            "limit_pmf_telescopes",
            "R=200",
            bool(abs(telescoped - 1) < mpmath.mpf(10) ** -10),
            True,
        )
        second_moment = mpmath.mpf(0)
        for r in range(1, 200):
            term = (2 * r - 1) * asymptotics.survival_leading(r)
            second_moment += mpmath.mpf(term.numerator) / mpmath.mpf(term.denominator)
        c0 = asymptotics.constant_c(asymptotics.ConstantSpec(0, 40))
        c2 = asymptotics.constant_c(asymptotics.ConstantSpec(2, 40))
        report.add(
            "c2_consistency",
            "tail<1e-40",
            bool(abs((second_moment - c0 * c0) - c2) < mpmath.mpf(10) ** -25),
            True,
        )

    with mpmath.workdps(50):
        c0 = asymptotics.constant_c(asymptotics.ConstantSpec(0, 40))
        c1 = asymptotics.constant_c(asymptotics.ConstantSpec(1, 40))
        c2 = asymptotics.constant_c(asymptotics.ConstantSpec(2, 40))
        c3 = asymptotics.constant_c(asymptotics.ConstantSpec(3, 40))
        mean_errors = []
        var_errors = []
        for n in _LADDER:
            exact_mean = expected_age(n)
            exact_var = age_variance(n)
            mean_errors.append(
                abs(
                    mpmath.mpf(exact_mean.numerator) / exact_mean.denominator
                    - (c0 + c1 / n)
                )
            )
            var_errors.append(
                abs(
                    mpmath.mpf(exact_var.numerator) / exact_var.denominator
                    - (c2 + c3 / n)
                )
            )
        mean_ratios = [
            float(a / b) for a, b in zip(mean_errors, mean_errors[1:])
        ]
        var_ratios = [float(a / b) for a, b in zip(var_errors, var_errors[1:])]
    report.add(
        "age_mean_convergence",
        f"ladder={_LADDER}",
        all(2.5 <= q <= 6.0 for q in mean_ratios),
        True,
    )
    report.add(
        "age_variance_convergence",
        f"ladder={_LADDER}",
        all(2.5 <= q <= 6.0 for q in var_ratios),
        True,
    )

    ancestor_errors = []
    for n in _LADDER:
        prediction = (
            Fraction(n, 4)
            + Fraction(2 * 4 - 2 + 1 - 2, 2 * 4)
            + Fraction(3 * 1 * (1 - 3) * 1, 2 * 16) / n
        )
        ancestor_errors.append(abs(expected_ancestor_size(n, 1) - prediction))
    decays = all(
        float(a) / float(b) >= 2**1.5 / 2
        for a, b in zip(ancestor_errors, ancestor_errors[1:])
    )
    report.add("ancestor_mean_convergence", f"ladder={_LADDER}", decays, True)


def _chi_square_pvalue(observed: list[int], expected: list[float]) -> float:
    statistic = sum((o - e) ** 2 / e for o, e in zip(observed, expected))
    df = len(observed) - 1
    return float(
        mpmath.gammainc(mpmath.mpf(df) / 2, mpmath.mpf(statistic) / 2, mpmath.inf,
                        regularized=True)
    )


def _check_sampler_layer(report: VerifyReport) -> None:
    first = sample_tree(SamplerConfig(size=30, seed=12345))
    second = sample_tree(SamplerConfig(size=30, seed=12345))
    report.add("sampler_deterministic", "size=30 seed=12345", first.serialize(), second.serialize())

    samples = sample_trees(18, 500, seed=7)
    report.add(
        "sampler_valid",
        "size=18 count=500",
        all(is_catalan_stanley(t) and t.size() == 18 for t in samples),
        True,
    )

    n, draws = 5, 20000
    observed_counter = Counter(t.serialize() for t in sample_trees(n, draws, seed=11))
    keys = sorted(set(t.serialize() for t in enumerate_trees(n)))
    observed = [observed_counter.get(k, 0) for k in keys]
    expected = [draws / len(keys)] * len(keys)
    p_value = _chi_square_pvalue(observed, expected)
    report.add("sampler_uniform(5)", f"draws={draws}", p_value >= 0.001, True)

    from .enumeration import _ancestor_size_from_tokens

    token_census_ok = True
    for n in range(2, 11):
        for r in (1, 2, 3):
            via_tokens = Counter(
                _ancestor_size_from_tokens([c.size() for c in tau.children], r)
                for tau in plane_trees(n - 1)
            )
            via_reduce = Counter(
                tree_ops.ancestor(t, r).size() for t in enumerate_trees(n)
            )
            if via_tokens != via_reduce:
                token_census_ok = False
    report.add("reduced_size_bijection", "n<=10 r<=3", token_census_ok, True)

    exact = ancestor_distribution(9, 1)
    draws = 20000
    empirical = Counter(int(x) for x in sample_reduced_sizes(9, draws, seed=99))
    observed = [empirical.get(m, 0) for m in exact.support]
    expected = [float(p) * draws for p in exact.masses]
    leak = draws - sum(observed)
    p_value = _chi_square_pvalue(observed, expected) if leak == 0 else 0.0
    report.add("reduced_size_sampler(9,1)", f"draws={draws}", p_value >= 0.001, True)


def run_verification(max_size: int = 12, max_r: int = 5, order: int = 16) -> VerifyReport:
    """Run the whole invariant suite; see the CLI `verify` subcommand."""
    if max_size < 4:
        raise ValueError("max_size must be at least 4")
    if max_r < 1:
        raise ValueError("max_r must be at least 1")
    if order < 4:
        raise ValueError("order must be at least 4")
    report = VerifyReport()
    censuses = {n: _build_census(n, max_r) for n in range(2, max_size + 1)}
    _check_tree_layer(report, censuses, max_size)
    _check_stats_layer(report, censuses, max_size, max_r, order)
    _check_series_layer(report, max_r, order)
    _check_asymptotics_layer(report)
    _check_sampler_layer(report)
    return report
