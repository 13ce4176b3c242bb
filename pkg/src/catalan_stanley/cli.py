"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or domain error.
Output is deterministic for fixed flags and seed.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import asymptotics, stats, verify as verify_mod
from .enumeration import SamplerConfig, count_trees, enumerate_trees, sample_tree
from .errors import CapacityError, MalformedPathError, SamplingError, TreeParseError
from .tree import (
    DyckPath,
    age,
    dyck_to_tree,
    is_catalan_stanley,
    parse_tree,
    tree_to_dyck,
)

USAGE_ERROR = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="catalan-stanley",
        description="Catalan-Stanley tree growth process: exact and asymptotic statistics",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_count = sub.add_parser("count", help="number of trees of a given size")
    p_count.add_argument("--size", type=int, required=True)
    p_count.add_argument("--format", choices=("text", "json", "csv"), default="text")

    p_enum = sub.add_parser("enumerate", help="list all trees of a given size")
    p_enum.add_argument("--size", type=int, required=True)
    p_enum.add_argument("--format", choices=("text", "json", "csv"), default="text")

    p_sample = sub.add_parser("sample", help="uniform random tree")
    p_sample.add_argument("--size", type=int, required=True)
    p_sample.add_argument("--seed", type=int, default=0)
    p_sample.add_argument("--count", type=int, default=1)
    p_sample.add_argument("--max-rejections", type=int, default=1000)
    p_sample.add_argument("--format", choices=("text", "json", "csv"), default="text")

    p_age = sub.add_parser("age", help="age distribution or asymptotics")
    p_age.add_argument("--size", type=int, required=True)
    group = p_age.add_mutually_exclusive_group()
    group.add_argument("--exact", action="store_true", default=True)
    group.add_argument("--asym", action="store_true")
    p_age.add_argument("--format", choices=("text", "json", "csv"), default="csv")

    p_anc = sub.add_parser("ancestor", help="ancestor-size distribution or asymptotics")
    p_anc.add_argument("--size", type=int, required=True)
    p_anc.add_argument("--depth", type=int, required=True, help="number of reductions r")
    group = p_anc.add_mutually_exclusive_group()
    group.add_argument("--exact", action="store_true", default=True)
    group.add_argument("--asym", action="store_true")
    p_anc.add_argument("--order", type=int, default=None, help="series truncation order")
    p_anc.add_argument("--format", choices=("text", "json", "csv"), default="csv")

    p_const = sub.add_parser("constants", help="limit constants c0..c3")
    p_const.add_argument("--precision", type=int, default=30, help="decimal digits")
    p_const.add_argument("--format", choices=("text", "json", "csv"), default="json")

    p_bij = sub.add_parser("bijection", help="convert between tree and Dyck path")
    group = p_bij.add_mutually_exclusive_group(required=True)
    group.add_argument("--tree", help="balanced-parentheses word")
    group.add_argument("--path", help="word over U and D")
    p_bij.add_argument("--format", choices=("text", "json", "csv"), default="text")

    p_verify = sub.add_parser("verify", help="run the cross-module invariant suite")
    p_verify.add_argument("--max-size", type=int, default=12)
    p_verify.add_argument("--max-r", type=int, default=5)
    p_verify.add_argument("--order", type=int, default=16)
    p_verify.add_argument("--format", choices=("text", "json"), default="text")

    return parser


def _emit_distribution(table: stats.DistributionTable, fmt: str, out) -> None:
    if fmt == "csv":
        print(table.to_csv(), file=out)
    elif fmt == "json":
        print(table.to_json(), file=out)
    else:
        for value, mass in zip(table.support, table.masses):
            print(f"{value} {mass}", file=out)


def _cmd_count(args, out) -> int:
    value = count_trees(args.size)
    if args.format == "json":
        print(json.dumps({"size": args.size, "count": str(value)}), file=out)
    elif args.format == "csv":
        print(f"size,count\n{args.size},{value}", file=out)
    else:
        print(value, file=out)
    return 0


def _cmd_enumerate(args, out) -> int:
    words = [t.serialize() for t in enumerate_trees(args.size)]
    if args.format == "json":
        print(json.dumps({"size": args.size, "trees": words}), file=out)
    else:
        for w in words:
            print(w, file=out)
    return 0


def _cmd_sample(args, out) -> int:
    words = []
    for i in range(args.count):
        cfg = SamplerConfig(
            size=args.size, seed=args.seed + i, max_rejections=args.max_rejections
        )
        words.append(sample_tree(cfg).serialize())
    if args.format == "json":
        print(
            json.dumps({"size": args.size, "seed": args.seed, "trees": words}),
            file=out,
        )
    else:
        for w in words:
            print(w, file=out)
    return 0


def _cmd_age(args, out) -> int:
    if args.asym:
        mean = asymptotics.expected_age_asym(args.size)
        variance = asymptotics.age_variance_asym(args.size)
        payload = {
            "n": args.size,
            "expected": {"value": mean.value, "order": mean.order_tag},
            "variance": {"value": variance.value, "order": variance.order_tag},
        }
        if args.format == "csv":
            print("quantity,value,order", file=out)
            print(f"expected,{mean.value!r},{mean.order_tag}", file=out)
            print(f"variance,{variance.value!r},{variance.order_tag}", file=out)
        else:
            print(json.dumps(payload), file=out)
        return 0
    _emit_distribution(stats.age_distribution(args.size), args.format, out)
    return 0


def _cmd_ancestor(args, out) -> int:
    if args.asym:
        mean = asymptotics.expected_ancestor_asym(args.size, args.depth)
        variance = asymptotics.ancestor_variance_asym(args.size, args.depth)
        payload = {
            "n": args.size,
            "r": args.depth,
            "expected": {"value": mean.value, "order": mean.order_tag},
            "variance": {"value": variance.value, "order": variance.order_tag},
        }
        if args.format == "csv":
            print("quantity,value,order", file=out)
            print(f"expected,{mean.value!r},{mean.order_tag}", file=out)
            print(f"variance,{variance.value!r},{variance.order_tag}", file=out)
        else:
            print(json.dumps(payload), file=out)
        return 0
    table = stats.ancestor_distribution(args.size, args.depth, order=args.order)
    _emit_distribution(table, args.format, out)
    return 0


def _cmd_constants(args, out) -> int:
    digits = {
        f"c{i}": asymptotics.constant_digits(i, args.precision) for i in range(4)
    }
    if args.format == "text":
        for name, value in digits.items():
            print(f"{name} = {value}", file=out)
    elif args.format == "csv":
        print("constant,value", file=out)
        for name, value in digits.items():
            print(f"{name},{value}", file=out)
    else:
        print(json.dumps(digits), file=out)
    return 0


def _cmd_bijection(args, out) -> int:
    if args.tree is not None:
        tau = parse_tree(args.tree)
        path = tree_to_dyck(tau)
    else:
        path = DyckPath.from_string(args.path)
        tau = dyck_to_tree(path)
    valid = is_catalan_stanley(tau)
    payload = {
        "tree": tau.serialize(),
        "path": path.to_string(),
        "size": tau.size(),
        "is_catalan_stanley": valid,
    }
    if valid:
        payload["age"] = age(tau)
    if args.format == "json":
        print(json.dumps(payload), file=out)
    else:
        for key, value in payload.items():
            print(f"{key}: {value}", file=out)
    return 0


def _cmd_verify(args, out) -> int:
    report = verify_mod.run_verification(
        max_size=args.max_size, max_r=args.max_r, order=args.order
    )
    if args.format == "json":
        print(report.to_json(), file=out)
    else:
        print(report.to_text(), file=out)
    return 0 if report.ok else 1


_HANDLERS = {
    "count": _cmd_count,
    "enumerate": _cmd_enumerate,
    "sample": _cmd_sample,
    "age": _cmd_age,
    "ancestor": _cmd_ancestor,
    "constants": _cmd_constants,
    "bijection": _cmd_bijection,
    "verify": _cmd_verify,
}


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    """Dispatch a command line; returns the process exit status."""
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _HANDLERS[args.command](args, out)
    except (
        ValueError,
        TreeParseError,
        MalformedPathError,
        CapacityError,
        SamplingError,
    ) as exc:
        print(f"error: {exc}", file=err)
        return USAGE_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
