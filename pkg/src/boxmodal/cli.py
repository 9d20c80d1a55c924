"""Batch command-line interface.

Exit codes: 0 when the command succeeded and any checked property holds,
1 when a checked property fails (a counterexample is emitted), 2 for
malformed input or usage errors.
"""
from __future__ import annotations

import argparse
import itertools
import json
import sys
from typing import Optional, Sequence

from .formulas import parse_formula
from .modal import (
    NotCompatible,
    NotTuned,
    Valuation,
    filtration_pipeline,
    generate_subalgebra,
    quotient_frame,
    truth_region,
)
from .oracle import grid_downset, grid_truth, grid_tuned
from .partition import (
    Partition,
    is_monotone,
    is_tuned,
    monotone_violation,
    refines,
    tuned_violation,
)
from .randgen import gen_random
from .refine import (
    FiberedPartition,
    product_refines,
    product_tuned_violation,
    refine_monotone,
    refine_product_finite,
)
from .region import OrderKind, Region
from .viz import render_partition_svg


def _dump(obj: object, out: Optional[str]) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_json(path: str) -> object:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: malformed JSON: {exc}") from exc


def _load_partition(path: str) -> Partition:
    return Partition.from_json(_load_json(path))


def _load_valuation(path: str) -> Valuation:
    return Valuation.from_json(_load_json(path))


def _load_regions(path: str) -> tuple[int, list[Region]]:
    obj = _load_json(path)
    if not isinstance(obj, dict):
        raise ValueError(f"{path}: expected an object with 'dim' and 'regions'")
    dim = obj.get("dim")
    if not isinstance(dim, int) or dim < 1:
        raise ValueError(f"{path}: field 'dim' must be a positive integer")
    raw = obj.get("regions")
    if not isinstance(raw, list):
        raise ValueError(f"{path}: field 'regions' must be a list")
    regions = [Region.from_json(r) for r in raw]
    for r in regions:
        if r.dim != dim:
            raise ValueError(f"{path}: region dimension differs from 'dim'")
    return dim, regions


def _order(args: argparse.Namespace) -> OrderKind:
    return OrderKind.from_json(args.order)


def cmd_check_tuned(args: argparse.Namespace) -> int:
    p = _load_partition(args.partition)
    violation = tuned_violation(p, _order(args))
    _dump(
        {"tuned": violation is None, "violation": violation.to_json() if violation else None},
        args.out,
    )
    return 0 if violation is None else 1


def cmd_check_monotone(args: argparse.Namespace) -> int:
    p = _load_partition(args.partition)
    violation = monotone_violation(p)
    _dump(
        {"monotone": violation is None, "violation": violation.to_json() if violation else None},
        args.out,
    )
    return 0 if violation is None else 1


def cmd_refine(args: argparse.Namespace) -> int:
    p = _load_partition(args.partition)
    refined, trace = refine_monotone(p)
    payload: dict = {"partition": refined.to_json(), "trace": trace.to_json()}
    code = 0
    if args.verify:
        checks = {
            "refines": refines(refined, p),
            "monotone": is_monotone(refined),
            "tuned_le": is_tuned(refined, OrderKind.REFLEXIVE),
            "tuned_lt": is_tuned(refined, OrderKind.STRICT),
        }
        payload["checks"] = checks
        if not all(checks.values()):
            code = 1
    _dump(payload, args.out)
    return code


def cmd_mc(args: argparse.Namespace) -> int:
    f = parse_formula(args.formula)
    val = _load_valuation(args.valuation)
    report = filtration_pipeline(f, val)
    _dump(report.to_json(), args.out)
    return 0


def cmd_quotient(args: argparse.Namespace) -> int:
    p = _load_partition(args.partition)
    val = _load_valuation(args.valuation)
    order = OrderKind.from_json(args.order) if args.order else val.order
    try:
        qf = quotient_frame(p, order, val)
    except NotTuned as exc:
        _dump({"error": "not_tuned", "violation": exc.violation.to_json()}, args.out)
        return 1
    except NotCompatible as exc:
        _dump(
            {"error": "not_compatible", "var": exc.var, "cell": exc.cell,
             "witness": exc.witness.to_json()},
            args.out,
        )
        return 1
    _dump(qf.to_json(), args.out)
    return 0


def cmd_subalgebra(args: argparse.Namespace) -> int:
    dim, generators = _load_regions(args.generators)
    result = generate_subalgebra(generators, _order(args), dim=dim)
    _dump(result.to_json(), args.out)
    return 0


def cmd_product(args: argparse.Namespace) -> int:
    fp = FiberedPartition.from_json(_load_json(args.partition))
    order = _order(args)
    refined, trace = refine_product_finite(fp, order)
    violation = product_tuned_violation(refined, order)
    payload = {
        "fibered": refined.to_json(),
        "trace": trace.to_json(),
        "refines": product_refines(refined, fp),
        "tuned": violation is None,
        "violation": violation.to_json() if violation else None,
    }
    _dump(payload, args.out)
    return 0 if payload["refines"] and payload["tuned"] else 1


def cmd_oracle(args: argparse.Namespace) -> int:
    if args.bound is None:
        raise ValueError("the oracle command requires --bound")
    cases = []
    agree = True
    if args.formula and args.valuation:
        f = parse_formula(args.formula)
        val = _load_valuation(args.valuation)
        symbolic = truth_region(f, val)
        grid = grid_truth(f, val, args.bound)
        diffs = sorted(
            list(u)
            for u in itertools.product(range(args.bound + 1), repeat=val.dim)
            if (tuple(u) in grid) != symbolic.member(tuple(u))
        )
        agree &= not diffs
        cases.append({"kind": "truth", "formula": args.formula, "diffs": diffs})
    elif args.partition:
        p = _load_partition(args.partition)
        order = _order(args)
        ok, counterexample = grid_tuned(p, order, args.bound)
        symbolic_ok = is_tuned(p, order)
        agree &= ok == symbolic_ok
        cases.append(
            {
                "kind": "tuned",
                "grid": ok,
                "symbolic": symbolic_ok,
                "counterexample": list(counterexample[2]) if counterexample else None,
            }
        )
        for j, cell in enumerate(p.cells):
            grid_pts = grid_downset(cell, order, args.bound)
            down = cell.downset(order)
            diffs = sorted(
                list(u)
                for u in itertools.product(range(args.bound + 1), repeat=p.dim)
                if (tuple(u) in grid_pts) != down.member(tuple(u))
            )
            agree &= not diffs
            cases.append({"kind": "downset", "cell": j, "diffs": diffs})
    elif args.generators:
        dim, regions = _load_regions(args.generators)
        order = _order(args)
        for j, r in enumerate(regions):
            grid_pts = grid_downset(r, order, args.bound)
            down = r.downset(order)
            diffs = sorted(
                list(u)
                for u in itertools.product(range(args.bound + 1), repeat=dim)
                if (tuple(u) in grid_pts) != down.member(tuple(u))
            )
            agree &= not diffs
            cases.append({"kind": "downset", "region": j, "diffs": diffs})
    else:
        raise ValueError(
            "oracle needs --formula with --valuation, or --partition, or --generators"
        )
    _dump({"agree": agree, "cases": cases}, args.out)
    return 0 if agree else 1


def cmd_viz(args: argparse.Namespace) -> int:
    p = _load_partition(args.partition)
    if p.dim != 2:
        raise ValueError(f"viz requires dimension 2, got {p.dim}")
    if not args.out:
        raise ValueError("viz requires --out FILE.svg")
    svg = render_partition_svg(p)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(svg)
    return 0


def cmd_gen(args: argparse.Namespace) -> int:
    p = gen_random(args.n, args.cells, args.max_const, args.seed)
    _dump(p.to_json(), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="boxmodal",
        description="Exact partition refinement and modal model checking on the grid",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, order_default: Optional[str] = "le") -> None:
        p.add_argument("--out", help="write JSON output to this file")
        if order_default is not None:
            p.add_argument("--order", default=order_default, help="le or lt")

    p = sub.add_parser("check-tuned", help="decide the tuned property")
    p.add_argument("--partition", required=True)
    common(p)
    p.set_defaults(func=cmd_check_tuned)

    p = sub.add_parser("check-monotone", help="decide the monotone property")
    p.add_argument("--partition", required=True)
    common(p, order_default=None)
    p.set_defaults(func=cmd_check_monotone)

    p = sub.add_parser("refine", help="compute the monotone refinement")
    p.add_argument("--partition", required=True)
    p.add_argument("--verify", action="store_true", help="re-check the output")
    common(p, order_default=None)
    p.set_defaults(func=cmd_refine)

    p = sub.add_parser("mc", help="model check a formula through the finite quotient")
    p.add_argument("--formula", required=True)
    p.add_argument("--valuation", required=True)
    common(p, order_default=None)
    p.set_defaults(func=cmd_mc)

    p = sub.add_parser("quotient", help="build the quotient frame of a tuned partition")
    p.add_argument("--partition", required=True)
    p.add_argument("--valuation", required=True)
    p.add_argument("--order", default=None, help="override the valuation's order")
    p.add_argument("--out")
    p.set_defaults(func=cmd_quotient)

    p = sub.add_parser("subalgebra", help="closed family generated by regions")
    p.add_argument("--generators", required=True)
    common(p)
    p.set_defaults(func=cmd_subalgebra)

    p = sub.add_parser("product", help="tuned refinement over a finite product frame")
    p.add_argument("--partition", required=True, help="fibered partition JSON")
    common(p)
    p.set_defaults(func=cmd_product)

    p = sub.add_parser("oracle", help="compare symbolic results against grid search")
    p.add_argument("--partition")
    p.add_argument("--formula")
    p.add_argument("--valuation")
    p.add_argument("--generators")
    p.add_argument("--bound", type=int)
    common(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("viz", help="render a 2-dimensional partition as SVG")
    p.add_argument("--partition", required=True)
    common(p, order_default=None)
    p.set_defaults(func=cmd_viz)

    p = sub.add_parser("gen", help="seeded random partition")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--cells", type=int, required=True)
    p.add_argument("--max-const", type=int, required=True, dest="max_const")
    p.add_argument("--seed", type=int, required=True)
    common(p, order_default=None)
    p.set_defaults(func=cmd_gen)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main_entry() -> None:
    sys.exit(main())
