"""Command-line interface: ``pas-lab <subcommand> ...``.

Exit codes: 0 success, 1 failed ``--assert`` or verification violations,
2 bad input, 3 capacity exceeded, 4 internal consistency failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import complete as comp
from . import endofn, genpas
from .classify import classify
from .core import FinitePas, eval_term, format_table, parse_term, read_table
from .entail import (
    entails,
    entails_indexed,
    format_subset,
    implication_set,
    parse_subset,
)
from .enumeration import (
    PREDICATES,
    Mode,
    SearchQuery,
    enumerate_all,
    enumerate_canonical,
    parse_predicates,
    search,
)
from .errors import CapacityError, ConsistencyError, InputError, PasError
from .props import Prop, check_property
from .theorems import REGISTRY, verify_suite

EXIT_OK, EXIT_ASSERT, EXIT_INPUT, EXIT_CAPACITY, EXIT_INTERNAL = 0, 1, 2, 3, 4


def _emit(args, text: str, payload) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def _rows(pas: FinitePas) -> list:
    return [list(row) for row in pas.table]


def _bool(v: bool) -> str:
    return "true" if v else "false"


def _witness_text(w) -> str:
    return ",".join(map(str, w)) if isinstance(w, tuple) else str(w)


# Subcommands


def cmd_check(args) -> int:
    pas = read_table(args.file)
    tokens = sorted(parse_predicates(args.props), key=list(PREDICATES).index) if args.props \
        else [p.value for p in Prop]
    lines, payload = [], {}
    for tok in tokens:
        if tok in Prop._value2member_map_:
            ok, w = check_property(pas, Prop(tok))
        else:
            ok, w = PREDICATES[tok][1](pas), None
        payload[tok] = {"holds": ok, "witness": list(w) if isinstance(w, tuple) else w}
        lines.append(f"{tok}: {_bool(ok)}" + (f" (witness {_witness_text(w)})" if w is not None else ""))
    _emit(args, "\n".join(lines), payload)
    if args.assert_ and not all(v["holds"] for v in payload.values()):
        return EXIT_ASSERT
    return EXIT_OK


def cmd_classify(args) -> int:
    label = classify(read_table(args.file))
    d = label.as_dict()
    text = "\n".join(f"{k}: {_bool(v) if isinstance(v, bool) else v}" for k, v in d.items())
    _emit(args, text, d)
    return EXIT_OK


def cmd_eval(args) -> int:
    pas = read_table(args.file)
    term = parse_term(" ".join(args.term))
    v = eval_term(pas, term)
    _emit(args, "undefined" if v is None else str(v),
          {"term": str(term), "defined": v is not None, "value": v})
    return EXIT_OK


def _parse_family(text: str, n: int) -> tuple:
    return tuple(parse_subset(part, n) for part in text.split(";"))


def cmd_entails(args) -> int:
    pas = read_table(args.file)
    if args.index is not None:
        if args.lhs_i is None or args.rhs_i is None:
            raise InputError("--index needs --lhs-i and --rhs-i")
        phi, psi = _parse_family(args.lhs_i, pas.n), _parse_family(args.rhs_i, pas.n)
        if len(phi) != args.index or len(psi) != args.index:
            raise InputError(f"--index {args.index} but predicates have "
                             f"{len(phi)} and {len(psi)} coordinates")
        w = entails_indexed(pas, phi, psi)
        payload = {"index": args.index, "lhs": [sorted(A) for A in phi],
                   "rhs": [sorted(B) for B in psi], "holds": w.holds, "realizer": w.realizer}
        text = f"holds: {_bool(w.holds)}" + (f"\nrealizer: {w.realizer}" if w.holds else "")
    else:
        if args.lhs is None or args.rhs is None:
            raise InputError("entails needs --lhs and --rhs (or --index with --lhs-i/--rhs-i)")
        A, B = parse_subset(args.lhs, pas.n), parse_subset(args.rhs, pas.n)
        w = entails(pas, A, B)
        imp = implication_set(pas, A, B)
        payload = {"lhs": sorted(A), "rhs": sorted(B), "holds": w.holds,
                   "realizer": w.realizer, "implication_set": sorted(imp)}
        text = f"holds: {_bool(w.holds)}\nimplication set: {format_subset(imp)}"
        if w.holds:
            text += f"\nrealizer: {w.realizer}"
    _emit(args, text, payload)
    return EXIT_OK


def _parse_ints(text: str) -> tuple:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise InputError(f"expected comma-separated integers, got {text!r}") from None


def cmd_generate(args) -> int:
    if args.fn is not None:
        with open(args.fn, encoding="utf-8") as fh:
            f = endofn.parse_fn(fh.read())
        if args.x_count is not None:
            raise InputError("--x-count only applies with --chain")
    else:
        if args.chain < 1:
            raise InputError("--chain must be at least 1")
        f = genpas.successor_chain(args.chain, args.x_count or 0)
    spec = genpas.GeneratedSpec(f, _parse_ints(args.j)) if args.j else genpas.GeneratedSpec.default(f)
    pas = genpas.generate(spec)
    pred = genpas.predict_profile(spec)
    predicted = pred.predicted()
    if args.json:
        _emit(args, "", {
            "table": _rows(pas), "j": list(spec.j), "x_set": sorted(spec.x_set),
            "shape": pred.shape.value if pred.shape else None, "prediction": predicted,
        })
    else:
        head = [f"# j = {','.join(map(str, spec.j))}", f"# X = {format_subset(spec.x_set)}"]
        if args.predict:
            head.append("# shape: " + (pred.shape.value if pred.shape else "none"))
            head += [f"# {k}: {_bool(v)}" for k, v in predicted.items()]
        print("\n".join(head))
        print(format_table(pas), end="")
    return EXIT_OK


def cmd_enumerate(args) -> int:
    source = enumerate_canonical(args.n) if args.canonical else enumerate_all(args.n)
    if args.count:
        count = sum(1 for _ in source)
        _emit(args, str(count), {"n": args.n, "canonical": args.canonical, "count": count})
        return EXIT_OK
    if args.json:
        _emit(args, "", {"n": args.n, "canonical": args.canonical,
                         "tables": [_rows(p) for p in source]})
    else:
        print("\n".join(format_table(p) for p in source), end="")
    return EXIT_OK


def cmd_search(args) -> int:
    q = SearchQuery(args.n, parse_predicates(args.require), parse_predicates(args.forbid),
                    Mode(args.mode), args.canonical, args.samples, args.seed)
    res = search(q, args.workers)
    payload = {"n": q.n, "require": sorted(q.require), "forbid": sorted(q.forbid),
               "mode": q.mode.value, "exhaustive": res.exhaustive, "examined": res.examined}
    lines = [f"exhaustive: {_bool(res.exhaustive)}", f"examined: {res.examined}"]
    if q.mode is Mode.COUNT:
        payload["count"] = res.count
        lines.append(f"count: {res.count}")
    elif q.mode is Mode.FIRST:
        payload["first"] = _rows(res.first) if res.first else None
        lines.append(format_table(res.first).rstrip("\n") if res.first else "none")
    else:
        payload["matches"] = [_rows(p) for p in res.matches]
        lines.append(f"matches: {len(res.matches)}")
        lines += [format_table(p).rstrip("\n") for p in res.matches]
    _emit(args, "\n".join(lines), payload)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.suite is not None:
        if args.suite != "all":
            raise InputError(f"unknown suite {args.suite!r}; only 'all' is defined")
        ids = None
    else:
        ids = [args.theorem]
    reports = verify_suite(ids, args.n, args.workers)
    lines = [f"{r.theorem_id}: {r.instances} tables, {r.violation_count} violations"
             for r in reports]
    bad = [r for r in reports if not r.ok]
    for r in bad:
        lines += [f"  violation of {r.theorem_id}:"] + [
            "    " + line for v in r.violations for line in format_table(v).splitlines()]
    _emit(args, "\n".join(lines), {"size_bound": args.n,
                                   "reports": [r.as_dict() for r in reports]})
    return EXIT_ASSERT if bad else EXIT_OK


def cmd_complete(args) -> int:
    pas = read_table(args.file)
    rep = comp.necessary_conditions(pas)
    payload = rep.as_dict()
    lines = [f"R({r}) = {format_subset(v)}" for r, v in sorted(rep.r_of.items())]
    lines += [
        f"R2 = {format_subset(rep.r2)}",
        f"product exceeds |R|: {_bool(rep.product_exceeds)}",
        f"|R2| < |R|: {_bool(rep.r2_card_ok)}",
        f"|R2| != 1: {_bool(rep.r2_not_one)}",
        f"small carrier forces R2 empty: {_bool(rep.small_carrier_ok)}",
        f"verdict: {rep.verdict.value}",
    ]
    if rep.warning:
        lines.append(f"warning: {rep.warning}")
    if args.check_fiber:
        fibers = {}
        for m in range(1, args.index_size + 1):
            fibers[str(m)] = comp.fiber_complete(pas, m)
            lines.append(f"fiber m={m} complete: {_bool(fibers[str(m)])}")
        payload["fiber_complete"] = fibers
        payload["checked_up_to"] = args.index_size
        preserved = comp.reindexing_preserves(pas, min(2, args.index_size))
        payload["reindexing_preserves"] = preserved
        lines.append(f"reindexing preserves bounds (index sets <= {min(2, args.index_size)}): "
                     f"{_bool(preserved)}")
        if pas.n * pas.n <= comp.BOUNDS_BITS_BOUND:
            has_sup = comp.supremum(pas, pas.n, comp.comp1_family(pas)) is not None
            payload["comp1_supremum"] = has_sup
            lines.append(f"singleton family has supremum: {_bool(has_sup)}")
        if rep.preorderal:
            tri = comp.boolean_tripos_check(pas)
            payload["boolean"] = tri.as_dict()
            lines.append(f"boolean-valued: {_bool(tri.verdict)}")
        lines.append("note: completeness is certified only up to the tested index sizes")
    _emit(args, "\n".join(lines), payload)
    return EXIT_OK


def _Formatter(prog):
    # fixed width keeps usage text independent of the terminal
    return argparse.HelpFormatter(prog, width=100)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pas-lab",
        description="Explore finite partial applicative structures.",
        formatter_class=_Formatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text, formatter_class=_Formatter)
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.set_defaults(func=func)
        return p

    p = add("check", cmd_check, "decide named properties of a table")
    p.add_argument("file")
    p.add_argument("--props", help="comma-separated properties (default: all)")
    p.add_argument("--assert", dest="assert_", action="store_true",
                   help="exit 1 unless every listed property holds")

    p = add("classify", cmd_classify, "order-theoretic classification")
    p.add_argument("file")

    p = add("eval", cmd_eval, "evaluate a left-associated term")
    p.add_argument("file")
    p.add_argument("term", nargs="+", help="term tokens, e.g. \"0 1 2\" or 0 \"(1 2)\"")

    p = add("entails", cmd_entails, "decide entailment between subsets or indexed predicates")
    p.add_argument("file")
    p.add_argument("--lhs")
    p.add_argument("--rhs")
    p.add_argument("--index", type=int, help="index size for indexed predicates")
    p.add_argument("--lhs-i", help="subsets separated by ';', e.g. '0,1;2'")
    p.add_argument("--rhs-i")

    p = add("generate", cmd_generate, "build the posetal PAS generated by a TL function")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--fn", help="endofunction file")
    src.add_argument("--chain", type=int, help="use the successor chain of this length")
    p.add_argument("--j", help="injection as comma-separated elements")
    p.add_argument("--x-count", type=int, help="extra isolated elements for --chain")
    p.add_argument("--predict", action="store_true", help="include the predicted profile")

    p = add("enumerate", cmd_enumerate, "list every table of a size")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--canonical", action="store_true", help="one table per isomorphism class")
    p.add_argument("--count", action="store_true", help="print only the number of tables")

    p = add("search", cmd_search, "find tables with given properties")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--require", default="")
    p.add_argument("--forbid", default="")
    p.add_argument("--mode", choices=[m.value for m in Mode], default="first")
    p.add_argument("--canonical", action="store_true")
    p.add_argument("--samples", type=int, default=100_000, help="sample size when n > 3")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int)

    p = add("verify", cmd_verify, "re-check registered theorems exhaustively")
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument("--theorem", choices=list(REGISTRY))
    which.add_argument("--suite")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--workers", type=int)

    p = add("complete", cmd_complete, "completeness conditions and fiber checks")
    p.add_argument("file")
    p.add_argument("--index-size", type=int, default=2)
    p.add_argument("--check-fiber", action="store_true")
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:  # usage errors and --help
        return int(e.code or 0)
    try:
        return args.func(args)
    except CapacityError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CAPACITY
    except ConsistencyError as e:
        print(f"internal error: {e}", file=sys.stderr)
        return EXIT_INTERNAL
    except (PasError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
