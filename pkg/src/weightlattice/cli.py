"""Command-line entry point.

Exit status: 0 success / property holds, 1 counterexample found or
predicate false, 2 usage, parse or precondition error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import adjoints, weights
from .partitions import DEFAULT_ALPHA, embed, read_partition, verify_embedding
from .search import DEMOS, PROPERTIES, PropertySpec, find_counterexample, run_demo
from .topology import phi, psi
from .weights import AxiomSet, ParseError, WeightError, dumps_wsm, parse_value, read_wsm

UNARY = {
    "dual": weights.dual,
    "zerofix": adjoints.zero_fix,
    "infdiag": adjoints.inf_diag,
    "symjoin": adjoints.sym_join,
    "symmeet": adjoints.sym_meet,
    "triclosure": adjoints.tri_closure,
}
FAMILY = {
    "meet": weights.pointwise_meet,
    "join": weights.pointwise_join,
    "metmeet": adjoints.met_meet,
}


class UsageError(Exception):
    pass


def _value(text: str):
    try:
        return parse_value(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _pool(text: str):
    return [_value(v) for v in text.split(",") if v.strip()]


def _axioms(text: str) -> AxiomSet:
    try:
        return AxiomSet.of(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="weightlattice", description="Exact weight structures on finite sets, their adjoints and generated topologies.")
    parser.add_argument("--json", action="store_true", help="structured output")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="print the axioms a .wsm structure satisfies")
    p.add_argument("file")

    p = sub.add_parser("apply", help="apply an operation and print the resulting .wsm")
    p.add_argument("op", choices=sorted([*UNARY, *FAMILY, "scale"]))
    p.add_argument("files", nargs="+")
    p.add_argument("--scale", type=_value, dest="factor")

    p = sub.add_parser("topo", help="print the topology generated by a structure")
    p.add_argument("map", choices=["psi", "phi"])
    p.add_argument("file")
    p.add_argument("--side", choices=["left", "right"], default="left")

    p = sub.add_parser("embed", help="map a partition to its metric")
    p.add_argument("partfile")
    p.add_argument("--alpha", type=_value, default=DEFAULT_ALPHA)

    p = sub.add_parser("verify-embedding", help="check the partition embedding on a list of partitions")
    p.add_argument("partfiles", nargs="+")
    p.add_argument("--alpha", type=_value, default=DEFAULT_ALPHA)

    p = sub.add_parser("search", help="search for a counterexample to a property")
    p.add_argument("property", choices=sorted(PROPERTIES))
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--pool", type=_pool)
    p.add_argument("--context", type=_axioms, help="comma-separated axioms, e.g. zero,tri")

    p = sub.add_parser("demo", help="run a named demo")
    p.add_argument("name", choices=sorted(DEMOS))

    p = sub.add_parser("galois", help="check an adjunction law on samples")
    p.add_argument("id", choices=[a.value for a in adjoints.AdjunctionId])
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--pool", type=_pool)
    p.add_argument("--context", type=_axioms, default=None)
    return parser


def _load(path: str):
    try:
        return read_wsm(path)
    except ParseError as exc:
        raise ParseError(f"{path}: {exc}") from None
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from None


def _load_partition(path: str):
    try:
        return read_partition(path)
    except ParseError as exc:
        raise ParseError(f"{path}: {exc}") from None
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from None


def _emit(args, text: str, data: dict | None = None) -> None:
    if args.json and data is not None:
        print(json.dumps(data, indent=2))
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _cmd_check(args) -> int:
    d = _load(args.file)
    axioms = weights.check_axioms(d)
    _emit(args, str(axioms), {"axioms": axioms.names()})
    return 0


def _cmd_apply(args) -> int:
    structures = [_load(f) for f in args.files]
    if args.op in FAMILY:
        result = FAMILY[args.op](structures)
    else:
        if len(structures) != 1:
            raise UsageError(f"{args.op} takes exactly one file")
        if args.op == "scale":
            if args.factor is None:
                raise UsageError("scale needs --scale C")
            result = weights.scale(structures[0], args.factor)
        else:
            result = UNARY[args.op](structures[0])
    _emit(args, dumps_wsm(result), result.to_dict())
    return 0


def _cmd_topo(args) -> int:
    d = _load(args.file)
    fn = psi if args.map == "psi" else phi
    t = fn(d, weights.Side(args.side))
    listing = t.listing()
    _emit(args, listing, {"n": t.n, "opens": listing.splitlines()[1:]})
    return 0


def _cmd_embed(args) -> int:
    d = embed(_load_partition(args.partfile), args.alpha)
    _emit(args, dumps_wsm(d), d.to_dict())
    return 0


def _cmd_verify_embedding(args) -> int:
    parts = [_load_partition(f) for f in args.partfiles]
    order = parts[0].labels
    parts = [p.reorder(order) for p in parts]
    report = verify_embedding(parts, args.alpha)
    data = report.to_dict()
    print(json.dumps(data, indent=2))
    # join failures are reported, not treated as a verification failure
    ok = report.meet_preserved and report.injective and report.topology_is_discrete
    return 0 if ok else 1


def _cmd_search(args) -> int:
    kwargs = {"n": args.n, "trials": args.trials, "seed": args.seed}
    if args.pool:
        kwargs["pool"] = args.pool
    report = find_counterexample(PropertySpec(args.property, context=args.context, **kwargs))
    print(json.dumps(report.to_dict(), indent=2))
    return 1 if report.found else 0


def _cmd_demo(args) -> int:
    report = run_demo(args.name)
    print(json.dumps(report.to_dict(), indent=2))
    return 0 if report.passed else 1


def _cmd_galois(args) -> int:
    ident = adjoints.AdjunctionId(args.id)
    context = args.context
    if context is None:
        context = AxiomSet(zero=True) if ident is adjoints.AdjunctionId.DELTA_STAR else AxiomSet()
    kwargs = {"trials": args.trials, "seed": args.seed, "n": args.n, "context": context}
    if args.pool:
        kwargs["pool"] = args.pool
    report = adjoints.galois_holds(ident, **kwargs)
    data = report.to_dict()
    if args.json:
        print(json.dumps(data, indent=2))
    else:
        print("pass" if report.holds else "witness: " + json.dumps(report.witness))
    return 0 if report.holds else 1


COMMANDS = {
    "check": _cmd_check,
    "apply": _cmd_apply,
    "topo": _cmd_topo,
    "embed": _cmd_embed,
    "verify-embedding": _cmd_verify_embedding,
    "search": _cmd_search,
    "demo": _cmd_demo,
    "galois": _cmd_galois,
}


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
    except WeightError as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
    return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
