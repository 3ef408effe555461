"""Seeded counterexample search over small weight structures, and named
demos that replay fixed scenarios.

A property takes a tuple of operands drawn from ``W_P`` and returns whether
it holds together with both evaluated sides.  Exhaustive mode (``n = 2``)
walks every operand tuple over the pool, ordered by how many distinct pool
values the tuple uses, so the first witness is also a small one.  Random
mode gives trial ``t`` its own stream derived from ``(seed, t)`` and
reports the lowest failing trial.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Sequence

from .adjoints import class_meet, sym_join, sym_meet, tri_closure
from .partitions import Partition, verify_embedding
from .sampling import DEFAULT_POOL, enumerate_weights, random_weight, trial_rng
from .topology import FiniteTopology, partition_topology, phi, psi, topo_join, topo_meet
from .weights import (
    INF,
    AxiomSet,
    PreconditionError,
    WeightError,
    WeightStructure,
    check_axioms,
    dual,
    ext,
    format_value,
    pointwise_join,
    pointwise_meet,
    satisfies,
    satisfies_sep,
    satisfies_tri,
)

__all__ = [
    "PROPERTIES",
    "DEMOS",
    "PropertySpec",
    "SearchReport",
    "find_counterexample",
    "random_weight",
    "run_demo",
    "verify_witness",
]

EXHAUSTIVE_LIMIT = 250_000


def _topology_dict(t: FiniteTopology) -> list[str]:
    return t.listing().splitlines()[1:]


@dataclass(frozen=True)
class Property:
    name: str
    arity: int
    default_context: AxiomSet
    evaluate: Callable[[Sequence[WeightStructure], AxiomSet], tuple[bool, dict]]
    allowed: AxiomSet = AxiomSet(True, True, True, True)
    required: AxiomSet = AxiomSet()
    open_probe: bool = False
    description: str = ""


def _sigma_join_preserves_meet(ops, P):
    m, d = ops
    lhs = sym_join(class_meet([m, d], P))
    rhs = class_meet([sym_join(m), sym_join(d)], P)
    return lhs == rhs, {"lhs": lhs.to_dict(), "rhs": rhs.to_dict()}


def _sigma_meet_preserves_join(ops, P):
    m, d = ops
    lhs = sym_meet(pointwise_join([m, d]))
    rhs = pointwise_join([sym_meet(m), sym_meet(d)])
    return lhs == rhs, {"lhs": lhs.to_dict(), "rhs": rhs.to_dict()}


def _delta_star_preserves_join(ops, P):
    m, d = ops
    lhs = tri_closure(pointwise_join([m, d]))
    rhs = pointwise_join([tri_closure(m), tri_closure(d)])
    return lhs == rhs, {"lhs": lhs.to_dict(), "rhs": rhs.to_dict()}


def _tri_meet_closed(ops, P):
    m = pointwise_meet(ops)
    return satisfies_tri(m), {"meet": m.to_dict(), "meet_axioms": str(check_axioms(m))}


def _sep_meet_closed(ops, P):
    m = pointwise_meet(ops)
    return satisfies_sep(m), {"meet": m.to_dict(), "meet_axioms": str(check_axioms(m))}


def _psi_order_preserving(ops, P):
    d, e = ops
    m = pointwise_join([d, e])
    lo, hi = psi(d), psi(m)
    return lo <= hi, {"upper": m.to_dict(), "psi_lower": _topology_dict(lo), "psi_upper": _topology_dict(hi)}


def _phi_order_preserving(ops, P):
    d, e = ops
    m = pointwise_join([d, e])
    lo, hi = phi(d), phi(m)
    return lo <= hi, {"upper": m.to_dict(), "phi_lower": _topology_dict(lo), "phi_upper": _topology_dict(hi)}


def _psi_binary_join(ops, P):
    d, m = ops
    lhs = psi(pointwise_join([d, m]))
    rhs = topo_join(psi(d), psi(m))
    return lhs == rhs, {"lhs": _topology_dict(lhs), "rhs": _topology_dict(rhs)}


def _phi_binary_meet(ops, P):
    d, m = ops
    lhs = phi(class_meet([d, m], P))
    rhs = topo_meet(phi(d), phi(m))
    return lhs == rhs, {"lhs": _topology_dict(lhs), "rhs": _topology_dict(rhs)}


def _fiber_join_stability(ops, P):
    d, m = ops
    td, tm = psi(d), psi(m)
    if td != tm:
        return True, {"skipped": True}
    tj = psi(pointwise_join([d, m]))
    return tj == td, {"fiber": _topology_dict(td), "psi_join": _topology_dict(tj)}


ZERO = AxiomSet(zero=True)

PROPERTIES: dict[str, Property] = {
    p.name: p
    for p in [
        Property("sigma_join_preserves_meet", 2, ZERO, _sigma_join_preserves_meet,
                 allowed=AxiomSet(zero=True, sep=True, tri=True),
                 description="symmetrisation by max preserves binary meets"),
        Property("sigma_meet_preserves_join", 2, ZERO, _sigma_meet_preserves_join,
                 allowed=AxiomSet(zero=True, sep=True),
                 description="symmetrisation by min preserves binary joins"),
        Property("delta_star_preserves_join", 2, AxiomSet(zero=True, sym=True), _delta_star_preserves_join,
                 allowed=AxiomSet(zero=True, sep=True, sym=True), required=ZERO,
                 description="triangle closure preserves binary joins"),
        Property("tri_meet_closed", 2, AxiomSet(zero=True, sym=True, tri=True), _tri_meet_closed,
                 required=AxiomSet(tri=True),
                 description="pointwise meet of triangle-satisfying structures satisfies the triangle inequality"),
        Property("sep_meet_closed", 2, AxiomSet(sep=True), _sep_meet_closed,
                 required=AxiomSet(sep=True),
                 description="pointwise meet of separated structures is separated"),
        Property("psi_order_preserving", 2, ZERO, _psi_order_preserving,
                 allowed=AxiomSet(zero=True, sym=True, tri=True), required=ZERO, open_probe=True,
                 description="d <= m implies psi(d) <= psi(m)"),
        Property("psi_binary_join", 2, AxiomSet(zero=True, tri=True), _psi_binary_join,
                 allowed=AxiomSet(zero=True, sym=True, tri=True), required=AxiomSet(zero=True, tri=True),
                 description="psi(d v m) = psi(d) v psi(m)"),
        Property("phi_binary_meet", 2, ZERO, _phi_binary_meet,
                 allowed=AxiomSet(zero=True, sym=True, tri=True), required=ZERO,
                 description="phi(d ^ m) = phi(d) ^ phi(m)"),
        Property("phi_order_preserving", 2, ZERO, _phi_order_preserving,
                 allowed=AxiomSet(zero=True, sym=True, tri=True), required=ZERO,
                 description="d <= m implies phi(d) <= phi(m)"),
        Property("fiber_join_stability", 2, AxiomSet(zero=True, tri=True), _fiber_join_stability,
                 allowed=AxiomSet(zero=True, sym=True, tri=True), required=ZERO,
                 description="two structures in one psi fiber have their join in the same fiber"),
    ]
}


@dataclass
class PropertySpec:
    property: str
    context: AxiomSet | None = None
    n: int = 2
    pool: Sequence = DEFAULT_POOL
    trials: int = 500
    seed: int = 0
    exhaustive: bool | None = None

    def __post_init__(self):
        if self.property not in PROPERTIES:
            raise WeightError(f"unknown property {self.property!r}; choose from {', '.join(PROPERTIES)}")
        prop = PROPERTIES[self.property]
        if self.context is None:
            self.context = prop.default_context
        if not self.context <= prop.allowed:
            raise PreconditionError(f"{self.property} does not accept context {{{self.context}}}")
        if not prop.required <= self.context:
            raise PreconditionError(f"{self.property} requires {{{prop.required}}} in the context")
        if self.context.tri and not self.context.zero and self.property != "tri_meet_closed":
            raise PreconditionError(f"{self.property} over a tri context needs zero as well")
        self.pool = tuple(ext(v) for v in self.pool)
        if not self.pool:
            raise PreconditionError("value pool is empty")
        if self.n < 1 or self.trials < 0:
            raise PreconditionError("n must be >= 1 and trials >= 0")


@dataclass
class SearchReport:
    property: str
    context: str
    n: int
    seed: int | None
    mode: str
    trials: int
    outcome: str
    structures_per_operand: int | None = None
    witness: dict | None = None
    details: dict = field(default_factory=dict)
    open_probe: bool = False
    elapsed: float = 0.0

    @property
    def found(self) -> bool:
        return self.outcome == "witness"

    @property
    def passed(self) -> bool:
        return self.outcome in ("pass", "none-found")

    def to_dict(self) -> dict:
        return {
            "property": self.property,
            "context": self.context,
            "n": self.n,
            "seed": self.seed,
            "mode": self.mode,
            "trials": self.trials,
            "structures_per_operand": self.structures_per_operand,
            "outcome": self.outcome,
            "open_probe": self.open_probe,
            "witness": self.witness,
            "details": self.details,
            "elapsed": round(self.elapsed, 6),
        }


def _distinct_values(ops: Sequence[WeightStructure]) -> int:
    return len({v for d in ops for row in d.rows for v in row})


def _witness(prop: Property, ops, context: AxiomSet, sides: dict, **extra) -> dict:
    return {
        "operands": [d.to_dict() for d in ops],
        "context": str(context),
        **extra,
        **sides,
    }


def find_counterexample(spec: PropertySpec) -> SearchReport:
    prop = PROPERTIES[spec.property]
    P = spec.context
    start = time.perf_counter()
    exhaustive = spec.exhaustive if spec.exhaustive is not None else spec.n == 2
    report = SearchReport(prop.name, str(P), spec.n, spec.seed, "", 0, "none-found", open_probe=prop.open_probe and not P.tri)
    if exhaustive:
        domain = list(enumerate_weights(spec.n, P, spec.pool))
        combos = len(domain) ** prop.arity
        if combos > EXHAUSTIVE_LIMIT:
            if spec.exhaustive:
                raise PreconditionError(f"exhaustive search would visit {combos} tuples (limit {EXHAUSTIVE_LIMIT})")
            # automatic mode: too large to enumerate, fall back to sampling
            exhaustive = False
            report.details["exhaustive_skipped"] = combos
    if exhaustive:
        report.mode = "exhaustive"
        report.structures_per_operand = len(domain)
        keyed = sorted(
            (_distinct_values(ops), k, ops) for k, ops in enumerate(product(domain, repeat=prop.arity))
        )
        skipped = 0
        for _, _, ops in keyed:
            report.trials += 1
            holds, sides = prop.evaluate(ops, P)
            if sides.get("skipped"):
                skipped += 1
            if not holds:
                report.outcome = "witness"
                report.witness = _witness(prop, ops, P, sides)
                break
        if skipped:
            report.details["skipped"] = skipped
    else:
        report.mode = "random"
        skipped = 0
        for t in range(spec.trials):
            rng = trial_rng(spec.seed, t)
            ops = tuple(random_weight(spec.n, P, spec.pool, rng) for _ in range(prop.arity))
            report.trials += 1
            holds, sides = prop.evaluate(ops, P)
            if sides.get("skipped"):
                skipped += 1
            if not holds:
                report.outcome = "witness"
                report.witness = _witness(prop, ops, P, sides, trial=t)
                break
        if skipped:
            report.details["skipped"] = skipped
    report.elapsed = time.perf_counter() - start
    return report


def verify_witness(report: dict | SearchReport) -> bool:
    """Re-evaluate a reported witness from its serialised form; True when the
    violation reproduces."""
    data = report.to_dict() if isinstance(report, SearchReport) else report
    witness = data.get("witness")
    if not witness:
        return False
    prop = PROPERTIES[data["property"]]
    ops = [WeightStructure.from_dict(o) for o in witness["operands"]]
    P = AxiomSet.of(witness["context"])
    if not all(satisfies(d, P) for d in ops):
        return False
    holds, _ = prop.evaluate(ops, P)
    return not holds


# -- demos ------------------------------------------------------------------

def _xy(a, b, labels=("x", "y")) -> WeightStructure:
    return WeightStructure([[0, a], [b, 0]], labels)


def _three(xy, xz, yz) -> WeightStructure:
    return WeightStructure.from_pairs(("x", "y", "z"), {("x", "y"): xy, ("x", "z"): xz, ("y", "z"): yz})


def demo_sigma_meet_gap() -> dict:
    m = _xy(Fraction(9, 5), Fraction(7, 5))
    d = _xy(Fraction(6, 5), Fraction(8, 5))
    chain = [Fraction(2), m[0, 1], d[1, 0], m[1, 0], d[0, 1], Fraction(1)]
    chain_ok = all(a > b for a, b in zip(chain, chain[1:]))
    lhs = sym_join(pointwise_meet([m, d]))[0, 1]
    rhs = pointwise_meet([sym_join(m), sym_join(d)])[0, 1]
    # the same pair breaks join preservation for the min-symmetrisation
    star_lhs = sym_meet(pointwise_join([m, d]))[0, 1]
    star_rhs = pointwise_join([sym_meet(m), sym_meet(d)])[0, 1]
    ok = chain_ok and lhs == Fraction(7, 5) and rhs == Fraction(8, 5) and lhs < rhs and star_rhs < star_lhs
    return {
        "pass": ok,
        "m": m.to_dict(),
        "d": d.to_dict(),
        "chain_holds": chain_ok,
        "sym_join_of_meet_xy": format_value(lhs),
        "meet_of_sym_joins_xy": format_value(rhs),
        "sym_meet_of_join_xy": format_value(star_lhs),
        "join_of_sym_meets_xy": format_value(star_rhs),
    }


DELTA_M = ("3/5", "7/10", "3/2")   # xy, xz, yz
DELTA_D = ("9/10", "11/20", "73/50")


def delta_gap_constraints(m: WeightStructure, d: WeightStructure) -> dict[str, bool]:
    x, y, z = 0, 1, 2
    return {
        "m(x,y)+m(x,z) < m(y,z)": m[x, y] + m[x, z] < m[y, z],
        "d(x,y)+d(x,z) < d(y,z)": d[x, y] + d[x, z] < d[y, z],
        "m(y,z) < m(x,z)+d(x,y)": m[y, z] < m[x, z] + d[x, y],
        "m(x,y) < d(x,y)": m[x, y] < d[x, y],
        "m(x,z) > d(x,z)": m[x, z] > d[x, z],
        "m(y,z) > d(y,z)": m[y, z] > d[y, z],
    }


def demo_delta_join_gap() -> dict:
    m, d = _three(*DELTA_M), _three(*DELTA_D)
    constraints = delta_gap_constraints(m, d)
    joined = pointwise_join([m, d])
    lhs = pointwise_join([tri_closure(m), tri_closure(d)])[1, 2]
    rhs = tri_closure(joined)[1, 2]
    in_class = all(satisfies(s, AxiomSet(zero=True, sep=True, sym=True)) for s in (m, d))
    ok = (
        all(constraints.values())
        and in_class
        and satisfies_tri(joined)
        and lhs == Fraction(29, 20)
        and rhs == Fraction(3, 2)
    )
    return {
        "pass": ok,
        "m": m.to_dict(),
        "d": d.to_dict(),
        "constraints": constraints,
        "join_of_closures_yz": format_value(lhs),
        "closure_of_join_yz": format_value(rhs),
    }


def demo_tri_meet_gap() -> dict:
    d = _three("9/10", 2, "3/2")
    e = _three("3/2", 2, "9/10")
    met = all(satisfies(s, AxiomSet.all()) for s in (d, e))
    m = pointwise_meet([d, e])
    ok = met and not satisfies_tri(m) and m[0, 1] + m[1, 2] < m[0, 2]
    return {
        "pass": ok,
        "d": d.to_dict(),
        "e": e.to_dict(),
        "meet": m.to_dict(),
        "path_xyz": format_value(m[0, 1] + m[1, 2]),
        "direct_xz": format_value(m[0, 2]),
    }


def demo_kelly_join(samples: int = 200, seed: int = 0) -> dict:
    fixed = WeightStructure([[0, 1, 2], [INF, 0, 1], [INF, INF, 0]], ("x", "y", "z"))
    cases = [fixed] + [random_weight(4, AxiomSet(zero=True, tri=True), DEFAULT_POOL, trial_rng(seed, t)) for t in range(samples)]
    failures = 0
    for d in cases:
        if topo_join(psi(d), psi(dual(d))) != psi(sym_join(d)):
            failures += 1
    return {
        "pass": failures == 0,
        "structure": fixed.to_dict(),
        "psi": _topology_dict(psi(fixed)),
        "psi_dual": _topology_dict(psi(dual(fixed))),
        "psi_symmetrised": _topology_dict(psi(sym_join(fixed))),
        "cases": len(cases),
        "failures": failures,
    }


def demo_trivial_topology_limit(k_max: int = 16) -> dict:
    discrete = FiniteTopology.discrete(2)
    each = [phi(_xy(Fraction(1, k), Fraction(1, k))) == discrete for k in range(1, k_max + 1)]
    limit = phi(_xy(0, 0))
    return {
        "pass": all(each) and limit.is_indiscrete(),
        "k_max": k_max,
        "discrete_count": sum(each),
        "limit_topology": _topology_dict(limit),
    }


def demo_ws_not_closed_limit(steps: int = 16) -> dict:
    chain = [_xy(Fraction(1, 2 ** i), Fraction(1, 2 ** i)) for i in range(steps)]
    members_sep = all(satisfies_sep(d) for d in chain)
    finite_meets_sep = all(satisfies_sep(pointwise_meet(chain[: k + 1])) for k in range(steps))
    infimum = _xy(0, 0)  # every entry of the chain tends to 0
    return {
        "pass": members_sep and finite_meets_sep and not satisfies_sep(infimum),
        "steps": steps,
        "members_separated": members_sep,
        "finite_meets_separated": finite_meets_sep,
        "infimum": infimum.to_dict(),
        "infimum_separated": satisfies_sep(infimum),
    }


def demo_embedding_join_gap() -> dict:
    labels = ("a", "b", "c")
    p = Partition.from_groups([["a", "b"]], labels)
    q = Partition.from_groups([["b", "c"]], labels)
    report = verify_embedding([p, q])
    w = report.join_witness or {}
    ok = (
        report.meet_preserved
        and not report.join_preserved
        and w.get("pair") == ["a", "c"]
        and w.get("embedded_lattice_op") == "3/2"
        and w.get("pointwise_op") == "1"
    )
    return {"pass": ok, "report": report.to_dict()}


def demo_fiber_partition(samples: int = 300, seed: int = 0) -> dict:
    labels = ("a", "b", "c", "d")
    blocks = [[0, 1], [2], [3]]
    block_of = {i: k for k, blk in enumerate(blocks) for i in blk}
    p = WeightStructure.from_function(labels, lambda i, j: 0 if block_of[i] == block_of[j] else INF)
    tau = psi(p)
    expected = partition_topology(len(labels), [sum(1 << i for i in blk) for blk in blocks])
    in_fiber = join_stays = below_p = 0
    for t in range(samples):
        rng = trial_rng(seed, t)
        d = WeightStructure.from_function(
            labels, lambda i, j: 0 if block_of[i] == block_of[j] else rng.choice(DEFAULT_POOL[1:])
        )
        if psi(d) != tau:
            continue
        in_fiber += 1
        below_p += d <= p
        join_stays += psi(pointwise_join([d, p])) == tau
    # anything strictly above p has a strictly finer topology
    raised = p.replace({(0, 1): 1, (1, 0): 1})
    finer = psi(raised) > tau
    ok = tau == expected and in_fiber > 0 and join_stays == in_fiber and below_p == in_fiber and finer
    return {
        "pass": ok,
        "partition_structure": p.to_dict(),
        "psi": _topology_dict(tau),
        "fiber_samples": in_fiber,
        "join_stays_in_fiber": join_stays,
        "below_partition_structure": below_p,
        "strictly_above_is_finer": finer,
    }


DEMOS: dict[str, Callable[[], dict]] = {
    "sigma_meet_gap": demo_sigma_meet_gap,
    "delta_join_gap": demo_delta_join_gap,
    "tri_meet_gap": demo_tri_meet_gap,
    "kelly_join": demo_kelly_join,
    "trivial_topology_limit": demo_trivial_topology_limit,
    "ws_not_closed_limit": demo_ws_not_closed_limit,
    "embedding_join_gap": demo_embedding_join_gap,
    "fiber_partition": demo_fiber_partition,
}


def run_demo(name: str) -> SearchReport:
    if name not in DEMOS:
        raise WeightError(f"unknown demo {name!r}; choose from {', '.join(DEMOS)}")
    start = time.perf_counter()
    details = DEMOS[name]()
    ok = details.pop("pass")
    return SearchReport(
        property=name,
        context="",
        n=0,
        seed=None,
        mode="demo",
        trials=1,
        outcome="pass" if ok else "fail",
        details=details,
        elapsed=time.perf_counter() - start,
    )
