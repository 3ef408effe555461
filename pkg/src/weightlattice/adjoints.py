"""Adjoints to the inclusions between axiom classes, the meet of Met(X),
and an extensional harness that checks the Galois-connection law.

Naming follows the functor each function realises:

==============  ============================================================
``zero_fix``    right adjoint of ``W_{P+zero} -> W_P``: diagonal set to 0
``inf_diag``    right adjoint of ``zero_fix``: diagonal set to inf
``sym_join``    left adjoint of ``W_{P+sym} -> W_P``: ``max(d, d^T)``
``sym_meet``    right adjoint of ``W_{P+sym} -> W_P``: ``min(d, d^T)``
``tri_closure`` right adjoint of ``W_{P+tri} -> W_P``: shortest paths
==============  ============================================================
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable, Iterable, Sequence

from .weights import (
    INF,
    MET,
    AxiomSet,
    PreconditionError,
    WeightError,
    WeightStructure,
    ext,
    pointwise_join,
    pointwise_meet,
    require,
    require_zero,
    satisfies,
)


def zero_fix(d: WeightStructure) -> WeightStructure:
    rows = tuple(
        tuple(Fraction(0) if i == j else v for j, v in enumerate(row)) for i, row in enumerate(d.rows)
    )
    return WeightStructure._raw(rows, d.labels)


def inf_diag(d: WeightStructure) -> WeightStructure:
    require_zero(d)
    rows = tuple(tuple(INF if i == j else v for j, v in enumerate(row)) for i, row in enumerate(d.rows))
    return WeightStructure._raw(rows, d.labels)


def sym_join(d: WeightStructure) -> WeightStructure:
    rows = tuple(tuple(max(a, b) for a, b in zip(row, col)) for row, col in zip(d.rows, zip(*d.rows)))
    return WeightStructure._raw(rows, d.labels)


def sym_meet(d: WeightStructure) -> WeightStructure:
    rows = tuple(tuple(min(a, b) for a, b in zip(row, col)) for row, col in zip(d.rows, zip(*d.rows)))
    return WeightStructure._raw(rows, d.labels)


def tri_closure(d: WeightStructure) -> WeightStructure:
    """Greatest structure below ``d`` satisfying the triangle inequality.

    Entry ``(x, y)`` of the result is the least total weight of a path from
    ``x`` to ``y`` whose edges are weighted by ``d``.  Computed by
    Floyd-Warshall relaxation; exact because the values are.
    """
    require_zero(d, "tri_closure input")
    n = d.n
    dist = [list(row) for row in d.rows]
    for k in range(n):
        dk = dist[k]
        for i in range(n):
            dik = dist[i][k]
            if dik == INF:
                continue
            di = dist[i]
            for j in range(n):
                via = dik + dk[j]
                if via < di[j]:
                    di[j] = via
    return WeightStructure._raw(tuple(map(tuple, dist)), d.labels)


def met_meet(family: Sequence[WeightStructure]) -> WeightStructure:
    """Meet inside Met(X): the triangle closure of the pointwise meet."""
    family = list(family)
    for k, d in enumerate(family):
        require(d, MET, f"member {k} of the family")
    return tri_closure(pointwise_meet(family))


def path_closure_oracle(d: WeightStructure) -> WeightStructure:
    """Brute force: minimise over every edge sequence of length 1..n-1.

    Independent of :func:`tri_closure`; exponential, keep ``n`` small.
    """
    n = d.n
    rows = []
    for x in range(n):
        row = []
        for y in range(n):
            best = d[x, y]
            for k in range(1, n - 1):
                for mid in product(range(n), repeat=k):
                    walk = (x, *mid, y)
                    total = sum((d[a, b] for a, b in zip(walk, walk[1:])), Fraction(0))
                    if total < best:
                        best = total
            row.append(best)
        rows.append(row)
    return WeightStructure(rows, d.labels)


# -- Galois harness ---------------------------------------------------------

class AdjunctionId(str, enum.Enum):
    ZERO_STAR = "ZeroStar"
    INF_SHRIEK = "InfShriek"
    SIGMA_SHRIEK = "SigmaShriek"
    SIGMA_STAR = "SigmaStar"
    DELTA_STAR = "DeltaStar"
    MET_MEET = "MetMeet"

    @classmethod
    def parse(cls, text: str) -> "AdjunctionId":
        key = text.replace("_", "").replace("-", "").lower()
        for member in cls:
            if member.value.lower() == key or member.name.replace("_", "").lower() == key:
                return member
        raise WeightError(f"unknown adjunction {text!r}; choose from {', '.join(m.value for m in cls)}")


@dataclass(frozen=True)
class Adjunction:
    """``left(a) <= b  iff  a <= right(b)`` for ``a`` in the lower class and
    ``b`` in the upper class.  Either map may be the identity (an inclusion).
    """

    name: str
    left: Callable[[WeightStructure], WeightStructure]
    right: Callable[[WeightStructure], WeightStructure]
    lower: AxiomSet
    upper: AxiomSet


def _identity(d: WeightStructure) -> WeightStructure:
    return d


# context restrictions per adjunction: which axioms P may contain
_ALLOWED = {
    AdjunctionId.ZERO_STAR: AxiomSet(sym=True, tri=True),
    AdjunctionId.INF_SHRIEK: AxiomSet(sym=True),
    AdjunctionId.SIGMA_SHRIEK: AxiomSet(zero=True, sep=True, tri=True),
    AdjunctionId.SIGMA_STAR: AxiomSet(zero=True, tri=True),
    AdjunctionId.DELTA_STAR: AxiomSet(zero=True, sym=True),
    AdjunctionId.MET_MEET: AxiomSet(zero=True, sym=True, tri=True),
}


def adjunction(ident: AdjunctionId | str, context: AxiomSet = AxiomSet()) -> Adjunction:
    """Build the adjunction ``ident`` over the axiom context ``context``."""
    ident = AdjunctionId.parse(ident) if isinstance(ident, str) else ident
    allowed = _ALLOWED[ident]
    if not context <= allowed:
        raise PreconditionError(f"{ident.value} is not available over context {{{context}}}; allowed axioms: {allowed}")
    P = context
    if ident is AdjunctionId.ZERO_STAR:
        # inclusion W_{P+0} -> W_P  -|  zero_fix
        return Adjunction(ident.value, _identity, zero_fix, P | AxiomSet(zero=True), P)
    if ident is AdjunctionId.INF_SHRIEK:
        # zero_fix : W_P -> W_{P+0}  -|  inf_diag
        return Adjunction(ident.value, zero_fix, inf_diag, P, P | AxiomSet(zero=True))
    if ident is AdjunctionId.SIGMA_SHRIEK:
        return Adjunction(ident.value, sym_join, _identity, P, P | AxiomSet(sym=True))
    if ident is AdjunctionId.SIGMA_STAR:
        if P.tri and not P.zero:
            raise PreconditionError("SigmaStar over a tri context needs zero as well")
        # with tri in P the symmetric meet must be re-closed to land in W_{P+sym}
        right = (lambda d: tri_closure(sym_meet(d))) if P.tri else sym_meet
        return Adjunction(ident.value, _identity, right, P | AxiomSet(sym=True), P)
    if ident is AdjunctionId.DELTA_STAR:
        if not P.zero:
            raise PreconditionError("DeltaStar needs zero in the context")
        return Adjunction(ident.value, _identity, tri_closure, P | AxiomSet(tri=True), P)
    raise WeightError("MetMeet is a binary meet; use galois_holds")


@dataclass
class GaloisReport:
    id: str
    context: str
    n: int
    seed: int | None
    trials: int
    exhaustive_pairs: int = 0
    witness: dict | None = None

    @property
    def holds(self) -> bool:
        return self.witness is None

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "context": self.context,
            "n": self.n,
            "seed": self.seed,
            "trials": self.trials,
            "exhaustive_pairs": self.exhaustive_pairs,
            "outcome": "pass" if self.holds else "witness",
            "witness": self.witness,
        }


def law_violation(adj: Adjunction, a: WeightStructure, b: WeightStructure) -> dict | None:
    """Check ``left(a) <= b  iff  a <= right(b)``; return a witness or None."""
    fa = adj.left(a)
    gb = adj.right(b)
    lhs = fa <= b
    rhs = a <= gb
    if lhs == rhs:
        return None
    return {
        "lower": a.to_dict(),
        "upper": b.to_dict(),
        "left_of_lower": fa.to_dict(),
        "right_of_upper": gb.to_dict(),
        "left_side_holds": lhs,
        "right_side_holds": rhs,
    }


def check_pairs(adj: Adjunction, lowers: Iterable[WeightStructure], uppers: Sequence[WeightStructure]) -> tuple[int, dict | None]:
    """Exhaustively check the law on ``lowers x uppers``; caches both maps."""
    uppers = list(uppers)
    right_images = [adj.right(b) for b in uppers]
    count = 0
    for a in lowers:
        fa = adj.left(a)
        for b, gb in zip(uppers, right_images):
            count += 1
            if (fa <= b) != (a <= gb):
                return count, law_violation(adj, a, b)
    return count, None


def _met_meet_violation(d1, d2, m) -> dict | None:
    # m <= met_meet(d1, d2)  iff  m <= d1 and m <= d2
    mm = met_meet([d1, d2])
    lhs = m <= mm
    rhs = m <= d1 and m <= d2
    if lhs == rhs:
        return None
    return {"members": [d1.to_dict(), d2.to_dict()], "lower": m.to_dict(), "meet": mm.to_dict()}


GALOIS_POOL = (Fraction(0), Fraction(1), Fraction(3, 2), Fraction(2), INF)


def galois_holds(
    ident: AdjunctionId | str,
    trials: int = 1000,
    seed: int = 0,
    n: int = 3,
    pool: Sequence = GALOIS_POOL,
    context: AxiomSet = AxiomSet(),
    exhaustive: bool | None = None,
) -> GaloisReport:
    """Sample pairs and check the adjunction law for ``ident``.

    With ``exhaustive`` (default: when ``n == 2``) every pair of structures
    with entries from ``pool`` is checked in addition to the random trials.
    Trial ``t`` draws from ``random.Random(f"{seed}:{t}")`` so the report
    does not depend on evaluation order.
    """
    from .sampling import enumerate_weights, random_weight, trial_rng

    ident = AdjunctionId.parse(ident) if isinstance(ident, str) else ident
    pool = [ext(v) for v in pool]
    if exhaustive is None:
        exhaustive = n == 2
    report = GaloisReport(ident.value, str(context), n, seed, trials)

    if ident is AdjunctionId.MET_MEET:
        for t in range(trials):
            rng = trial_rng(seed, t)
            d1, d2, m = (random_weight(n, MET, pool, rng) for _ in range(3))
            # bias m below both operands half of the time so both sides of the law get hit
            if rng.random() < 0.5:
                m = met_meet([m, d1, d2])
            w = _met_meet_violation(d1, d2, m)
            if w is not None:
                report.witness = {"trial": t, **w}
                return report
        return report

    adj = adjunction(ident, context)
    if exhaustive:
        lowers = list(enumerate_weights(n, adj.lower, pool))
        uppers = list(enumerate_weights(n, adj.upper, pool))
        count, witness = check_pairs(adj, lowers, uppers)
        report.exhaustive_pairs = count
        if witness is not None:
            report.witness = {"exhaustive": True, **witness}
            return report
    for t in range(trials):
        rng = trial_rng(seed, t)
        a = random_weight(n, adj.lower, pool, rng)
        b = random_weight(n, adj.upper, pool, rng)
        # half the trials push one side of the law to true so the equivalence is exercised both ways
        coin = rng.random()
        if coin < 0.25:
            b = _raise_into(adj, a, b)
        elif coin < 0.5:
            a = _lower_into(adj, a, b)
        w = law_violation(adj, a, b)
        if w is not None:
            report.witness = {"trial": t, **w}
            return report
    return report


def _raise_into(adj: Adjunction, a: WeightStructure, b: WeightStructure) -> WeightStructure:
    candidate = pointwise_join([b, adj.left(a)])
    return candidate if satisfies(candidate, adj.upper) else b


def _lower_into(adj: Adjunction, a: WeightStructure, b: WeightStructure) -> WeightStructure:
    candidate = pointwise_meet([a, adj.right(b)])
    return candidate if satisfies(candidate, adj.lower) else a


def check_claimed_adjunction(
    left: Callable[[WeightStructure], WeightStructure],
    right: Callable[[WeightStructure], WeightStructure],
    lowers: Iterable[WeightStructure],
    uppers: Sequence[WeightStructure],
) -> dict | None:
    """Check an arbitrary claimed adjunction on explicit samples."""
    adj = Adjunction("claimed", left, right, AxiomSet(), AxiomSet())
    return check_pairs(adj, lowers, uppers)[1]


def class_meet(family: Sequence[WeightStructure], axioms: AxiomSet) -> WeightStructure:
    """Binary/finite meet inside ``W_P`` for ``P`` without sep: pointwise,
    re-closed under the triangle inequality when ``tri`` is in ``P``."""
    m = pointwise_meet(family)
    return tri_closure(m) if axioms.tri else m
