"""Structure of Met(X): pseudo-anti-atoms and the decomposition identity,
elementary steps, pairwise maximality/minimality, Menger and Menger*
convexity, and a constructive strictly-between element.

Predicates return ``None`` when the structure passes and a witness
otherwise.  Witness points ``z`` (and ``p``) are always taken outside the
pair under test.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from .adjoints import met_meet, tri_closure
from .weights import (
    INF,
    MET,
    ExtValue,
    PreconditionError,
    WeightStructure,
    ext,
    format_value,
    require,
)

# finite stand-in used when interpolating towards an infinite entry
UNBOUNDED_STEP = Fraction(5)


@dataclass(frozen=True)
class PairWitness:
    kind: str
    pair: tuple[int, int]
    labels: tuple[str, str]
    values: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "pair": list(self.labels),
            "values": {k: format_value(v) if not isinstance(v, (str, list)) else v for k, v in self.values.items()},
        }


@dataclass(frozen=True)
class PairStepWitness:
    support: tuple[int, ...]
    changed: tuple[tuple[int, int], ...]
    labels: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "support": [self.labels[i] for i in self.support],
            "changed": [[self.labels[i], self.labels[j]] for i, j in self.changed],
        }


def _witness(d: WeightStructure, kind: str, x: int, y: int, **values) -> PairWitness:
    return PairWitness(kind, (x, y), (d.labels[x], d.labels[y]), values)


def _index(d_or_labels, point) -> int:
    labels = d_or_labels if isinstance(d_or_labels, (list, tuple)) else d_or_labels.labels
    if isinstance(point, int):
        return point
    return list(labels).index(point)


def _atom(labels: Sequence[str], i: int, j: int, alpha: ExtValue) -> WeightStructure:
    n = len(labels)
    zero = Fraction(0)
    rows = [[zero if a == b else INF for b in range(n)] for a in range(n)]
    rows[i][j] = rows[j][i] = alpha
    return WeightStructure._raw(tuple(map(tuple, rows)), tuple(labels))


def pseudo_anti_atom(n: int, labels: Sequence[str] | None, x, y, alpha) -> WeightStructure:
    """Zero diagonal, ``alpha`` on the pair ``{x, y}``, infinite elsewhere."""
    labels = tuple(labels) if labels is not None else WeightStructure.top(n).labels
    if len(labels) != n:
        raise PreconditionError(f"{len(labels)} labels for {n} points")
    i, j = _index(labels, x), _index(labels, y)
    if i == j:
        raise PreconditionError("a pseudo-anti-atom needs two distinct points")
    alpha = ext(alpha)
    if alpha <= 0:
        raise PreconditionError("pseudo-anti-atom value must be positive")
    return _atom(labels, i, j, alpha)


def decomposition(d: WeightStructure) -> WeightStructure:
    """Met(X)-meet of the atoms ``d^{d(x,y),x,y}`` over all pairs.

    A zero distance uses the atom with value 0 at that pair.
    """
    require(d, MET, "decomposition input")
    atoms = [_atom(d.labels, i, j, d[i, j]) for i in range(d.n) for j in range(i + 1, d.n)]
    if not atoms:
        return WeightStructure.top(d.n, d.labels)
    return met_meet(atoms)


def decompose_check(d: WeightStructure) -> tuple[int, int] | None:
    """``None`` if ``d`` equals its decomposition, else the first differing cell."""
    rebuilt = decomposition(d)
    for i, j in d.cells():
        if rebuilt[i, j] != d[i, j]:
            return (i, j)
    return None


def elementary_step(d: WeightStructure, m: WeightStructure, n: int) -> PairStepWitness | None:
    """Witness for ``d <_n m``: ``d < m`` and every changed pair lies inside a
    support of at most ``n`` points.  The support returned is the smallest
    one, the set of endpoints of changed pairs."""
    d._check_shape(m)
    require(d, MET, "lower structure")
    require(m, MET, "upper structure")
    if not d < m:
        return None
    changed = tuple((i, j) for i, j in d.cells() if i <= j and d[i, j] != m[i, j])
    support = tuple(sorted({p for pair in changed for p in pair}))
    if len(support) > n:
        return None
    return PairStepWitness(support, changed, d.labels)


def _others(n: int, x: int, y: int) -> Iterator[int]:
    return (z for z in range(n) if z != x and z != y)


def pair_maximal(d: WeightStructure) -> PairWitness | None:
    """Pass iff no single distance can be raised within Met(X): each finite
    ``d(x, y)`` is already the shortest detour through a third point."""
    require(d, MET, "pair_maximal input")
    for x in range(d.n):
        for y in range(x + 1, d.n):
            dxy = d[x, y]
            if dxy == INF:
                continue
            detour = min((d[x, z] + d[z, y] for z in _others(d.n, x, y)), default=INF)
            if dxy != detour:
                return _witness(d, "raisable", x, y, distance=dxy, bound=detour)
    return None


def _gap(a: ExtValue, b: ExtValue) -> ExtValue:
    if a == INF and b == INF:
        return Fraction(0)
    if a == INF or b == INF:
        return INF
    return abs(a - b)


def pair_minimal(d: WeightStructure) -> PairWitness | None:
    """Pass iff no single positive distance can be lowered within Met(X):
    some third point ``z`` has ``|d(x, z) - d(y, z)| = d(x, y)``."""
    require(d, MET, "pair_minimal input")
    for x in range(d.n):
        for y in range(x + 1, d.n):
            dxy = d[x, y]
            if dxy == 0:
                continue
            bound = max((_gap(d[x, z], d[y, z]) for z in _others(d.n, x, y)), default=Fraction(0))
            if bound != dxy:
                return _witness(d, "lowerable", x, y, distance=dxy, bound=bound)
    return None


def menger_convex(d: WeightStructure) -> PairWitness | None:
    """Menger convexity on a finite carrier.

    Any pair at positive distance ``L`` fails: only finitely many values are
    attained, so some ``0 < r < L`` has no point ``p`` with ``d(x, p) = r``.
    The witness ``r`` is the midpoint between 0 and the smallest positive
    attained value not exceeding ``L`` (1 if there is none), and it is
    re-checked by scanning every ``p``.
    """
    require(d, MET, "menger_convex input")
    attained = sorted(v for v in d.finite_values() if v > 0)
    for x in range(d.n):
        for y in range(x + 1, d.n):
            length = d[x, y]
            if length == 0:
                continue
            below = [v for v in attained if v <= length]
            r = below[0] / 2 if below else Fraction(1)
            if length != INF and r >= length:  # pragma: no cover - r < smallest positive value <= L
                continue
            rest = INF if length == INF else length - r
            if not any(d[x, p] == r and d[p, y] == rest for p in range(d.n)):
                return _witness(d, "no_intermediate_point", x, y, distance=length, r=r)
    return None


def menger_star_certificates(d: WeightStructure, x: int, y: int) -> list[int]:
    """Points ``z`` outside ``{x, y}`` with ``d(y, z) = d(x, y) + d(x, z)``."""
    return [z for z in _others(d.n, x, y) if d[y, z] == d[x, y] + d[x, z]]


def menger_star_failures(d: WeightStructure) -> list[tuple[int, int]]:
    return [(x, y) for x in range(d.n) for y in range(d.n) if x != y and not menger_star_certificates(d, x, y)]


def menger_star(d: WeightStructure) -> PairWitness | None:
    """Pass iff every ordered pair ``x != y`` has a ``z`` outside the pair
    with ``d(y, z) = d(x, y) + d(x, z)``; else the first failing pair."""
    require(d, MET, "menger_star input")
    failures = menger_star_failures(d)
    if not failures:
        return None
    x, y = failures[0]
    return _witness(d, "no_extension_point", x, y, distance=d[x, y])


def strict_between(d: WeightStructure, m: WeightStructure) -> WeightStructure:
    """Some ``w`` in Met(X) with ``d < w < m``.

    Finite cells are averaged, a finite ``d`` under an infinite ``m`` is
    raised by :data:`UNBOUNDED_STEP`, and the result is closed under the
    triangle inequality.  Closure cannot reach back down to ``d``: a path
    no longer than ``d(x, y)`` would use only cells where ``d = m`` and
    would bound ``m(x, y)`` by ``d(x, y)``.
    """
    require(d, MET, "lower structure")
    require(m, MET, "upper structure")
    if not d < m:
        raise PreconditionError("strict_between needs d < m")
    rows = []
    for rd, rm in zip(d.rows, m.rows):
        row = []
        for a, b in zip(rd, rm):
            if a == b:
                row.append(a)
            elif b == INF:
                row.append(a + UNBOUNDED_STEP)
            else:
                row.append((a + b) / 2)
        rows.append(tuple(row))
    w = tri_closure(WeightStructure._raw(tuple(rows), d.labels))
    if not d < w < m:  # pragma: no cover - guarded by the argument above
        raise AssertionError("interpolation failed to land strictly between")
    return w
