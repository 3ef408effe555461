"""Finite topologies as sorted tuples of bit masks, the cover/base/topology
generation chain, and the two ways of turning a weight structure into a
topology: ``psi`` (balls as a subbase) and ``phi`` (sets that contain a
ball around each of their points).

Point ``i`` is bit ``1 << i``; bit order follows the label order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .weights import (
    INF,
    PreconditionError,
    ShapeError,
    Side,
    WeightStructure,
    ball_mask,
    dual,
    require_zero,
)

PSI_MAX_POINTS = 16
ORACLE_MAX_POINTS = 8


def _canonical(masks: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted(set(masks), key=lambda m: (bin(m).count("1"), m)))


def full_mask(n: int) -> int:
    return (1 << n) - 1


def mask_of(points: Iterable[int]) -> int:
    mask = 0
    for p in points:
        mask |= 1 << p
    return mask


def points_of(mask: int) -> list[int]:
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


@dataclass(frozen=True)
class SetCollection:
    n: int
    sets: tuple[int, ...]

    def __init__(self, n: int, sets: Iterable[int]):
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "sets", _canonical(sets))
        if any(s >> n for s in self.sets):
            raise ShapeError(f"set outside the {n}-point universe")


@dataclass(frozen=True)
class FiniteTopology:
    n: int
    opens: tuple[int, ...]

    def __init__(self, n: int, opens: Iterable[int]):
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "opens", _canonical(opens))

    @classmethod
    def discrete(cls, n: int) -> "FiniteTopology":
        return cls(n, range(1 << n))

    @classmethod
    def indiscrete(cls, n: int) -> "FiniteTopology":
        return cls(n, {0, full_mask(n)})

    def __contains__(self, mask: int) -> bool:
        return mask in set(self.opens)

    def __len__(self) -> int:
        return len(self.opens)

    def __le__(self, other: "FiniteTopology") -> bool:
        """Coarser-or-equal: every open set of ``self`` is open in ``other``."""
        _same_size(self, other)
        return set(self.opens) <= set(other.opens)

    def __lt__(self, other: "FiniteTopology") -> bool:
        return self <= other and self != other

    def is_discrete(self) -> bool:
        return len(self.opens) == 1 << self.n

    def is_indiscrete(self) -> bool:
        return set(self.opens) == {0, full_mask(self.n)}

    def minimal_neighbourhoods(self) -> list[int]:
        out = []
        for x in range(self.n):
            u = full_mask(self.n)
            for o in self.opens:
                if o >> x & 1:
                    u &= o
            out.append(u)
        return out

    def is_partition_topology(self) -> bool:
        """Every open set is also closed."""
        full = full_mask(self.n)
        opens = set(self.opens)
        return all(full ^ o in opens for o in opens)

    def blocks(self) -> list[int]:
        """Distinct minimal neighbourhoods (the blocks when this is a partition topology)."""
        return sorted(set(self.minimal_neighbourhoods()))

    def listing(self) -> str:
        lines = [f"n={self.n}"]
        lines += sorted("".join("1" if o >> i & 1 else "0" for i in range(self.n)) for o in self.opens)
        return "\n".join(lines) + "\n"


def _same_size(a, b) -> None:
    if a.n != b.n:
        raise ShapeError(f"topologies on {a.n} and {b.n} points")


@dataclass(frozen=True)
class Classification:
    is_cover: bool
    is_base: bool
    is_topology: bool


def classify(c: SetCollection) -> Classification:
    full = full_mask(c.n)
    union = 0
    for s in c.sets:
        union |= s
    cover = union == full
    base = cover
    if base:
        for i, a in enumerate(c.sets):
            for b in c.sets[i:]:
                inter = a & b
                for x in points_of(inter):
                    if not any(s >> x & 1 and s & ~inter == 0 for s in c.sets):
                        base = False
                        break
                if not base:
                    break
            if not base:
                break
    members = set(c.sets)
    topology = (
        0 in members
        and full in members
        and all(a | b in members and a & b in members for a in members for b in members)
    )
    return Classification(cover, base, topology)


def generate_topology(c: SetCollection | Sequence[int], n: int | None = None) -> FiniteTopology:
    """Least topology containing the collection.

    The minimal open neighbourhood of ``x`` is the intersection of every
    generating set containing ``x`` (and of ``X``); the topology is the set
    of all unions of minimal neighbourhoods.
    """
    if not isinstance(c, SetCollection):
        c = SetCollection(n, c)
    full = full_mask(c.n)
    minimal = []
    for x in range(c.n):
        u = full
        for s in c.sets:
            if s >> x & 1:
                u &= s
        minimal.append(u)
    return _unions(c.n, minimal)


def _unions(n: int, generators: Iterable[int]) -> FiniteTopology:
    opens = {0}
    for g in set(generators):
        opens |= {o | g for o in opens}
    opens.add(full_mask(n))
    return FiniteTopology(n, opens)


def generate_topology_naive(c: SetCollection) -> FiniteTopology:
    """Oracle: add ``X`` and the empty set, then close under pairwise
    intersections and unions until nothing changes."""
    opens = set(c.sets) | {0, full_mask(c.n)}
    while True:
        new = {a & b for a in opens for b in opens} | {a | b for a in opens for b in opens}
        if new <= opens:
            return FiniteTopology(c.n, opens)
        opens |= new


def topo_meet(a: FiniteTopology, b: FiniteTopology) -> FiniteTopology:
    _same_size(a, b)
    return FiniteTopology(a.n, set(a.opens) & set(b.opens))


def topo_join(a: FiniteTopology, b: FiniteTopology) -> FiniteTopology:
    _same_size(a, b)
    return generate_topology(SetCollection(a.n, set(a.opens) | set(b.opens)))


# -- weight structures to topologies ----------------------------------------

def radius_thresholds(d: WeightStructure) -> list[Fraction]:
    """Radii at which some ball can change: every distinct positive finite
    entry, plus one radius beyond all finite entries."""
    finite = d.finite_values()
    positive = sorted(v for v in finite if v > 0)
    top = max(finite, default=Fraction(0))
    return positive + [top + 1]


def _check_size(d: WeightStructure, cap: int) -> None:
    if d.n > cap:
        raise PreconditionError(f"{d.n} points exceeds the configured cap of {cap}")


def ball_family(d: WeightStructure, side: Side = Side.LEFT) -> SetCollection:
    side = Side(side)
    if side is Side.RIGHT:
        return ball_family(dual(d), Side.LEFT)
    radii = radius_thresholds(d)
    return SetCollection(d.n, {ball_mask(d, x, eps) for x in range(d.n) for eps in radii})


def psi(d: WeightStructure, side: Side = Side.LEFT, cap: int = PSI_MAX_POINTS) -> FiniteTopology:
    """Topology generated by all open balls of ``d`` taken as a subbase."""
    require_zero(d, "psi input")
    _check_size(d, cap)
    return generate_topology(ball_family(d, side))


def zero_sets(d: WeightStructure, side: Side = Side.LEFT) -> list[int]:
    """``Z(x) = {y : d(x, y) = 0}`` (left) or ``{y : d(y, x) = 0}`` (right):
    the smallest ball about ``x``."""
    side = Side(side)
    if side is Side.RIGHT:
        d = dual(d)
    return [mask_of(y for y in range(d.n) if d[x, y] == 0) for x in range(d.n)]


def phi(d: WeightStructure, side: Side = Side.LEFT, cap: int = PSI_MAX_POINTS) -> FiniteTopology:
    """Sets containing a ball about each of their points.

    On a finite set the smallest ball about ``x`` is ``Z(x)``, so a set is
    open iff it is closed under ``x -> Z(x)``.  The minimal open set about
    ``x`` is therefore everything reachable from ``x`` through zero entries.
    """
    require_zero(d, "phi input")
    _check_size(d, cap)
    z = zero_sets(d, side)
    minimal = []
    for x in range(d.n):
        reach = z[x] | 1 << x
        frontier = reach
        while frontier:
            nxt = 0
            for y in points_of(frontier):
                nxt |= z[y]
            frontier = nxt & ~reach
            reach |= nxt
        minimal.append(reach)
    return _unions(d.n, minimal)


def phi_oracle(d: WeightStructure, side: Side = Side.LEFT, cap: int = ORACLE_MAX_POINTS) -> FiniteTopology:
    """Literal definition over all ``2^n`` subsets, trying every threshold
    radius and every midpoint between consecutive thresholds."""
    require_zero(d, "phi input")
    _check_size(d, cap)
    side = Side(side)
    if side is Side.RIGHT:
        d = dual(d)
    radii = radius_thresholds(d)
    probes = set(radii)
    lows = [Fraction(0)] + radii
    probes |= {(a + b) / 2 for a, b in zip(lows, lows[1:])}
    balls = [[ball_mask(d, x, eps) for eps in sorted(probes)] for x in range(d.n)]
    opens = []
    for subset in range(1 << d.n):
        if all(any(b & ~subset == 0 for b in balls[x]) for x in points_of(subset)):
            opens.append(subset)
    return FiniteTopology(d.n, opens)


def partition_topology(n: int, blocks: Iterable[int]) -> FiniteTopology:
    return _unions(n, blocks)
