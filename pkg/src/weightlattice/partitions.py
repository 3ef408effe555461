"""The partition lattice Eq(X) and its map into Met(X).

``embed`` sends a partition to the metric that is ``alpha`` between
distinct equivalent points and 1 between inequivalent ones, with
``1 < alpha < 2`` so every two-step detour (>= 2) exceeds every direct
distance.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .adjoints import met_meet
from .topology import psi
from .weights import (
    ParseError,
    PreconditionError,
    ShapeError,
    WeightStructure,
    default_labels,
    ext,
    format_value,
    pointwise_join,
    pointwise_meet,
)

DEFAULT_ALPHA = Fraction(3, 2)


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def _canonical_blocks(assignment: Sequence) -> tuple[int, ...]:
    # renumber block ids by first occurrence
    seen: dict = {}
    return tuple(seen.setdefault(b, len(seen)) for b in assignment)


@dataclass(frozen=True)
class Partition:
    """Equivalence relation on ``n`` labelled points, stored as a block id per
    point with ids numbered by first occurrence."""

    blocks: tuple[int, ...]
    labels: tuple[str, ...]

    def __init__(self, blocks: Sequence, labels: Sequence[str] | None = None):
        canon = _canonical_blocks(blocks)
        labels = tuple(labels) if labels is not None else default_labels(len(canon))
        if len(labels) != len(canon):
            raise ShapeError(f"{len(labels)} labels for {len(canon)} points")
        object.__setattr__(self, "blocks", canon)
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_groups(cls, groups: Iterable[Iterable[str]], labels: Sequence[str]) -> "Partition":
        """``Partition.from_groups([["a", "b"], ["c"]], "abc")``; unlisted points are singletons."""
        labels = tuple(labels)
        index = {label: i for i, label in enumerate(labels)}
        assignment = list(range(len(labels)))
        for g, group in enumerate(groups):
            for label in group:
                if label not in index:
                    raise ShapeError(f"unknown point {label!r}")
                assignment[index[label]] = len(labels) + g
        return cls(assignment, labels)

    @classmethod
    def discrete(cls, labels: Sequence[str]) -> "Partition":
        return cls(range(len(labels)), labels)

    @classmethod
    def indiscrete(cls, labels: Sequence[str]) -> "Partition":
        return cls([0] * len(labels), labels)

    @property
    def n(self) -> int:
        return len(self.blocks)

    def reorder(self, labels: Sequence[str]) -> "Partition":
        """Same relation over the same points listed in another order."""
        if sorted(labels) != sorted(self.labels):
            raise ShapeError(f"cannot reorder {self.labels} as {tuple(labels)}")
        pos = {label: i for i, label in enumerate(self.labels)}
        return Partition([self.blocks[pos[label]] for label in labels], labels)

    def related(self, i: int, j: int) -> bool:
        return self.blocks[i] == self.blocks[j]

    def groups(self) -> list[list[str]]:
        out: dict[int, list[str]] = {}
        for label, b in zip(self.labels, self.blocks):
            out.setdefault(b, []).append(label)
        return list(out.values())

    def __le__(self, other: "Partition") -> bool:
        """Refinement order: every block of ``self`` lies inside a block of ``other``."""
        _check(self, other)
        return all(other.related(i, j) for i, j in combinations(range(self.n), 2) if self.related(i, j))

    def __lt__(self, other: "Partition") -> bool:
        return self <= other and self != other

    def __str__(self) -> str:
        return "|".join("".join(g) if all(len(s) == 1 for s in g) else ",".join(g) for g in self.groups())


def _check(a: Partition, b: Partition) -> None:
    if a.labels != b.labels:
        raise ShapeError(f"partitions of different point sets: {a.labels} vs {b.labels}")


def part_meet(a: Partition, b: Partition) -> Partition:
    _check(a, b)
    return Partition(list(zip(a.blocks, b.blocks)), a.labels)


def part_join(a: Partition, b: Partition) -> Partition:
    _check(a, b)
    uf = _UnionFind(a.n)
    for p in (a, b):
        first: dict[int, int] = {}
        for i, blk in enumerate(p.blocks):
            uf.union(first.setdefault(blk, i), i)
    return Partition([uf.find(i) for i in range(a.n)], a.labels)


def all_partitions(labels: Sequence[str]) -> list[Partition]:
    """Every partition of the points, via restricted growth strings."""
    n = len(labels)
    out = []

    def grow(prefix: list[int], top: int) -> None:
        if len(prefix) == n:
            out.append(Partition(prefix, labels))
            return
        for b in range(top + 2):
            grow(prefix + [b], max(top, b))

    if n:
        grow([0], 0)
    return out


def _check_alpha(alpha) -> Fraction:
    alpha = ext(alpha)
    if not 1 < alpha < 2:
        raise PreconditionError(f"alpha must satisfy 1 < alpha < 2, got {format_value(alpha)}")
    return alpha


def embed(p: Partition, alpha=DEFAULT_ALPHA) -> WeightStructure:
    alpha = _check_alpha(alpha)
    one, zero = Fraction(1), Fraction(0)
    n = p.n
    rows = tuple(
        tuple(zero if i == j else alpha if p.related(i, j) else one for j in range(n)) for i in range(n)
    )
    return WeightStructure._raw(rows, p.labels)


@dataclass
class EmbeddingReport:
    alpha: Fraction
    pairs_checked: int = 0
    meet_preserved: bool = True
    meet_witness: dict | None = None
    met_meet_agrees: bool = True
    join_preserved: bool = True
    join_witness: dict | None = None
    injective: bool = True
    injectivity_witness: dict | None = None
    topology_is_discrete: bool = True
    topology_witness: dict | None = None

    def to_dict(self) -> dict:
        return {
            "alpha": format_value(self.alpha),
            "pairs_checked": self.pairs_checked,
            "meet_preserved": self.meet_preserved,
            "meet_witness": self.meet_witness,
            "met_meet_agrees": self.met_meet_agrees,
            "join_preserved": self.join_preserved,
            "join_witness": self.join_witness,
            "injective": self.injective,
            "injectivity_witness": self.injectivity_witness,
            "topology_is_discrete": self.topology_is_discrete,
            "topology_witness": self.topology_witness,
        }


def _first_difference(expected: WeightStructure, actual: WeightStructure) -> tuple[int, int] | None:
    for i, j in expected.cells():
        if expected[i, j] != actual[i, j]:
            return (i, j)
    return None


def verify_embedding(parts: Sequence[Partition], alpha=DEFAULT_ALPHA) -> EmbeddingReport:
    """Check meets, joins, injectivity and the discrete-topology fiber for
    ``embed`` over every pair drawn from ``parts``.

    Joins are compared against the pointwise join of the images; a failure
    is recorded with the offending cell, not raised.
    """
    alpha = _check_alpha(alpha)
    parts = list(parts)
    report = EmbeddingReport(alpha)
    if not parts:
        return report
    for p in parts[1:]:
        _check(parts[0], p)
    images = [embed(p, alpha) for p in parts]

    for i, j in combinations(range(len(parts)), 2):
        a, b = parts[i], parts[j]
        if a != b and images[i] == images[j] and report.injective:
            report.injective = False
            report.injectivity_witness = {"partitions": [str(a), str(b)]}
        report.pairs_checked += 1
        em = embed(part_meet(a, b), alpha)
        pm = pointwise_meet([images[i], images[j]])
        cell = _first_difference(em, pm)
        if cell is not None and report.meet_preserved:
            report.meet_preserved = False
            report.meet_witness = _cell_witness(a, b, cell, em, pm)
        if met_meet([images[i], images[j]]) != pm:
            report.met_meet_agrees = False
        ej = embed(part_join(a, b), alpha)
        pj = pointwise_join([images[i], images[j]])
        cell = _first_difference(ej, pj)
        if cell is not None and report.join_preserved:
            report.join_preserved = False
            report.join_witness = _cell_witness(a, b, cell, ej, pj)

    for p, image in zip(parts, images):
        if not psi(image).is_discrete() and report.topology_is_discrete:
            report.topology_is_discrete = False
            report.topology_witness = {"partition": str(p)}
    return report


def _cell_witness(a: Partition, b: Partition, cell, of_lattice_op, of_pointwise) -> dict:
    i, j = cell
    return {
        "partitions": [str(a), str(b)],
        "pair": [a.labels[i], a.labels[j]],
        "embedded_lattice_op": format_value(of_lattice_op[i, j]),
        "pointwise_op": format_value(of_pointwise[i, j]),
    }


def interval_bounds(labels: Sequence[str], alpha=DEFAULT_ALPHA) -> tuple[WeightStructure, WeightStructure]:
    """``(d_1, d_alpha)``: all off-diagonal distances 1, resp. alpha."""
    alpha = _check_alpha(alpha)
    n = len(labels)
    return (WeightStructure.constant(n, 1, 0, labels), WeightStructure.constant(n, alpha, 0, labels))


# -- text format ------------------------------------------------------------

def dumps_partition(p: Partition) -> str:
    return f"n={p.n}\nblocks=" + ";".join(",".join(g) for g in p.groups()) + "\n"


def loads_partition(text: str) -> Partition:
    lines = [line for line in text.splitlines() if line.strip()]
    if len(lines) != 2:
        raise ParseError(f"expected 2 lines ('n=' and 'blocks='), got {len(lines)}", min(len(lines) + 1, 3))
    m = re.fullmatch(r"\s*n=(\d+)\s*", lines[0])
    if not m:
        raise ParseError("expected 'n=<count>'", 1, 1)
    n = int(m.group(1))
    head = lines[1].strip()
    if not head.startswith("blocks="):
        raise ParseError("expected 'blocks=<semicolon-separated comma-lists>'", 2, 1)
    groups = [[s.strip() for s in block.split(",")] for block in head[len("blocks="):].split(";")]
    labels = [s for g in groups for s in g]
    if any(not s for s in labels):
        raise ParseError("empty label in blocks", 2, 8)
    if len(labels) != n:
        raise ParseError(f"blocks list {len(labels)} points, expected {n}", 2, 8)
    if len(set(labels)) != n:
        raise ParseError("a point appears in more than one block", 2, 8)
    return Partition.from_groups(groups, labels)


def read_partition(path) -> Partition:
    with open(path, encoding="utf-8") as fh:
        return loads_partition(fh.read())
