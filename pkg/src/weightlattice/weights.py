"""Exact extended values, weight-structure matrices and axiom predicates.

A weight structure on a finite, ordered set of labelled points is an n x n
matrix with entries in [0, inf].  Finite entries are ``fractions.Fraction``
instances and the single infinite value is ``INF`` (``math.inf``), so the
usual ``+``, ``min``, ``max`` and comparisons behave exactly:
``Fraction(1) + INF == INF`` and every finite value compares below ``INF``.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from itertools import product
from typing import Iterable, Iterator, Sequence, Union

INF = math.inf

ExtValue = Union[Fraction, float]
"""A finite non-negative ``Fraction`` or ``INF``."""


class WeightError(ValueError):
    """Base class for domain errors raised by this package."""


class ShapeError(WeightError):
    """Operands disagree on point count or labels."""


class PreconditionError(WeightError):
    """An operation was applied outside its domain."""


class ParseError(WeightError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


_RATIONAL = re.compile(r"^\d+/\d+$")
_DECIMAL = re.compile(r"^\d+(\.\d*)?$|^\.\d+$")


def ext(value) -> ExtValue:
    """Coerce ``value`` into an extended value.

    Accepts ints, Fractions, Decimals, the strings ``"p/q"``, ``"1.25"`` and
    ``"inf"``, and floats (finite floats go through their shortest repr, so
    ``0.9`` becomes ``9/10``).
    """
    if isinstance(value, Fraction):
        out = value
    elif isinstance(value, bool):
        raise TypeError("booleans are not weights")
    elif isinstance(value, int):
        out = Fraction(value)
    elif isinstance(value, float):
        if math.isinf(value) and value > 0:
            return INF
        if math.isnan(value):
            raise ValueError("NaN is not a weight")
        out = Fraction(repr(value))
    elif isinstance(value, Decimal):
        out = Fraction(value)
    elif isinstance(value, str):
        return parse_value(value)
    else:
        raise TypeError(f"cannot interpret {value!r} as a weight")
    if out < 0:
        raise ValueError(f"weights are non-negative, got {value!r}")
    return out


def parse_value(text: str) -> ExtValue:
    token = text.strip()
    if token.lower() in ("inf", "infinity", "∞"):
        return INF
    if _RATIONAL.match(token):
        num, den = token.split("/")
        if int(den) == 0:
            raise ValueError(f"zero denominator in {text!r}")
        return Fraction(int(num), int(den))
    if _DECIMAL.match(token):
        try:
            return Fraction(Decimal(token))
        except InvalidOperation as exc:  # pragma: no cover - guarded by the regex
            raise ValueError(f"bad decimal {text!r}") from exc
    raise ValueError(f"not an extended non-negative rational: {text!r}")


def format_value(value: ExtValue) -> str:
    if value == INF:
        return "inf"
    return str(value)


def is_finite(value: ExtValue) -> bool:
    return value != INF


class Side(str, enum.Enum):
    LEFT = "left"
    RIGHT = "right"


@dataclass(frozen=True)
class AxiomSet:
    """A subset of the four axioms: zero self-distance, separation,
    symmetry and the triangle inequality."""

    zero: bool = False
    sep: bool = False
    sym: bool = False
    tri: bool = False

    NAMES = ("zero", "sep", "sym", "tri")

    @classmethod
    def of(cls, *names: str) -> "AxiomSet":
        flags = {}
        for name in names:
            for part in name.split(","):
                part = part.strip().lower()
                if not part:
                    continue
                if part not in cls.NAMES:
                    raise ValueError(f"unknown axiom {part!r}")
                flags[part] = True
        return cls(**flags)

    @classmethod
    def all(cls) -> "AxiomSet":
        return cls(True, True, True, True)

    @classmethod
    def subsets(cls) -> list["AxiomSet"]:
        return [cls(*bits) for bits in product((False, True), repeat=4)]

    def names(self) -> list[str]:
        return [name for name in self.NAMES if getattr(self, name)]

    def __str__(self) -> str:
        return ",".join(self.names())

    def __iter__(self) -> Iterator[str]:
        return iter(self.names())

    def __contains__(self, name: str) -> bool:
        return getattr(self, name)

    def __or__(self, other: "AxiomSet") -> "AxiomSet":
        return AxiomSet(*(getattr(self, k) or getattr(other, k) for k in self.NAMES))

    def __and__(self, other: "AxiomSet") -> "AxiomSet":
        return AxiomSet(*(getattr(self, k) and getattr(other, k) for k in self.NAMES))

    def __le__(self, other: "AxiomSet") -> bool:
        return all(getattr(other, k) for k in self.names())

    def __lt__(self, other: "AxiomSet") -> bool:
        return self <= other and self != other


MET = AxiomSet(zero=True, sym=True, tri=True)


class WeightStructure:
    """Immutable n x n matrix of extended values over labelled points.

    ``d[i, j]`` is the weight from point ``i`` to point ``j``.  The comparison
    operators implement the pointwise order, so ``d <= m`` is entrywise and
    ``d < m`` means ``d <= m`` and ``d != m``.
    """

    __slots__ = ("_labels", "_rows", "_hash")

    def __init__(self, rows: Iterable[Iterable], labels: Sequence[str] | None = None):
        matrix = tuple(tuple(ext(v) for v in row) for row in rows)
        n = len(matrix)
        if n == 0:
            raise ShapeError("a weight structure needs at least one point")
        for row in matrix:
            if len(row) != n:
                raise ShapeError(f"matrix is not square: row of length {len(row)} in {n} rows")
        if labels is None:
            labels = default_labels(n)
        labels = tuple(str(label) for label in labels)
        if len(labels) != n:
            raise ShapeError(f"{len(labels)} labels for {n} points")
        if len(set(labels)) != n:
            raise ShapeError("point labels must be distinct")
        self._labels = labels
        self._rows = matrix
        self._hash = None

    @classmethod
    def _raw(cls, rows: tuple, labels: tuple) -> "WeightStructure":
        # internal fast path: rows already hold normalized values
        obj = cls.__new__(cls)
        obj._labels = labels
        obj._rows = rows
        obj._hash = None
        return obj

    @classmethod
    def from_function(cls, labels: Sequence[str], fn) -> "WeightStructure":
        n = len(labels)
        return cls([[fn(i, j) for j in range(n)] for i in range(n)], labels)

    @classmethod
    def from_pairs(cls, labels: Sequence[str], pairs: dict, default=INF, symmetric=True) -> "WeightStructure":
        """Build from ``{(a, b): value}`` keyed by labels; diagonal is 0."""
        index = {label: i for i, label in enumerate(labels)}
        n = len(labels)
        rows = [[Fraction(0) if i == j else ext(default) for j in range(n)] for i in range(n)]
        for (a, b), value in pairs.items():
            i, j = index[a], index[b]
            rows[i][j] = ext(value)
            if symmetric:
                rows[j][i] = ext(value)
        return cls(rows, labels)

    @classmethod
    def constant(cls, n: int, value, diagonal=0, labels: Sequence[str] | None = None) -> "WeightStructure":
        v, dv = ext(value), ext(diagonal)
        return cls([[dv if i == j else v for j in range(n)] for i in range(n)], labels)

    @classmethod
    def top(cls, n: int, labels: Sequence[str] | None = None) -> "WeightStructure":
        """Zero diagonal, infinite elsewhere: the top of the zero-diagonal classes."""
        return cls.constant(n, INF, 0, labels)

    @property
    def n(self) -> int:
        return len(self._rows)

    @property
    def labels(self) -> tuple[str, ...]:
        return self._labels

    @property
    def rows(self) -> tuple[tuple[ExtValue, ...], ...]:
        return self._rows

    def __getitem__(self, ij: tuple[int, int]) -> ExtValue:
        i, j = ij
        return self._rows[i][j]

    def index(self, label: str) -> int:
        try:
            return self._labels.index(label)
        except ValueError:
            raise KeyError(f"no point labelled {label!r}") from None

    def value(self, a: str, b: str) -> ExtValue:
        return self._rows[self.index(a)][self.index(b)]

    def replace(self, updates: dict[tuple[int, int], object]) -> "WeightStructure":
        rows = [list(row) for row in self._rows]
        for (i, j), v in updates.items():
            rows[i][j] = ext(v)
        return WeightStructure._raw(tuple(map(tuple, rows)), self._labels)

    def cells(self) -> Iterator[tuple[int, int]]:
        return product(range(self.n), repeat=2)

    def off_diagonal(self) -> Iterator[tuple[int, int]]:
        return ((i, j) for i, j in self.cells() if i != j)

    def finite_values(self) -> set[Fraction]:
        return {v for row in self._rows for v in row if v != INF}

    def same_shape(self, other: "WeightStructure") -> bool:
        return self._labels == other._labels

    def _check_shape(self, other: "WeightStructure") -> None:
        if not isinstance(other, WeightStructure):
            raise TypeError(f"expected a WeightStructure, got {type(other).__name__}")
        if not self.same_shape(other):
            raise ShapeError(f"point sets differ: {self._labels} vs {other._labels}")

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeightStructure):
            return NotImplemented
        return self._labels == other._labels and self._rows == other._rows

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._labels, self._rows))
        return self._hash

    def __le__(self, other: "WeightStructure") -> bool:
        self._check_shape(other)
        return all(a <= b for ra, rb in zip(self._rows, other._rows) for a, b in zip(ra, rb))

    def __lt__(self, other: "WeightStructure") -> bool:
        return self <= other and self != other

    def __ge__(self, other: "WeightStructure") -> bool:
        return other <= self

    def __gt__(self, other: "WeightStructure") -> bool:
        return other < self

    def __repr__(self) -> str:
        body = "; ".join(" ".join(format_value(v) for v in row) for row in self._rows)
        return f"WeightStructure([{body}], labels={list(self._labels)})"

    def to_dict(self) -> dict:
        return {
            "labels": list(self._labels),
            "entries": [[format_value(v) for v in row] for row in self._rows],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "WeightStructure":
        return cls([[parse_value(v) for v in row] for row in data["entries"]], data["labels"])


def default_labels(n: int) -> tuple[str, ...]:
    if n <= 3:
        return ("x", "y", "z")[:n]
    if n <= 26:
        return tuple("abcdefghijklmnopqrstuvwxyz"[:n])
    return tuple(f"p{i}" for i in range(n))


# -- axioms -----------------------------------------------------------------

def satisfies_zero(d: WeightStructure) -> bool:
    return all(d[i, i] == 0 for i in range(d.n))


def satisfies_sep(d: WeightStructure) -> bool:
    return not any(d[i, j] == 0 and d[j, i] == 0 for i, j in d.off_diagonal())


def satisfies_sym(d: WeightStructure) -> bool:
    return all(d[i, j] == d[j, i] for i, j in d.cells() if i < j)


def satisfies_tri(d: WeightStructure) -> bool:
    rows = d.rows
    n = d.n
    for x in range(n):
        rx = rows[x]
        for y in range(n):
            dxy = rx[y]
            if dxy == INF:
                continue
            ry = rows[y]
            for z in range(n):
                if dxy + ry[z] < rx[z]:
                    return False
    return True


def check_axioms(d: WeightStructure) -> AxiomSet:
    """Return the largest axiom set that ``d`` satisfies."""
    return AxiomSet(satisfies_zero(d), satisfies_sep(d), satisfies_sym(d), satisfies_tri(d))


def satisfies(d: WeightStructure, axioms: AxiomSet) -> bool:
    return axioms <= check_axioms(d)


def require(d: WeightStructure, axioms: AxiomSet, what: str = "input") -> None:
    missing = [name for name in axioms if not getattr(check_axioms(d), name)]
    if missing:
        raise PreconditionError(f"{what} violates axiom(s): {', '.join(missing)}")


def require_zero(d: WeightStructure, what: str = "input") -> None:
    if not satisfies_zero(d):
        raise PreconditionError(f"{what} violates axiom(s): zero (diagonal must be 0)")


# -- lattice operations -----------------------------------------------------

def _family(family: Sequence[WeightStructure], op: str) -> list[WeightStructure]:
    family = list(family)
    if not family:
        raise WeightError(f"{op} of an empty family is undefined")
    first = family[0]
    for other in family[1:]:
        first._check_shape(other)
    return family


def pointwise_meet(family: Sequence[WeightStructure]) -> WeightStructure:
    family = _family(family, "meet")
    rows = tuple(tuple(min(vals) for vals in zip(*rs)) for rs in zip(*(d.rows for d in family)))
    return WeightStructure._raw(rows, family[0].labels)


def pointwise_join(family: Sequence[WeightStructure]) -> WeightStructure:
    family = _family(family, "join")
    rows = tuple(tuple(max(vals) for vals in zip(*rs)) for rs in zip(*(d.rows for d in family)))
    return WeightStructure._raw(rows, family[0].labels)


def meet(*ds: WeightStructure) -> WeightStructure:
    return pointwise_meet(ds)


def join(*ds: WeightStructure) -> WeightStructure:
    return pointwise_join(ds)


def dual(d: WeightStructure) -> WeightStructure:
    """Transpose: the dual weight structure ``(x, y) -> d(y, x)``."""
    return WeightStructure._raw(tuple(zip(*d.rows)), d.labels)


def scale(d: WeightStructure, c) -> WeightStructure:
    c = ext(c)
    if c == INF or c <= 0:
        raise PreconditionError(f"scale factor must be a positive finite rational, got {format_value(c)}")
    rows = tuple(tuple(v if v == INF else v * c for v in row) for row in d.rows)
    return WeightStructure._raw(rows, d.labels)


# -- balls ------------------------------------------------------------------

@dataclass(frozen=True)
class Ball:
    center: int
    radius: Fraction
    side: Side
    members: int

    def __contains__(self, point: int) -> bool:
        return bool(self.members >> point & 1)

    def points(self) -> list[int]:
        return [i for i in range(self.members.bit_length()) if self.members >> i & 1]


def ball_mask(d: WeightStructure, x: int, eps: ExtValue, side: Side = Side.LEFT) -> int:
    mask = 0
    if side is Side.LEFT:
        row = d.rows[x]
        for y, v in enumerate(row):
            if v < eps:
                mask |= 1 << y
    else:
        for y in range(d.n):
            if d.rows[y][x] < eps:
                mask |= 1 << y
    return mask


def ball(d: WeightStructure, x: int, eps, side: Side = Side.LEFT) -> Ball:
    """Open ball of radius ``eps`` about point index ``x``.

    The left ball is ``{y : d(x, y) < eps}``, the right ball
    ``{y : d(y, x) < eps}``.
    """
    eps = ext(eps)
    if eps == INF or eps <= 0:
        raise PreconditionError(f"ball radius must be positive and finite, got {format_value(eps)}")
    side = Side(side)
    return Ball(x, eps, side, ball_mask(d, x, eps, side))


# -- .wsm text format -------------------------------------------------------

def dumps_wsm(d: WeightStructure) -> str:
    lines = [f"n={d.n}", "labels=" + ",".join(d.labels)]
    lines += [" ".join(format_value(v) for v in row) for row in d.rows]
    return "\n".join(lines) + "\n"


def loads_wsm(text: str) -> WeightStructure:
    lines = text.splitlines()
    # blank trailing lines are tolerated, nothing else is
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise ParseError("empty input", 1)
    head = lines[0].strip()
    if not head.startswith("n="):
        raise ParseError("expected 'n=<count>'", 1, 1)
    try:
        n = int(head[2:])
    except ValueError:
        raise ParseError(f"bad point count {head[2:]!r}", 1, 3) from None
    if n < 1:
        raise ParseError("point count must be at least 1", 1, 3)
    if len(lines) < 2 or not lines[1].strip().startswith("labels="):
        raise ParseError("expected 'labels=<comma-separated>'", 2, 1)
    labels = [s.strip() for s in lines[1].strip()[len("labels="):].split(",")]
    if len(labels) != n or any(not s for s in labels):
        raise ParseError(f"expected {n} non-empty labels, got {len(labels)}", 2, 8)
    if len(set(labels)) != n:
        raise ParseError("labels must be distinct", 2, 8)
    body = lines[2:]
    if len(body) != n:
        raise ParseError(f"expected {n} matrix rows, got {len(body)}", min(len(lines) + 1, 3 + n))
    rows = []
    for r, line in enumerate(body):
        lineno = r + 3
        row = []
        for match in re.finditer(r"\S+", line):
            try:
                row.append(parse_value(match.group()))
            except ValueError as exc:
                raise ParseError(str(exc), lineno, match.start() + 1) from None
        if len(row) != n:
            raise ParseError(f"expected {n} entries, got {len(row)}", lineno, 1)
        rows.append(row)
    return WeightStructure(rows, labels)


def read_wsm(path) -> WeightStructure:
    with open(path, encoding="utf-8") as fh:
        return loads_wsm(fh.read())


def write_wsm(d: WeightStructure, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_wsm(d))
