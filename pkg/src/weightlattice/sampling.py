"""Seeded random and exhaustive generation of weight structures."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import product
from typing import Iterator, Sequence

from .adjoints import tri_closure
from .weights import (
    INF,
    AxiomSet,
    PreconditionError,
    WeightStructure,
    default_labels,
    ext,
    satisfies,
    satisfies_sep,
)

DEFAULT_POOL = (Fraction(0), Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2), INF)


def make_rng(seed) -> random.Random:
    if isinstance(seed, random.Random):
        return seed
    return random.Random(seed)


def trial_rng(seed, trial: int) -> random.Random:
    """Independent stream for one trial, derived from ``(seed, trial)``."""
    return random.Random(f"{seed}:{trial}")


def _closure_any_diagonal(rows: list[list]) -> list[list]:
    # shortest walks of length >= 1; the diagonal takes part like any cell
    n = len(rows)
    dist = [list(r) for r in rows]
    for k in range(n):
        for i in range(n):
            if dist[i][k] == INF:
                continue
            for j in range(n):
                via = dist[i][k] + dist[k][j]
                if via < dist[i][j]:
                    dist[i][j] = via
    return dist


def random_weight(
    n: int,
    axioms: AxiomSet,
    pool: Sequence = DEFAULT_POOL,
    seed=0,
    labels: Sequence[str] | None = None,
    max_attempts: int = 200,
) -> WeightStructure:
    """Draw a weight structure satisfying ``axioms`` with entries from ``pool``.

    Zero puts 0 on the diagonal, sym mirrors the upper triangle, tri replaces
    the draw by its shortest-path closure, and sep redraws until no pair of
    distinct points is at zero distance both ways.  Closure may produce sums
    of pool values.  ``seed`` may be an int, a string or a ``random.Random``.
    """
    values = [ext(v) for v in pool]
    if not values:
        raise PreconditionError("value pool is empty")
    if n < 1:
        raise PreconditionError("need at least one point")
    if axioms.sep and n > 1 and all(v == 0 for v in values):
        raise PreconditionError("sep cannot be met with a pool containing only 0")
    rng = make_rng(seed)
    labels = tuple(labels) if labels is not None else default_labels(n)
    zero = Fraction(0)
    for _ in range(max_attempts):
        rows = [[rng.choice(values) for _ in range(n)] for _ in range(n)]
        if axioms.zero:
            for i in range(n):
                rows[i][i] = zero
        if axioms.sym:
            for i in range(n):
                for j in range(i):
                    rows[i][j] = rows[j][i]
        if axioms.tri:
            if axioms.zero:
                d = tri_closure(WeightStructure._raw(tuple(map(tuple, rows)), labels))
            else:
                d = WeightStructure._raw(tuple(map(tuple, _closure_any_diagonal(rows))), labels)
        else:
            d = WeightStructure._raw(tuple(map(tuple, rows)), labels)
        if axioms.sep and not satisfies_sep(d):
            continue
        return d
    raise PreconditionError(f"could not draw a structure satisfying {{{axioms}}} from pool in {max_attempts} attempts")


def enumerate_weights(n: int, axioms: AxiomSet, pool: Sequence = DEFAULT_POOL, labels: Sequence[str] | None = None) -> Iterator[WeightStructure]:
    """Every structure with entries drawn from ``pool`` that satisfies ``axioms``.

    Zero fixes the diagonal to 0 and sym ties mirrored cells, so at ``n = 2``
    with both there are ``len(pool)`` candidates; with zero alone
    ``len(pool) ** 2``.
    """
    values = list(dict.fromkeys(ext(v) for v in pool))
    labels = tuple(labels) if labels is not None else default_labels(n)
    free = []
    for i in range(n):
        for j in range(n):
            if i == j and axioms.zero:
                continue
            if axioms.sym and j < i:
                continue
            free.append((i, j))
    zero = Fraction(0)
    for choice in product(values, repeat=len(free)):
        rows = [[zero] * n for _ in range(n)]
        for (i, j), v in zip(free, choice):
            rows[i][j] = v
            if axioms.sym:
                rows[j][i] = v
        d = WeightStructure._raw(tuple(map(tuple, rows)), labels)
        if satisfies(d, axioms):
            yield d
