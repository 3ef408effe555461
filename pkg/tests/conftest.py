from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import strategies as st

from weightlattice.weights import INF, AxiomSet, WeightStructure
from weightlattice.sampling import random_weight

POOL = (Fraction(0), Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2), INF)
GALOIS_POOL = (Fraction(0), Fraction(1), Fraction(3, 2), Fraction(2), INF)
MET = AxiomSet(zero=True, sym=True, tri=True)

F = Fraction


def ws(rows, labels=None):
    return WeightStructure(rows, labels)


def three(xy, xz, yz, labels=("x", "y", "z")):
    """Symmetric zero-diagonal structure on three points."""
    x, y, z = labels
    return WeightStructure.from_pairs(labels, {(x, y): xy, (x, z): xz, (y, z): yz})


def line_metric(n=3):
    return WeightStructure([[abs(i - j) for j in range(n)] for i in range(n)], [str(i) for i in range(n)])


def simple_path_oracle(d):
    """Shortest distances by enumerating every simple path (no repeated points)."""
    n = d.n
    out = [[d[i, j] for j in range(n)] for i in range(n)]
    for x in range(n):
        for y in range(n):
            others = [p for p in range(n) if p not in (x, y)]
            for k in range(1, len(others) + 1):
                for mid in permutations(others, k):
                    walk = (x, *mid, y)
                    total = sum((d[a, b] for a, b in zip(walk, walk[1:])), Fraction(0))
                    if total < out[x][y]:
                        out[x][y] = total
    return WeightStructure(out, d.labels)


@st.composite
def structures(draw, axioms=AxiomSet(), min_n=1, max_n=5, pool=POOL):
    n = draw(st.integers(min_n, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_weight(n, axioms, pool, seed)


@st.composite
def structure_pairs(draw, axioms=AxiomSet(), min_n=1, max_n=5, pool=POOL):
    n = draw(st.integers(min_n, max_n))
    a = random_weight(n, axioms, pool, draw(st.integers(0, 2**32 - 1)))
    b = random_weight(n, axioms, pool, draw(st.integers(0, 2**32 - 1)))
    return a, b


@pytest.fixture
def line3():
    return line_metric(3)


# -- acceptance reporting ----------------------------------------------------

ACCEPTANCE_RESULTS: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        ok, detail = ACCEPTANCE_RESULTS[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
