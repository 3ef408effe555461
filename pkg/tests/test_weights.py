from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weightlattice.sampling import random_weight
from weightlattice.weights import (
    INF,
    AxiomSet,
    ParseError,
    PreconditionError,
    ShapeError,
    Side,
    WeightError,
    WeightStructure,
    ball,
    check_axioms,
    dual,
    dumps_wsm,
    ext,
    loads_wsm,
    parse_value,
    pointwise_join,
    pointwise_meet,
    scale,
)

from conftest import POOL, F, structure_pairs, structures, three, ws


class TestExtValue:
    def test_decimal_is_exact(self):
        assert parse_value("1.2") == F(6, 5)
        assert parse_value("0.9") == F(9, 10)
        assert ext(0.9) == F(9, 10)

    def test_rational_lowest_terms(self):
        v = parse_value("6/4")
        assert (v.numerator, v.denominator) == (3, 2)

    def test_infinity_absorbs(self):
        assert F(3) + INF == INF
        assert INF + F(3) == INF
        assert INF + INF == INF

    def test_finite_below_infinity(self):
        assert F(10**30) < INF
        assert max(F(1), INF) == INF and min(F(1), INF) == F(1)

    @pytest.mark.parametrize("bad", ["-1", "abc", "1/0", "", "nan"])
    def test_rejects(self, bad):
        with pytest.raises(ValueError):
            parse_value(bad)

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            ext(F(-1, 2))


class TestCheckAxioms:
    def test_single_point(self):
        assert check_axioms(ws([[0]])) == AxiomSet.all()

    def test_asymmetric_pair(self):
        assert check_axioms(ws([[0, 1], [2, 0]])) == AxiomSet(zero=True, sep=True, tri=True)

    def test_triangle_failure(self):
        d = three("0.9", 2, "0.9")
        # direct evaluation over all 27 ordered triples
        broken = [
            (x, y, z) for x, y, z in product(range(3), repeat=3) if d[x, y] + d[y, z] < d[x, z]
        ]
        assert broken  # 0.9 + 0.9 < 2
        axioms = check_axioms(d)
        assert not axioms.tri and axioms.zero and axioms.sym and axioms.sep

    def test_sep_independent_of_zero(self):
        d = ws([[1, 1], [1, 1]])
        axioms = check_axioms(d)
        assert axioms.sep and not axioms.zero

    def test_all_zero_fails_sep(self):
        assert not check_axioms(ws([[0, 0], [0, 0]])).sep


class TestLattice:
    def test_singleton_meet(self):
        d = ws([[0, 1], [1, 0]])
        assert pointwise_meet([d]) == d
        assert pointwise_join([d]) == d

    def test_meet_of_crossed_triples(self):
        d = three("0.9", 2, "1.5")
        e = three("1.5", 2, "0.9")
        assert pointwise_meet([d, e]) == three("0.9", 2, "0.9")

    def test_meet_and_join_2x2(self):
        assert pointwise_meet([ws([[0, 2], [3, 0]]), ws([[0, 3], [2, 0]])]) == ws([[0, 2], [2, 0]])
        assert pointwise_join([ws([[0, 1], [2, 0]]), ws([[0, 2], [1, 0]])]) == ws([[0, 2], [2, 0]])

    def test_join_with_infinity(self):
        assert pointwise_join([ws([[0, INF], [1, 0]]), ws([[0, 5], [7, 0]])])[0, 1] == INF

    def test_empty_family_rejected(self):
        with pytest.raises(WeightError):
            pointwise_meet([])
        with pytest.raises(WeightError):
            pointwise_join([])

    def test_shape_mismatch(self):
        with pytest.raises(ShapeError):
            pointwise_meet([ws([[0]]), ws([[0, 1], [1, 0]])])
        with pytest.raises(ShapeError):
            pointwise_meet([ws([[0, 1], [1, 0]], "ab"), ws([[0, 1], [1, 0]], "xy")])

    def test_bounds_exhaustive_two_points(self):
        pool = [F(0), F(1), F(2), INF]
        cells = list(product(pool, repeat=4))
        structs = [ws([[a, b], [c, e]]) for a, b, c, e in cells]
        for d in structs[::7]:
            for m in structs[::5]:
                lo, hi = pointwise_meet([d, m]), pointwise_join([d, m])
                assert lo <= d and lo <= m and d <= hi and m <= hi
                # greatest lower / least upper bound among all candidates
                for c in structs:
                    if c <= d and c <= m:
                        assert c <= lo
                    if d <= c and m <= c:
                        assert hi <= c


class TestDual:
    def test_transpose(self):
        assert dual(ws([[0, 1], [2, 0]])) == ws([[0, 2], [1, 0]])

    def test_symmetric_fixed(self, line3):
        assert dual(line3) == line3

    def test_sep_failure_preserved(self):
        assert not check_axioms(dual(ws([[0, 0], [0, 0]]))).sep

    @settings(max_examples=1000, deadline=None)
    @given(structure_pairs(max_n=6))
    def test_order_isomorphism(self, pair):
        d, m = pair
        assert dual(dual(d)) == d
        assert (d <= m) == (dual(d) <= dual(m))
        assert check_axioms(dual(d)) == check_axioms(d)


class TestScale:
    def test_examples(self):
        assert scale(ws([[0, 1], [1, 0]]), 2) == ws([[0, 2], [2, 0]])
        d = ws([[0, 3], [5, 0]])
        assert scale(d, 1) == d
        top = ws([[0, INF], [INF, 0]])
        assert scale(top, F(1, 2)) == top

    @pytest.mark.parametrize("c", [0, -1, "inf"])
    def test_rejects(self, c):
        with pytest.raises((PreconditionError, ValueError)):
            scale(ws([[0, 1], [1, 0]]), c)

    @given(structures(), st.sampled_from([F(1, 3), F(1, 2), F(2), F(7, 3)]))
    def test_preserves_axioms(self, d, c):
        assert check_axioms(scale(d, c)) == check_axioms(d)


class TestBall:
    def test_strict_inequality(self):
        d = ws([[0, 1], [1, 0]])
        assert ball(d, 0, 1, Side.LEFT).points() == [0]
        assert ball(d, 0, F(3, 2), Side.LEFT).points() == [0, 1]

    def test_sides(self):
        d = ws([[0, 0], [1, 0]])
        for eps in (F(1, 10), 1, 5):
            assert ball(d, 0, eps, Side.LEFT).points() == [0, 1]
        assert ball(d, 0, 1, Side.RIGHT).points() == [0]

    @pytest.mark.parametrize("eps", [0, "inf"])
    def test_bad_radius(self, eps):
        with pytest.raises(PreconditionError):
            ball(ws([[0]]), 0, eps)

    @given(structures(AxiomSet(zero=True)), st.data())
    def test_monotone_and_centred(self, d, data):
        x = data.draw(st.integers(0, d.n - 1))
        e1, e2 = sorted(data.draw(st.lists(st.sampled_from([F(1, 4), F(1), F(3, 2), F(3)]), min_size=2, max_size=2)))
        side = data.draw(st.sampled_from(list(Side)))
        small, big = ball(d, x, e1, side), ball(d, x, e2, side)
        assert small.members & ~big.members == 0
        assert x in small


class TestClosureFacts:
    @given(structure_pairs(AxiomSet(zero=True)))
    def test_w0_sublattice(self, pair):
        for op in (pointwise_meet, pointwise_join):
            assert check_axioms(op(list(pair))).zero

    @given(structure_pairs(AxiomSet(sym=True)))
    def test_wsigma_sublattice(self, pair):
        for op in (pointwise_meet, pointwise_join):
            assert check_axioms(op(list(pair))).sym

    @given(structure_pairs(AxiomSet(sep=True), pool=POOL[1:] + (F(0),)))
    def test_ws_closed_under_joins(self, pair):
        assert check_axioms(pointwise_join(list(pair))).sep

    @given(structure_pairs(AxiomSet(sep=True, sym=True)))
    def test_symmetric_ws_closed_under_meets(self, pair):
        assert check_axioms(pointwise_meet(list(pair))).sep

    def test_asymmetric_ws_not_closed_under_meets(self):
        a, b = ws([[0, 0], [1, 0]]), ws([[0, 1], [0, 0]])
        assert check_axioms(a).sep and check_axioms(b).sep
        assert not check_axioms(pointwise_meet([a, b])).sep

    @given(structure_pairs(AxiomSet(tri=True)))
    def test_wdelta_closed_under_joins(self, pair):
        assert check_axioms(pointwise_join(list(pair))).tri

    def test_wdelta_not_closed_under_meets(self):
        d, e = three("0.9", 2, "1.5"), three("1.5", 2, "0.9")
        assert check_axioms(d).tri and check_axioms(e).tri
        assert not check_axioms(pointwise_meet([d, e])).tri


class TestWsm:
    def test_round_trip(self):
        d = ws([[0, F(6, 5), INF], [F(1, 3), 0, 2], [7, INF, F(22, 7)]], "abc")
        text = dumps_wsm(d)
        assert loads_wsm(text) == d
        assert dumps_wsm(loads_wsm(text)) == text

    def test_decimal_entries(self):
        d = loads_wsm("n=2\nlabels=p,q\n0 1.2\n0.5 inf\n")
        assert d.rows == ((0, F(6, 5)), (F(1, 2), INF))
        assert d.labels == ("p", "q")

    @given(structures(max_n=6))
    def test_round_trip_random(self, d):
        assert loads_wsm(dumps_wsm(d)) == d

    @pytest.mark.parametrize(
        "text, line",
        [
            ("", 1),
            ("m=2\n", 1),
            ("n=2\nlabel=a,b\n0 1\n1 0\n", 2),
            ("n=2\nlabels=a\n0 1\n1 0\n", 2),
            ("n=2\nlabels=a,a\n0 1\n1 0\n", 2),
            ("n=2\nlabels=a,b\n0 1\n", 4),
            ("n=2\nlabels=a,b\n0 1\n1 x\n", 4),
            ("n=2\nlabels=a,b\n0 1 2\n1 0\n", 3),
        ],
    )
    def test_parse_errors(self, text, line):
        with pytest.raises(ParseError) as info:
            loads_wsm(text)
        assert info.value.line == line

    def test_error_column(self):
        with pytest.raises(ParseError) as info:
            loads_wsm("n=2\nlabels=a,b\n0 1\n1 -3\n")
        assert (info.value.line, info.value.column) == (4, 3)


class TestStructure:
    def test_construction_checks(self):
        with pytest.raises(ShapeError):
            WeightStructure([[0, 1]])
        with pytest.raises(ShapeError):
            WeightStructure([])

    def test_strict_order(self):
        d, m = ws([[0, 1], [1, 0]]), ws([[0, 2], [1, 0]])
        assert d < m and not m < d and not d < d and d <= d

    def test_axiom_set_algebra(self):
        a = AxiomSet.of("zero,tri")
        assert str(a) == "zero,tri"
        assert a | AxiomSet(sym=True) == AxiomSet(zero=True, sym=True, tri=True)
        assert a <= AxiomSet.all() and not AxiomSet.all() <= a
        assert len(AxiomSet.subsets()) == 16
        with pytest.raises(ValueError):
            AxiomSet.of("bogus")

    def test_random_weight_is_deterministic(self):
        a = random_weight(4, AxiomSet.of("zero,sym,tri"), POOL, 11)
        assert a == random_weight(4, AxiomSet.of("zero,sym,tri"), POOL, 11)
