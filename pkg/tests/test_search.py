import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weightlattice.sampling import enumerate_weights, random_weight
from weightlattice.search import (
    DEMOS,
    PROPERTIES,
    PropertySpec,
    delta_gap_constraints,
    find_counterexample,
    run_demo,
    verify_witness,
)
from weightlattice.weights import (
    INF,
    MET,
    AxiomSet,
    PreconditionError,
    WeightError,
    WeightStructure,
    check_axioms,
    satisfies,
)

from conftest import POOL, F, three, ws


class TestRandomWeight:
    def test_symmetric_zero(self):
        d = random_weight(2, AxiomSet(zero=True, sym=True), [1, 2], 7)
        assert d[0, 0] == d[1, 1] == 0 and d[0, 1] == d[1, 0] in (1, 2)

    @given(st.integers(0, 2**32 - 1), st.integers(1, 6), st.sampled_from(AxiomSet.subsets()))
    def test_satisfies_request(self, seed, n, axioms):
        d = random_weight(n, axioms, POOL, seed)
        assert axioms <= check_axioms(d)

    def test_deterministic(self):
        a = random_weight(5, MET, POOL, 123)
        assert a == random_weight(5, MET, POOL, 123)
        assert a != random_weight(5, MET, POOL, 124)

    def test_unsatisfiable(self):
        with pytest.raises(PreconditionError):
            random_weight(3, AxiomSet(sep=True), [0], 1)

    def test_enumeration_counts(self):
        assert len(list(enumerate_weights(2, AxiomSet(), POOL))) == 6 ** 4
        assert len(list(enumerate_weights(2, AxiomSet(zero=True), POOL))) == 36
        assert len(list(enumerate_weights(2, AxiomSet(zero=True, sym=True), POOL))) == 6
        assert len(list(enumerate_weights(2, AxiomSet(zero=True, sep=True, sym=True), POOL))) == 5


class TestPropertySpec:
    def test_unknown_property(self):
        with pytest.raises(WeightError):
            PropertySpec("nope")

    def test_context_checks(self):
        with pytest.raises(PreconditionError):
            PropertySpec("psi_binary_join", context=AxiomSet(zero=True))
        with pytest.raises(PreconditionError):
            PropertySpec("delta_star_preserves_join", context=AxiomSet(zero=True, tri=True))
        with pytest.raises(PreconditionError):
            PropertySpec("tri_meet_closed", pool=[])

    def test_every_property_has_a_valid_default(self):
        for name in PROPERTIES:
            assert PropertySpec(name).context == PROPERTIES[name].default_context


class TestFindCounterexample:
    def test_sigma_join_pool(self):
        report = find_counterexample(PropertySpec("sigma_join_preserves_meet", n=2, pool=["1.2", "1.4", "1.6", "1.8"]))
        assert report.found and report.mode == "exhaustive"
        # 4 off-diagonal values, two cells, zero diagonal
        assert report.structures_per_operand == 16
        assert verify_witness(report)
        # the chain pair from the pool is itself a violation
        prop = PROPERTIES["sigma_join_preserves_meet"]
        m, d = ws([[0, F(9, 5)], [F(7, 5), 0]]), ws([[0, F(6, 5)], [F(8, 5), 0]])
        holds, sides = prop.evaluate((m, d), AxiomSet(zero=True))
        assert not holds
        assert (WeightStructure.from_dict(sides["lhs"])[0, 1], WeightStructure.from_dict(sides["rhs"])[0, 1]) == (F(7, 5), F(8, 5))

    def test_witness_minimised_by_value_count(self):
        report = find_counterexample(PropertySpec("sigma_join_preserves_meet", n=2, pool=["1.2", "1.4", "1.6", "1.8"]))
        ops = [WeightStructure.from_dict(o) for o in report.witness["operands"]]
        assert len({v for d in ops for row in d.rows for v in row}) == 3

    def test_tri_meet_pool(self):
        report = find_counterexample(PropertySpec("tri_meet_closed", n=3, pool=["0.9", "1.5", "2"], trials=2000))
        assert report.found and verify_witness(report)
        meet = WeightStructure.from_dict(report.witness["meet"])
        assert not check_axioms(meet).tri

    def test_tri_meet_exhaustive_three_points(self):
        spec = PropertySpec("tri_meet_closed", n=3, pool=["0.9", "1.5", "2"], exhaustive=True)
        report = find_counterexample(spec)
        assert report.found and verify_witness(report)
        meet = WeightStructure.from_dict(report.witness["meet"])
        assert sorted(v for _, v in meet.off_diagonal())[:2] == [F(9, 10)] * 2 or not check_axioms(meet).tri

    @pytest.mark.parametrize("n", [3, 4])
    def test_psi_join_regression(self, n):
        report = find_counterexample(PropertySpec("psi_binary_join", n=n, trials=500))
        assert report.outcome == "none-found" and report.trials == 500

    def test_psi_join_exhaustive(self):
        assert find_counterexample(PropertySpec("psi_binary_join", n=2)).outcome == "none-found"

    @pytest.mark.parametrize("name", ["phi_binary_meet", "phi_order_preserving"])
    def test_phi_properties(self, name):
        for n in (2, 4):
            assert not find_counterexample(PropertySpec(name, n=n, trials=300)).found

    def test_sigma_meet_join(self):
        report = find_counterexample(PropertySpec("sigma_meet_preserves_join", n=2))
        assert report.found and verify_witness(report)

    def test_delta_join(self):
        report = find_counterexample(PropertySpec("delta_star_preserves_join", n=3, trials=2000))
        assert report.found and verify_witness(report)

    def test_sep_meet(self):
        report = find_counterexample(PropertySpec("sep_meet_closed", n=2))
        assert report.found and verify_witness(report)
        symmetric = find_counterexample(PropertySpec("sep_meet_closed", n=3, context=AxiomSet(sep=True, sym=True)))
        assert not symmetric.found

    def test_psi_order_probe(self):
        report = find_counterexample(PropertySpec("psi_order_preserving", n=3, trials=200))
        assert report.open_probe
        assert report.found and verify_witness(report)
        closed = find_counterexample(PropertySpec("psi_order_preserving", n=3, trials=200, context=AxiomSet(zero=True, tri=True)))
        assert not closed.open_probe and not closed.found

    def test_fiber_join(self):
        report = find_counterexample(PropertySpec("fiber_join_stability", n=3, trials=300))
        assert not report.found

    def test_round_trip_and_determinism(self):
        spec = PropertySpec("delta_star_preserves_join", n=3, trials=2000, seed=5)
        a, b = find_counterexample(spec).to_dict(), find_counterexample(spec).to_dict()
        a.pop("elapsed"), b.pop("elapsed")
        assert a == b
        assert verify_witness(json.loads(json.dumps(a)))

    def test_tampered_witness_rejected(self):
        report = find_counterexample(PropertySpec("sep_meet_closed", n=2)).to_dict()
        report["witness"]["operands"][0] = WeightStructure([[0, 1], [1, 0]]).to_dict()
        report["witness"]["operands"][1] = WeightStructure([[0, 1], [1, 0]]).to_dict()
        assert not verify_witness(report)

    def test_large_domain_falls_back_to_sampling(self):
        report = find_counterexample(PropertySpec("sep_meet_closed", n=2, trials=50))
        assert report.mode == "random" and report.details["exhaustive_skipped"] == 1260 ** 2

    def test_exhaustive_limit(self):
        with pytest.raises(PreconditionError):
            find_counterexample(PropertySpec("phi_binary_meet", n=3, exhaustive=True))


class TestDemos:
    @pytest.mark.parametrize("name", sorted(DEMOS))
    def test_passes(self, name):
        report = run_demo(name)
        assert report.passed, report.details
        json.dumps(report.to_dict())

    def test_unknown(self):
        with pytest.raises(WeightError):
            run_demo("nope")

    def test_sigma_values(self):
        details = run_demo("sigma_meet_gap").details
        assert (details["sym_join_of_meet_xy"], details["meet_of_sym_joins_xy"]) == ("7/5", "8/5")

    def test_delta_values(self):
        details = run_demo("delta_join_gap").details
        assert (details["join_of_closures_yz"], details["closure_of_join_yz"]) == ("29/20", "3/2")
        assert all(details["constraints"].values()) and len(details["constraints"]) == 6

    def test_delta_constraints_detect_violation(self):
        m, d = three(1, 1, 1), three(1, 1, 1)
        assert not all(delta_gap_constraints(m, d).values())

    def test_limit_demo(self):
        details = run_demo("trivial_topology_limit").details
        assert details["discrete_count"] == 16
        assert details["limit_topology"] == ["00", "11"]
