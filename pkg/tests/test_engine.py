import numpy as np
import pytest

from beliefnet.compiler import compile_network
from beliefnet.engine import (
    REMOVAL,
    ZEROING,
    InferenceSession,
    count_update_operations,
    query,
)
from beliefnet.errors import EvidenceError, ImpossibleEvidenceError
from beliefnet.generate import random_evidence, random_network
from beliefnet.oracle import all_posteriors, joint
from conftest import make_net


@pytest.fixture
def worked_example_net():
    """A chain of cliques {W,A} - {A,B,C} - {C,D}, all variables 3-valued.

    The middle clique has 27 cells, one parent, and one child, so observing C
    reproduces the 27-check / 9-cell-message accounting exactly.
    """
    rng = np.random.default_rng(7)

    def cpt(child, parents):
        rows = 3 ** len(parents)
        t = rng.uniform(0.1, 1.0, size=(rows, 3))
        t /= t.sum(axis=1, keepdims=True)
        return child, ["s0", "s1", "s2"], parents, [float(x) for x in t.ravel()]

    return make_net("worked", [
        cpt("W", []),
        cpt("A", ["W"]),
        cpt("B", ["A"]),
        cpt("C", ["A", "B"]),
        cpt("D", ["C"]),
    ])


class TestAbsorb:
    def test_restriction_shrinks_and_counts(self, worked_example_net):
        forest = compile_network(worked_example_net)
        assert [c.vars for c in forest.cliques] == [(0, 1), (1, 2, 3), (3, 4)]
        s = InferenceSession(forest)
        before = s.working_cells()
        s.absorb({"C": 0})
        # touched: 27-cell clique, 9-cell clique, 3-cell separator
        assert s.counters.checks == 27 + 9 + 3
        assert s.counters.checks_by_clique == [0, 27, 9]
        assert s.potentials[1].ncells == 9
        assert s.working_cells() == before - (27 - 9) - (9 - 3) - (3 - 1)

    def test_coin_observation(self, coin_net):
        s = InferenceSession(compile_network(coin_net))
        s.absorb({"C": 0})
        assert s.potentials[0].ncells == 1

    def test_reobservation_same_value_is_noop(self, ab_net):
        s = InferenceSession(compile_network(ab_net))
        s.absorb({"B": 0})
        checks = s.counters.checks
        s.absorb({"B": 0})
        assert s.counters.checks == checks

    def test_contradiction_rejected(self, ab_net):
        s = InferenceSession(compile_network(ab_net))
        s.absorb({"B": 0})
        with pytest.raises(EvidenceError):
            s.absorb({"B": 1})

    def test_unknown_variable_and_bad_index(self, ab_net):
        s = InferenceSession(compile_network(ab_net))
        with pytest.raises(EvidenceError):
            s.absorb({"Z": 0})
        with pytest.raises(EvidenceError):
            s.absorb({"A": 5})

    def test_template_untouched(self, ab_net):
        forest = compile_network(ab_net)
        template_cells = forest.cliques[0].potential.cells.copy()
        s = InferenceSession(forest)
        s.absorb({"A": 0})
        s.propagate()
        assert np.array_equal(forest.cliques[0].potential.cells, template_cells)

    def test_allowed_lists_differ_from_template_only_at_evidence(self, asia_net):
        forest = compile_network(asia_net)
        s = InferenceSession(forest)
        s.absorb({"Smoking": 1, "XRay": 0})
        observed = {asia_net.position("Smoking"): 1, asia_net.position("XRay"): 0}
        pairs = list(zip(s.potentials, (c.potential for c in forest.cliques)))
        pairs += [(w, t) for w, t in zip(s.separators, forest.separators) if w is not None]
        for working, template in pairs:
            for axis, var in enumerate(working.scope):
                if var in observed:
                    assert list(working.allowed[axis]) == [observed[var]]
                else:
                    assert np.array_equal(working.allowed[axis], template.allowed[axis])


class TestPropagate:
    def test_single_clique_sends_nothing(self, coin_net):
        s = InferenceSession(compile_network(coin_net))
        s.propagate()
        assert s.counters.cells_sent == 0
        assert s.p_evidence == pytest.approx(1.0)

    def test_worked_example_counters(self, worked_example_net):
        forest = compile_network(worked_example_net)
        per_clique = {}
        for mode in (REMOVAL, ZEROING):
            s = InferenceSession(forest, mode=mode)
            s.absorb({"C": 0})
            s.propagate()
            per_clique[mode] = (s.counters.checks_by_clique[1]
                                + s.counters.sent_by_clique[1])
        assert per_clique[REMOVAL] == 45
        assert per_clique[ZEROING] == 81

    def test_impossible_evidence_detected(self, asia_net):
        forest = compile_network(asia_net)
        s = InferenceSession(forest)
        s.absorb({"Tuberculosis": 1, "LungCancer": 1, "Either": 0})
        with pytest.raises(ImpossibleEvidenceError):
            s.propagate()

    def test_calibration_adjacent_cliques_agree(self, alarm_net):
        forest = compile_network(alarm_net)
        s = InferenceSession(forest)
        s.absorb({"HRBP": 0, "CVP": 2})
        s.propagate()
        for i, parent in enumerate(forest.parent):
            if parent is None:
                continue
            sep = s.separators[i]
            from_child = s.potentials[i].marginal_onto(sep.scope)
            from_parent = s.potentials[parent].marginal_onto(sep.scope)
            assert np.allclose(from_child, from_parent, atol=1e-12)
            assert np.allclose(from_child, sep.cells, atol=1e-12)


class TestMarginal:
    def test_coin_prior(self, coin_net):
        s = InferenceSession(compile_network(coin_net))
        assert np.allclose(s.marginal("C"), [0.6, 0.4])

    def test_ab_prior_b(self, ab_net):
        s = InferenceSession(compile_network(ab_net))
        assert np.allclose(s.marginal("B"), [0.41, 0.59], atol=1e-12)

    def test_ab_bayes_inversion(self, ab_net):
        s = InferenceSession(compile_network(ab_net))
        s.absorb({"B": 0})
        assert np.allclose(s.marginal("A"), [27 / 41, 14 / 41], atol=1e-12)

    def test_evidence_variable_degenerate(self, asia_net):
        s = InferenceSession(compile_network(asia_net))
        s.absorb({"Smoking": 1})
        assert np.array_equal(s.marginal("Smoking"), [0.0, 1.0])

    def test_any_containing_clique_gives_same_answer(self, asia_net):
        forest = compile_network(asia_net)
        s = InferenceSession(forest)
        s.absorb({"Dyspnea": 0})
        s.propagate()
        for pos in range(8):
            var = forest.net.variables[pos].id
            expected = s.marginal(var)
            for i, c in enumerate(forest.cliques):
                if pos not in c.vars:
                    continue
                pot = s.potentials[i]
                masses = pot.marginal_onto((pos,))
                dist = np.zeros(forest.net.cardinality(var))
                dist[pot.allowed[pot.axis_of(pos)]] = masses
                assert np.allclose(dist / dist.sum(), expected, atol=1e-9)


class TestQuery:
    def test_ab_posterior_and_likelihood(self, ab_net):
        report = query(compile_network(ab_net), {"B": 0})
        assert report.p_evidence == pytest.approx(0.41, abs=1e-12)
        assert np.allclose(report.posteriors["A"], [0.658537, 0.341463], atol=1e-6)

    def test_ab_two_variable_likelihood(self, ab_net):
        report = query(compile_network(ab_net), {"A": 0, "B": 1})
        assert report.p_evidence == pytest.approx(0.03, abs=1e-12)

    def test_asia_matches_oracle(self, asia_net):
        report = query(compile_network(asia_net), {"Dyspnea": 0})
        posts, p_e = all_posteriors(joint(asia_net), {"Dyspnea": 0})
        assert report.p_evidence == pytest.approx(p_e, abs=1e-9)
        for v in asia_net.variables:
            assert np.allclose(report.posteriors[v.id], posts[v.id], atol=1e-9)

    def test_impossible_evidence_raises(self, asia_net):
        with pytest.raises(ImpossibleEvidenceError):
            query(compile_network(asia_net),
                  {"Tuberculosis": 1, "LungCancer": 1, "Either": 0})

    def test_report_shape(self, ab_net):
        report = query(compile_network(ab_net), {"B": 0})
        obj = report.to_obj()
        assert set(obj) == {"evidence", "p_evidence", "posteriors", "counters", "elapsed_us"}
        assert obj["evidence"] == {"B": "b0"}
        assert set(obj["counters"]) == {"checks", "cells_sent"}
        assert all(abs(sum(d) - 1) < 1e-9 for d in obj["posteriors"].values())

    def test_disconnected_trees_multiply(self, coin_net, ab_net):
        from beliefnet.network import merge_networks
        both = merge_networks(coin_net, ab_net)
        report = query(compile_network(both), {"B": 0, "C": 0})
        assert report.p_evidence == pytest.approx(0.41 * 0.6, abs=1e-12)
        assert np.allclose(report.posteriors["A"], [27 / 41, 14 / 41], atol=1e-12)


class TestIncremental:
    def test_matches_fresh_query(self, ab_net):
        forest = compile_network(ab_net)
        s = InferenceSession(forest)
        s.propagate()
        s.add_evidence({"B": 0})
        fresh = query(forest, {"B": 0})
        assert np.allclose(s.marginal("A"), fresh.posteriors["A"], atol=1e-9)
        assert s.p_evidence == pytest.approx(fresh.p_evidence, abs=1e-9)

    def test_asia_two_steps(self, asia_net):
        forest = compile_network(asia_net)
        s = InferenceSession(forest)
        s.add_evidence({"Dyspnea": 0})
        s.add_evidence({"Smoking": 0})
        fresh = query(forest, {"Dyspnea": 0, "Smoking": 0})
        for v in asia_net.variables:
            assert np.allclose(s.marginal(v.id), fresh.posteriors[v.id], atol=1e-9)
        assert s.p_evidence == pytest.approx(fresh.p_evidence, abs=1e-9)

    def test_empty_increment_changes_nothing(self, asia_net):
        s = InferenceSession(compile_network(asia_net))
        s.add_evidence({"Dyspnea": 0})
        before = {v.id: s.marginal(v.id) for v in asia_net.variables}
        s.add_evidence({})
        for v in asia_net.variables:
            assert np.allclose(s.marginal(v.id), before[v.id], atol=1e-12)

    def test_no_template_reload(self, asia_net):
        s = InferenceSession(compile_network(asia_net))
        assert s.counters.template_inits == 1
        s.add_evidence({"Dyspnea": 0})
        s.add_evidence({"Smoking": 0})
        s.add_evidence({"VisitAsia": 1})
        assert s.counters.template_inits == 1


class TestRetract:
    def test_back_to_priors(self, asia_net):
        forest = compile_network(asia_net)
        s = InferenceSession(forest)
        priors = {v.id: s.marginal(v.id) for v in asia_net.variables}
        s.add_evidence({"Dyspnea": 0, "Smoking": 0})
        s.retract_all()
        for v in asia_net.variables:
            assert np.allclose(s.marginal(v.id), priors[v.id], atol=1e-12)
        assert s.evidence == {}

    def test_noop_on_fresh_session(self, ab_net):
        s = InferenceSession(compile_network(ab_net))
        s.retract_all()
        assert s.evidence == {} and np.allclose(s.marginal("B"), [0.41, 0.59])

    def test_replay_reproduces_posteriors(self, asia_net):
        s = InferenceSession(compile_network(asia_net))
        s.add_evidence({"Dyspnea": 0})
        first = {v.id: s.marginal(v.id).copy() for v in asia_net.variables}
        s.retract_all()
        s.add_evidence({"Dyspnea": 0})
        for v in asia_net.variables:
            assert np.array_equal(s.marginal(v.id), first[v.id])


class TestCountUpdateOperations:
    def test_paper_worked_example(self):
        assert count_update_operations([3, 3, 3], 2, children=1, mode=REMOVAL) == 45
        assert count_update_operations([3, 3, 3], 2, children=1, mode=ZEROING) == 81

    def test_benefit_grows_with_children(self):
        assert count_update_operations([3, 3, 3], 0, children=2, mode=REMOVAL) == 54
        assert count_update_operations([3, 3, 3], 0, children=2, mode=ZEROING) == 108

    def test_unknown_mode(self):
        with pytest.raises(ValueError):
            count_update_operations([2, 2], 0, 1, mode="nope")


class TestRemovalVersusZeroing:
    def test_same_posteriors_less_work(self):
        for seed in range(15):
            net = random_network(nodes=8, arcs=10, max_card=4, seed=seed)
            forest = compile_network(net)
            ev = random_evidence(net, 1 + seed % 3, seed=seed + 50)
            removal = query(forest, ev, mode=REMOVAL)
            zeroing = query(forest, ev, mode=ZEROING)
            assert removal.p_evidence == pytest.approx(zeroing.p_evidence, abs=1e-12)
            for v in net.variables:
                assert np.allclose(removal.posteriors[v.id], zeroing.posteriors[v.id],
                                   atol=1e-12)
            assert removal.counters["cells_sent"] <= zeroing.counters["cells_sent"]
            assert removal.counters["checks"] <= zeroing.counters["checks"]


class TestShrinkage:
    def test_more_evidence_never_grows_the_forest(self, alarm_net):
        forest = compile_network(alarm_net)
        rng = np.random.default_rng(1)
        order = [v.id for v in alarm_net.variables]
        rng.shuffle(order)
        s = InferenceSession(forest)
        last = s.working_cells()
        for var in order[:10]:
            s.absorb({var: 0})
            now = s.working_cells()
            assert now < last  # every variable lives in some clique
            last = now


def _zero_heavy_net(trial):
    """Random network mixing deterministic rows (hard zeros) with soft ones."""
    from beliefnet.network import BeliefNetwork, Cpt, Variable, validated

    rng = np.random.default_rng(7000 + trial)
    n = int(rng.integers(3, 8))
    ids = [f"v{i}" for i in range(n)]
    cards = [int(rng.integers(2, 4)) for _ in range(n)]
    parents = [[i for i in range(j) if rng.random() < 0.35] for j in range(n)]
    variables, cpts = [], []
    for i in range(n):
        variables.append(Variable(ids[i], ids[i], tuple(f"s{c}" for c in range(cards[i]))))
        rows = int(np.prod([cards[p] for p in parents[i]])) if parents[i] else 1
        table = np.zeros((rows, cards[i]))
        for r in range(rows):
            if rng.random() < 0.4:
                table[r, rng.integers(cards[i])] = 1.0
            else:
                row = rng.uniform(0.05, 1, cards[i])
                table[r] = row / row.sum()
        cpts.append(Cpt(ids[i], tuple(ids[p] for p in parents[i]),
                        tuple(map(float, table.ravel()))))
    return validated(BeliefNetwork(f"det{trial}", tuple(variables), tuple(cpts)))


def test_deterministic_tables_match_oracle_and_agree_on_impossibility():
    # hard zeros exercise the 0/0-separator convention and the P(e)=0 paths
    rng = np.random.default_rng(0)
    agreements = 0
    for trial in range(40):
        net = _zero_heavy_net(trial)
        forest = compile_network(net)
        jt = joint(net)
        for _ in range(5):
            k = int(rng.integers(0, min(4, len(net.variables)) + 1))
            picks = rng.choice(len(net.variables), size=k, replace=False)
            ev = {net.variables[int(i)].id:
                  int(rng.integers(net.variables[int(i)].cardinality)) for i in picks}
            try:
                posts, p_e = all_posteriors(jt, ev)
            except ImpossibleEvidenceError:
                with pytest.raises(ImpossibleEvidenceError):
                    query(forest, ev)
                agreements += 1
                continue
            report = query(forest, ev)
            assert report.p_evidence == pytest.approx(p_e, abs=1e-12)
            for v in net.variables:
                assert np.allclose(report.posteriors[v.id], posts[v.id], atol=1e-12)
    assert agreements > 10  # the mix really does produce impossible queries


def test_counters_monotone_within_session(asia_net):
    s = InferenceSession(compile_network(asia_net))
    seen = (0, 0)
    for step in ({"Dyspnea": 0}, {"Smoking": 1}, {}):
        s.add_evidence(step)
        now = (s.counters.checks, s.counters.cells_sent)
        assert now >= seen
        seen = now
