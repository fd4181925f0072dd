import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from beliefnet.compiler import (
    UndirectedGraph,
    build_forest,
    compile_network,
    forest_stats,
    forest_to_dot,
    identify_cliques,
    initialize_potentials,
    mcs_order,
    moralize,
    triangulate,
)
from beliefnet.generate import random_network
from beliefnet.oracle import joint_cell
from conftest import make_net


def graph(n, edges):
    g = UndirectedGraph(n)
    for u, v in edges:
        g.add_edge(u, v)
    return g


def binary_net(name, arcs, nodes):
    node_defs = []
    parents = {v: [] for v in nodes}
    for p, c in arcs:
        parents[c].append(p)
    for v in nodes:
        rows = 2 ** len(parents[v])
        node_defs.append((v, ["0", "1"], parents[v], [0.5, 0.5] * rows))
    return make_net(name, node_defs)


class TestMoralize:
    def test_chain_has_no_marriages(self):
        net = binary_net("chain", [("A", "B"), ("B", "C")], ["A", "B", "C"])
        g = moralize(net)
        assert g.edges() == [(0, 1), (1, 2)]

    def test_collider_marries_parents(self, collider_net):
        g = moralize(collider_net)
        assert g.edges() == [(0, 1), (0, 2), (1, 2)]

    def test_diamond_marries_b_and_c(self):
        net = binary_net("diamond", [("A", "B"), ("A", "C"), ("B", "D"), ("C", "D")],
                         ["A", "B", "C", "D"])
        g = moralize(net)
        assert g.edges() == [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]

    def test_every_coparent_pair_adjacent(self):
        for seed in range(10):
            net = random_network(nodes=9, arcs=12, seed=seed)
            g = moralize(net)
            for cpt in net.cpts:
                ps = [net.position(p) for p in cpt.parents]
                for i in range(len(ps)):
                    for j in range(i + 1, len(ps)):
                        assert g.has_edge(ps[i], ps[j])


class TestMcsOrder:
    def test_triangle_declaration_order(self):
        assert mcs_order(graph(3, [(0, 1), (1, 2), (0, 2)])) == [0, 1, 2]

    def test_isolated_vertices_restart_in_declaration_order(self):
        assert mcs_order(graph(2, [])) == [0, 1]

    def test_four_cycle_prefers_vertex_that_reached_count_first(self):
        # A-B-C-D-A: after A and B, both C and D sit at count 1, but D got
        # there first (when A was numbered), so D precedes C.
        assert mcs_order(graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)])) == [0, 1, 3, 2]

    def test_numbers_form_bijection(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            n = int(rng.integers(1, 12))
            edges = {(int(a), int(b)) for a in range(n) for b in range(a + 1, n)
                     if rng.random() < 0.3}
            order = mcs_order(graph(n, edges))
            assert sorted(order) == list(range(n))


class TestTriangulate:
    def test_triangle_zero_fill(self):
        g = graph(3, [(0, 1), (1, 2), (0, 2)])
        _, fill = triangulate(g, mcs_order(g))
        assert fill == []

    def test_four_cycle_fills_bd(self):
        g = graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
        h, fill = triangulate(g, [0, 1, 3, 2])
        assert fill == [(1, 3)]
        assert h.has_edge(1, 3)

    @settings(max_examples=80, deadline=None)
    @given(st.integers(min_value=1, max_value=9), st.data())
    def test_output_is_chordal_zero_fill_check(self, n, data):
        edges = data.draw(st.sets(
            st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda e: e[0] < e[1]),
            max_size=n * (n - 1) // 2))
        g = graph(n, edges)
        order = mcs_order(g)
        chordal, _ = triangulate(g, order)
        _, refill = triangulate(chordal, mcs_order(chordal))
        assert refill == []


class TestIdentifyCliques:
    def test_triangle_single_clique(self):
        g = graph(3, [(0, 1), (1, 2), (0, 2)])
        assert identify_cliques(g, mcs_order(g)) == [(0, 1, 2)]

    def test_triangulated_four_cycle(self):
        g = graph(4, [(0, 1), (1, 2), (2, 3), (0, 3), (1, 3)])
        assert identify_cliques(g, [0, 1, 3, 2]) == [(0, 1, 3), (1, 2, 3)]

    def test_single_edge(self):
        g = graph(2, [(0, 1)])
        assert identify_cliques(g, mcs_order(g)) == [(0, 1)]

    def test_matches_exhaustive_enumeration(self):
        rng = np.random.default_rng(3)
        for _ in range(15):
            n = int(rng.integers(2, 9))
            edges = {(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < 0.45}
            g = graph(n, edges)
            order = mcs_order(g)
            chordal, _ = triangulate(g, order)
            got = {frozenset(c) for c in identify_cliques(chordal, order)}
            # brute force: every maximal complete subset
            from itertools import combinations
            complete = [frozenset(s) for k in range(1, n + 1)
                        for s in combinations(range(n), k)
                        if all(chordal.has_edge(a, b) for a, b in combinations(s, 2))]
            maximal = {s for s in complete if not any(s < t for t in complete)}
            assert got == maximal


class TestBuildForest:
    def test_two_cliques_one_separator(self):
        net = binary_net("d", [("A", "B"), ("A", "C"), ("B", "D"), ("C", "D")],
                         ["A", "B", "C", "D"])
        forest = compile_network(net)
        assert [c.vars for c in forest.cliques] == [(0, 1, 2), (1, 2, 3)]
        assert forest.parent == [None, 0]
        assert forest.separators[1].scope == (1, 2)

    def test_four_cycle_dag_joins_on_bd(self):
        # moral graph is the 4-cycle A-B-C-D plus the B,D marriage: the two
        # triangles meet on separator {B,D}
        net = binary_net("ring", [("A", "B"), ("A", "D"), ("B", "C"), ("D", "C")],
                         ["A", "B", "C", "D"])
        forest = compile_network(net)
        assert [c.vars for c in forest.cliques] == [(0, 1, 3), (1, 2, 3)]
        assert forest.parent == [None, 0]
        assert forest.separators[1].scope == (1, 3)

    def test_disjoint_edges_make_two_roots(self):
        net = binary_net("pairs", [("A", "B"), ("C", "D")], ["A", "B", "C", "D"])
        forest = compile_network(net)
        assert len(forest.roots) == 2

    def test_single_clique_is_root(self, coin_net):
        forest = compile_network(coin_net)
        assert forest.roots == [0] and forest.separators == [None]

    def test_running_intersection(self):
        for seed in range(20):
            net = random_network(nodes=10, arcs=13, seed=seed)
            forest = compile_network(net)
            assert_running_intersection(forest)


def assert_running_intersection(forest):
    # for every variable, the cliques containing it form a connected subforest
    for v in range(len(forest.net.variables)):
        holders = [i for i, c in enumerate(forest.cliques) if v in c.vars]
        reachable = {holders[0]}
        frontier = [holders[0]]
        adj = {i: set() for i in holders}
        for i in holders:
            p = forest.parent[i]
            if p is not None and p in adj and v in forest.separators[i].scope:
                adj[i].add(p)
                adj[p].add(i)
        while frontier:
            cur = frontier.pop()
            for nxt in adj[cur]:
                if nxt not in reachable:
                    reachable.add(nxt)
                    frontier.append(nxt)
        assert reachable == set(holders)


class TestInitializePotentials:
    def test_ab_product(self, ab_net):
        forest = compile_network(ab_net)
        assert [c.vars for c in forest.cliques] == [(0, 1)]
        assert np.allclose(forest.cliques[0].potential.cells, [0.27, 0.03, 0.14, 0.56])

    def test_coin_prior(self, coin_net):
        forest = compile_network(coin_net)
        assert np.allclose(forest.cliques[0].potential.cells, [0.6, 0.4])

    def test_clique_without_cpts_is_all_ones(self):
        # this seed is known to compile to a forest with a CPT-less clique
        net = random_network(nodes=12, arcs=17, max_card=4, seed=2017)
        forest = compile_network(net)
        empty = [c for c in forest.cliques if not c.cpt_owners]
        assert empty, "fixture regression: expected a clique with no assigned CPTs"
        for c in empty:
            assert np.all(c.potential.cells == 1.0)

    def test_every_cpt_assigned_once(self, alarm_net):
        forest = compile_network(alarm_net)
        owners = [v for c in forest.cliques for v in c.cpt_owners]
        assert sorted(owners) == list(range(37))

    def test_joint_reconstruction_small_networks(self):
        # product of clique cells over separator cells equals the naive joint
        for seed in range(12):
            n = 3 + seed % 4
            net = random_network(nodes=n, arcs=min(n, n * (n - 1) // 2),
                                 max_card=3, seed=seed)
            forest = compile_network(net)
            cards = [v.cardinality for v in net.variables]
            for flat in range(math.prod(cards)):
                assignment, rest = {}, flat
                for i in reversed(range(n)):
                    assignment[net.variables[i].id] = rest % cards[i]
                    rest //= cards[i]
                num = 1.0
                for c in forest.cliques:
                    num *= table_value(net, c.potential, assignment)
                den = 1.0
                for s in forest.separators:
                    if s is not None:
                        den *= table_value(net, s, assignment)
                expected = joint_cell(net, assignment)
                got = num / den if den else 0.0
                assert got == pytest.approx(expected, abs=1e-12)


def table_value(net, pot, assignment):
    idx = 0
    for axis, var in enumerate(pot.scope):
        val = assignment[net.variables[var].id]
        idx = idx * len(pot.allowed[axis]) + int(np.flatnonzero(pot.allowed[axis] == val)[0])
    return pot.cells[idx]


class TestForestStats:
    def test_ab(self, ab_net):
        stats = forest_stats(compile_network(ab_net))
        assert stats.to_obj() == {"cliques": 1, "trees": 1, "max_clique_vars": 2,
                                  "clique_cells": 4, "separator_cells": 0}

    def test_triangulated_diamond(self):
        net = binary_net("d", [("A", "B"), ("A", "C"), ("B", "D"), ("C", "D")],
                         ["A", "B", "C", "D"])
        stats = forest_stats(compile_network(net))
        assert stats.cliques == 2
        assert stats.clique_cells == 16 and stats.separator_cells == 4
        assert stats.total_cells == 20

    def test_alarm_cell_total_logged_and_bounded(self, alarm_net):
        stats = forest_stats(compile_network(alarm_net))
        # informational: the original engine reported 1,440 table entries
        print(f"alarm clique_cells={stats.clique_cells} total={stats.total_cells}")
        assert stats.clique_cells <= 20_000


def test_compile_is_deterministic(alarm_net):
    a = compile_network(alarm_net)
    b = compile_network(alarm_net)
    assert [c.vars for c in a.cliques] == [c.vars for c in b.cliques]
    assert a.parent == b.parent
    assert [c.cpt_owners for c in a.cliques] == [c.cpt_owners for c in b.cliques]
    for x, y in zip(a.cliques, b.cliques):
        assert np.array_equal(x.potential.cells, y.potential.cells)


def test_forest_dot_mentions_every_clique(asia_net):
    forest = compile_network(asia_net)
    dot = forest_to_dot(forest)
    assert dot.count("[label=") >= len(forest.cliques)
