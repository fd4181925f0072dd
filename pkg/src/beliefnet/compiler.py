"""Compile a belief network into a junction forest of cliques.

Pipeline: moralize the DAG, order vertices by maximum cardinality search,
triangulate along the reverse order, read off maximal cliques, link them into
a forest by running intersection, and seed clique potentials with the CPTs.

Vertices are variable positions (indices into the network's declaration
order) throughout; ids only appear at the API boundaries.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .errors import BeliefNetError
from .network import BeliefNetwork
from .potentials import PotentialTable


class UndirectedGraph:
    """Symmetric adjacency sets over vertices 0..n-1, no self-loops."""

    def __init__(self, n: int):
        self.n = n
        self.adj: list[set[int]] = [set() for _ in range(n)]

    def add_edge(self, u: int, v: int) -> None:
        if u == v:
            raise ValueError("self-loop")
        self.adj[u].add(v)
        self.adj[v].add(u)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def edges(self) -> list[tuple[int, int]]:
        return sorted((u, v) for u in range(self.n) for v in self.adj[u] if u < v)

    def copy(self) -> "UndirectedGraph":
        g = UndirectedGraph(self.n)
        g.adj = [set(a) for a in self.adj]
        return g


def moralize(net: BeliefNetwork) -> UndirectedGraph:
    """Drop arc directions and marry every pair of co-parents."""
    g = UndirectedGraph(len(net.variables))
    for cpt in net.cpts:
        child = net.position(cpt.child)
        parents = [net.position(p) for p in cpt.parents]
        for p in parents:
            g.add_edge(p, child)
        for i in range(len(parents)):
            for j in range(i + 1, len(parents)):
                g.add_edge(parents[i], parents[j])
    return g


def mcs_order(g: UndirectedGraph) -> list[int]:
    """Maximum cardinality search visit order.

    Repeatedly numbers the vertex with the most already-numbered neighbors.
    Ties go to the vertex that reached the current count first (per-count FIFO
    buckets, initially seeded in declaration order), so when every remaining
    count is zero the search restarts a new component at the lowest unnumbered
    vertex.
    """
    buckets: dict[int, deque[int]] = {0: deque(range(g.n))}
    count = [0] * g.n
    numbered = [False] * g.n
    order: list[int] = []
    maxc = 0
    while len(order) < g.n:
        dq = buckets.get(maxc)
        if not dq:
            maxc -= 1
            continue
        v = dq.popleft()
        if numbered[v] or count[v] != maxc:
            continue  # stale entry left behind by an increment
        numbered[v] = True
        order.append(v)
        for w in sorted(g.adj[v]):
            if not numbered[w]:
                count[w] += 1
                buckets.setdefault(count[w], deque()).append(w)
                maxc = max(maxc, count[w])
    return order


def triangulate(g: UndirectedGraph, order: list[int]) -> tuple[UndirectedGraph, list[tuple[int, int]]]:
    """Eliminate in reverse visit order, completing each vertex's
    lower-numbered neighborhood; returns the chordal supergraph and the
    fill-in edges that were added."""
    h = g.copy()
    number = {v: i for i, v in enumerate(order)}
    fill: list[tuple[int, int]] = []
    for v in reversed(order):
        lower = sorted(w for w in h.adj[v] if number[w] < number[v])
        for i in range(len(lower)):
            for j in range(i + 1, len(lower)):
                a, b = lower[i], lower[j]
                if not h.has_edge(a, b):
                    h.add_edge(a, b)
                    fill.append((a, b))
    return h, fill


def assert_zero_fill(g: UndirectedGraph, order: list[int]) -> None:
    _, fill = triangulate(g, order)
    if fill:
        raise BeliefNetError(f"graph is not chordal for the given order (fill-ins {fill})")


def identify_cliques(chordal: UndirectedGraph, order: list[int]) -> list[tuple[int, ...]]:
    """Maximal cliques of a chordal graph, each discovered as a vertex plus
    its lower-numbered neighbors; indexed ascending by the highest visit
    number contained."""
    assert_zero_fill(chordal, order)
    number = {v: i for i, v in enumerate(order)}
    candidates: list[frozenset[int]] = []
    for v in order:
        candidates.append(frozenset({v} | {w for w in chordal.adj[v] if number[w] < number[v]}))
    cliques = [c for c in candidates if not any(c < other for other in candidates)]
    return [tuple(sorted(c)) for c in cliques]


@dataclass
class Clique:
    index: int
    vars: tuple[int, ...]
    cpt_owners: list[int] = field(default_factory=list)  # variables whose CPT lives here
    potential: PotentialTable | None = None


@dataclass
class CliqueForest:
    net: BeliefNetwork
    cliques: list[Clique]
    parent: list[int | None]
    separators: list[PotentialTable | None]  # separator between clique i and its parent
    sep_scopes: list[tuple[int, ...] | None]
    roots: list[int]
    home_clique: dict[int, int]

    def collect_order(self) -> list[int]:
        return list(range(len(self.cliques) - 1, -1, -1))

    def distribute_order(self) -> list[int]:
        return list(range(len(self.cliques)))


def build_forest(net: BeliefNetwork, cliques: list[tuple[int, ...]]) -> CliqueForest:
    """Link cliques into a forest: each clique's separator is its intersection
    with the union of earlier cliques, its parent the earliest earlier clique
    containing that separator. Empty separators start new trees."""
    parent: list[int | None] = []
    sep_scopes: list[tuple[int, ...] | None] = []
    roots: list[int] = []
    seen: set[int] = set()
    sets = [set(c) for c in cliques]
    for i, c in enumerate(sets):
        sep = c & seen
        if not sep:
            parent.append(None)
            sep_scopes.append(None)
            roots.append(i)
        else:
            p = next((j for j in range(i) if sep <= sets[j]), None)
            if p is None:
                raise BeliefNetError("running intersection violated; compile bug")
            parent.append(p)
            sep_scopes.append(tuple(sorted(sep)))
        seen |= c
    if len(seen) != len(net.variables):
        raise BeliefNetError("cliques do not cover every variable")

    home: dict[int, int] = {}
    for v in range(len(net.variables)):
        holders = [cl for cl in range(len(cliques)) if v in sets[cl]]
        home[v] = min(holders, key=lambda cl: (len(cliques[cl]), cl))

    return CliqueForest(
        net=net,
        cliques=[Clique(i, c) for i, c in enumerate(cliques)],
        parent=parent,
        separators=[None] * len(cliques),
        sep_scopes=sep_scopes,
        roots=roots,
        home_clique=home,
    )


def _cpt_as_subtable(net: BeliefNetwork, var: int) -> tuple[tuple[int, ...], np.ndarray]:
    """A variable's CPT as (sorted scope, flat cells ordered by scope)."""
    cpt = net.cpts[var]
    fam_ids = list(cpt.parents) + [cpt.child]
    fam = [net.position(u) for u in fam_ids]
    cards = [net.variables[u].cardinality for u in fam]
    nd = np.asarray(cpt.table, dtype=np.float64).reshape(cards)
    perm = np.argsort(fam)
    nd = np.ascontiguousarray(nd.transpose(perm))
    return tuple(sorted(fam)), nd.ravel()


def initialize_potentials(net: BeliefNetwork, forest: CliqueForest) -> CliqueForest:
    """Assign every CPT to the smallest clique containing its family (ties to
    the lowest index), set each clique potential to the product of its CPTs
    (ones when it has none), and set separators to ones."""
    sets = [set(c.vars) for c in forest.cliques]
    for v in range(len(net.variables)):
        fam = {v} | {net.position(p) for p in net.cpts[v].parents}
        holders = [i for i, s in enumerate(sets) if fam <= s]
        if not holders:
            raise BeliefNetError(f"no clique covers the family of variable {net.variables[v].id}")
        owner = min(holders, key=lambda i: (len(sets[i]), i))
        forest.cliques[owner].cpt_owners.append(v)

    cards = [v.cardinality for v in net.variables]
    for clique in forest.cliques:
        pot = PotentialTable.ones(clique.vars, [cards[u] for u in clique.vars])
        for v in clique.cpt_owners:
            sub_scope, sub_cells = _cpt_as_subtable(net, v)
            pot.multiply_sub(sub_scope, sub_cells)
        clique.potential = pot

    for i, scope in enumerate(forest.sep_scopes):
        if scope is not None:
            forest.separators[i] = PotentialTable.ones(scope, [cards[u] for u in scope])
    return forest


def compile_network(net: BeliefNetwork) -> CliqueForest:
    """Full pipeline from validated network to initialized junction forest."""
    moral = moralize(net)
    order = mcs_order(moral)
    chordal, _ = triangulate(moral, order)
    cliques = identify_cliques(chordal, order)
    forest = build_forest(net, cliques)
    return initialize_potentials(net, forest)


@dataclass(frozen=True)
class ForestStats:
    cliques: int
    trees: int
    max_clique_vars: int
    clique_cells: int
    separator_cells: int

    @property
    def total_cells(self) -> int:
        return self.clique_cells + self.separator_cells

    def to_obj(self) -> dict:
        return {
            "cliques": self.cliques,
            "trees": self.trees,
            "max_clique_vars": self.max_clique_vars,
            "clique_cells": self.clique_cells,
            "separator_cells": self.separator_cells,
        }


def forest_stats(forest: CliqueForest) -> ForestStats:
    return ForestStats(
        cliques=len(forest.cliques),
        trees=len(forest.roots),
        max_clique_vars=max((len(c.vars) for c in forest.cliques), default=0),
        clique_cells=sum(c.potential.ncells for c in forest.cliques),
        separator_cells=sum(s.ncells for s in forest.separators if s is not None),
    )


def forest_to_dot(forest: CliqueForest) -> str:
    """Graphviz view of the junction forest: cliques as boxes, separators as
    edge labels."""
    ids = [v.id for v in forest.net.variables]
    lines = [f'digraph "{forest.net.name}-forest" {{', "  node [shape=box];"]
    for c in forest.cliques:
        label = ",".join(ids[u] for u in c.vars)
        lines.append(f'  c{c.index} [label="{label}"];')
    for i, p in enumerate(forest.parent):
        if p is not None:
            sep = ",".join(ids[u] for u in forest.separators[i].scope)
            lines.append(f'  c{p} -> c{i} [label="{sep}", dir=none];')
    lines.append("}")
    return "\n".join(lines) + "\n"
