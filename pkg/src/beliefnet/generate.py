"""Seeded random network generation for tests, verification, and the CLI."""
from __future__ import annotations

import numpy as np

from .network import BeliefNetwork, Cpt, Variable, validated


def random_network(nodes: int, arcs: int, max_card: int = 3, seed: int = 0,
                   min_card: int = 2, name: str | None = None) -> BeliefNetwork:
    """Random valid network. Acyclic by construction: parents are sampled only
    from earlier declaration positions. CPT rows are strictly positive."""
    if nodes < 1:
        raise ValueError("need at least one node")
    if max_card < min_card or min_card < 2:
        raise ValueError("cardinality bounds must satisfy 2 <= min <= max")
    max_arcs = nodes * (nodes - 1) // 2
    if arcs > max_arcs:
        raise ValueError(f"at most {max_arcs} arcs possible with {nodes} nodes")

    rng = np.random.default_rng(seed)
    cards = rng.integers(min_card, max_card + 1, size=nodes)
    ids = [f"n{i:02d}" for i in range(nodes)]

    pairs = [(i, j) for i in range(nodes) for j in range(i + 1, nodes)]
    chosen = rng.choice(len(pairs), size=arcs, replace=False) if arcs else []
    parents: list[list[int]] = [[] for _ in range(nodes)]
    for k in sorted(int(c) for c in chosen):
        i, j = pairs[k]
        parents[j].append(i)

    variables = []
    cpts = []
    for i, vid in enumerate(ids):
        k = int(cards[i])
        variables.append(Variable(vid, vid, tuple(f"v{c}" for c in range(k))))
        rows = 1
        for p in parents[i]:
            rows *= int(cards[p])
        if rows * k > 1_000_000:
            raise ValueError(
                f"node {vid} would need a table of {rows * k} entries; "
                "use fewer arcs or lower cardinalities")
        table = rng.uniform(0.05, 1.0, size=(rows, k))
        table /= table.sum(axis=1, keepdims=True)
        cpts.append(Cpt(vid, tuple(ids[p] for p in parents[i]), tuple(float(x) for x in table.ravel())))

    return validated(BeliefNetwork(name or f"random-{nodes}n-{arcs}a-seed{seed}",
                                   tuple(variables), tuple(cpts)))


def random_evidence(net: BeliefNetwork, size: int, seed: int = 0) -> dict[str, int]:
    """Uniformly chosen variables and value indices."""
    rng = np.random.default_rng(seed)
    size = min(size, len(net.variables))
    picks = rng.choice(len(net.variables), size=size, replace=False)
    return {net.variables[int(i)].id: int(rng.integers(net.variables[int(i)].cardinality))
            for i in picks}
