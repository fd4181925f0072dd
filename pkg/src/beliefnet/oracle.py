"""Brute-force ground truth by full joint enumeration.

Deliberately independent of the potential-table and propagation machinery:
the joint is assembled straight from the CPT definition with plain numpy
broadcasting, and posteriors are read off by slicing and summing. Only for
desk-scale networks; anything bigger than the cell cap is refused.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import ImpossibleEvidenceError, StateSpaceCapError
from .network import BeliefNetwork, EvidenceSet, topological_order

DEFAULT_CELL_CAP = 2 ** 24


class JointTable:
    """Dense joint distribution over all variables, topological axis order."""

    def __init__(self, net: BeliefNetwork, order: list[str], probs: np.ndarray):
        self.net = net
        self.order = order
        self.axis = {v: i for i, v in enumerate(order)}
        self.probs = probs

    def total(self) -> float:
        return float(self.probs.sum())


def joint(net: BeliefNetwork, cap: int = DEFAULT_CELL_CAP) -> JointTable:
    """cell(x) = product over variables of the CPT entry selected by x."""
    order = topological_order(net)
    cards = [net.cardinality(v) for v in order]
    size = math.prod(cards)
    if size > cap:
        raise StateSpaceCapError(
            f"joint would need {size} cells, more than the cap of {cap}")
    axis = {v: i for i, v in enumerate(order)}
    probs = np.ones(cards)
    for v in order:
        cpt = net.cpt(v)
        fam = list(cpt.parents) + [v]
        fam_axes = [axis[u] for u in fam]
        nd = np.asarray(cpt.table).reshape([net.cardinality(u) for u in fam])
        nd = nd.transpose(np.argsort(fam_axes))
        shape = [1] * len(cards)
        for a in sorted(fam_axes):
            shape[a] = cards[a]
        probs = probs * nd.reshape(shape)
    return JointTable(net, order, probs)


def joint_cell(net: BeliefNetwork, assignment: dict[str, int]) -> float:
    """One joint probability computed the slow, obvious way (cross-check)."""
    p = 1.0
    for v in net.variables:
        cpt = net.cpt(v.id)
        row = 0
        for parent in cpt.parents:
            row = row * net.cardinality(parent) + assignment[parent]
        p *= cpt.table[row * v.cardinality + assignment[v.id]]
    return p


def all_posteriors(jt: JointTable, ev) -> tuple[dict[str, np.ndarray], float]:
    """Posterior for every variable under the evidence, plus P(evidence)."""
    assignments = ev.assignments if isinstance(ev, EvidenceSet) else dict(ev)
    sub = jt.probs
    remaining = list(jt.order)
    for var in sorted(assignments, key=jt.axis.__getitem__, reverse=True):
        sub = sub.take(assignments[var], axis=remaining.index(var))
        remaining.remove(var)
    p_e = float(sub.sum())
    if not p_e > 0.0:
        raise ImpossibleEvidenceError("evidence has probability 0 in the joint")
    out: dict[str, np.ndarray] = {}
    for var, val in assignments.items():
        d = np.zeros(jt.net.cardinality(var))
        d[val] = 1.0
        out[var] = d
    for i, var in enumerate(remaining):
        others = tuple(a for a in range(sub.ndim) if a != i)
        out[var] = np.asarray(sub.sum(axis=others)) / p_e
    return out, p_e


def oracle_posterior(net: BeliefNetwork, ev, var_id: str,
                     cap: int = DEFAULT_CELL_CAP) -> tuple[np.ndarray, float]:
    """Distribution over var_id given the evidence, plus P(evidence)."""
    assignments = ev.assignments if isinstance(ev, EvidenceSet) else dict(ev)
    if var_id in assignments:
        raise ValueError(f"{var_id!r} is part of the evidence")
    posts, p_e = all_posteriors(joint(net, cap=cap), assignments)
    return posts[var_id], p_e
