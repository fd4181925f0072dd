"""Belief-network data model, validation, document format, and merging.

A network is a DAG of discrete variables, each carrying a conditional
probability table over (parents, child). CPT rows are laid out mixed-radix:
parents in declared order with the first parent most significant, and the
child index varying fastest.

Networks are treated as immutable values once validated; every editing
operation builds a new network.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .errors import NetworkFormatError, NetworkValidationError

ROW_SUM_TOL = 1e-9

# Top-level document keys. "layout" is a presentation sidecar written by UI
# clients; it is stored and served back but never read for inference.
_DOC_KEYS = {"name", "nodes", "layout"}
_NODE_KEYS = {"id", "label", "values", "parents", "cpt"}


@dataclass(frozen=True)
class Variable:
    id: str
    label: str
    values: tuple[str, ...]

    @property
    def cardinality(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class Cpt:
    child: str
    parents: tuple[str, ...]
    table: tuple[float, ...]


@dataclass
class BeliefNetwork:
    name: str
    variables: tuple[Variable, ...]
    cpts: tuple[Cpt, ...]
    layout: dict | None = None
    _index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        self._index = {v.id: i for i, v in enumerate(self.variables)}

    def position(self, var_id: str) -> int:
        return self._index[var_id]

    def variable(self, var_id: str) -> Variable:
        return self.variables[self._index[var_id]]

    def cpt(self, var_id: str) -> Cpt:
        return self.cpts[self._index[var_id]]

    @property
    def arcs(self) -> list[tuple[str, str]]:
        return [(p, c.child) for c in self.cpts for p in c.parents]

    def cardinality(self, var_id: str) -> int:
        return self.variables[self._index[var_id]].cardinality

    def __eq__(self, other):
        if not isinstance(other, BeliefNetwork):
            return NotImplemented
        return (
            self.name == other.name
            and self.variables == other.variables
            and self.cpts == other.cpts
        )


@dataclass(frozen=True)
class EvidenceSet:
    """Partial assignment of variables to observed value indices."""

    assignments: dict[str, int]

    @staticmethod
    def from_labels(net: BeliefNetwork, bindings: dict[str, str]) -> "EvidenceSet":
        out = {}
        for var_id, label in bindings.items():
            if var_id not in net._index:
                raise NetworkFormatError(f"unknown variable {var_id!r}")
            values = net.variable(var_id).values
            if label not in values:
                raise NetworkFormatError(
                    f"variable {var_id!r} has no value {label!r} (choices: {list(values)})"
                )
            out[var_id] = values.index(label)
        return EvidenceSet(out)

    def to_labels(self, net: BeliefNetwork) -> dict[str, str]:
        return {v: net.variable(v).values[i] for v, i in self.assignments.items()}

    def items(self):
        return self.assignments.items()

    def __len__(self):
        return len(self.assignments)

    def __contains__(self, var_id):
        return var_id in self.assignments


@dataclass(frozen=True)
class Violation:
    kind: str
    where: str
    message: str

    def __str__(self):
        return f"[{self.kind}] {self.where}: {self.message}"


def expected_cpt_length(net_vars: dict[str, Variable], cpt: Cpt) -> int:
    n = net_vars[cpt.child].cardinality
    for p in cpt.parents:
        n *= net_vars[p].cardinality
    return n


def validate(net: BeliefNetwork) -> list[Violation]:
    """Check every model invariant; returns all violations (empty list if valid)."""
    out: list[Violation] = []
    seen: dict[str, int] = {}
    for v in net.variables:
        if not v.id or any(ch.isspace() for ch in v.id):
            out.append(Violation("bad_id", v.id, "id must be a non-empty token without whitespace"))
        if v.id in seen:
            out.append(Violation("duplicate_id", v.id, "variable id declared more than once"))
        seen[v.id] = seen.get(v.id, 0) + 1
        if v.cardinality < 2:
            out.append(Violation("cardinality", v.id, f"needs at least 2 values, has {v.cardinality}"))
        if len(set(v.values)) != len(v.values):
            out.append(Violation("duplicate_value", v.id, "value labels must be distinct"))

    ids = {v.id: v for v in net.variables}
    if len(net.cpts) != len(net.variables):
        out.append(Violation("cpt_count", net.name, "exactly one CPT per variable required"))
    for cpt in net.cpts:
        where = cpt.child
        if cpt.child not in ids:
            out.append(Violation("unknown_variable", where, "CPT child is not a declared variable"))
            continue
        bad_ref = False
        for p in cpt.parents:
            if p not in ids:
                out.append(Violation("unknown_parent", where, f"parent {p!r} is not declared"))
                bad_ref = True
        if cpt.child in cpt.parents:
            out.append(Violation("self_loop", where, "variable listed as its own parent"))
            bad_ref = True
        if len(set(cpt.parents)) != len(cpt.parents):
            out.append(Violation("duplicate_parent", where, "duplicate parent in CPT"))
            bad_ref = True
        if bad_ref:
            continue
        want = expected_cpt_length(ids, cpt)
        if len(cpt.table) != want:
            out.append(Violation(
                "cpt_length", where,
                f"table has {len(cpt.table)} entries, expected {want}"))
            continue
        k = ids[cpt.child].cardinality
        for i, x in enumerate(cpt.table):
            if not (isinstance(x, (int, float)) and math.isfinite(x) and 0.0 <= x <= 1.0):
                out.append(Violation(
                    "range", where, f"entry {i} (row {i // k}, column {i % k}) = {x!r} not in [0,1]"))
        for row in range(len(cpt.table) // k):
            s = math.fsum(cpt.table[row * k:(row + 1) * k])
            if abs(s - 1.0) > ROW_SUM_TOL:
                out.append(Violation(
                    "row_sum", where, f"row {row} sums to {s!r}, expected 1"))

    cycle = _find_cycle(net)
    if cycle:
        out.append(Violation(
            "cycle", ",".join(sorted(cycle)), "arcs form a directed cycle"))
    return out


def _find_cycle(net: BeliefNetwork) -> list[str] | None:
    ids = {v.id for v in net.variables}
    parents = {c.child: [p for p in c.parents if p in ids] for c in net.cpts if c.child in ids}
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {v: WHITE for v in parents}
    stack_path: list[str] = []

    def visit(u: str) -> list[str] | None:
        color[u] = GRAY
        stack_path.append(u)
        for p in parents[u]:
            if color.get(p, BLACK) == GRAY:
                return stack_path[stack_path.index(p):]
            if color.get(p, BLACK) == WHITE:
                found = visit(p)
                if found:
                    return found
        stack_path.pop()
        color[u] = BLACK
        return None

    for v in parents:
        if color[v] == WHITE:
            found = visit(v)
            if found:
                return found
    return None


def validated(net: BeliefNetwork) -> BeliefNetwork:
    violations = validate(net)
    if violations:
        raise NetworkValidationError(violations)
    return net


def topological_order(net: BeliefNetwork) -> list[str]:
    """Parents before children; among ready variables, declaration order wins."""
    remaining_parents = {c.child: set(c.parents) for c in net.cpts}
    children: dict[str, list[str]] = {v.id: [] for v in net.variables}
    for c in net.cpts:
        for p in c.parents:
            children[p].append(c.child)
    order: list[str] = []
    ready = [v.id for v in net.variables if not remaining_parents[v.id]]
    while ready:
        # pick the ready variable declared earliest
        nxt = min(ready, key=net.position)
        ready.remove(nxt)
        order.append(nxt)
        for ch in children[nxt]:
            remaining_parents[ch].discard(nxt)
            if not remaining_parents[ch]:
                ready.append(ch)
    if len(order) != len(net.variables):
        raise NetworkValidationError(
            [Violation("cycle", net.name, "arcs form a directed cycle")])
    return order


# ---------------------------------------------------------------------------
# Canonical document format
# ---------------------------------------------------------------------------

def parse_network(document: str) -> BeliefNetwork:
    """Parse the canonical JSON document and return a validated network."""
    try:
        raw = json.loads(document)
    except json.JSONDecodeError as e:
        raise NetworkFormatError(f"syntax error at line {e.lineno}, column {e.colno}: {e.msg}") from None
    return network_from_obj(raw)


def network_from_obj(raw) -> BeliefNetwork:
    """Build and validate a network from an already-decoded document object."""
    if not isinstance(raw, dict):
        raise NetworkFormatError("document root must be an object")
    unknown = set(raw) - _DOC_KEYS
    if unknown:
        raise NetworkFormatError(f"unknown document keys: {sorted(unknown)}")
    for key in ("name", "nodes"):
        if key not in raw:
            raise NetworkFormatError(f"missing document key {key!r}")
    if not isinstance(raw["name"], str):
        raise NetworkFormatError("'name' must be a string")
    if not isinstance(raw["nodes"], list):
        raise NetworkFormatError("'nodes' must be a list")

    variables: list[Variable] = []
    cpts: list[Cpt] = []
    for i, node in enumerate(raw["nodes"]):
        if not isinstance(node, dict):
            raise NetworkFormatError(f"node {i} must be an object")
        unknown = set(node) - _NODE_KEYS
        if unknown:
            raise NetworkFormatError(f"node {i}: unknown keys {sorted(unknown)}")
        missing = _NODE_KEYS - set(node)
        if missing:
            raise NetworkFormatError(f"node {i}: missing keys {sorted(missing)}")
        if not isinstance(node["id"], str) or not isinstance(node["label"], str):
            raise NetworkFormatError(f"node {i}: 'id' and 'label' must be strings")
        if (not isinstance(node["values"], list)
                or not all(isinstance(x, str) for x in node["values"])):
            raise NetworkFormatError(f"node {node['id']!r}: 'values' must be a list of strings")
        if (not isinstance(node["parents"], list)
                or not all(isinstance(x, str) for x in node["parents"])):
            raise NetworkFormatError(f"node {node['id']!r}: 'parents' must be a list of strings")
        if (not isinstance(node["cpt"], list)
                or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in node["cpt"])):
            raise NetworkFormatError(f"node {node['id']!r}: 'cpt' must be a list of numbers")
        variables.append(Variable(node["id"], node["label"], tuple(node["values"])))
        cpts.append(Cpt(node["id"], tuple(node["parents"]), tuple(float(x) for x in node["cpt"])))

    layout = raw.get("layout")
    if layout is not None and not isinstance(layout, dict):
        raise NetworkFormatError("'layout' must be an object when present")
    net = BeliefNetwork(raw["name"], tuple(variables), tuple(cpts), layout=layout)
    return validated(net)


def network_to_obj(net: BeliefNetwork) -> dict:
    doc = {
        "name": net.name,
        "nodes": [
            {
                "id": v.id,
                "label": v.label,
                "values": list(v.values),
                "parents": list(c.parents),
                "cpt": list(c.table),
            }
            for v, c in zip(net.variables, net.cpts)
        ],
    }
    if net.layout is not None:
        doc["layout"] = net.layout
    return doc


def serialize_network(net: BeliefNetwork) -> str:
    """Deterministic canonical text: declaration order, fixed keys, round-trip
    exact floats (shortest repr, up to 17 significant digits)."""
    return json.dumps(network_to_obj(net), indent=2) + "\n"


def to_dot(net: BeliefNetwork) -> str:
    """Graphviz source for the arc structure."""
    lines = [f'digraph "{net.name}" {{']
    for v in net.variables:
        lines.append(f'  "{v.id}" [label="{v.label}"];')
    for c in net.cpts:
        for p in c.parents:
            lines.append(f'  "{p}" -> "{c.child}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Merging
# ---------------------------------------------------------------------------

def merge_networks(base: BeliefNetwork, addition: BeliefNetwork) -> BeliefNetwork:
    """Union of two networks. Colliding ids from `addition` get a numeric
    suffix (_2, _3, ...) and their CPT parent references are rewritten."""
    taken = {v.id for v in base.variables} | {v.id for v in addition.variables}
    base_ids = {v.id for v in base.variables}
    rename: dict[str, str] = {}
    for v in addition.variables:
        if v.id in base_ids:
            n = 2
            while f"{v.id}_{n}" in taken:
                n += 1
            rename[v.id] = f"{v.id}_{n}"
            taken.add(rename[v.id])

    variables = list(base.variables)
    cpts = list(base.cpts)
    for v, c in zip(addition.variables, addition.cpts):
        new_id = rename.get(v.id, v.id)
        variables.append(Variable(new_id, v.label, v.values))
        cpts.append(Cpt(new_id, tuple(rename.get(p, p) for p in c.parents), c.table))

    name = base.name if base.variables else addition.name
    return validated(BeliefNetwork(name, tuple(variables), tuple(cpts)))
