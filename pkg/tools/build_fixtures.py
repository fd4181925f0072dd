"""Regenerate the bundled fixture documents under src/beliefnet/data/.

The chest-clinic network uses the standard published tables. The monitoring
network reproduces the well-known 37-node / 46-arc patient-monitoring
structure and cardinalities; its probability entries are seeded-random
(normalized per row) because no canonical table values ship with it here —
every test that uses it is structural or oracle-relative.
"""
from __future__ import annotations

import pathlib

import numpy as np

from beliefnet.network import BeliefNetwork, Cpt, Variable, serialize_network, validated

OUT = pathlib.Path(__file__).resolve().parent.parent / "src" / "beliefnet" / "data"

TF = ("True", "False")


def asia() -> BeliefNetwork:
    node_defs = [
        # id, label, values, parents, P(True | parent combo) rows
        ("VisitAsia", "Visit to Asia", TF, (), [0.01]),
        ("Tuberculosis", "Tuberculosis", TF, ("VisitAsia",), [0.05, 0.01]),
        ("Smoking", "Smoking", TF, (), [0.5]),
        ("LungCancer", "Lung cancer", TF, ("Smoking",), [0.1, 0.01]),
        ("Bronchitis", "Bronchitis", TF, ("Smoking",), [0.6, 0.3]),
        ("Either", "Tuberculosis or lung cancer", TF,
         ("Tuberculosis", "LungCancer"), [1.0, 1.0, 1.0, 0.0]),
        ("XRay", "Positive chest X-ray", TF, ("Either",), [0.98, 0.05]),
        ("Dyspnea", "Dyspnea", TF, ("Bronchitis", "Either"), [0.9, 0.8, 0.7, 0.1]),
    ]
    variables, cpts = [], []
    for vid, label, values, parents, p_true in node_defs:
        variables.append(Variable(vid, label, values))
        table = []
        for p in p_true:
            table += [p, 1.0 - p]
        cpts.append(Cpt(vid, parents, tuple(table)))
    return validated(BeliefNetwork("asia", tuple(variables), tuple(cpts)))


# (id, cardinality, parents); 37 nodes, 46 arcs, treewidth-friendly
MONITOR_NODES = [
    ("Hypovolemia", 2, ()),
    ("LVFailure", 2, ()),
    ("History", 2, ("LVFailure",)),
    ("LVEDVolume", 3, ("Hypovolemia", "LVFailure")),
    ("CVP", 3, ("LVEDVolume",)),
    ("PCWP", 3, ("LVEDVolume",)),
    ("StrokeVolume", 3, ("Hypovolemia", "LVFailure")),
    ("Anaphylaxis", 2, ()),
    ("TPR", 3, ("Anaphylaxis",)),
    ("ErrLowOutput", 2, ()),
    ("ErrCauter", 2, ()),
    ("InsuffAnesth", 2, ()),
    ("PulmEmbolus", 2, ()),
    ("PAP", 3, ("PulmEmbolus",)),
    ("Intubation", 3, ()),
    ("Shunt", 2, ("Intubation", "PulmEmbolus")),
    ("KinkedTube", 2, ()),
    ("Disconnect", 2, ()),
    ("MinVolSet", 3, ()),
    ("VentMach", 4, ("MinVolSet",)),
    ("VentTube", 4, ("Disconnect", "VentMach")),
    ("VentLung", 4, ("Intubation", "KinkedTube", "VentTube")),
    ("Press", 4, ("Intubation", "KinkedTube", "VentTube")),
    ("VentAlv", 4, ("Intubation", "VentLung")),
    ("MinVol", 4, ("Intubation", "VentLung")),
    ("ExpCO2", 4, ("ArtCO2", "VentLung")),
    ("ArtCO2", 3, ("VentAlv",)),
    ("FiO2", 2, ()),
    ("PVSat", 3, ("FiO2", "VentAlv")),
    ("SaO2", 3, ("PVSat", "Shunt")),
    ("Catechol", 2, ("ArtCO2", "InsuffAnesth", "SaO2", "TPR")),
    ("HR", 3, ("Catechol",)),
    ("CO", 3, ("HR", "StrokeVolume")),
    ("BP", 3, ("CO", "TPR")),
    ("HRBP", 3, ("ErrLowOutput", "HR")),
    ("HREKG", 3, ("ErrCauter", "HR")),
    ("HRSat", 3, ("ErrCauter", "HR")),
]

VALUE_NAMES = {
    2: ("True", "False"),
    3: ("Low", "Normal", "High"),
    4: ("Zero", "Low", "Normal", "High"),
}
SPECIAL_VALUES = {
    "Intubation": ("Normal", "Esophageal", "OneSided"),
    "Shunt": ("Normal", "High"),
    "MinVolSet": ("Low", "Normal", "High"),
    "FiO2": ("Low", "Normal"),
    "Catechol": ("Normal", "High"),
}


def monitor(seed: int = 20260810) -> BeliefNetwork:
    rng = np.random.default_rng(seed)
    cards = {vid: k for vid, k, _ in MONITOR_NODES}
    variables, cpts = [], []
    for vid, k, parents in MONITOR_NODES:
        values = SPECIAL_VALUES.get(vid, VALUE_NAMES[k])
        variables.append(Variable(vid, vid, values))
        rows = 1
        for p in parents:
            rows *= cards[p]
        table = rng.uniform(0.05, 1.0, size=(rows, k))
        table /= table.sum(axis=1, keepdims=True)
        table = np.round(table, 6)
        table[:, -1] += 1.0 - table.sum(axis=1)  # keep rows summing to 1 after rounding
        cpts.append(Cpt(vid, parents, tuple(float(x) for x in table.ravel())))
    return validated(BeliefNetwork("alarm", tuple(variables), tuple(cpts)))


def main():
    a = asia()
    m = monitor()
    arcs = sum(len(c.parents) for c in m.cpts)
    print(f"chest-clinic: {len(a.variables)} nodes, {sum(len(c.parents) for c in a.cpts)} arcs")
    print(f"patient-monitor: {len(m.variables)} nodes, {arcs} arcs")
    assert len(m.variables) == 37 and arcs == 46
    (OUT / "asia.json").write_text(serialize_network(a), "utf-8")
    (OUT / "alarm.json").write_text(serialize_network(m), "utf-8")
    print(f"wrote {OUT / 'asia.json'} and {OUT / 'alarm.json'}")


if __name__ == "__main__":
    main()
