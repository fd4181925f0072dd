import json
import subprocess
import sys

import pytest

from beliefnet.cli import main
from beliefnet.data import read_text
from beliefnet.network import parse_network, serialize_network


@pytest.fixture
def asia_path(tmp_path):
    p = tmp_path / "asia.json"
    p.write_text(read_text("asia"))
    return str(p)


@pytest.fixture
def ab_path(tmp_path, ab_net):
    p = tmp_path / "ab.json"
    p.write_text(serialize_network(ab_net))
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_compile_prints_stats_json(capsys, asia_path):
    code, out, _ = run(capsys, "compile", asia_path)
    assert code == 0
    stats = json.loads(out)
    assert set(stats) == {"cliques", "trees", "max_clique_vars",
                          "clique_cells", "separator_cells"}


def test_infer_asia_dyspnea(capsys, asia_path):
    code, out, _ = run(capsys, "infer", asia_path, "--set", "Dyspnea=True")
    assert code == 0
    report = json.loads(out)
    assert report["evidence"] == {"Dyspnea": "True"}
    assert len(report["posteriors"]) == 8
    assert report["posteriors"]["Dyspnea"] == [1.0, 0.0]
    assert 0 < report["p_evidence"] < 1


def test_infer_table_format(capsys, asia_path):
    code, out, _ = run(capsys, "infer", asia_path, "--set", "Smoking=True",
                       "--format", "table")
    assert code == 0
    assert "P(evidence)" in out and "Dyspnea" in out


def test_infer_rejects_unknown_value_label(capsys, asia_path):
    code, _, err = run(capsys, "infer", asia_path, "--set", "Dyspnea=Maybe")
    assert code == 2
    assert "Maybe" in err


def test_infer_impossible_evidence_exit_code(capsys, asia_path):
    code, _, err = run(capsys, "infer", asia_path, "--set", "Tuberculosis=False",
                       "--set", "LungCancer=False", "--set", "Either=True")
    assert code == 3
    assert "probability 0" in err


def test_verify_ab_evidence(capsys, ab_path):
    code, out, _ = run(capsys, "verify", ab_path, "--set", "B=b0")
    assert code == 0
    assert "max absolute deviation" in out
    dev = float(out.rsplit(":", 1)[1])
    assert dev <= 1e-9


def test_verify_random_trials(capsys, asia_path):
    code, out, _ = run(capsys, "verify", asia_path, "--trials", "8", "--seed", "3")
    assert code == 0


def test_gen_emits_valid_deterministic_document(capsys):
    code, out1, _ = run(capsys, "gen", "--nodes", "6", "--arcs", "7", "--max-card", "4",
                        "--seed", "9")
    assert code == 0
    net = parse_network(out1)
    assert len(net.variables) == 6 and len(net.arcs) == 7
    code, out2, _ = run(capsys, "gen", "--nodes", "6", "--arcs", "7", "--max-card", "4",
                        "--seed", "9")
    assert out1 == out2


def test_export_dot(capsys, asia_path):
    code, out, _ = run(capsys, "export-dot", asia_path)
    assert code == 0 and out.startswith("digraph")
    code, out, _ = run(capsys, "export-dot", asia_path, "--forest")
    assert code == 0 and "label=" in out


def test_bench_evidence_sweep(capsys, asia_path):
    code, out, _ = run(capsys, "bench", asia_path, "--evidence-sweep",
                       "--max-evidence", "2", "--repeat", "2", "--format", "json")
    assert code == 0
    rows = json.loads(out)
    modes = {r["mode"] for r in rows}
    assert modes == {"removal", "zeroing"}
    sizes = {r["evidence_vars"] for r in rows}
    assert sizes == {0, 1, 2}


def test_bench_compare_backends(capsys, asia_path):
    code, out, _ = run(capsys, "bench", asia_path, "--max-evidence", "1",
                       "--repeat", "1", "--compare-backends", "--format", "json")
    assert code == 0
    backends = {r["backend"] for r in json.loads(out)}
    assert "numpy" in backends


def test_parse_error_exit_code(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    code, _, err = run(capsys, "compile", str(bad))
    assert code == 2 and "syntax error" in err


def test_missing_file_exit_code(capsys):
    code, _, err = run(capsys, "compile", "/nonexistent/net.json")
    assert code == 2


def test_usage_error_exit_code(capsys):
    code, _, err = run(capsys, "gen", "--nodes", "not-a-number")
    assert code == 1


def test_cap_exceeded_exit_code(capsys, tmp_path):
    from beliefnet.generate import random_network
    big = random_network(nodes=30, arcs=20, max_card=4, seed=0)
    p = tmp_path / "big.json"
    p.write_text(serialize_network(big))
    code, _, err = run(capsys, "verify", str(p), "--trials", "1")
    assert code == 4


def test_console_script_entry_point(asia_path):
    proc = subprocess.run(
        [sys.executable, "-m", "beliefnet.cli", "infer", asia_path,
         "--set", "Dyspnea=True"],
        capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["evidence"] == {"Dyspnea": "True"}
