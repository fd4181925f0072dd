"""Command-line interface: compile, infer, verify, bench, gen, export-dot, serve.

Exit codes: 0 success, 1 usage, 2 parse/validation, 3 impossible evidence,
4 enumeration cap exceeded.
"""
from __future__ import annotations

import argparse
import json
import statistics
import sys
import time

import numpy as np

from . import kernels
from .compiler import compile_network, forest_stats, forest_to_dot
from .engine import REMOVAL, ZEROING, InferenceSession, query
from .errors import (
    EvidenceError,
    ImpossibleEvidenceError,
    NetworkFormatError,
    NetworkValidationError,
    StateSpaceCapError,
)
from .generate import random_evidence, random_network
from .network import EvidenceSet, parse_network, serialize_network, to_dot
from .oracle import all_posteriors, joint

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVALID = 2
EXIT_IMPOSSIBLE = 3
EXIT_CAP = 4


class CliError(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise CliError(EXIT_USAGE, f"usage error: {message}")


def _load(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return parse_network(fh.read())
    except OSError as e:
        raise CliError(EXIT_INVALID, f"cannot read {path}: {e.strerror}") from None


def _evidence(net, pairs: list[str]) -> EvidenceSet:
    bindings = {}
    for item in pairs or []:
        if "=" not in item:
            raise CliError(EXIT_USAGE, f"--set expects VAR=VALUE, got {item!r}")
        var, _, label = item.partition("=")
        bindings[var] = label
    return EvidenceSet.from_labels(net, bindings)


def _print_report(report, fmt: str):
    if fmt == "json":
        print(json.dumps(report.to_obj()))
        return
    print(f"P(evidence) = {report.p_evidence:.10g}")
    for var, dist in report.posteriors.items():
        bars = "  ".join(f"{p:.6f}" for p in dist)
        print(f"{var:>24}  {bars}")
    print(f"checks={report.counters['checks']} cells_sent={report.counters['cells_sent']} "
          f"elapsed_us={report.elapsed_us}")


def cmd_compile(args):
    net = _load(args.network)
    forest = compile_network(net)
    stats = forest_stats(forest)
    if args.format == "json":
        print(json.dumps(stats.to_obj()))
    else:
        obj = stats.to_obj()
        obj["total_cells"] = stats.total_cells
        for k, v in obj.items():
            print(f"{k:>18} {v}")
    return EXIT_OK


def cmd_infer(args):
    net = _load(args.network)
    forest = compile_network(net)
    ev = _evidence(net, args.set)
    report = query(forest, ev, mode=args.mode)
    _print_report(report, args.format)
    return EXIT_OK


def cmd_verify(args):
    net = _load(args.network)
    forest = compile_network(net)
    jt = joint(net)
    if args.set:
        trials = [_evidence(net, args.set).assignments]
    else:
        trials = [random_evidence(net, size=s % 5, seed=args.seed + s)
                  for s in range(args.trials)]
    worst = 0.0
    for ev in trials:
        report = query(forest, ev)
        posts, p_e = all_posteriors(jt, ev)
        worst = max(worst, abs(report.p_evidence - p_e))
        for v in net.variables:
            dev = np.abs(np.asarray(report.posteriors[v.id]) - posts[v.id]).max()
            worst = max(worst, float(dev))
    print(f"max absolute deviation over {len(trials)} evidence set(s): {worst:.3e}")
    return EXIT_OK if worst <= 1e-9 else EXIT_INVALID


def _bench_once(forest, ev, mode):
    t0 = time.perf_counter()
    session = InferenceSession(forest, mode=mode)
    session.absorb(ev)
    session.propagate()
    elapsed = time.perf_counter() - t0
    c = session.counters
    return {
        "mode": mode,
        "evidence_vars": len(ev),
        "checks": c.checks,
        "cells_sent": c.cells_sent,
        "working_cells": session.working_cells(),
        "ms": elapsed * 1e3,
    }


def cmd_bench(args):
    net = _load(args.network)
    forest = compile_network(net)
    sizes = list(range(0, args.max_evidence + 1)) if args.evidence_sweep else [args.max_evidence]
    backends = [kernels.active_backend()]
    if args.compare_backends:
        backends = kernels.available_backends()
    rows = []
    for backend in backends:
        kernels.set_backend(backend)
        query(forest, {})  # warm the kernel path before timing
        for size in sizes:
            for mode in (REMOVAL, ZEROING):
                samples = []
                for r in range(args.repeat):
                    ev = random_evidence(net, size, seed=args.seed + 31 * r)
                    samples.append(_bench_once(forest, ev, mode))
                row = dict(samples[0])
                row["backend"] = backend
                row["ms"] = statistics.median(s["ms"] for s in samples)
                rows.append(row)
    if args.format == "json":
        print(json.dumps(rows))
    else:
        head = f"{'backend':>8} {'mode':>8} {'|e|':>4} {'checks':>9} {'cells_sent':>11} {'cells':>8} {'ms':>9}"
        print(head)
        for r in rows:
            print(f"{r['backend']:>8} {r['mode']:>8} {r['evidence_vars']:>4} "
                  f"{r['checks']:>9} {r['cells_sent']:>11} {r['working_cells']:>8} {r['ms']:>9.3f}")
    return EXIT_OK


def cmd_gen(args):
    net = random_network(args.nodes, args.arcs, max_card=args.max_card, seed=args.seed)
    sys.stdout.write(serialize_network(net))
    return EXIT_OK


def cmd_export_dot(args):
    net = _load(args.network)
    if args.forest:
        sys.stdout.write(forest_to_dot(compile_network(net)))
    else:
        sys.stdout.write(to_dot(net))
    return EXIT_OK


def cmd_serve(args):
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(snapshot_path=args.snapshot), host=args.host,
                port=args.port, log_level="warning")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="beliefnet", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compile", help="compile a network and print forest stats")
    c.add_argument("network")
    c.add_argument("--format", choices=["json", "table"], default="json")
    c.set_defaults(fn=cmd_compile)

    c = sub.add_parser("infer", help="absorb evidence and print the posterior report")
    c.add_argument("network")
    c.add_argument("--set", action="append", metavar="VAR=VALUE", default=[])
    c.add_argument("--mode", choices=[REMOVAL, ZEROING], default=REMOVAL)
    c.add_argument("--format", choices=["json", "table"], default="json")
    c.set_defaults(fn=cmd_infer)

    c = sub.add_parser("verify", help="compare the engine against brute-force enumeration")
    c.add_argument("network")
    c.add_argument("--set", action="append", metavar="VAR=VALUE", default=[])
    c.add_argument("--trials", type=int, default=20)
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(fn=cmd_verify)

    c = sub.add_parser("bench", help="timing/counter table across evidence sizes and modes")
    c.add_argument("network")
    c.add_argument("--evidence-sweep", action="store_true")
    c.add_argument("--max-evidence", type=int, default=4)
    c.add_argument("--repeat", type=int, default=5)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--compare-backends", action="store_true",
                   help="run both the numba and numpy kernel backends")
    c.add_argument("--format", choices=["json", "table"], default="table")
    c.set_defaults(fn=cmd_bench)

    c = sub.add_parser("gen", help="emit a random valid network document")
    c.add_argument("--nodes", type=int, required=True)
    c.add_argument("--arcs", type=int, required=True)
    c.add_argument("--max-card", type=int, default=3)
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(fn=cmd_gen)

    c = sub.add_parser("export-dot", help="emit Graphviz source for the network (or forest)")
    c.add_argument("network")
    c.add_argument("--forest", action="store_true")
    c.set_defaults(fn=cmd_export_dot)

    c = sub.add_parser("serve", help="run the HTTP service")
    c.add_argument("--host", default="127.0.0.1")
    c.add_argument("--port", type=int, default=8231)
    c.add_argument("--snapshot", metavar="PATH", default=None,
                   help="persist stored networks to PATH on shutdown and reload on start")
    c.set_defaults(fn=cmd_serve)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.fn(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    except (NetworkFormatError, NetworkValidationError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except (ImpossibleEvidenceError,) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IMPOSSIBLE
    except EvidenceError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except StateSpaceCapError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CAP


if __name__ == "__main__":
    sys.exit(main())
