"""Command-line front door: solve / construct / extremal / verify / gen.

Batch-oriented and script-friendly: "-" reads stdin, graph6 inputs may carry
many records (one per line, results emitted one per line in input order), and
exit codes are the machine contract:

  solve:     0 found, 1 not exists, 2 budget exceeded, 64 malformed input
  construct: 0 cycle, 3 precondition violated, 4 proof gap (--no-fallback),
             64 malformed input
  verify:    0 clean, 1 counterexamples or proof gaps
"""

from __future__ import annotations

import argparse
import json
import sys
from multiprocessing import get_context

from .errors import (
    GraphError,
    MalformedEdgeListError,
    MalformedGraph6Error,
    PreconditionViolatedError,
    ProofGapError,
)
from .extremal import extremal_graph, validate_extremal
from .formats import parse_edge_list, parse_graph6, write_edge_list, write_graph6
from .graph import Graph, is_ic_cycle, VertexCycle
from .harness import (
    boundary_scan,
    default_workers,
    enumerate_graphs,
    verify_theorem,
)
from .oracle import Outcome, find_ic_cycle_exact
from .construct import construct_ic_cycle

EX_MALFORMED = 64


def _read_graphs(path: str, fmt: str) -> list[Graph]:
    data = sys.stdin.read() if path == "-" else open(path, encoding="ascii").read()
    if fmt == "edgelist":
        return [parse_edge_list(data)]
    graphs = []
    for line in data.splitlines():
        line = line.strip()
        if line:
            graphs.append(parse_graph6(line))
    if not graphs:
        raise MalformedGraph6Error("no graph6 records in input")
    return graphs


def _pmap(func, payloads: list, workers: int) -> list:
    if workers <= 1 or len(payloads) <= 1:
        return [func(p) for p in payloads]
    ctx = get_context("fork")
    with ctx.Pool(min(workers, len(payloads))) as pool:
        return list(pool.imap(func, payloads))  # order-preserving


def _solve_one(args) -> tuple[int, str, str]:
    rows, n, budget, output = args
    g = Graph(n, tuple(rows))
    res = find_ic_cycle_exact(g, budget=budget)
    if res.outcome == Outcome.FOUND:
        code = 0
        human = "FOUND " + " ".join(map(str, res.cycle.order))
    elif res.outcome == Outcome.NOT_EXISTS:
        code = 1
        human = "NOT_EXISTS"
    else:
        code = 2
        human = "BUDGET_EXCEEDED"
    obj = {
        "outcome": res.outcome.value,
        "cycle": list(res.cycle.order) if res.cycle else None,
        "nodes": res.stats.nodes,
    }
    return code, human, json.dumps(obj, sort_keys=True)


def cmd_solve(ns) -> int:
    graphs = _read_graphs(ns.input, ns.format)
    payloads = [(list(g.adj), g.n, ns.budget, ns.output) for g in graphs]
    results = _pmap(_solve_one, payloads, ns.workers)
    code = 0
    for c, human, js in results:
        print(js if ns.output == "json" else human)
        code = max(code, c)
    return code


def _construct_one(args) -> tuple[int, str, str]:
    rows, n, fallback = args
    g = Graph(n, tuple(rows))
    try:
        cycle, trace = construct_ic_cycle(g, fallback_to_oracle=fallback)
    except PreconditionViolatedError as e:
        return 3, f"PRECONDITION_VIOLATED {e}", json.dumps(
            {"error": "precondition_violated", "message": str(e)})
    except ProofGapError as e:
        return 4, f"PROOF_GAP {e}", json.dumps(
            {"error": "proof_gap", "message": str(e)})
    assert is_ic_cycle(g, cycle)  # re-checked before printing
    human = "CYCLE " + " ".join(map(str, cycle.order))
    obj = {"cycle": list(cycle.order), "trace": trace.to_json()}
    return 0, human, json.dumps(obj, sort_keys=True)


def cmd_construct(ns) -> int:
    graphs = _read_graphs(ns.input, ns.format)
    payloads = [(list(g.adj), g.n, not ns.no_fallback) for g in graphs]
    results = _pmap(_construct_one, payloads, ns.workers)
    code = 0
    for c, human, js in results:
        print(js if ns.output == "json" else human)
        code = max(code, c)
    return code


def cmd_extremal(ns) -> int:
    g = extremal_graph(ns.n, ns.nu)
    report = validate_extremal(g, ns.n, ns.nu, budget=ns.budget)
    if ns.output == "json":
        print(json.dumps({"graph6": write_graph6(g), "report": report.to_json()},
                         sort_keys=True))
    else:
        if ns.format == "edgelist":
            print(write_edge_list(g))
        else:
            print(write_graph6(g))
        status = "ok" if report.ok else "FAILED " + "; ".join(report.failures)
        print(f"n={ns.n} nu={ns.nu} min_degree={g.min_degree()} "
              f"two_connected={report.two_connected} "
              f"certificate={'yes' if report.certificate_ok else 'no'} "
              f"oracle={'not_exists' if report.oracle_not_exists else ('skipped' if not report.oracle_ran else 'FOUND')} "
              f"=> {status}")
    return 0 if report.ok else 1


def cmd_verify(ns) -> int:
    report = verify_theorem(
        ns.n_min, ns.n_max,
        run_constructive=ns.constructive,
        workers=ns.workers,
        budget=ns.budget,
        seed=ns.seed,
        samples=ns.samples,
    )
    if ns.boundary:
        extra = boundary_scan(max(8, ns.n_min), ns.n_max, workers=ns.workers)
    else:
        extra = None
    if ns.output == "json":
        obj = report.to_json()
        if extra is not None:
            obj["boundary"] = extra
        print(json.dumps(obj, sort_keys=True))
    else:
        for p in report.per_n:
            line = (f"n={p.n} enumerated={p.enumerated} qualifying={p.qualifying} "
                    f"found={p.found}")
            if ns.constructive:
                line += f" constructive_ok={p.constructive_ok} proofgaps={p.proofgaps}"
            if p.counterexamples:
                line += f" COUNTEREXAMPLES={p.counterexamples}"
            print(line)
        if extra is not None:
            print(f"boundary ok={extra['ok']} instances={len(extra['instances'])}")
    bad = any(p.counterexamples or p.proofgaps or p.certificate_conflicts
              for p in report.per_n)
    if extra is not None and not extra["ok"]:
        bad = True
    return 1 if bad else 0


def cmd_gen(ns) -> int:
    dedup = "canonical" if ns.canonical else "labeled"
    for g in enumerate_graphs(
            ns.n, dedup,
            connected=ns.connected,
            two_connected=ns.two_connected,
            min_degree=ns.min_degree,
            degree_condition=ns.min_degree_condition):
        print(write_graph6(g))
    return 0


def _add_io_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("input", nargs="?", default="-",
                   help="input file, or - for stdin (default)")
    p.add_argument("--format", choices=("graph6", "edgelist"), default="graph6")
    p.add_argument("--output", choices=("human", "json"), default="human")
    p.add_argument("--workers", type=int, default=default_workers())


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="ic-cycles",
        description="Cycles with independent complement: search, construct, verify.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="exact search for an IC-cycle")
    _add_io_flags(p)
    p.add_argument("--budget", type=int, default=10_000_000,
                   help="backtracking node limit")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("construct", help="move-based construction with trace")
    _add_io_flags(p)
    p.add_argument("--no-fallback", action="store_true",
                   help="raise instead of falling back to the exact search")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("extremal", help="emit and validate a tight instance")
    p.add_argument("n", type=int)
    p.add_argument("nu", type=int)
    p.add_argument("--format", choices=("graph6", "edgelist"), default="graph6")
    p.add_argument("--output", choices=("human", "json"), default="human")
    p.add_argument("--budget", type=int, default=None)
    p.set_defaults(func=cmd_extremal)

    p = sub.add_parser("verify", help="sweep a size range against the theorem")
    p.add_argument("n_min", type=int)
    p.add_argument("n_max", type=int)
    p.add_argument("--constructive", action="store_true",
                   help="also run the move pipeline with fallback disabled")
    p.add_argument("--boundary", action="store_true",
                   help="also scan the tight family in range")
    p.add_argument("--output", choices=("human", "json"), default="human")
    p.add_argument("--workers", type=int, default=default_workers())
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--samples", type=int, default=1000)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gen", help="stream graphs as graph6")
    p.add_argument("n", type=int)
    p.add_argument("--canonical", action="store_true",
                   help="one representative per isomorphism class")
    p.add_argument("--connected", action="store_true")
    p.add_argument("--two-connected", action="store_true")
    p.add_argument("--min-degree", type=int, default=0)
    p.add_argument("--min-degree-condition", action="store_true",
                   help="keep only graphs with 3*min_degree >= n+2")
    p.set_defaults(func=cmd_gen)

    return ap


def main(argv: list[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        return ns.func(ns)
    except (MalformedGraph6Error, MalformedEdgeListError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EX_MALFORMED
    except PreconditionViolatedError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except GraphError as e:
        print(f"error: {e}", file=sys.stderr)
        return EX_MALFORMED
    except BrokenPipeError:
        return 0


if __name__ == "__main__":
    sys.exit(main())
