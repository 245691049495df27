"""Exhaustive and randomized verification over small graphs.

Canonical (isomorphism-free) enumeration works by vertex augmentation: a
labeled graph is kept iff its column-major upper-triangle bitstring is the
lexicographic minimum over all relabelings ("minimal adjacency matrix").
Removing the last vertex of a minimal graph leaves a minimal graph, so every
canonical n-vertex graph arises from exactly one canonical (n-1)-vertex parent
plus one neighborhood for the new vertex.  That keeps the candidate count near
the class count instead of 2^(n(n-1)/2).

When a sweep targets a minimum degree d at size n, level-k parents may be
restricted to min degree >= d - (n - k): induced prefixes of a qualifying
graph can lose at most one neighbor per removed vertex.
"""

from __future__ import annotations

import json
import os
import random
import time
from dataclasses import dataclass, field
from multiprocessing import get_context
from typing import Iterable, Iterator, Sequence

from .errors import TooLargeError
from .formats import write_graph6
from .graph import Graph, build_graph, is_connected, is_two_connected, satisfies_degree_condition
from .oracle import Outcome, find_ic_cycle_exact, find_two_cut_certificate

EXHAUSTIVE_LIMIT = 10
LABELED_LIMIT = 7


def default_workers() -> int:
    env = os.environ.get("IC_CYCLE_WORKERS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def degree_threshold(n: int) -> int:
    """Smallest d with 3*d >= n + 2."""
    return -(-(n + 2) // 3)


# ---------------------------------------------------------------------------
# canonical enumeration


def _identity_columns(rows: Sequence[int], n: int) -> list[int]:
    # cols[j] holds the adjacency of vertex j to 0..j-1, row 0 most significant.
    cols = [0] * n
    for j in range(1, n):
        c = 0
        for i in range(j):
            c = c << 1 | (rows[j] >> i & 1)
        cols[j] = c
    return cols


def _is_canonical(rows: Sequence[int], n: int) -> bool:
    """True iff no relabeling yields a lex-smaller upper-triangle bitstring."""
    id_cols = _identity_columns(rows, n)
    placed = [0] * n

    def rec(pos: int, used: int) -> bool:
        # Returns True if some placement with this prefix beats the identity.
        if pos == n:
            return False
        target = id_cols[pos]
        # Order candidates by their column value so smaller images are tried first.
        cands = []
        for u in range(n):
            if used >> u & 1:
                continue
            col = 0
            ru = rows[u]
            for i in range(pos):
                col = col << 1 | (ru >> placed[i] & 1)
            if col > target:
                continue
            cands.append((col, u))
        cands.sort()
        for col, u in cands:
            if col < target:
                return True  # any completion is lex-smaller
            placed[pos] = u
            if rec(pos + 1, used | 1 << u):
                return True
        return False

    return not rec(0, 0)


def _children_rows(parent: tuple[int, ...], k: int, min_deg: int) -> Iterator[tuple[int, ...]]:
    """All one-vertex extensions of a (k-1)-vertex parent meeting min degree k-level bound."""
    kp = k - 1
    degs = [r.bit_count() for r in parent]
    must = 0
    for v, d in enumerate(degs):
        if d < min_deg - 1:
            return  # unfixable: the new vertex adds at most one to each degree
        if d == min_deg - 1:
            must |= 1 << v
    free = ((1 << kp) - 1) & ~must
    # Enumerate subsets of free in ascending order, offset by the forced bits.
    sub = 0
    while True:
        s = must | sub
        if s.bit_count() >= min_deg:
            rows = list(parent)
            for v in range(kp):
                if s >> v & 1:
                    rows[v] |= 1 << kp
            rows.append(s)
            yield tuple(rows)
        if sub == free:
            break
        sub = (sub - free) & free  # next subset of free


def _canonical_level(parents: Iterable[tuple[int, ...]], k: int,
                     min_deg: int) -> list[tuple[int, ...]]:
    out = []
    for parent in parents:
        for rows in _children_rows(parent, k, min_deg):
            if _is_canonical(rows, k):
                out.append(rows)
    return out


def canonical_rows(n: int, min_degree_target: int = 0) -> list[tuple[int, ...]]:
    """Adjacency rows of all canonical graphs on n vertices, generation order.

    With min_degree_target > 0 the output is exactly the canonical graphs with
    min degree >= that target (intermediate levels are chain-pruned).
    """
    if n < 1:
        return []
    level: list[tuple[int, ...]] = [(0,)]
    for k in range(2, n + 1):
        bound = max(0, min_degree_target - (n - k))
        level = _canonical_level(level, k, bound)
    if min_degree_target > 0:
        level = [rows for rows in level
                 if min(r.bit_count() for r in rows) >= min_degree_target]
    return level


def _labeled_masks(n: int, min_degree: int) -> Iterator[int]:
    """All labeled graphs as edge bitmasks (bit k = k-th column-major pair),
    ascending, with min-degree prefix pruning applied column by column."""
    m = n * (n - 1) // 2
    if min_degree <= 0:
        yield from range(1 << m)
        return

    # Columns are decided from vertex n-1 down to vertex 1 so that ascending
    # DFS order coincides with the plain counter order.
    def rec(j: int, mask: int, degs: tuple[int, ...]) -> Iterator[int]:
        # Vertices above j are fully decided; vertex v <= j can still gain
        # exactly j more edges (its own column plus pairs (v, w), w <= j).
        for v in range(j + 1, n):
            if degs[v] < min_degree:
                return
        for v in range(j + 1):
            if degs[v] + j < min_degree:
                return
        if j == 0:
            yield mask
            return
        base = j * (j - 1) // 2
        for col in range(1 << j):
            nd = list(degs)
            nd[j] += col.bit_count()
            for i in range(j):
                if col >> i & 1:
                    nd[i] += 1
            yield from rec(j - 1, mask | col << base, tuple(nd))

    yield from rec(n - 1, 0, tuple([0] * n))


def _graph_from_mask(n: int, mask: int) -> Graph:
    rows = [0] * n
    bit = 0
    for j in range(1, n):
        for i in range(j):
            if mask >> bit & 1:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
            bit += 1
    return Graph(n, tuple(rows))


def enumerate_graphs(
    n: int,
    dedup: str = "canonical",
    *,
    connected: bool = False,
    two_connected: bool = False,
    min_degree: int = 0,
    degree_condition: bool = False,
) -> Iterator[Graph]:
    """Stream graphs on n vertices in deterministic order.

    dedup="canonical" emits one representative per isomorphism class (the
    minimal-adjacency-matrix labeling); dedup="labeled" emits all 2^(n(n-1)/2)
    labeled graphs.  Filters apply in both modes; the min-degree bound is
    pushed into the generation itself.
    """
    if dedup not in ("canonical", "labeled"):
        raise ValueError(f"unknown dedup mode: {dedup!r}")
    if n < 1:
        return
    push_min = min_degree
    if degree_condition:
        push_min = max(push_min, degree_threshold(n))
    if dedup == "labeled":
        if n > LABELED_LIMIT:
            raise TooLargeError(f"labeled enumeration limited to n <= {LABELED_LIMIT}")
        stream: Iterator[Graph] = (
            _graph_from_mask(n, mask) for mask in _labeled_masks(n, push_min))
    else:
        if n > EXHAUSTIVE_LIMIT:
            raise TooLargeError(f"exhaustive enumeration limited to n <= {EXHAUSTIVE_LIMIT}")
        stream = (Graph(n, rows) for rows in canonical_rows(n, push_min))
    for g in stream:
        if push_min and g.min_degree() < push_min:
            continue
        if connected and not is_connected(g):
            continue
        if two_connected and not is_two_connected(g):
            continue
        if degree_condition and not satisfies_degree_condition(g):
            continue
        yield g


# ---------------------------------------------------------------------------
# theorem verification


@dataclass
class PerNReport:
    n: int
    enumerated: int = 0
    qualifying: int = 0
    found: int = 0
    constructive_ok: int = 0
    proofgaps: int = 0
    counterexamples: list[str] = field(default_factory=list)
    proofgap_graphs: list[str] = field(default_factory=list)
    trace_violations: int = 0
    budget_exceeded: int = 0
    certificates_fired: int = 0
    certificate_conflicts: int = 0

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "enumerated": self.enumerated,
            "qualifying": self.qualifying,
            "found": self.found,
            "constructive_ok": self.constructive_ok,
            "proofgaps": self.proofgaps,
            "counterexamples": list(self.counterexamples),
            "proofgap_graphs": list(self.proofgap_graphs),
            "trace_violations": self.trace_violations,
            "budget_exceeded": self.budget_exceeded,
            "certificates_fired": self.certificates_fired,
            "certificate_conflicts": self.certificate_conflicts,
        }


@dataclass
class VerificationReport:
    params: dict
    per_n: list[PerNReport]
    seed: int | None
    runtime_ms: int

    @property
    def ok(self) -> bool:
        return all(
            not p.counterexamples and not p.certificate_conflicts for p in self.per_n)

    def to_json(self) -> dict:
        return {
            "params": self.params,
            "per_n": [p.to_json() for p in self.per_n],
            "seed": self.seed,
            "runtime_ms": self.runtime_ms,
        }

    def to_json_text(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _verify_rows_chunk(args) -> list:
    """Worker: finish enumeration for a chunk of parents and verify children."""
    (n, dmin, parents, run_constructive, budget, check_certificates) = args
    from .construct import construct_ic_cycle, validate_trace
    from .errors import ProofGapError

    rep = PerNReport(n=n)
    if n == 1:
        children: Iterable[tuple[int, ...]] = [(0,)] if parents is None else []
    else:
        children = (rows for parent in parents
                    for rows in _children_rows(parent, n, dmin)
                    if _is_canonical(rows, n))
    for rows in children:
        rep.enumerated += 1
        g = Graph(n, rows)
        if g.min_degree() < dmin:
            continue
        if not satisfies_degree_condition(g) or not is_two_connected(g):
            continue
        rep.qualifying += 1
        g6 = write_graph6(g)
        result = find_ic_cycle_exact(g, budget=budget)
        if result.outcome == Outcome.FOUND:
            rep.found += 1
        elif result.outcome == Outcome.BUDGET_EXCEEDED:
            rep.budget_exceeded += 1
        else:
            rep.counterexamples.append(g6)
        if check_certificates:
            cert = find_two_cut_certificate(g)
            if cert is not None:
                rep.certificates_fired += 1
                if result.outcome == Outcome.FOUND:
                    rep.certificate_conflicts += 1
        if run_constructive:
            try:
                cycle, trace = construct_ic_cycle(g, fallback_to_oracle=False)
                rep.constructive_ok += 1
                if not validate_trace(g, trace):
                    rep.trace_violations += 1
            except ProofGapError:
                rep.proofgaps += 1
                rep.proofgap_graphs.append(g6)
    return [rep.to_json()]


def _merge_per_n(n: int, chunks: list[dict]) -> PerNReport:
    rep = PerNReport(n=n)
    for c in chunks:
        rep.enumerated += c["enumerated"]
        rep.qualifying += c["qualifying"]
        rep.found += c["found"]
        rep.constructive_ok += c["constructive_ok"]
        rep.proofgaps += c["proofgaps"]
        rep.counterexamples.extend(c["counterexamples"])
        rep.proofgap_graphs.extend(c["proofgap_graphs"])
        rep.trace_violations += c["trace_violations"]
        rep.budget_exceeded += c["budget_exceeded"]
        rep.certificates_fired += c["certificates_fired"]
        rep.certificate_conflicts += c["certificate_conflicts"]
    return rep


def _run_sharded(worker, payloads: list, workers: int) -> list:
    if workers <= 1 or len(payloads) <= 1:
        return [worker(p) for p in payloads]
    ctx = get_context("fork")
    with ctx.Pool(min(workers, len(payloads))) as pool:
        return pool.map(worker, payloads)


def verify_theorem(
    n_min: int,
    n_max: int,
    *,
    run_constructive: bool = False,
    check_certificates: bool = True,
    workers: int | None = None,
    budget: int | None = None,
    seed: int | None = None,
    samples: int = 1000,
    sample_budget: int = 5_000_000,
) -> VerificationReport:
    """For every qualifying graph in range, require the oracle to find a cycle.

    Sizes up to EXHAUSTIVE_LIMIT are swept exhaustively over canonical
    representatives; larger sizes are sampled (degree-conditioned random
    graphs, 2-connectivity filtered, seeded).
    """
    t0 = time.perf_counter()
    workers = workers or default_workers()
    per_n = []
    for n in range(n_min, n_max + 1):
        if n <= EXHAUSTIVE_LIMIT:
            dmin = degree_threshold(n)
            if n == 1:
                chunks = _verify_rows_chunk(
                    (1, dmin, None, run_constructive, budget, check_certificates))
                per_n.append(_merge_per_n(1, chunks))
                continue
            parents = canonical_rows(n - 1, max(0, dmin - 1))
            shards = max(1, min(workers * 4, len(parents)))
            payloads = []
            for s in range(shards):
                chunk = parents[s::shards]
                payloads.append((n, dmin, chunk, run_constructive, budget,
                                 check_certificates))
            results = _run_sharded(_verify_rows_chunk, payloads, workers)
            per_n.append(_merge_per_n(n, [r[0] for r in results]))
        else:
            per_n.append(_sample_level(
                n, samples, seed if seed is not None else 0, sample_budget,
                run_constructive))
    runtime_ms = int((time.perf_counter() - t0) * 1000)
    params = {
        "n_min": n_min,
        "n_max": n_max,
        "run_constructive": run_constructive,
        "workers": workers,
        "budget": budget,
        "samples": samples if n_max > EXHAUSTIVE_LIMIT else None,
    }
    return VerificationReport(params, per_n, seed, runtime_ms)


def random_qualifying_graph(n: int, rng: random.Random) -> Graph:
    """Rejection-sample a 2-connected graph meeting the degree condition."""
    dmin = degree_threshold(n)
    p_num, p_den = dmin + 2, n - 1
    attempts = 0
    while True:
        attempts += 1
        if attempts % 50 == 0 and p_num < p_den:
            p_num += max(1, p_den // 20)  # densify if rejection drags on
        rows = [0] * n
        for u in range(n):
            for v in range(u + 1, n):
                if rng.random() * p_den < p_num:
                    rows[u] |= 1 << v
                    rows[v] |= 1 << u
        g = Graph(n, tuple(rows))
        if g.min_degree() * 3 >= n + 2 and is_two_connected(g):
            return g


def _sample_level(n: int, samples: int, seed: int, budget: int,
                  run_constructive: bool) -> PerNReport:
    from .construct import construct_ic_cycle, validate_trace
    from .errors import ProofGapError

    rng = random.Random((seed, n))
    rep = PerNReport(n=n)
    for _ in range(samples):
        g = random_qualifying_graph(n, rng)
        rep.enumerated += 1
        rep.qualifying += 1
        result = find_ic_cycle_exact(g, budget=budget)
        if result.outcome == Outcome.FOUND:
            rep.found += 1
        elif result.outcome == Outcome.BUDGET_EXCEEDED:
            rep.budget_exceeded += 1
        else:
            rep.counterexamples.append(write_graph6(g))
        if run_constructive:
            try:
                cycle, trace = construct_ic_cycle(g, fallback_to_oracle=False)
                rep.constructive_ok += 1
                if not validate_trace(g, trace):
                    rep.trace_violations += 1
            except ProofGapError:
                rep.proofgaps += 1
                rep.proofgap_graphs.append(write_graph6(g))
    return rep


# ---------------------------------------------------------------------------
# boundary scan


def valid_extremal_nus(n: int) -> list[int]:
    return [nu for nu in range(3, n) if 3 * nu < n + 2]


def _boundary_instance(args) -> dict:
    from .extremal import extremal_graph, validate_extremal

    n, nu, oracle_limit, budget = args
    g = extremal_graph(n, nu)
    report = validate_extremal(g, n, nu, run_oracle=n <= oracle_limit, budget=budget)
    out = report.to_json()
    out["graph6"] = write_graph6(g)
    return out


def boundary_scan(
    n_min: int,
    n_max: int,
    *,
    oracle_limit: int = 14,
    workers: int | None = None,
    budget: int | None = None,
) -> dict:
    """Validate every tight instance in range; all must be true negatives."""
    t0 = time.perf_counter()
    workers = workers or default_workers()
    payloads = [(n, nu, oracle_limit, budget)
                for n in range(n_min, n_max + 1) for nu in valid_extremal_nus(n)]
    results = _run_sharded(_boundary_instance, payloads, workers)
    ok = all(r["ok"] for r in results)
    return {
        "params": {"n_min": n_min, "n_max": n_max, "oracle_limit": oracle_limit},
        "instances": results,
        "ok": ok,
        "runtime_ms": int((time.perf_counter() - t0) * 1000),
    }
