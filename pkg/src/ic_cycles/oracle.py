"""Exact decision procedures: IC-cycle search, Hamiltonicity, 2-cut certificates.

The IC-cycle search enumerates candidate complements (independent sets, by
increasing size, never extending a set that spans an edge) and tests the
induced graph on the remaining vertices for a Hamiltonian cycle.  All searches
are deterministic: vertices are explored in ascending id order and the first
hit is returned.  Budgets are counted in backtracking nodes, not wall time.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from enum import Enum
from typing import Iterator

from .errors import PreconditionViolatedError, VertexOutOfRangeError
from .graph import (
    Graph,
    VertexCycle,
    VertexPath,
    _reachable_mask,
    bits,
    induced_subgraph,
    is_ic_cycle,
)


class Outcome(Enum):
    FOUND = "found"
    NOT_EXISTS = "not_exists"
    BUDGET_EXCEEDED = "budget_exceeded"


@dataclass
class SearchStats:
    nodes: int = 0
    sets_enumerated: int = 0
    elapsed_s: float = 0.0


@dataclass
class OracleResult:
    outcome: Outcome
    cycle: VertexCycle | None
    stats: SearchStats


@dataclass(frozen=True)
class TwoCutCertificate:
    """A vertex pair whose removal leaves >= 3 components that each span an edge.

    Any cycle meets at most two of those components, so an edge of some third
    component always survives in the complement: no IC-cycle can exist.
    """

    cut: tuple[int, int]
    components: tuple[tuple[tuple[int, ...], bool], ...]

    def edge_component_count(self) -> int:
        return sum(1 for _, has_edge in self.components if has_edge)


class _BudgetExceeded(Exception):
    pass


class _Counter:
    __slots__ = ("nodes", "limit")

    def __init__(self, limit: int | None):
        self.nodes = 0
        self.limit = limit

    def tick(self) -> None:
        self.nodes += 1
        if self.limit is not None and self.nodes > self.limit:
            raise _BudgetExceeded


def _ham_cycle_backtrack(g: Graph, counter: _Counter) -> tuple[int, ...] | None:
    n = g.n
    if n < 3:
        return None
    adj = g.adj
    full = (1 << n) - 1
    if any(row.bit_count() < 2 for row in adj):
        return None
    path = [0]

    def rec(v: int, visited: int) -> bool:
        counter.tick()
        if len(path) == n:
            return bool(adj[v] & 1)
        unvisited = full & ~visited
        hub = unvisited | (1 << v) | 1
        rest = unvisited
        while rest:
            low = rest & -rest
            u = low.bit_length() - 1
            rest ^= low
            if (adj[u] & hub).bit_count() < 2:
                return False
        if _reachable_mask(g, v, hub) != hub:
            return False
        cands = adj[v] & unvisited
        while cands:
            low = cands & -cands
            w = low.bit_length() - 1
            cands ^= low
            path.append(w)
            if rec(w, visited | low):
                return True
            path.pop()
        return False

    if rec(0, 1):
        return tuple(path)
    return None


def _ham_cycle_dp(g: Graph, counter: _Counter) -> tuple[int, ...] | None:
    # Held-Karp bitmask DP; ends[mask] = endpoint bitset of 0-started paths.
    n = g.n
    if n < 3:
        return None
    adj = g.adj
    full = (1 << n) - 1
    ends = [0] * (1 << n)
    ends[1] = 1
    for mask in range(1, 1 << n):
        if not mask & 1:
            continue
        e = ends[mask]
        if not e:
            continue
        counter.tick()
        rest = e
        while rest:
            low = rest & -rest
            v = low.bit_length() - 1
            rest ^= low
            ext = adj[v] & ~mask
            while ext:
                lw = ext & -ext
                w = lw.bit_length() - 1
                ext ^= lw
                ends[mask | lw] |= lw
    closers = ends[full] & adj[0]
    if not closers:
        return None
    # Reconstruct backwards, always taking the lowest feasible vertex.
    path = []
    v = (closers & -closers).bit_length() - 1
    mask = full
    while v != 0:
        path.append(v)
        prev_mask = mask ^ (1 << v)
        prevs = ends[prev_mask] & adj[v]
        v = (prevs & -prevs).bit_length() - 1
        mask = prev_mask
    path.append(0)
    path.reverse()
    return tuple(path)


def has_hamiltonian_cycle(
    g: Graph, budget: int | None = None, method: str = "backtracking"
) -> VertexCycle | None:
    """A Hamiltonian cycle of g if one exists, else None.

    method="dp" switches to the bitmask DP (n <= 20; memory bound), mainly
    for worst-case non-Hamiltonian instances.
    """
    counter = _Counter(budget)
    if method == "dp":
        if g.n > 20:
            raise PreconditionViolatedError("dp method limited to n <= 20")
        order = _ham_cycle_dp(g, counter)
    else:
        order = _ham_cycle_backtrack(g, counter)
    return VertexCycle(order) if order is not None else None


def has_hamiltonian_path_between(g: Graph, u: int, v: int,
                                 budget: int | None = None) -> VertexPath | None:
    """A Hamiltonian u-v path of g if one exists, else None."""
    g._check_vertex(u)
    g._check_vertex(v)
    if u == v:
        raise PreconditionViolatedError("endpoints must differ")
    counter = _Counter(budget)
    n = g.n
    adj = g.adj
    full = (1 << n) - 1
    path = [u]

    def rec(cur: int, visited: int) -> bool:
        counter.tick()
        if len(path) == n:
            return cur == v
        unvisited = full & ~visited
        if not unvisited >> v & 1:
            return False
        hub = unvisited | (1 << cur)
        rest = unvisited
        while rest:
            low = rest & -rest
            w = low.bit_length() - 1
            rest ^= low
            need = 1 if w == v else 2
            if (adj[w] & hub).bit_count() < need:
                return False
        if _reachable_mask(g, cur, hub) != hub:
            return False
        cands = adj[cur] & unvisited
        if len(path) < n - 1:
            cands &= ~(1 << v)  # reach the target last
        while cands:
            low = cands & -cands
            w = low.bit_length() - 1
            cands ^= low
            path.append(w)
            if rec(w, visited | low):
                return True
            path.pop()
        return False

    if rec(u, 1 << u):
        return VertexPath(tuple(path))
    return None


def _independent_sets_of_size(g: Graph, k: int, counter: _Counter) -> Iterator[int]:
    """All independent sets of size exactly k, as masks, in ascending lex order.

    Extension candidates always exclude neighbors of the current set, so a set
    spanning an edge is never formed, let alone extended.
    """
    n = g.n
    adj = g.adj

    def rec(start: int, left: int, cur: int, forbidden: int) -> Iterator[int]:
        if left == 0:
            yield cur
            return
        for v in range(start, n - left + 1):
            if forbidden >> v & 1:
                continue
            counter.tick()
            yield from rec(v + 1, left - 1, cur | 1 << v, forbidden | adj[v])

    yield from rec(0, k, 0, 0)


def find_ic_cycle_exact(g: Graph, budget: int | None = None) -> OracleResult:
    """Decide whether g has a cycle with independent complement.

    Candidate complements are enumerated by increasing size; for each, the
    induced graph on the remaining vertices is tested for a Hamiltonian cycle.
    NOT_EXISTS is only reported after the whole candidate space is exhausted.
    """
    t0 = time.perf_counter()
    counter = _Counter(budget)
    stats = SearchStats()
    try:
        for k in range(0, max(0, g.n - 2)):
            for comp_mask in _independent_sets_of_size(g, k, counter):
                stats.sets_enumerated += 1
                kept = [v for v in range(g.n) if not comp_mask >> v & 1]
                sub, label = induced_subgraph(g, kept)
                order = _ham_cycle_backtrack(sub, counter)
                if order is not None:
                    cycle = VertexCycle(tuple(label[i] for i in order))
                    assert is_ic_cycle(g, cycle)
                    stats.nodes = counter.nodes
                    stats.elapsed_s = time.perf_counter() - t0
                    return OracleResult(Outcome.FOUND, cycle, stats)
        stats.nodes = counter.nodes
        stats.elapsed_s = time.perf_counter() - t0
        return OracleResult(Outcome.NOT_EXISTS, None, stats)
    except _BudgetExceeded:
        stats.nodes = counter.nodes
        stats.elapsed_s = time.perf_counter() - t0
        return OracleResult(Outcome.BUDGET_EXCEEDED, None, stats)


def find_two_cut_certificate(g: Graph) -> TwoCutCertificate | None:
    """Scan all vertex pairs for a cut witnessing IC-cycle non-existence.

    Returns the first pair (ascending) whose removal leaves at least three
    components each containing an edge, or None.
    """
    n = g.n
    if n < 8:  # 2 cut vertices + 3 components of >= 2 vertices each
        return None
    full = (1 << n) - 1
    for u in range(n):
        for v in range(u + 1, n):
            allowed = full & ~(1 << u) & ~(1 << v)
            comps = []
            edge_comps = 0
            rest = allowed
            while rest:
                start = (rest & -rest).bit_length() - 1
                comp = _reachable_mask(g, start, allowed)
                rest &= ~comp
                has_edge = any(g.adj[w] & comp for w in bits(comp))
                if has_edge:
                    edge_comps += 1
                comps.append((tuple(bits(comp)), has_edge))
            if edge_comps >= 3:
                return TwoCutCertificate((u, v), tuple(comps))
    return None
