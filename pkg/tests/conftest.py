"""Shared builders and independent reference checkers for the test suite.

The reference implementations here are deliberately written from scratch
(different algorithms, different data structures) so they can serve as
oracles for the production code.
"""

from __future__ import annotations

import itertools

from ic_cycles.graph import Graph, build_graph


def cycle_graph(n: int) -> Graph:
    return build_graph(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    return build_graph(n, itertools.combinations(range(n), 2))


def path_graph(n: int) -> Graph:
    return build_graph(n, [(i, i + 1) for i in range(n - 1)])


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    return build_graph(10, outer + inner + spokes)


def k33_graph() -> Graph:
    return build_graph(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0),
                           (0, 3), (1, 4), (2, 5)])


def edges_of(g: Graph) -> set[tuple[int, int]]:
    return set(g.edges())


# --- independent reference implementations -------------------------------


def ref_is_independent(g: Graph, s) -> bool:
    s = set(s)
    return not any(u in s and v in s for u, v in g.edges())


def ref_cycle_valid(g: Graph, order) -> bool:
    if len(order) < 3 or len(set(order)) != len(order):
        return False
    pairs = set(g.edges())
    for i, u in enumerate(order):
        v = order[(i + 1) % len(order)]
        if (min(u, v), max(u, v)) not in pairs:
            return False
    return True


def ref_two_connected(g: Graph) -> bool:
    # straight from the definition: connected, n >= 3, every G - v connected
    def connected(vertices: set[int]) -> bool:
        if not vertices:
            return False
        seen = set()
        stack = [next(iter(vertices))]
        while stack:
            u = stack.pop()
            if u in seen:
                continue
            seen.add(u)
            stack.extend(w for w in g.neighbors(u) if w in vertices and w not in seen)
        return seen == vertices

    if g.n < 3:
        return False
    full = set(range(g.n))
    if not connected(full):
        return False
    return all(connected(full - {v}) for v in range(g.n))


def naive_find_ic_cycle(g: Graph):
    """Double-exponential reference: all subsets, all cyclic orders."""
    verts = list(range(g.n))
    for size in range(3, g.n + 1):
        for subset in itertools.combinations(verts, size):
            complement = set(verts) - set(subset)
            if not ref_is_independent(g, complement):
                continue
            first, *rest = subset
            for perm in itertools.permutations(rest):
                order = (first,) + perm
                if ref_cycle_valid(g, order):
                    return order
    return None


def perm_hamiltonian_path(g: Graph, u: int, v: int):
    """Factorial-time reference for Hamiltonian u-v paths."""
    others = [w for w in range(g.n) if w not in (u, v)]
    for perm in itertools.permutations(others):
        order = (u,) + perm + (v,)
        ok = all(g.adj[order[i]] >> order[i + 1] & 1 for i in range(len(order) - 1))
        if ok:
            return order
    return None


def all_simple_cycles(g: Graph):
    """Every simple cycle (as a vertex tuple), smallest vertex first."""
    out = []
    for start in range(g.n):
        stack = [(start, [start])]
        while stack:
            u, path = stack.pop()
            for w in g.neighbors(u):
                if w == start and len(path) >= 3 and path[1] < path[-1]:
                    out.append(tuple(path))
                elif w > start and w not in path:
                    stack.append((w, path + [w]))
    return out
