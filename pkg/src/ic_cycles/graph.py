"""Immutable simple graphs with bitset adjacency, plus the structural predicates.

Vertices are 0..n-1.  Each adjacency row is stored as an int used as a bitset,
which keeps the exhaustive sweeps fast (popcounts and mask intersections) and
works for any n since Python ints are arbitrary precision.  All threshold
comparisons are done in exact integer arithmetic; there are no floats anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import SelfLoopError, VertexOutOfRangeError


def bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


@dataclass(frozen=True)
class Graph:
    """A simple undirected graph on vertices 0..n-1.

    ``adj[v]`` is the neighbor bitset of v.  Instances are immutable and safe
    to share across threads; build them with :func:`build_graph`.
    """

    n: int
    adj: tuple[int, ...]

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def has_edge(self, u: int, v: int) -> bool:
        self._check_vertex(u)
        self._check_vertex(v)
        return bool(self.adj[u] >> v & 1)

    def neighbors(self, v: int) -> Iterator[int]:
        return bits(self.adj[v])

    def min_degree(self) -> int:
        if self.n == 0:
            return 0
        return min(row.bit_count() for row in self.adj)

    def edge_count(self) -> int:
        return sum(row.bit_count() for row in self.adj) // 2

    def edges(self) -> Iterator[tuple[int, int]]:
        for u in range(self.n):
            for v in bits(self.adj[u] >> (u + 1) << (u + 1)):
                yield (u, v)

    def vertex_mask(self) -> int:
        return (1 << self.n) - 1

    def _check_vertex(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise VertexOutOfRangeError(f"vertex {v} not in 0..{self.n - 1}")


@dataclass(frozen=True)
class VertexPath:
    """An ordered sequence of distinct vertices, consecutive ones adjacent."""

    order: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.order)

    def reversed(self) -> "VertexPath":
        return VertexPath(tuple(reversed(self.order)))


@dataclass(frozen=True)
class VertexCycle:
    """An ordered sequence of >= 3 distinct vertices, read cyclically."""

    order: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.order)

    def vertex_set(self) -> frozenset[int]:
        return frozenset(self.order)


def build_graph(n: int, edges: Iterable[tuple[int, int]]) -> Graph:
    """Build a simple graph; duplicate edges collapse silently.

    Raises SelfLoopError on u == v and VertexOutOfRangeError on ids
    outside 0..n-1.
    """
    if n < 0:
        raise VertexOutOfRangeError("vertex count must be non-negative")
    rows = [0] * n
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise VertexOutOfRangeError(f"edge ({u},{v}) outside 0..{n - 1}")
        if u == v:
            raise SelfLoopError(f"self-loop at vertex {u}")
        rows[u] |= 1 << v
        rows[v] |= 1 << u
    return Graph(n, tuple(rows))


def induced_subgraph(g: Graph, vertices: Sequence[int]) -> tuple[Graph, list[int]]:
    """Induced subgraph on ``vertices`` (given order defines new labels).

    Returns the subgraph and the label map: new vertex i is old vertices[i].
    """
    label = list(vertices)
    index = {v: i for i, v in enumerate(label)}
    rows = [0] * len(label)
    for i, v in enumerate(label):
        for w in bits(g.adj[v]):
            j = index.get(w)
            if j is not None:
                rows[i] |= 1 << j
    return Graph(len(label), tuple(rows)), label


def is_independent(g: Graph, s: Iterable[int]) -> bool:
    """True iff no edge of g has both endpoints in s."""
    m = 0
    for v in s:
        g._check_vertex(v)
        m |= 1 << v
    return is_independent_mask(g, m)


def is_independent_mask(g: Graph, m: int) -> bool:
    rest = m
    while rest:
        low = rest & -rest
        v = low.bit_length() - 1
        rest ^= low
        if g.adj[v] & m:
            return False
    return True


def is_connected(g: Graph) -> bool:
    if g.n == 0:
        return False
    return _reachable_mask(g, 0, g.vertex_mask()) == g.vertex_mask()


def _reachable_mask(g: Graph, start: int, allowed: int) -> int:
    """Bitset of vertices reachable from start inside ``allowed``."""
    if not allowed >> start & 1:
        return 0
    seen = 1 << start
    frontier = seen
    while frontier:
        nxt = 0
        for v in bits(frontier):
            nxt |= g.adj[v]
        nxt &= allowed & ~seen
        seen |= nxt
        frontier = nxt
    return seen


def is_two_connected(g: Graph) -> bool:
    """True iff n >= 3, g is connected, and g has no articulation vertex."""
    n = g.n
    if n < 3:
        return False
    # Iterative DFS computing low-links.
    disc = [-1] * n
    low = [0] * n
    parent = [-1] * n
    timer = 0
    root_children = 0
    stack = [(0, iter(bits(g.adj[0])))]
    disc[0] = low[0] = timer
    timer += 1
    while stack:
        v, it = stack[-1]
        advanced = False
        for w in it:
            if disc[w] == -1:
                parent[w] = v
                disc[w] = low[w] = timer
                timer += 1
                if v == 0:
                    root_children += 1
                stack.append((w, iter(bits(g.adj[w]))))
                advanced = True
                break
            elif w != parent[v]:
                if disc[w] < low[v]:
                    low[v] = disc[w]
        if not advanced:
            stack.pop()
            p = parent[v]
            if p != -1:
                if low[v] < low[p]:
                    low[p] = low[v]
                if p != 0 and low[v] >= disc[p]:
                    return False  # p is an articulation vertex
    if timer != n:
        return False  # disconnected
    return root_children <= 1


def satisfies_degree_condition(g: Graph) -> bool:
    """True iff 3 * min_degree(g) >= n + 2, in exact integer arithmetic."""
    if g.n == 0:
        return False
    return 3 * g.min_degree() >= g.n + 2


def cycle_violation(g: Graph, c: VertexCycle) -> str | None:
    """Reason the sequence is not a valid simple cycle in g, or None."""
    order = c.order
    if len(order) < 3:
        return "too-short"
    seen = set()
    for v in order:
        if not 0 <= v < g.n:
            return "vertex-out-of-range"
        if v in seen:
            return "repeated-vertex"
        seen.add(v)
    for i, v in enumerate(order):
        w = order[(i + 1) % len(order)]
        if not g.adj[v] >> w & 1:
            return "missing-edge"
    return None


def ic_cycle_violation(g: Graph, c: VertexCycle) -> str | None:
    """Reason c is not an IC-cycle of g, or None if it is one.

    An IC-cycle is a valid simple cycle whose complement vertex set spans no
    edge.  Empty and singleton complements qualify trivially.
    """
    reason = cycle_violation(g, c)
    if reason is not None:
        return reason
    complement = g.vertex_mask() & ~mask_of(c.order)
    if not is_independent_mask(g, complement):
        return "complement-not-independent"
    return None


def is_cycle(g: Graph, c: VertexCycle) -> bool:
    return cycle_violation(g, c) is None


def is_ic_cycle(g: Graph, c: VertexCycle) -> bool:
    return ic_cycle_violation(g, c) is None
