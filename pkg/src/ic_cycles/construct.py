"""Constructive IC-cycle search by local improvement moves.

Given a 2-connected graph with 3*min_degree >= n + 2, the pipeline first grows
a path whose off-path complement ends up independent (rotation moves), then
converts the Hamiltonian path into a cycle+path partition, then enlarges the
cycle until its complement is independent.  Every move either strictly
increases its governing potential (path length, then cycle size r) or emits a
cycle that is validated before being returned.

A stall where theory guarantees a move is reported as ProofGapError, never a
crash; the top-level driver can fall back to the exact oracle and flag the
trace.  Counting arguments behind the guarantees are not re-derived at
runtime: they are compiled into "no move implies ProofGap" plus a handful of
assertable inequalities (2r >= n after bootstrap, 3r <= 2n on the sparse-end
branch, spacing bound 3k <= r), with the counted quantities recorded as
diagnostics only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import PreconditionViolatedError, ProofGapError
from .graph import (
    Graph,
    VertexCycle,
    VertexPath,
    bits,
    induced_subgraph,
    is_ic_cycle,
    is_independent_mask,
    is_two_connected,
    mask_of,
    satisfies_degree_condition,
)
from .oracle import Outcome, find_ic_cycle_exact

# ---------------------------------------------------------------------------
# trace


@dataclass
class TraceEvent:
    op: str
    data: dict

    def to_json(self) -> dict:
        return {"op": self.op, **self.data}


@dataclass
class Trace:
    n: int
    events: list[TraceEvent] = field(default_factory=list)
    fallback_used: bool = False
    delegated: bool = False

    def add(self, op: str, **data) -> None:
        self.events.append(TraceEvent(op, data))

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "delegated": self.delegated,
            "fallback_used": self.fallback_used,
            "events": [e.to_json() for e in self.events],
        }


# ---------------------------------------------------------------------------
# state types


@dataclass(frozen=True)
class PathState:
    """A path whose off-path vertex set is meant to stay independent."""

    host: Graph
    path: tuple[int, ...]

    @property
    def k(self) -> int:
        return len(self.path)

    def path_mask(self) -> int:
        return mask_of(self.path)

    def complement_mask(self) -> int:
        return self.host.vertex_mask() & ~self.path_mask()

    def complement_independent(self) -> bool:
        return is_independent_mask(self.host, self.complement_mask())

    def endpoints_adjacent(self) -> bool:
        return bool(self.host.adj[self.path[0]] >> self.path[-1] & 1)


@dataclass(frozen=True)
class RotationSets:
    """Derived sets for the rotation moves, recomputed per state, never cached.

    a/b are the neighbor masks of the two endpoints; c holds positions t whose
    successor is adjacent to the pivot; blocked holds positions t with the
    vertex two steps right adjacent to the path start.
    """

    a_mask: int
    b_mask: int
    c_positions: tuple[int, ...]
    blocked_positions: tuple[int, ...]
    pivot: int | None
    mu: int


def rotation_sets(g: Graph, state: PathState) -> RotationSets:
    p = state.path
    k = len(p)
    a_mask = g.adj[p[0]]
    b_mask = g.adj[p[-1]]
    comp = state.complement_mask()
    pivot = (comp & -comp).bit_length() - 1 if comp else None
    mu = g.adj[pivot].bit_count() if pivot is not None else 0
    c_pos = []
    if pivot is not None:
        ny = g.adj[pivot]
        c_pos = [i for i in range(k - 1) if ny >> p[i + 1] & 1]
    blocked = [i for i in range(k - 2) if a_mask >> p[i + 2] & 1]
    return RotationSets(a_mask, b_mask, tuple(c_pos), tuple(blocked), pivot, mu)


@dataclass(frozen=True)
class Move:
    kind: str  # close_endpoints | extend_end | rotate_ab | rotate_c | rotate_blocked_c
    witnesses: dict

    def to_json(self) -> dict:
        return {"kind": self.kind, **self.witnesses}


@dataclass(frozen=True)
class CyclePathPartition:
    """Spanning structure: cycle T plus path H on the remaining vertices."""

    host: Graph
    cycle: tuple[int, ...]
    path: tuple[int, ...]

    @property
    def r(self) -> int:
        return len(self.cycle)

    def cycle_mask(self) -> int:
        return mask_of(self.cycle)

    def path_mask(self) -> int:
        return mask_of(self.path)

    def validate(self) -> None:
        g = self.host
        cm, pm = self.cycle_mask(), self.path_mask()
        assert cm & pm == 0, "cycle and path overlap"
        assert cm | pm == g.vertex_mask(), "partition does not cover the graph"
        assert len(self.cycle) >= 3
        for i, v in enumerate(self.cycle):
            assert g.adj[v] >> self.cycle[(i + 1) % len(self.cycle)] & 1, "cycle edge missing"
        for i in range(len(self.path) - 1):
            assert g.adj[self.path[i]] >> self.path[i + 1] & 1, "path edge missing"


@dataclass(frozen=True)
class BridgePair:
    """Closest pair on the inner cycle having distinct outer-cycle neighbors."""

    p: int
    q: int
    p0: int
    q0: int
    h1: tuple[int, ...]  # interior of the short arc between p and q
    h2: tuple[int, ...]  # interior of the long arc


@dataclass
class SubpathState:
    """Claim-5 engine state: p-q path l2 plus a path/cycle l1 on the rest."""

    l2: list[int]
    l1: list[int]

    @property
    def eta(self) -> int:
        return len(self.l2)


@dataclass
class TraceStats:
    """Counted quantities from the proof, recorded for inspection only."""

    rho_a: int = 0
    rho_b: int = 0
    rho_ab: int = 0
    gamma_a: int = 0
    gamma_b: int = 0
    gamma_ab: int = 0
    k_a: int = 0
    k_b: int = 0
    tau1: int = 0
    tau2: int = 0

    def to_json(self) -> dict:
        return dict(self.__dict__)


# ---------------------------------------------------------------------------
# Lemma: close a spanning path into a cycle via a crossing chord


def lemma1_close_path(g: Graph, path: VertexPath | Sequence[int]) -> VertexCycle:
    """Close a path u_1..u_m with degree sum d(u_1)+d(u_m) >= m into an m-cycle.

    Either the endpoints are adjacent, or some index t has u_1 ~ u_{t+1} and
    u_t ~ u_m, giving the cycle u_1..u_t u_m..u_{t+1}.  The pigeonhole behind
    the guarantee needs the endpoint neighborhoods to lie on the path, which
    holds for the spanning paths this package passes in.
    """
    order = tuple(path.order if isinstance(path, VertexPath) else path)
    m = len(order)
    if m <= 2:
        raise PreconditionViolatedError(f"path must have more than 2 vertices, got {m}")
    u1, um = order[0], order[-1]
    if g.degree(u1) + g.degree(um) < m:
        raise PreconditionViolatedError(
            f"degree sum {g.degree(u1)}+{g.degree(um)} below path length {m}")
    if g.adj[u1] >> um & 1:
        return VertexCycle(order)
    a1 = g.adj[u1]
    am = g.adj[um]
    for i in range(m - 1):
        if a1 >> order[i + 1] & 1 and am >> order[i] & 1:
            return VertexCycle(order[:i + 1] + tuple(reversed(order[i + 1:])))
    raise ProofGapError(
        "no crossing chord despite the degree-sum precondition",
        {"path": list(order)})


# ---------------------------------------------------------------------------
# path phase: rotation moves


def claim1_find_move(g: Graph, state: PathState) -> Move | None:
    """First applicable move from the fixed catalog, or None if stalled.

    Order: close endpoints; extend an end; rotate on a z_t in A with
    z_{t-2} in B (emits a (k-1)-cycle when z_{t-1} has no off-path neighbor,
    else lengthens through one); rotate through an off-path pivot adjacent to
    the successor of a B-vertex; rotate a blocked vertex whose successor sees
    an off-path pivot.  Witnesses are scanned in ascending order.  Cycle
    emissions are validated here, so a state whose complement is not yet
    independent simply skips them.
    """
    p = state.path
    k = len(p)
    adj = g.adj
    pmask = state.path_mask()
    comp = state.complement_mask()

    if k >= 3 and adj[p[0]] >> p[-1] & 1 and is_independent_mask(g, comp):
        return Move("close_endpoints", {})

    for end_pos, v in ((0, p[0]), (1, p[-1])):
        off = adj[v] & comp
        if off:
            h = (off & -off).bit_length() - 1
            return Move("extend_end", {"end": end_pos, "h": h})

    a_mask = adj[p[0]]
    b_mask = adj[p[-1]]

    # z_t in A with z_{t-2} in B (positions are 0-based here).
    for i in range(2, k):
        if a_mask >> p[i] & 1 and b_mask >> p[i - 2] & 1:
            inner_off = adj[p[i - 1]] & comp
            if inner_off:
                h = (inner_off & -inner_off).bit_length() - 1
                return Move("rotate_ab", {"t": i, "h": h})
            cycle = _rotate_ab_cycle_order(p, i)
            if is_ic_cycle(g, VertexCycle(cycle)):
                return Move("rotate_ab", {"t": i, "h": None})
            # off-path complement not independent yet: this instance is a dead
            # end, keep scanning

    # pivot rotations
    for y in bits(comp):
        ny = adj[y]
        for i in range(k - 1):
            if b_mask >> p[i] & 1 and ny >> p[i + 1] & 1:
                return Move("rotate_c", {"t": i, "y": y})
    for y in bits(comp):
        ny = adj[y]
        for i in range(k - 2):
            if a_mask >> p[i + 2] & 1 and ny >> p[i + 1] & 1:
                return Move("rotate_blocked_c", {"t": i, "y": y})
    return None


def _rotate_ab_cycle_order(p: tuple[int, ...], i: int) -> tuple[int, ...]:
    # All path vertices except p[i-1]: p[0..i-2] then p[k-1] down to p[i].
    return p[:i - 1] + tuple(reversed(p[i:]))


def claim1_apply_move(g: Graph, state: PathState, move: Move) -> PathState | VertexCycle:
    p = state.path
    w = move.witnesses
    if move.kind == "close_endpoints":
        return VertexCycle(p)
    if move.kind == "extend_end":
        new = (w["h"],) + p if w["end"] == 0 else p + (w["h"],)
        return PathState(g, new)
    if move.kind == "rotate_ab":
        i = w["t"]
        if w["h"] is None:
            return VertexCycle(_rotate_ab_cycle_order(p, i))
        return PathState(g, p[:i - 1] + tuple(reversed(p[i:])) + (p[i - 1], w["h"]))
    if move.kind == "rotate_c":
        i = w["t"]
        return PathState(g, p[:i + 1] + tuple(reversed(p[i + 1:])) + (w["y"],))
    if move.kind == "rotate_blocked_c":
        i = w["t"]
        return PathState(
            g, (w["y"],) + tuple(reversed(p[:i + 2])) + p[i + 2:])
    raise ValueError(f"unknown move kind {move.kind!r}")


def _require_hypotheses(g: Graph) -> None:
    if not is_two_connected(g):
        raise PreconditionViolatedError("graph must be 2-connected")
    if not satisfies_degree_condition(g):
        raise PreconditionViolatedError(
            f"need 3*min_degree >= n+2, got 3*{g.min_degree()} < {g.n}+2")


def claim1_hamiltonian_path(g: Graph, trace: Trace | None = None) -> VertexPath | VertexCycle:
    """Grow a Hamiltonian path by catalog moves, or emit an IC-cycle en route.

    Seeds are tried in ascending vertex order; each move strictly lengthens
    the path, so a seed is abandoned after at most n moves.  Once the off-path
    complement becomes independent the theory guarantees progress, and a stall
    in that regime raises ProofGapError immediately.
    """
    _require_hypotheses(g)
    if g.n < 6:
        raise PreconditionViolatedError("path phase requires n >= 6")
    if trace is None:
        trace = Trace(g.n)
    for seed in range(g.n):
        out = _claim1_from_seed(g, seed, trace)
        if out is not None:
            return out
    raise ProofGapError("path growth stalled from every seed", {"n": g.n})


def _claim1_from_seed(g: Graph, seed: int, trace: Trace) -> VertexPath | VertexCycle | None:
    state = PathState(g, (seed,))
    trace.add("claim1_seed", seed=seed)
    invariant_seen = False
    for _ in range(g.n + 1):
        indep = state.complement_independent()
        assert not (invariant_seen and not indep), "independence invariant regressed"
        invariant_seen = invariant_seen or indep
        if state.k == g.n:
            if state.endpoints_adjacent():
                cycle = VertexCycle(state.path)
                assert is_ic_cycle(g, cycle)
                trace.add("claim1_result", kind="ic_cycle", length=len(cycle))
                return cycle
            trace.add("claim1_result", kind="hamiltonian_path")
            return VertexPath(state.path)
        move = claim1_find_move(g, state)
        if move is None:
            if indep:
                rs = rotation_sets(g, state)
                raise ProofGapError(
                    "no rotation move on a non-spanning path with independent "
                    "complement",
                    {
                        "seed": seed,
                        "path": list(state.path),
                        "pivot": rs.pivot,
                        "mu": rs.mu,
                        "c_positions": list(rs.c_positions),
                        "blocked_positions": list(rs.blocked_positions),
                    },
                )
            trace.add("claim1_stall", seed=seed, k=state.k)
            return None  # complement never became independent; try another seed
        nxt = claim1_apply_move(g, state, move)
        if isinstance(nxt, VertexCycle):
            assert is_ic_cycle(g, nxt)
            trace.add("claim1_move", move=move.kind, k_before=state.k,
                      k_after=None, emitted=True)
            trace.add("claim1_result", kind="ic_cycle", length=len(nxt))
            return nxt
        trace.add("claim1_move", move=move.kind, k_before=state.k, k_after=nxt.k)
        assert nxt.k == state.k + 1, "moves must lengthen the path"
        state = nxt
    raise AssertionError("path phase exceeded its iteration bound")


# ---------------------------------------------------------------------------
# bootstrap: Hamiltonian path -> cycle+path partition with 2r >= n


def bootstrap_partition(
    g: Graph, hp: VertexPath, trace: Trace | None = None
) -> CyclePathPartition | VertexCycle:
    """Split a Hamiltonian path into cycle+path with 2r >= n, or emit a cycle.

    Step one closes the longest prefix chord from the path start (r >= dmin+1).
    If that leaves 2r < n, one of four patterns on the endpoint neighborhoods
    must apply: a skipped-vertex (n-1)-cycle; a cycle on a path suffix closing
    from the far endpoint; or a chord from the middle vertex into a
    neighbor-adjacent slot on either side.  The 2-connectivity and degree
    hypotheses are the caller's obligation (the top-level driver checks them).
    """
    if trace is None:
        trace = Trace(g.n)
    x = tuple(hp.order if isinstance(hp, VertexPath) else hp)
    n = g.n
    if len(x) != n or mask_of(x) != g.vertex_mask():
        raise PreconditionViolatedError("bootstrap needs a Hamiltonian path")
    for i in range(n - 1):
        if not g.adj[x[i]] >> x[i + 1] & 1:
            raise PreconditionViolatedError("bootstrap needs a Hamiltonian path")
    dmin = g.min_degree()
    adj = g.adj

    i_max = max(j for j in range(1, n) if adj[x[0]] >> x[j] & 1)
    r = i_max + 1
    assert r >= dmin + 1, "prefix chord shorter than min degree allows"
    if r == n:
        cycle = VertexCycle(x)
        assert is_ic_cycle(g, cycle)
        trace.add("bootstrap", branch="ham_cycle", r=n, n=n, delta=dmin)
        return cycle
    if 2 * r >= n:
        part = CyclePathPartition(g, x[:r], x[r:])
        part.validate()
        trace.add("bootstrap", branch="initial", r=r, n=n, delta=dmin)
        return part

    alphas = [j for j in range(1, n) if adj[x[0]] >> x[j] & 1]
    betas = [j for j in range(n - 1) if adj[x[-1]] >> x[j] & 1]
    beta_set = set(betas)

    # skipped-vertex (n-1)-cycle: start-chord to x[a], end-chord to x[a-2]
    for a in alphas:
        if a - 2 in beta_set:
            order = x[:a - 1] + tuple(reversed(x[a:]))
            cycle = VertexCycle(order)
            assert is_ic_cycle(g, cycle)
            trace.add("bootstrap", branch="skip_vertex", r=n - 1, n=n, delta=dmin)
            return cycle

    # a long prefix chord (cannot fire when the maximal chord was short; kept
    # for completeness of the pattern list)
    for a in alphas:
        if 2 * (a + 1) >= n:
            part = CyclePathPartition(g, x[:a + 1], x[a + 1:])
            part.validate()
            trace.add("bootstrap", branch="prefix", r=a + 1, n=n, delta=dmin)
            return part

    # suffix cycle closing from the far endpoint
    for b in betas:
        if 2 * (b + 1) <= n:
            part = CyclePathPartition(g, x[b:], x[:b])
            part.validate()
            _assert_bootstrap_bounds(part, n, dmin)
            trace.add("bootstrap", branch="suffix", r=n - b, n=n, delta=dmin)
            return part

    mid = (n - 1) // 2  # middle vertex, position ceil(n/2) counting from 1
    for a in alphas:
        if adj[x[mid]] >> x[a - 1] & 1:
            order = (x[0],) + x[a:mid + 1] + tuple(reversed(x[1:a]))
            part = CyclePathPartition(g, order, x[mid + 1:])
            part.validate()
            _assert_bootstrap_bounds(part, n, dmin)
            trace.add("bootstrap", branch="mid_left", r=mid + 1, n=n, delta=dmin)
            return part
    for b in betas:
        if adj[x[mid]] >> x[b + 1] & 1:
            order = x[mid:b + 1] + tuple(reversed(x[b + 1:]))
            part = CyclePathPartition(g, order, x[:mid])
            part.validate()
            _assert_bootstrap_bounds(part, n, dmin)
            trace.add("bootstrap", branch="mid_right", r=n - mid, n=n, delta=dmin)
            return part

    raise ProofGapError(
        "no partition bootstrap pattern on the Hamiltonian path",
        {"path": list(x), "alphas": alphas, "betas": betas})


def _assert_bootstrap_bounds(part: CyclePathPartition, n: int, dmin: int) -> None:
    assert 2 * part.r >= n, "bootstrap must reach 2r >= n"
    assert part.r >= dmin + 1, "bootstrap must reach r >= min_degree + 1"


# ---------------------------------------------------------------------------
# partition enlargement: shared-neighbor dichotomy


def _cyclic_distance(r: int, i: int, j: int) -> int:
    d = (j - i) % r
    return min(d, r - d)


def _type_stats(g: Graph, part: CyclePathPartition) -> TraceStats:
    a, b = part.path[0], part.path[-1]
    na, nb = g.adj[a], g.adj[b]
    stats = TraceStats()
    types = []
    for v in part.cycle:
        in_a = bool(na >> v & 1)
        in_b = bool(nb >> v & 1)
        if in_a and in_b:
            stats.rho_ab += 1
            types.append("ab")
        elif in_a:
            stats.rho_a += 1
            types.append("a")
        elif in_b:
            stats.rho_b += 1
            types.append("b")
    stats.k_a = (na & part.cycle_mask()).bit_count()
    stats.k_b = (nb & part.cycle_mask()).bit_count()
    if types:
        # count maximal cyclic runs of equal type among the typed vertices
        runs = []
        for t in types:
            if not runs or runs[-1][0] != t:
                runs.append([t, 1])
            else:
                runs[-1][1] += 1
        if len(runs) > 1 and runs[0][0] == runs[-1][0]:
            runs[0][1] += runs.pop()[1]
        for t, _ in runs:
            if t == "a":
                stats.gamma_a += 1
            elif t == "b":
                stats.gamma_b += 1
            else:
                stats.gamma_ab += 1
    return stats


def improve_partition(
    g: Graph, part: CyclePathPartition, trace: Trace | None = None
) -> CyclePathPartition | VertexCycle:
    """One enlargement round: strictly bigger r, or a validated IC-cycle."""
    if trace is None:
        trace = Trace(g.n)
    if len(part.path) <= 1:
        cycle = VertexCycle(part.cycle)
        assert is_ic_cycle(g, cycle)
        trace.add("emit", kind="small_complement", length=len(cycle))
        return cycle
    a, b = part.path[0], part.path[-1]
    na = g.adj[a] & part.cycle_mask()
    nb = g.adj[b] & part.cycle_mask()
    if na and nb and (na | nb).bit_count() >= 2:
        return case1_moves(g, part, trace)
    return case2_pipeline(g, part, trace)


def _partition_or_emit(
    g: Graph, cycle_order: Sequence[int], path_order: Sequence[int],
    trace: Trace, move: str, r_before: int,
) -> CyclePathPartition | VertexCycle:
    if not path_order:
        cycle = VertexCycle(tuple(cycle_order))
        assert is_ic_cycle(g, cycle)
        trace.add("partition_move", move=move, r_before=r_before,
                  r_after=len(cycle_order), emitted=True)
        return cycle
    part = CyclePathPartition(g, tuple(cycle_order), tuple(path_order))
    part.validate()
    assert part.r > r_before, "partition moves must strictly enlarge the cycle"
    trace.add("partition_move", move=move, r_before=r_before, r_after=part.r)
    return part


def _insert_endpoint_move(
    g: Graph, part: CyclePathPartition, trace: Trace, move_name: str
) -> CyclePathPartition | VertexCycle | None:
    """Insert an H-endpoint between two consecutive cycle vertices adjacent to it."""
    t = part.cycle
    r = part.r
    for e, strip in ((part.path[0], part.path[1:]), (part.path[-1], part.path[:-1])):
        ne = g.adj[e]
        for i in range(r):
            if ne >> t[i] & 1 and ne >> t[(i + 1) % r] & 1:
                new_cycle = t[:i + 1] + (e,) + t[i + 1:]
                return _partition_or_emit(g, new_cycle, strip, trace, move_name, r)
    return None


def case1_moves(
    g: Graph, part: CyclePathPartition, trace: Trace
) -> CyclePathPartition | VertexCycle:
    """Enlargement when the two H-endpoints have distinct cycle neighbors.

    Tried in order: insert an endpoint between two consecutive cycle vertices
    it sees; route the whole path H through two cycle chords whose cyclic
    distance is at most n - r (the major arc plus H beats r).  Theory says a
    stall forces r >= n - 1, which cannot happen while H has two vertices.
    """
    t = part.cycle
    r = part.r
    n = g.n
    a, b = part.path[0], part.path[-1]
    trace.add("case1_enter", r=r, n=n, stats=_type_stats(g, part).to_json())

    out = _insert_endpoint_move(g, part, trace, "case1_insert")
    if out is not None:
        return out

    pos_a = [i for i in range(r) if g.adj[a] >> t[i] & 1]
    pos_b = [i for i in range(r) if g.adj[b] >> t[i] & 1]
    limit = n - r
    for pu in pos_a:
        for pv in pos_b:
            if pu == pv:
                continue
            d = _cyclic_distance(r, pu, pv)
            if d > limit:
                continue
            if (pv - pu) % r == d:
                major = [t[(pv + j) % r] for j in range(r - d + 1)]
                comp = [t[(pu + j) % r] for j in range(1, d)]
            else:
                major = [t[(pv - j) % r] for j in range(r - d + 1)]
                comp = [t[(pv + j) % r] for j in range(1, d)]
            new_cycle = list(part.path) + major
            return _partition_or_emit(g, new_cycle, comp, trace, "case1_arc", r)

    if r >= n - 1:
        cycle = VertexCycle(t)
        assert is_ic_cycle(g, cycle)
        trace.add("emit", kind="case1_terminal", length=r)
        return cycle
    raise ProofGapError(
        "no enlargement in the distinct-neighbor case with r < n - 1",
        {"r": r, "n": n, "stats": _type_stats(g, part).to_json()})


def _spacing_move(
    g: Graph, part: CyclePathPartition, trace: Trace
) -> CyclePathPartition | VertexCycle | None:
    """Moves forced by close pairs among an endpoint's cycle neighbors.

    Consecutive neighbors let the endpoint slot in directly.  Neighbors two
    apart pin a middle vertex: if it sees H, reroute through H; if it sees a
    cycle edge elsewhere, relocate it there and slot the endpoint in.
    """
    out = _insert_endpoint_move(g, part, trace, "spacing_insert")
    if out is not None:
        return out
    t = part.cycle
    r = part.r
    for e, strip, h_order in (
        (part.path[-1], part.path[:-1], part.path),
        (part.path[0], part.path[1:], tuple(reversed(part.path))),
    ):
        # h_order runs from the far endpoint to e
        ne = g.adj[e]
        w_pos = [i for i in range(r) if ne >> t[i] & 1]
        if len(w_pos) < 2:
            continue
        wset = set(w_pos)
        for pi in w_pos:
            if (pi + 2) % r not in wset:
                continue
            mid = t[(pi + 1) % r]
            nm = g.adj[mid]
            # reroute through H: ...t[pi], e, H back to h, mid, t[pi+2], ...
            hmask = part.path_mask()
            if nm & hmask:
                idx = next(j for j in range(len(h_order)) if nm >> h_order[j] & 1)
                absorbed = h_order[idx:]  # h .. e in path order
                new_cycle = ([t[pi]] + list(reversed(absorbed)) + [mid]
                             + [t[(pi + 2 + j) % r] for j in range(r - 2)])
                comp = h_order[:idx]
                return _partition_or_emit(
                    g, new_cycle, comp, trace, "spacing_reroute", r)
            # relocate mid onto another cycle edge it sees, slot e in
            for j in range(r):
                if j == pi or j == (pi + 1) % r:
                    continue
                if nm >> t[j] & 1 and nm >> t[(j + 1) % r] & 1:
                    new_cycle = []
                    for q in range(r):
                        new_cycle.append(e if q == (pi + 1) % r else t[q])
                        if q == j:
                            new_cycle.append(mid)
                    return _partition_or_emit(
                        g, new_cycle, strip, trace, "spacing_relocate", r)
    return None


def case2_pipeline(
    g: Graph, part: CyclePathPartition, trace: Trace
) -> CyclePathPartition | VertexCycle:
    """Enlargement when one endpoint has at most one cycle neighbor.

    After the spacing moves stall, each endpoint's cycle neighbors sit pairwise
    at least 3 apart (3k <= r).  The induced graph on H then gets a Hamiltonian
    cycle, a closest bridge pair to the outer cycle, and a Hamiltonian p-q
    path; stitching that path to the major outer arc beats r.
    """
    n = g.n
    r = part.r
    stats = _type_stats(g, part)
    trace.add("case2_enter", r=r, n=n, k_a=stats.k_a, k_b=stats.k_b)
    if 3 * r > 2 * n:
        raise ProofGapError("sparse-end case entered with 3r > 2n", {"r": r, "n": n})

    out = _spacing_move(g, part, trace)
    if out is not None:
        return out

    # stalled spacing: neighbors pairwise >= 3 apart along the cycle
    for e in (part.path[0], part.path[-1]):
        pos = [i for i in range(r) if g.adj[e] >> part.cycle[i] & 1]
        for x in range(len(pos)):
            for y in range(x + 1, len(pos)):
                if _cyclic_distance(r, pos[x], pos[y]) < 3:
                    raise ProofGapError(
                        "spacing stalled with cycle neighbors closer than 3",
                        {"r": r, "n": n, "positions": pos})
        if 3 * len(pos) > r:
            raise ProofGapError(
                "endpoint keeps more than r/3 cycle neighbors after spacing",
                {"r": r, "n": n, "k": len(pos)})
    trace.add("spacing_stalled", r=r, k_a=stats.k_a, k_b=stats.k_b)

    tag, res = claim4_hamiltonian_cycle_H(g, part, trace)
    if tag != "ham_h":
        return res  # a full IC-cycle or a strictly larger partition
    h_cycle = res  # Hamiltonian cycle of the induced graph on H, host labels

    bp = select_bridge_pair(g, part, h_cycle)
    if bp is None:
        raise ProofGapError(
            "no bridge pair with distinct outer neighbors on a 2-connected graph",
            {"r": r, "n": n})
    trace.add("bridge_pair", p=bp.p, q=bp.q, p0=bp.p0, q0=bp.q0,
              h1=len(bp.h1), h2=len(bp.h2))

    h0 = claim5_hamiltonian_path_pq(g, h_cycle, bp, trace)

    t = part.cycle
    pos_p0 = t.index(bp.p0)
    pos_q0 = t.index(bp.q0)
    d = _cyclic_distance(r, pos_p0, pos_q0)
    if (pos_q0 - pos_p0) % r == d:
        major = [t[(pos_q0 + j) % r] for j in range(r - d + 1)]
        comp = [t[(pos_p0 + j) % r] for j in range(1, d)]
    else:
        major = [t[(pos_q0 - j) % r] for j in range(r - d + 1)]
        comp = [t[(pos_q0 + j) % r] for j in range(1, d)]
    new_cycle = list(h0.order) + major
    assert len(new_cycle) >= n - r // 2 + 1, "combined cycle shorter than guaranteed"
    trace.add("combine", cycle_len=len(new_cycle), r_before=r,
              lower_bound=n - r // 2 + 1)
    return _partition_or_emit(g, new_cycle, comp, trace, "case2_combine", r)


def _h_subgraph(g: Graph, order: Sequence[int]) -> tuple[Graph, list[int]]:
    return induced_subgraph(g, list(order))


def claim4_hamiltonian_cycle_H(
    g: Graph, part: CyclePathPartition, trace: Trace
) -> tuple[str, VertexCycle | CyclePathPartition]:
    """Hamiltonian cycle of the induced graph on H (host labels), or an escape.

    Returns a tagged outcome: ("ham_h", cycle on V(H)), ("ic", full IC-cycle;
    the two-squares configuration at n=7), or ("partition", strictly larger
    partition; taken when the H+shared-neighbor cycle or a near-miss candidate
    beats the current r).
    """
    n = g.n
    r = part.r
    h = part.path
    a, b = h[0], h[-1]
    na = g.adj[a] & part.cycle_mask()
    nb = g.adj[b] & part.cycle_mask()
    if len(h) < 3:
        raise ProofGapError(
            "sparse-end case with fewer than 3 path vertices",
            {"r": r, "n": n, "h": list(h)})

    hsub, label = _h_subgraph(g, h)
    hpath = list(range(len(h)))

    if na and nb:
        if na != nb or na.bit_count() != 1:
            raise ProofGapError(
                "shared-neighbor branch entered without the single shared neighbor",
                {"na": na, "nb": nb})
        c = (na & -na).bit_length() - 1
        if hsub.degree(0) + hsub.degree(len(h) - 1) >= len(h):
            cyc = lemma1_close_path(hsub, hpath)
            trace.add("claim4", branch="shared_lemma_close")
            return "ham_h", VertexCycle(tuple(label[i] for i in cyc.order))
        if n - r + 1 > r:
            # H plus the shared neighbor forms a longer cycle; the old cycle
            # minus that neighbor is the new path
            pos_c = part.cycle.index(c)
            new_cycle = (c,) + h
            comp = tuple(part.cycle[(pos_c + 1 + j) % r] for j in range(r - 1))
            trace.add("claim4", branch="shared_swap")
            out = _partition_or_emit(g, new_cycle, comp, trace, "claim4_swap", r)
            return ("ic" if isinstance(out, VertexCycle) else "partition"), out
        if not (n == 7 and r == 4):
            raise ProofGapError(
                "shared-neighbor closure failed outside the n=7 configuration",
                {"n": n, "r": r})
        return _two_squares_search(g, part, c, trace)

    # one endpoint sees nothing on the cycle
    if not nb:
        hsub, label = _h_subgraph(g, tuple(reversed(h)))
    if hsub.degree(0) + hsub.degree(len(h) - 1) < len(h):
        raise ProofGapError(
            "isolated-endpoint closure precondition failed",
            {"n": n, "r": r, "degsum": hsub.degree(0) + hsub.degree(len(h) - 1)})
    cyc = lemma1_close_path(hsub, hpath)
    trace.add("claim4", branch="isolated_lemma_close")
    return "ham_h", VertexCycle(tuple(label[i] for i in cyc.order))


def _cycle_paths_between(cycle: Sequence[int], u: int, v: int) -> list[list[int]]:
    """Both arc walks from u to v along the cycle, longest first, length >= 2 edges."""
    m = len(cycle)
    iu, iv = cycle.index(u), cycle.index(v)
    fwd = [cycle[(iu + j) % m] for j in range(((iv - iu) % m) + 1)]
    bwd = [cycle[(iu - j) % m] for j in range(((iu - iv) % m) + 1)]
    out = [p for p in (fwd, bwd) if len(p) >= 3]
    out.sort(key=len, reverse=True)
    return out


def _two_squares_search(
    g: Graph, part: CyclePathPartition, c: int, trace: Trace
) -> tuple[str, VertexCycle | CyclePathPartition]:
    """n=7 terminal: two 4-cycles sharing c, bridged by an outside edge.

    Walk from the bridge endpoints to c inside each square (2 or 3 edges each
    way), concatenate through the bridge edge; sizes 5..7 arise.  A candidate
    is returned as an IC-cycle when its complement is independent, or as a
    larger partition when the two leftover vertices are adjacent.
    """
    square1 = (c,) + part.path          # c, a, ..., b
    square2 = part.cycle                # contains c
    r = part.r
    others2 = [v for v in square2 if v != c]
    for c1 in part.path:
        for c2 in others2:
            if not g.adj[c1] >> c2 & 1:
                continue
            for p1 in _cycle_paths_between(square1, c, c1):
                for p2 in _cycle_paths_between(square2, c, c2):
                    order = tuple(reversed(p1)) + tuple(p2[1:])  # c1..c..c2
                    cand = VertexCycle(order)
                    if is_ic_cycle(g, cand):
                        trace.add("claim4", branch="two_squares",
                                  length=len(order))
                        return "ic", cand
                    leftover = [v for v in range(g.n) if v not in set(order)]
                    if (len(order) > r and len(leftover) == 2
                            and g.adj[leftover[0]] >> leftover[1] & 1):
                        trace.add("claim4", branch="two_squares_partition",
                                  length=len(order))
                        out = _partition_or_emit(
                            g, order, leftover, trace, "claim4_two_squares", r)
                        return ("ic" if isinstance(out, VertexCycle)
                                else "partition"), out
    raise ProofGapError("two-squares search found no usable cycle",
                        {"n": g.n, "r": r})


def select_bridge_pair(
    g: Graph, part: CyclePathPartition, h_cycle: VertexCycle
) -> BridgePair | None:
    """Closest pair on the H-cycle with distinct outer-cycle neighbors."""
    hc = h_cycle.order
    m = len(hc)
    tmask = part.cycle_mask()
    t_nbrs = {v: sorted(bits(g.adj[v] & tmask)) for v in hc}
    for d in range(1, m // 2 + 1):
        for s in range(m):
            p, q = hc[s], hc[(s + d) % m]
            np_, nq = t_nbrs[p], t_nbrs[q]
            if not np_ or not nq:
                continue
            found = None
            for p0 in np_:
                for q0 in nq:
                    if p0 != q0:
                        found = (p0, q0)
                        break
                if found:
                    break
            if found is None:
                continue
            h1 = tuple(hc[(s + j) % m] for j in range(1, d))
            # long-arc interior ordered from p's side so that p,h2...,q is a path
            h2 = tuple(hc[(s - j) % m] for j in range(1, m - d))
            return BridgePair(p, q, found[0], found[1], h1, h2)
    return None


def claim5_hamiltonian_path_pq(
    g: Graph, h_cycle: VertexCycle, bp: BridgePair, trace: Trace
) -> VertexPath:
    """Hamiltonian p-q path of the induced graph on the H-cycle's vertices.

    Engine: start from p + long arc + q; repeatedly insert a leftover endpoint
    between two consecutive neighbors; otherwise close the leftover path into
    a cycle (crossing chord) and splice it in where two adjacent leftover
    vertices see two near positions of the main path.  Every move strictly
    grows the main path.
    """
    hmask = mask_of(h_cycle.order)
    n_host = g.n

    # every vertex on the short side must keep a dense neighborhood inside H;
    # otherwise the bridge pair was not closest, which select_bridge_pair rules out
    for f in bp.h1:
        if 3 * (g.adj[f] & hmask).bit_count() < n_host:
            raise ProofGapError(
                "short-arc vertex too sparse inside H despite pair minimality",
                {"vertex": f})

    state = SubpathState(l2=[bp.p, *bp.h2, bp.q], l1=list(bp.h1))
    trace.add("claim5_start", eta=state.eta, l1=len(state.l1))

    for _ in range(n_host + 1):
        if not state.l1:
            out = VertexPath(tuple(state.l2))
            assert out.order[0] == bp.p and out.order[-1] == bp.q
            return out
        eta_before = state.eta
        if _claim5_insert_endpoint(g, state, trace):
            assert state.eta > eta_before
            continue
        if _claim5_splice(g, state, trace):
            assert state.eta > eta_before
            continue
        raise ProofGapError(
            "no insertion or splice for the leftover path",
            {"l2": list(state.l2), "l1": list(state.l1)})
    raise AssertionError("claim5 engine exceeded its iteration bound")


def _claim5_insert_endpoint(g: Graph, state: SubpathState, trace: Trace) -> bool:
    ends = [0] if len(state.l1) == 1 else [0, -1]
    l2 = state.l2
    for e in ends:
        w = state.l1[e]
        nw = g.adj[w]
        for i in range(len(l2) - 1):
            if nw >> l2[i] & 1 and nw >> l2[i + 1] & 1:
                state.l2 = l2[:i + 1] + [w] + l2[i + 1:]
                state.l1 = state.l1[1:] if e == 0 else state.l1[:-1]
                trace.add("claim5_move", move="insert", eta=state.eta)
                return True
    return False


def _claim5_l1_ham_paths(g: Graph, l1: list[int]) -> list[tuple[int, int, list[int], list[int] | None]]:
    """(s, t, full walk s..t, cycle order or None) with the walk spanning l1."""
    if len(l1) == 1:
        return [(l1[0], l1[0], [l1[0]], None)]
    if len(l1) == 2:
        return [(l1[0], l1[1], list(l1), None),
                (l1[1], l1[0], list(reversed(l1)), None)]
    sub, label = induced_subgraph(g, l1)
    if sub.degree(0) + sub.degree(len(l1) - 1) < len(l1):
        raise ProofGapError(
            "leftover path cannot be closed into a cycle",
            {"l1": list(l1),
             "degsum": sub.degree(0) + sub.degree(len(l1) - 1)})
    cyc = [label[i] for i in lemma1_close_path(sub, list(range(len(l1)))).order]
    m = len(cyc)
    out = []
    for i in range(m):
        s, t = cyc[i], cyc[(i + 1) % m]
        walk_st = [cyc[(i - j) % m] for j in range(m)]      # s backwards to t
        walk_ts = [cyc[(i + 1 + j) % m] for j in range(m)]  # t forwards to s
        out.append((s, t, walk_st, cyc))
        out.append((t, s, walk_ts, cyc))
    return out


def _claim5_splice(g: Graph, state: SubpathState, trace: Trace) -> bool:
    l2 = state.l2
    pairs = _claim5_l1_ham_paths(g, state.l1)
    l1set = mask_of(state.l1)
    for s, t, walk, cyc in pairs:
        ns, nt = g.adj[s], g.adj[t]
        for delta in (1, 2):
            for i in range(len(l2) - delta):
                if not (ns >> l2[i] & 1 and nt >> l2[i + delta] & 1):
                    continue
                if delta == 1:
                    state.l2 = l2[:i + 1] + walk + l2[i + 1:]
                    state.l1 = []
                    trace.add("claim5_move", move="splice", eta=state.eta)
                    return True
                z = l2[i + 1]
                if g.adj[z] & l1set:
                    if _claim5_absorb_arc(g, state, i, z, t, cyc, trace):
                        return True
                    continue
                # z sees no leftover vertex: park it on another edge of l2
                for kpos in range(len(l2) - 1):
                    if not (kpos + 1 <= i or kpos >= i + 2):
                        continue
                    if g.adj[z] >> l2[kpos] & 1 and g.adj[z] >> l2[kpos + 1] & 1:
                        if kpos + 1 <= i:
                            new = (l2[:kpos + 1] + [z] + l2[kpos + 1:i + 1]
                                   + walk + l2[i + 2:])
                        else:
                            new = (l2[:i + 1] + walk + l2[i + 2:kpos + 1]
                                   + [z] + l2[kpos + 1:])
                        state.l2 = new
                        state.l1 = []
                        trace.add("claim5_move", move="splice_park", eta=state.eta)
                        return True
    return False


def _claim5_absorb_arc(
    g: Graph, state: SubpathState, i: int, z: int, t: int,
    cyc: list[int] | None, trace: Trace,
) -> bool:
    """Route l2 through z into the leftover structure, absorbing an arc to t."""
    l2 = state.l2
    zn = sorted(bits(g.adj[z] & mask_of(state.l1)))
    for w in zn:
        if cyc is None:
            if len(state.l1) == 1:
                arc = [t]
                rest: list[int] = []
            else:
                if w == t:
                    arc = [t]
                    rest = [x for x in state.l1 if x != t]
                else:
                    arc = [w, t]
                    rest = []
        else:
            m = len(cyc)
            pw, pt = cyc.index(w), cyc.index(t)
            fd = (pt - pw) % m
            bd = (pw - pt) % m
            if fd >= bd:
                arc = [cyc[(pw + j) % m] for j in range(fd + 1)]
                rest = [cyc[(pt + 1 + j) % m] for j in range(m - fd - 1)]
            else:
                arc = [cyc[(pw - j) % m] for j in range(bd + 1)]
                rest = [cyc[(pw + 1 + j) % m] for j in range(m - bd - 1)]
        state.l2 = l2[:i + 2] + arc + l2[i + 2:]
        state.l1 = rest
        trace.add("claim5_move", move="absorb", eta=state.eta, absorbed=len(arc))
        return True
    return False


# ---------------------------------------------------------------------------
# top-level driver


def construct_ic_cycle(
    g: Graph,
    *,
    fallback_to_oracle: bool = True,
    oracle_budget: int | None = None,
    trace: Trace | None = None,
) -> tuple[VertexCycle, Trace]:
    """Produce a validated IC-cycle for a qualifying graph, with a move trace.

    Graphs below 6 vertices go straight to the exact search (the hypotheses
    make small cases immediate).  On ProofGapError the exact search also takes
    over unless fallback_to_oracle is False, and the trace is flagged.
    """
    _require_hypotheses(g)
    if trace is None:
        trace = Trace(g.n)
    if g.n < 6:
        res = find_ic_cycle_exact(g, budget=oracle_budget)
        assert res.outcome == Outcome.FOUND, "small qualifying graph must have a cycle"
        trace.delegated = True
        trace.add("base_case_oracle", length=len(res.cycle))
        return res.cycle, trace
    try:
        out = claim1_hamiltonian_path(g, trace)
        if isinstance(out, VertexCycle):
            return _finish(g, out, trace)
        step = bootstrap_partition(g, out, trace)
        if isinstance(step, VertexCycle):
            return _finish(g, step, trace)
        part = step
        for _ in range(g.n + 1):
            if is_independent_mask(g, part.path_mask()):
                cycle = VertexCycle(part.cycle)
                trace.add("emit", kind="independent_complement", length=part.r)
                return _finish(g, cycle, trace)
            r_before = part.r
            step = improve_partition(g, part, trace)
            if isinstance(step, VertexCycle):
                return _finish(g, step, trace)
            part = step
            assert part.r > r_before
        raise AssertionError("partition loop exceeded its iteration bound")
    except ProofGapError as gap:
        if not fallback_to_oracle:
            raise
        trace.fallback_used = True
        trace.add("oracle_fallback", reason=str(gap))
        res = find_ic_cycle_exact(g, budget=oracle_budget)
        if res.outcome != Outcome.FOUND:
            raise ProofGapError(
                "exact search failed after a move stall; outcome "
                f"{res.outcome.value}", {"stall": str(gap)}) from gap
        return res.cycle, trace


def _finish(g: Graph, cycle: VertexCycle, trace: Trace) -> tuple[VertexCycle, Trace]:
    assert is_ic_cycle(g, cycle), "emitted cycle failed validation"
    trace.add("result", length=len(cycle))
    return cycle, trace


# ---------------------------------------------------------------------------
# trace audit


def validate_trace(g: Graph, trace: Trace) -> bool:
    """Check the monotonicity and entry inequalities recorded in a trace."""
    n = trace.n
    ok = True
    for ev in trace.events:
        d = ev.data
        if ev.op == "claim1_move":
            if not d.get("emitted") and d["k_after"] != d["k_before"] + 1:
                ok = False
        elif ev.op == "bootstrap":
            if d["branch"] not in ("ham_cycle", "skip_vertex"):
                if 2 * d["r"] < d["n"] or d["r"] < d["delta"] + 1:
                    ok = False
        elif ev.op == "partition_move":
            if not d.get("emitted") and d["r_after"] <= d["r_before"]:
                ok = False
        elif ev.op == "case2_enter":
            if 3 * d["r"] > 2 * d["n"]:
                ok = False
        elif ev.op == "spacing_stalled":
            if 3 * d["k_a"] > d["r"] or 3 * d["k_b"] > d["r"]:
                ok = False
        elif ev.op == "combine":
            if d["cycle_len"] < n - d["r_before"] // 2 + 1:
                ok = False
    return ok
