"""graph6 and plain edge-list parsing/emission.

graph6 records store the upper triangle of the adjacency matrix in
column-major order ((0,1),(0,2),(1,2),(0,3),...) as big-endian 6-bit groups,
each biased by 63 into the printable range 63..126.  Sizes up to 62 use one
byte; larger sizes use the 126-prefixed extensions.
"""

from __future__ import annotations

from .errors import MalformedEdgeListError, MalformedGraph6Error
from .graph import Graph, build_graph

_HEADER = ">>graph6<<"


def strip_graph6_header(line: str) -> str:
    s = line.strip()
    if s.startswith(_HEADER):
        s = s[len(_HEADER):].strip()
    return s


def _decode_size(s: str) -> tuple[int, int]:
    """Return (n, index of first data char)."""
    if not s:
        raise MalformedGraph6Error("empty record")
    c0 = ord(s[0])
    if not 63 <= c0 <= 126:
        raise MalformedGraph6Error(f"size char out of range: {c0}")
    if c0 != 126:
        return c0 - 63, 1
    if len(s) < 2:
        raise MalformedGraph6Error("truncated size field")
    if ord(s[1]) != 126:
        if len(s) < 4:
            raise MalformedGraph6Error("truncated 18-bit size field")
        n = 0
        for ch in s[1:4]:
            v = ord(ch) - 63
            if not 0 <= v < 64:
                raise MalformedGraph6Error(f"size char out of range: {ord(ch)}")
            n = n << 6 | v
        return n, 4
    if len(s) < 8:
        raise MalformedGraph6Error("truncated 36-bit size field")
    n = 0
    for ch in s[2:8]:
        v = ord(ch) - 63
        if not 0 <= v < 64:
            raise MalformedGraph6Error(f"size char out of range: {ord(ch)}")
        n = n << 6 | v
    return n, 8


def parse_graph6(line: str, strict: bool = True) -> Graph:
    """Parse one graph6 record (an optional ``>>graph6<<`` header is allowed).

    With strict=True (the default) nonzero padding bits are rejected.
    """
    s = strip_graph6_header(line)
    n, start = _decode_size(s)
    m = n * (n - 1) // 2
    data = s[start:]
    expected = (m + 5) // 6
    if len(data) != expected:
        raise MalformedGraph6Error(
            f"expected {expected} data chars for n={n}, got {len(data)}")
    rows = [0] * n
    bit = 0
    for ch in data:
        v = ord(ch) - 63
        if not 0 <= v < 64:
            raise MalformedGraph6Error(f"data char out of range: {ord(ch)}")
        for k in range(5, -1, -1):
            if bit >= m:
                if strict and v >> k & 1:
                    raise MalformedGraph6Error("nonzero padding bits")
                bit += 1
                continue
            if v >> k & 1:
                i, j = _pair_of_bit(bit)
                rows[i] |= 1 << j
                rows[j] |= 1 << i
            bit += 1
    return Graph(n, tuple(rows))


def _pair_of_bit(b: int) -> tuple[int, int]:
    # Invert b = j(j-1)/2 + i with 0 <= i < j.
    j = int(((8 * b + 1) ** 0.5 + 1) / 2)
    while j * (j - 1) // 2 > b:
        j -= 1
    while (j + 1) * j // 2 <= b:
        j += 1
    i = b - j * (j - 1) // 2
    return i, j


def write_graph6(g: Graph) -> str:
    """Canonical graph6 encoding of the labeled graph."""
    n = g.n
    if n <= 62:
        size = chr(n + 63)
    elif n <= 258047:
        size = "~" + "".join(chr(63 + (n >> s & 63)) for s in (12, 6, 0))
    elif n <= 68719476735:
        size = "~~" + "".join(chr(63 + (n >> s & 63)) for s in (30, 24, 18, 12, 6, 0))
    else:
        raise MalformedGraph6Error(f"n={n} exceeds the graph6 size limit")
    out = []
    acc = 0
    nbits = 0
    for j in range(1, n):
        col = g.adj[j] & ((1 << j) - 1)
        for i in range(j):
            acc = acc << 1 | (col >> i & 1)
            nbits += 1
            if nbits == 6:
                out.append(chr(acc + 63))
                acc = 0
                nbits = 0
    if nbits:
        out.append(chr((acc << (6 - nbits)) + 63))
    return size + "".join(out)


def parse_edge_list(text: str) -> Graph:
    """Parse the plain format: first line ``n m``, then m lines ``u v``."""
    lines = [ln for ln in (raw.strip() for raw in text.splitlines()) if ln]
    if not lines:
        raise MalformedEdgeListError("empty document")
    head = lines[0].split()
    if len(head) != 2:
        raise MalformedEdgeListError(f"bad header: {lines[0]!r}")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError:
        raise MalformedEdgeListError(f"bad header: {lines[0]!r}") from None
    if n < 0 or m < 0:
        raise MalformedEdgeListError("negative counts in header")
    if len(lines) - 1 != m:
        raise MalformedEdgeListError(
            f"header declares {m} edges, found {len(lines) - 1} lines")
    edges = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise MalformedEdgeListError(f"bad edge line: {ln!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise MalformedEdgeListError(f"bad edge line: {ln!r}") from None
        edges.append((u, v))
    return build_graph(n, edges)


def write_edge_list(g: Graph) -> str:
    """Emit ``n m`` then one sorted ``u v`` line per edge."""
    edges = sorted(g.edges())
    lines = [f"{g.n} {len(edges)}"]
    lines.extend(f"{u} {v}" for u, v in edges)
    return "\n".join(lines)
