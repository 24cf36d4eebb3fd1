"""Immutable simple graphs on dense vertex indices, graph6 I/O and basic queries.

Adjacency is stored as one Python int per vertex, bit ``j`` of row ``i`` set
iff ``i`` and ``j`` are adjacent. Everything else in the package builds on
these bit rows.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Iterator, Optional, Sequence

from .errors import MalformedEncoding, UnknownVertex, UnsupportedOrder

GRAPH6_HEADER = ">>graph6<<"
SHORT_MAX = 62
LONG_MAX = 258047


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Graph:
    """Simple undirected graph with vertices ``0..order-1``.

    Instances are immutable and hashable; equality is vertex-for-vertex.
    """

    __slots__ = ("_order", "_adj", "_edges", "_hash")

    def __init__(self, order: int, adjacency: Sequence[int]):
        if order < 0 or len(adjacency) != order:
            raise ValueError("adjacency must have one row per vertex")
        full = (1 << order) - 1
        rows = tuple(int(r) for r in adjacency)
        for i, row in enumerate(rows):
            if row & ~full:
                raise ValueError(f"row {i} references a vertex outside 0..{order - 1}")
            if row >> i & 1:
                raise ValueError(f"vertex {i} is adjacent to itself")
            for j in iter_bits(row):
                if not rows[j] >> i & 1:
                    raise ValueError(f"asymmetric adjacency between {i} and {j}")
        self._order = order
        self._adj = rows
        self._edges = tuple(
            (i, j) for i in range(order) for j in iter_bits(rows[i] >> (i + 1) << (i + 1))
        )
        self._hash = None

    @classmethod
    def from_edges(cls, order: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        rows = [0] * order
        for a, b in edges:
            if a == b:
                raise ValueError(f"loop at vertex {a}")
            if not (0 <= a < order and 0 <= b < order):
                raise UnknownVertex((a, b))
            rows[a] |= 1 << b
            rows[b] |= 1 << a
        return cls(order, rows)

    @classmethod
    def empty(cls, order: int) -> "Graph":
        return cls(order, [0] * order)

    @property
    def order(self) -> int:
        return self._order

    @property
    def adjacency(self) -> tuple[int, ...]:
        return self._adj

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return self._edges

    @property
    def size(self) -> int:
        return len(self._edges)

    def _check(self, v: int) -> None:
        if not 0 <= v < self._order:
            raise UnknownVertex(v)

    def degree(self, v: int) -> int:
        self._check(v)
        return self._adj[v].bit_count()

    def degrees(self) -> list[int]:
        return [row.bit_count() for row in self._adj]

    def neighbors(self, v: int) -> list[int]:
        self._check(v)
        return list(iter_bits(self._adj[v]))

    def has_edge(self, a: int, b: int) -> bool:
        return 0 <= a < self._order and 0 <= b < self._order and bool(self._adj[a] >> b & 1)

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Return the graph in which old vertex ``v`` becomes ``perm[v]``."""
        if sorted(perm) != list(range(self._order)):
            raise ValueError("perm must be a permutation of the vertex set")
        return Graph.from_edges(self._order, ((perm[a], perm[b]) for a, b in self._edges))

    def induced(self, vertices: Iterable[int]) -> "Graph":
        """Induced subgraph, re-indexed densely in ascending vertex order."""
        keep = sorted(set(vertices))
        index = {v: i for i, v in enumerate(keep)}
        return Graph.from_edges(
            len(keep), ((index[a], index[b]) for a, b in self._edges if a in index and b in index)
        )

    def without_edges(self, removed: Iterable[tuple[int, int]]) -> "Graph":
        gone = {(min(a, b), max(a, b)) for a, b in removed}
        return Graph.from_edges(self._order, (e for e in self._edges if e not in gone))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self._order == other._order and self._adj == other._adj

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._order, self._adj))
        return self._hash

    def __repr__(self) -> str:
        return f"Graph(order={self._order}, size={self.size})"


def disjoint_union(*graphs: Graph) -> Graph:
    edges = []
    offset = 0
    for g in graphs:
        edges.extend((a + offset, b + offset) for a, b in g.edges)
        offset += g.order
    return Graph.from_edges(offset, edges)


# ---------------------------------------------------------------- graph6


def _decode_order(data: bytes) -> tuple[int, int]:
    """Return (order, number of bytes consumed by the order word)."""
    if not data:
        raise MalformedEncoding("empty graph6 string")
    if data[0] != 126:
        return data[0] - 63, 1
    if len(data) >= 2 and data[1] == 126:
        raise MalformedEncoding("orders above 258047 are not supported")
    if len(data) < 4:
        raise MalformedEncoding("truncated long-form order word")
    n = 0
    for c in data[1:4]:
        n = (n << 6) | (c - 63)
    return n, 4


def parse_graph6(text: str) -> Graph:
    """Decode one graph6 word (an optional ``>>graph6<<`` prefix is skipped)."""
    s = text.strip()
    if s.startswith(GRAPH6_HEADER):
        s = s[len(GRAPH6_HEADER):]
    try:
        data = s.encode("ascii")
    except UnicodeEncodeError as exc:
        raise MalformedEncoding("graph6 must be printable ASCII") from exc
    for c in data:
        if c < 63 or c > 126:
            raise MalformedEncoding(f"character {chr(c)!r} outside the graph6 range")
    n, start = _decode_order(data)
    if n > LONG_MAX:
        raise MalformedEncoding(f"order {n} above supported range")
    nbits = n * (n - 1) // 2
    nbytes = (nbits + 5) // 6
    body = data[start:]
    if len(body) != nbytes:
        raise MalformedEncoding(
            f"expected {nbytes} adjacency characters for order {n}, found {len(body)}"
        )
    rows = [0] * n
    bit = 0
    total = 0
    for c in body:
        total = (total << 6) | (c - 63)
    total_bits = nbytes * 6
    # walk the upper triangle column by column: (0,1),(0,2),(1,2),(0,3),...
    for j in range(1, n):
        for i in range(j):
            if total >> (total_bits - 1 - bit) & 1:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
            bit += 1
    return Graph(n, rows)


def write_graph6(g: Graph) -> str:
    """Encode ``g`` as graph6 with zero padding bits."""
    n = g.order
    if n > LONG_MAX:
        raise UnsupportedOrder(n)
    if n <= SHORT_MAX:
        out = [chr(63 + n)]
    else:
        out = ["~"] + [chr(63 + ((n >> s) & 63)) for s in (12, 6, 0)]
    adj = g.adjacency
    bits = []
    for j in range(1, n):
        row = adj[j]
        for i in range(j):
            bits.append(row >> i & 1)
    bits.extend([0] * (-len(bits) % 6))
    for p in range(0, len(bits), 6):
        v = 0
        for b in bits[p:p + 6]:
            v = (v << 1) | b
        out.append(chr(63 + v))
    return "".join(out)


def read_graph6_lines(lines: Iterable[str]) -> Iterator[Graph]:
    """Parse a graph6 file body: one graph per non-blank line, header tolerated."""
    for line in lines:
        s = line.strip()
        if not s:
            continue
        if s == GRAPH6_HEADER:
            continue
        yield parse_graph6(s)


# ---------------------------------------------------------------- queries


def is_regular(g: Graph) -> Optional[int]:
    """Common degree of all vertices, or ``None`` if degrees differ or g is empty."""
    if g.order == 0:
        return None
    degs = set(g.degrees())
    return degs.pop() if len(degs) == 1 else None


def connected_components(g: Graph) -> list[list[int]]:
    """Vertex sets of the components, ordered by their smallest vertex."""
    seen = 0
    comps = []
    adj = g.adjacency
    for s in range(g.order):
        if seen >> s & 1:
            continue
        comp = 1 << s
        frontier = 1 << s
        while frontier:
            nxt = 0
            for v in iter_bits(frontier):
                nxt |= adj[v]
            frontier = nxt & ~comp
            comp |= frontier
        seen |= comp
        comps.append(list(iter_bits(comp)))
    return comps


def is_connected(g: Graph) -> bool:
    return g.order > 0 and len(connected_components(g)) == 1


def _max_flow_cut(g: Graph, s: int, t: int) -> tuple[int, int]:
    """Unit-capacity max flow between s and t; returns (value, source-side mask)."""
    n = g.order
    adj = g.adjacency
    # flow[(u, v)] = 1 if one unit is routed u -> v across edge uv
    flow: dict[tuple[int, int], int] = {}
    value = 0
    while True:
        parent = {s: -1}
        q = deque([s])
        while q and t not in parent:
            u = q.popleft()
            for w in iter_bits(adj[u]):
                if w in parent:
                    continue
                # residual capacity of u -> w is 1 - f(u,w) + f(w,u)
                if flow.get((u, w), 0) - flow.get((w, u), 0) < 1:
                    parent[w] = u
                    q.append(w)
        if t not in parent:
            side = 0
            for v in parent:
                side |= 1 << v
            return value, side
        w = t
        while parent[w] != -1:
            u = parent[w]
            if flow.get((w, u), 0):
                flow[(w, u)] = 0
            else:
                flow[(u, w)] = 1
            w = u
        value += 1
        if value > n * n:
            raise RuntimeError("max-flow failed to terminate")


def min_edge_cut(g: Graph) -> list[tuple[int, int]]:
    """A minimum edge cut (sorted edge list); empty for disconnected graphs."""
    if g.order < 2:
        raise ValueError("edge connectivity needs at least two vertices")
    if not is_connected(g):
        return []
    best = None
    best_side = 0
    for t in range(1, g.order):
        value, side = _max_flow_cut(g, 0, t)
        if best is None or value < best:
            best, best_side = value, side
    return [(a, b) for a, b in g.edges if (best_side >> a & 1) != (best_side >> b & 1)]


def edge_connectivity(g: Graph) -> int:
    """Minimum edge-cut size via unit max-flow from vertex 0 to every other vertex.

    Disconnected graphs return 0 rather than raising.
    """
    if g.order < 2:
        raise ValueError("edge connectivity needs at least two vertices")
    if not is_connected(g):
        return 0
    return min(_max_flow_cut(g, 0, t)[0] for t in range(1, g.order))
