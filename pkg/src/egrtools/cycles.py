"""Girth and exact counts of shortest cycles through edges, vertices and paths.

Cycles are undirected: each one is counted once regardless of orientation.
The counting kernel is a depth-first search for simple paths of a fixed
length between two vertices, pruned by BFS distances to the target.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import Acyclic, NotAnEdge, NotAPath, UnknownVertex
from .graph import Graph, is_regular, iter_bits


class _InfiniteType:
    """Girth of an acyclic graph. Deliberately supports no arithmetic."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "Infinite"

    def __reduce__(self):
        return (_InfiniteType, ())


INFINITE = _InfiniteType()


def bfs_distances(adj: Sequence[int], source: int, limit: Optional[int] = None, blocked: int = 0) -> list[int]:
    """Distances from ``source``; unreachable (or beyond ``limit``) is ``len(adj)+1``."""
    n = len(adj)
    far = n + 1
    dist = [far] * n
    dist[source] = 0
    seen = (1 << source) | blocked
    frontier = 1 << source
    d = 0
    while frontier and (limit is None or d < limit):
        nxt = 0
        for v in iter_bits(frontier):
            nxt |= adj[v]
        nxt &= ~seen
        d += 1
        for v in iter_bits(nxt):
            dist[v] = d
        seen |= nxt
        frontier = nxt
    return dist


def girth_of_rows(adj: Sequence[int]) -> int | _InfiniteType:
    n = len(adj)
    best = None
    for root in range(n):
        dist = [-1] * n
        parent = [-1] * n
        dist[root] = 0
        q = deque([root])
        while q:
            u = q.popleft()
            if best is not None and 2 * dist[u] >= best:
                break
            for w in iter_bits(adj[u]):
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    q.append(w)
                elif w != parent[u]:
                    length = dist[u] + dist[w] + 1
                    if best is None or length < best:
                        best = length
    return INFINITE if best is None else best


def girth(g: Graph) -> int | _InfiniteType:
    """Length of a shortest cycle, or ``INFINITE`` for forests."""
    return girth_of_rows(g.adjacency)


def count_paths(adj: Sequence[int], start: int, target: int, length: int, blocked: int = 0) -> int:
    """Number of simple paths with exactly ``length`` edges from start to target.

    Vertices in ``blocked`` are never visited; ``start`` must not be blocked.
    """
    if length < 1:
        return 0
    dist = bfs_distances(adj, target, limit=length, blocked=blocked & ~(1 << target))
    if dist[start] > length:
        return 0
    tbit = 1 << target

    def rec(v: int, used: int, left: int) -> int:
        if left == 1:
            return 1 if adj[v] & tbit else 0
        total = 0
        for w in iter_bits(adj[v] & ~used & ~tbit):
            if dist[w] < left:
                total += rec(w, used | (1 << w), left - 1)
        return total

    return rec(start, blocked | (1 << start), length)


def list_paths(adj: Sequence[int], start: int, target: int, length: int, blocked: int = 0) -> list[tuple[int, ...]]:
    """Like :func:`count_paths` but returns the vertex sequences."""
    if length < 1:
        return []
    dist = bfs_distances(adj, target, limit=length, blocked=blocked & ~(1 << target))
    if dist[start] > length:
        return []
    tbit = 1 << target
    out: list[tuple[int, ...]] = []

    def rec(path: list[int], used: int, left: int) -> None:
        v = path[-1]
        if left == 1:
            if adj[v] & tbit:
                out.append(tuple(path) + (target,))
            return
        for w in iter_bits(adj[v] & ~used & ~tbit):
            if dist[w] < left:
                path.append(w)
                rec(path, used | (1 << w), left - 1)
                path.pop()

    rec([start], blocked | (1 << start), length)
    return out


def _edge_key(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


def count_g_cycles_through_edge(g: Graph, e: tuple[int, int], length: int) -> int:
    """Cycles of the given length that contain edge ``e``."""
    a, b = e
    if not g.has_edge(a, b):
        raise NotAnEdge(e)
    if length < 3:
        raise ValueError("cycle length must be at least 3")
    return count_paths(g.adjacency, a, b, length - 1)


def count_g_cycles_through_vertex(g: Graph, x: int, length: int) -> int:
    if not 0 <= x < g.order:
        raise UnknownVertex(x)
    total = sum(count_g_cycles_through_edge(g, (x, y), length) for y in g.neighbors(x))
    return total // 2


def _validate_path(g: Graph, p: Sequence[int], length: int) -> None:
    if len(p) < 2 or len(p) > length:
        raise NotAPath(f"path must have between 2 and {length} vertices")
    if len(set(p)) != len(p):
        raise NotAPath("path repeats a vertex")
    for a, b in zip(p, p[1:]):
        if not g.has_edge(a, b):
            raise NotAPath(f"{a} and {b} are not adjacent")


def count_g_cycles_through_path(g: Graph, p: Sequence[int], length: int) -> int:
    """Cycles of the given length containing ``p`` as a consecutive segment."""
    _validate_path(g, p, length)
    rest = length - (len(p) - 1)
    interior = 0
    for v in p[1:-1]:
        interior |= 1 << v
    if rest == 1:
        return 1 if g.has_edge(p[-1], p[0]) else 0
    return count_paths(g.adjacency, p[-1], p[0], rest, blocked=interior)


def cycles_of_length(adj: Sequence[int], length: int) -> list[tuple[int, ...]]:
    """Every simple cycle of the given length, once each.

    A cycle is reported starting at its smallest vertex, oriented so that the
    second vertex is smaller than the last.
    """
    n = len(adj)
    out: list[tuple[int, ...]] = []
    for s in range(n):
        above = ((1 << n) - 1) >> (s + 1) << (s + 1)
        blocked = ~above & ((1 << n) - 1) & ~(1 << s)
        for w in iter_bits(adj[s] & above):
            # close back to s from the larger end only
            for p in list_paths(adj, w, s, length - 1, blocked=blocked):
                if p[0] < p[-2]:
                    out.append((s,) + p[:-1])
    out.sort()
    return out


def enumerate_shortest_cycles(g: Graph) -> list[tuple[int, ...]]:
    gi = girth(g)
    if gi is INFINITE:
        raise Acyclic("graph has no cycle")
    return cycles_of_length(g.adjacency, gi)


@dataclass(frozen=True)
class LambdaProfile:
    girth: int
    edge_counts: dict
    vertex_counts: dict

    @property
    def total_cycles(self) -> int:
        return sum(self.vertex_counts.values()) // self.girth

    def constant_lambda(self) -> Optional[int]:
        vals = set(self.edge_counts.values())
        return vals.pop() if len(vals) == 1 else None


@dataclass(frozen=True)
class EgrParams:
    v: Optional[int]  # None when the order is left open
    k: int
    g: int
    lam: int

    def __post_init__(self):
        if (self.v is not None and self.v < 1) or self.k < 3 or self.g < 3 or self.lam < 1:
            raise ValueError(f"invalid egr parameters {self}")
        if self.k * self.lam % 2:
            raise ValueError("k*lambda must be even")

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.v, self.k, self.g, self.lam)

    def __str__(self) -> str:
        v = "v" if self.v is None else self.v
        return f"egr({v},{self.k},{self.g},{self.lam})"


def lambda_profile(g: Graph) -> LambdaProfile:
    gi = girth(g)
    if gi is INFINITE:
        raise Acyclic("graph has no cycle")
    adj = g.adjacency
    edge_counts = {e: count_paths(adj, e[0], e[1], gi - 1) for e in g.edges}
    half = [0] * g.order
    for (a, b), c in edge_counts.items():
        half[a] += c
        half[b] += c
    vertex_counts = {v: half[v] // 2 for v in range(g.order)}
    return LambdaProfile(gi, edge_counts, vertex_counts)


def is_egr(g: Graph) -> Optional[EgrParams]:
    """Parameters ``(v, k, g, lambda)`` if ``g`` is edge-girth-regular, else ``None``."""
    k = is_regular(g)
    if k is None or k < 3:
        return None
    gi = girth(g)
    if gi is INFINITE:
        return None
    lam = lambda_profile(g).constant_lambda()
    if lam is None or lam < 1:
        return None
    return EgrParams(g.order, k, gi, lam)
