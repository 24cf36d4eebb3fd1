"""BFS layers around a root: balls D_d, spheres B_d, branches and bad edges.

Ties in the BFS are broken by ascending vertex index, so a decomposition is
a deterministic function of (graph, root, depth).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from math import comb
from typing import Optional

from .cycles import INFINITE, girth, count_paths
from .errors import NotATree, NotRegular, OddGirth, UnknownVertex, Acyclic
from .graph import Graph, is_regular, iter_bits


@dataclass(frozen=True)
class LayerDecomposition:
    root: int
    depth: int
    layer_of: dict  # vertex -> distance from root, only for vertices of D_depth
    tree_parent: dict  # vertex -> BFS parent (root maps to None)
    branch_of: dict  # vertex -> root neighbour heading its subtree (root maps to None)
    cross_edges: tuple  # edges inside D_depth that are not tree edges
    bad_edges: tuple  # (inside, outside) pairs leaving D_depth

    def layer(self, d: int) -> list[int]:
        return sorted(v for v, l in self.layer_of.items() if l == d)

    @property
    def ball(self) -> list[int]:
        return sorted(self.layer_of)


@dataclass(frozen=True)
class LayerProfile:
    k: int
    t: int
    counts: tuple  # counts[i-1] = n_i, vertices of B_t with i edges back to B_{t-1}

    def edge_sum(self) -> int:
        return sum(i * n for i, n in enumerate(self.counts, start=1))

    def pair_sum(self) -> int:
        return sum(comb(i, 2) * n for i, n in enumerate(self.counts, start=1))


@dataclass(frozen=True)
class Subbranch:
    branch: int
    parent: int
    members: tuple


@dataclass(frozen=True)
class BadEdge:
    inside: int
    outside: int
    branch: Optional[int]
    subbranch_parent: Optional[int]


@dataclass(frozen=True)
class BadEdgeReport:
    edges: tuple  # BadEdge records sorted by (inside, outside)
    by_outside: dict  # outside vertex -> tuple of inside endpoints


def decompose(g: Graph, root: int, depth: int) -> LayerDecomposition:
    if not 0 <= root < g.order:
        raise UnknownVertex(root)
    if depth < 0:
        raise ValueError("depth must be non-negative")
    adj = g.adjacency
    layer_of = {root: 0}
    parent = {root: None}
    branch = {root: None}
    q = deque([root])
    while q:
        u = q.popleft()
        if layer_of[u] == depth:
            continue
        for w in iter_bits(adj[u]):
            if w not in layer_of:
                layer_of[w] = layer_of[u] + 1
                parent[w] = u
                branch[w] = w if u == root else branch[u]
                q.append(w)
    tree = {(min(v, p), max(v, p)) for v, p in parent.items() if p is not None}
    cross = tuple(
        e for e in g.edges if e[0] in layer_of and e[1] in layer_of and e not in tree
    )
    bad = []
    for v in sorted(layer_of):
        for w in iter_bits(adj[v]):
            if w not in layer_of:
                bad.append((v, w))
    return LayerDecomposition(root, depth, layer_of, parent, branch, cross, tuple(bad))


def layer_profile(g: Graph, root: int) -> LayerProfile:
    """Counts n_i at the half-girth sphere; requires a regular graph of even girth."""
    k = is_regular(g)
    if k is None:
        raise NotRegular("layer profiles need a regular graph")
    gi = girth(g)
    if gi is INFINITE:
        raise Acyclic("graph has no cycle")
    if gi % 2:
        raise OddGirth(gi)
    t = gi // 2
    dec = decompose(g, root, t)
    counts = [0] * k
    adj = g.adjacency
    prev = 0
    for v in dec.layer(t - 1):
        prev |= 1 << v
    for v in dec.layer(t):
        i = (adj[v] & prev).bit_count()
        counts[i - 1] += 1
    return LayerProfile(k, t, tuple(counts))


def girth_cycles_through_root(g: Graph, root: int, length: int) -> int:
    adj = g.adjacency
    return sum(count_paths(adj, root, w, length - 1) for w in iter_bits(adj[root])) // 2


def _check_tree_below(dec: LayerDecomposition) -> None:
    d = dec.depth
    for a, b in dec.cross_edges:
        if dec.layer_of[a] < d or dec.layer_of[b] < d:
            raise NotATree(f"edge {(a, b)} closes a cycle below layer {d}")


def subbranches(dec: LayerDecomposition) -> list[Subbranch]:
    """Groups of outer-layer vertices sharing a tree parent, in parent order."""
    _check_tree_below(dec)
    if dec.depth < 2:
        raise NotATree("subbranches need depth at least 2")
    groups: dict[int, list[int]] = {}
    for v in dec.layer(dec.depth):
        groups.setdefault(dec.tree_parent[v], []).append(v)
    return [Subbranch(dec.branch_of[p], p, tuple(m)) for p, m in sorted(groups.items())]


def bad_edge_report(dec: LayerDecomposition) -> BadEdgeReport:
    records = []
    by_outside: dict[int, list[int]] = {}
    for inside, outside in dec.bad_edges:
        sub = dec.tree_parent[inside] if dec.depth >= 2 else None
        records.append(BadEdge(inside, outside, dec.branch_of[inside], sub))
        by_outside.setdefault(outside, []).append(inside)
    return BadEdgeReport(tuple(records), {w: tuple(v) for w, v in sorted(by_outside.items())})
