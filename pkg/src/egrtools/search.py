"""Isomorph-free generation of connected regular graphs, with egr pruning.

Graphs are grown one vertex at a time: the new vertex receives its whole
neighbour set among the vertices that still have spare degree. Every
intermediate graph is connected, has maximum degree at most k and girth at
least g, so every target is reachable by repeatedly deleting a non-cut
vertex. A child is kept only if its new vertex lies in the orbit of the
canonically chosen deletion vertex (canonical augmentation); isomorphic
siblings are removed by comparing certificates.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterator, Optional

from .canon import canonical_labeling, same_orbit
from .cycles import EgrParams, bfs_distances, is_egr, list_paths
from .errors import ParityViolation
from .graph import Graph, iter_bits, parse_graph6, write_graph6


@dataclass
class SearchOptions:
    lambda_pruning: bool = True
    threads: int = 1
    node_limit: Optional[int] = None
    time_limit: Optional[float] = None
    split_order: Optional[int] = None  # order at which subtrees become work units


@dataclass
class SearchOutcome:
    params: EgrParams
    examined_orders: list
    results: list  # canonical graph6 strings, sorted
    stats: dict = field(default_factory=dict)
    complete: bool = True

    def to_dict(self) -> dict:
        return {
            "params": {"v_max": self.params.v, "k": self.params.k, "g": self.params.g, "lambda": self.params.lam},
            "examined_orders": self.examined_orders,
            "results": self.results,
            "complete": self.complete,
            "stats": self.stats,
        }


def cut_vertices(adj: list[int]) -> int:
    """Bitmask of articulation points, taken over every component."""
    n = len(adj)
    disc = [-1] * n
    low = [0] * n
    cuts = 0
    timer = 0
    for root in range(n):
        if disc[root] >= 0:
            continue
        disc[root] = low[root] = timer
        timer += 1
        root_children = 0
        stack = [(root, -1, list(iter_bits(adj[root])))]
        while stack:
            v, parent, todo = stack[-1]
            if todo:
                w = todo.pop()
                if disc[w] < 0:
                    disc[w] = low[w] = timer
                    timer += 1
                    if v == root:
                        root_children += 1
                    stack.append((w, v, list(iter_bits(adj[w]))))
                elif w != parent:
                    low[v] = min(low[v], disc[w])
            else:
                stack.pop()
                if parent >= 0:
                    low[parent] = min(low[parent], low[v])
                    if parent != root and low[v] >= disc[parent]:
                        cuts |= 1 << parent
        if root_children > 1:
            cuts |= 1 << root
    return cuts


def _canonical_string(adj: list[int], perm: list[int]) -> str:
    n = len(adj)
    pos = [0] * n
    for i, v in enumerate(perm):
        pos[v] = i
    rows = [0] * n
    for v in range(n):
        r = 0
        for u in iter_bits(adj[v]):
            r |= 1 << pos[u]
        rows[pos[v]] = r
    return write_graph6(Graph(n, rows))


class _Node:
    __slots__ = ("adj", "counts")

    def __init__(self, adj, counts):
        self.adj = adj
        self.counts = counts


class _Generator:
    def __init__(self, k: int, g: int, v_max: int, lam: Optional[int], deadline, node_limit):
        self.k, self.g, self.v_max, self.lam = k, g, v_max, lam
        self.deadline = deadline
        self.node_limit = node_limit
        self.nodes = 0
        self.prunes: dict = {}
        self.truncated = False

    def _prune(self, rule: str) -> None:
        self.prunes[rule] = self.prunes.get(rule, 0) + 1

    def _neighbour_sets(self, adj: list[int], unsat: list[int]) -> Iterator[tuple[int, ...]]:
        """Subsets of open vertices whose members are pairwise far enough apart."""
        g = self.g
        far = {}
        for v in unsat:
            if g > 3:
                d = bfs_distances(adj, v, limit=g - 3)
                far[v] = {u for u in unsat if d[u] >= g - 2}
            else:
                far[v] = set(unsat) - {v}
        chosen: list[int] = []

        def rec(start: int):
            if chosen:
                yield tuple(chosen)
            if len(chosen) == self.k:
                return
            for i in range(start, len(unsat)):
                u = unsat[i]
                if all(u in far[c] for c in chosen):
                    chosen.append(u)
                    yield from rec(i + 1)
                    chosen.pop()

        yield from rec(0)

    def _accept(self, adj: list[int], w: int) -> Optional[tuple]:
        """Certificate of the child if ``w`` is its canonical deletion vertex, else ``None``."""
        n = len(adj)
        cuts = cut_vertices(adj)
        deg = [row.bit_count() for row in adj]

        def inv(v):
            return (deg[v], tuple(sorted(deg[u] for u in iter_bits(adj[v]))))

        noncut = [v for v in range(n) if not cuts >> v & 1]
        best = min(inv(v) for v in noncut)
        if inv(w) != best:
            return None
        perm, cert, auts = canonical_labeling(adj)
        pos = [0] * n
        for i, v in enumerate(perm):
            pos[v] = i
        c = max((v for v in noncut if inv(v) == best), key=lambda v: pos[v])
        if c != w:
            parent = list(range(n))

            def find(x):
                while parent[x] != x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                return x

            for gam in auts:
                for a, b in enumerate(gam):
                    ra, rb = find(a), find(b)
                    if ra != rb:
                        parent[max(ra, rb)] = min(ra, rb)
            if find(c) != find(w) and not same_orbit(adj, None, c, w):
                return None
        return cert, perm

    def _lambda_check(self, parent: list[int], child: list[int], nbrs: tuple[int, ...], counts: dict) -> Optional[str]:
        g, lam = self.g, self.lam
        w = len(parent)
        for i, a in enumerate(nbrs):
            for b in nbrs[i + 1:]:
                for p in list_paths(parent, a, b, g - 2):
                    cyc = (w,) + p
                    for j in range(g):
                        x, y = cyc[j], cyc[(j + 1) % g]
                        e = (x, y) if x < y else (y, x)
                        c = counts.get(e, 0) + 1
                        counts[e] = c
                        if c > lam:
                            return "edge_overflow"
        # an edge whose cycles are all present must already have lambda of them
        n = len(child)
        unsat = 0
        for v in range(n):
            if child[v].bit_count() < self.k:
                unsat |= 1 << v
        if unsat and n < self.v_max:
            far = 4 * n + 4
            du = [far] * n
            seen = frontier = unsat
            for v in iter_bits(unsat):
                du[v] = 0
            d = 0
            while frontier:
                nxt = 0
                for v in iter_bits(frontier):
                    nxt |= child[v]
                nxt &= ~seen
                d += 1
                for v in iter_bits(nxt):
                    du[v] = d
                seen |= nxt
                frontier = nxt
        else:
            du = None
        for a in range(n):
            for b in iter_bits(child[a] >> (a + 1) << (a + 1)):
                if du is None or du[a] + du[b] + 1 > g - 1:
                    if counts.get((a, b), 0) != lam:
                        return "edge_final"
        return None

    def children(self, node: _Node) -> list[_Node]:
        adj = node.adj
        m = len(adj)
        if m >= self.v_max:
            return []
        k = self.k
        unsat = [v for v in range(m) if adj[v].bit_count() < k]
        if not unsat:
            return []
        deficit = sum(k - adj[v].bit_count() for v in unsat)
        room = m + 1 < self.v_max
        out = []
        seen_certs = set()
        for nbrs in self._neighbour_sets(adj, unsat):
            new_deficit = deficit - 2 * len(nbrs) + k
            if new_deficit > k * (self.v_max - m - 1) or (not room and new_deficit):
                self._prune("degree")
                continue
            child = list(adj)
            row = 0
            for u in nbrs:
                child[u] |= 1 << m
                row |= 1 << u
            child.append(row)
            acc = self._accept(child, m)
            if acc is None:
                self._prune("canonical")
                continue
            cert = acc[0]
            if cert in seen_certs:
                self._prune("duplicate")
                continue
            seen_certs.add(cert)
            counts = None
            if self.lam is not None:
                counts = dict(node.counts)
                why = self._lambda_check(adj, child, nbrs, counts)
                if why:
                    self._prune(why)
                    continue
            out.append(_Node(child, counts))
        return out

    def walk(self, node: _Node, found: dict) -> None:
        self.nodes += 1
        if self.node_limit is not None and self.nodes > self.node_limit:
            self.truncated = True
            return
        if self.deadline is not None and self.nodes % 64 == 0 and time.monotonic() > self.deadline:
            self.truncated = True
            return
        adj = node.adj
        if all(row.bit_count() == self.k for row in adj):
            perm, _, _ = canonical_labeling(adj)
            found.setdefault(_canonical_string(adj, perm), len(adj))
            return
        for c in self.children(node):
            self.walk(c, found)
            if self.truncated:
                return


def _run_unit(args):
    k, g, v_max, lam, deadline, node_limit, adj, counts = args
    gen = _Generator(k, g, v_max, lam, deadline, node_limit)
    found: dict = {}
    gen.walk(_Node(adj, counts), found)
    return found, gen.nodes, gen.prunes, gen.truncated


def _generate(k: int, g: int, v_max: int, lam: Optional[int], opts: SearchOptions):
    deadline = None if opts.time_limit is None else time.monotonic() + opts.time_limit
    head = _Generator(k, g, v_max, lam, deadline, opts.node_limit)
    split = opts.split_order if opts.split_order is not None else min(v_max, k + 3)
    level = [_Node([0], {} if lam is not None else None)]
    found: dict = {}
    while level and len(level[0].adj) < split:
        nxt = []
        for node in level:
            head.nodes += 1
            if all(row.bit_count() == k for row in node.adj) and len(node.adj) > 1:
                perm, _, _ = canonical_labeling(node.adj)
                found.setdefault(_canonical_string(node.adj, perm), len(node.adj))
                continue
            nxt.extend(head.children(node))
        level = nxt
    units = [(k, g, v_max, lam, deadline, opts.node_limit, n.adj, n.counts) for n in level]
    if opts.threads > 1 and len(units) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=opts.threads) as pool:
            results = list(pool.map(_run_unit, units, chunksize=max(1, len(units) // (4 * opts.threads))))
    else:
        results = [_run_unit(u) for u in units]
    nodes = head.nodes
    prunes = dict(head.prunes)
    truncated = head.truncated
    for f, n, p, t in results:
        for s, order in f.items():
            found.setdefault(s, order)
        nodes += n
        for r, c in p.items():
            prunes[r] = prunes.get(r, 0) + c
        truncated = truncated or t
    stats = {"nodes": nodes, "prunes": dict(sorted(prunes.items())), "work_units": len(units)}
    return found, stats, not truncated


def generate_regular(k: int, g_min: int, v: int, options: Optional[SearchOptions] = None) -> list[str]:
    """Canonical graph6 strings of all connected k-regular graphs on v vertices with girth >= g_min."""
    if k * v % 2:
        raise ParityViolation(f"k*v = {k * v} is odd")
    if k < 1 or v < k + 1:
        return []
    opts = options or SearchOptions(lambda_pruning=False)
    found, _, _ = _generate(k, max(g_min, 3), v, None, opts)
    return sorted(s for s, order in found.items() if order == v)


def search_egr(k: int, g: int, lam: int, v_max: int, options: Optional[SearchOptions] = None) -> SearchOutcome:
    """Every connected egr(v, k, g, lambda) graph with v <= v_max, once up to isomorphism."""
    from .cases import feasibility_prefilter

    params = EgrParams(v_max, k, g, lam)
    opts = options or SearchOptions()
    orders = [v for v in range(k + 1, v_max + 1) if k * v % 2 == 0]
    reason = feasibility_prefilter(k, g, lam)
    if reason:
        return SearchOutcome(params, orders, [], {"prefilter": reason}, True)
    t0 = time.monotonic()
    found, stats, complete = _generate(k, g, v_max, lam if opts.lambda_pruning else None, opts)
    results = []
    for s in sorted(found):
        p = is_egr(parse_graph6(s))
        if p is not None and (p.k, p.g, p.lam) == (k, g, lam):
            results.append(s)
    stats["regular_graphs_seen"] = len(found)
    stats["seconds"] = round(time.monotonic() - t0, 3)
    return SearchOutcome(params, orders, results, stats, complete)
