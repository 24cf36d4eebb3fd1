"""Canonical labelling by partition refinement and individualisation.

Cells are refined until equitable; the search then individualises each vertex
of the first smallest non-trivial cell in turn. Leaves are compared by the
relabelled adjacency rows and the smallest one wins. Automorphisms discovered
along the way (two leaves with equal certificates) prune sibling branches that
lie in one orbit of the pointwise stabiliser of the current prefix.

Correctness for small orders is cross-checked against brute force in the tests.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Hashable, Optional, Sequence

from .graph import Graph, iter_bits, write_graph6


@dataclass(frozen=True)
class CanonicalForm:
    canonical_label: tuple[int, ...]  # canonical_label[v] = new index of v
    canonical_string: str


def _mask(cell: Sequence[int]) -> int:
    m = 0
    for v in cell:
        m |= 1 << v
    return m


def _refine(adj: Sequence[int], cells: list[tuple[int, ...]], splitters: list[int]) -> list[tuple[int, ...]]:
    queue = deque(splitters)
    n_cells = len(cells)
    n = sum(len(c) for c in cells)
    while queue and n_cells < n:
        w = queue.popleft()
        out = []
        for c in cells:
            if len(c) == 1:
                out.append(c)
                continue
            counts = [(adj[v] & w).bit_count() for v in c]
            lo = min(counts)
            if lo == max(counts):
                out.append(c)
                continue
            groups: dict[int, list[int]] = {}
            for v, k in zip(c, counts):
                groups.setdefault(k, []).append(v)
            for k in sorted(groups):
                part = tuple(groups[k])
                out.append(part)
                queue.append(_mask(part))
            n_cells += len(groups) - 1
        cells = out
    return cells


class _Searcher:
    def __init__(self, adj: Sequence[int], n: int):
        self.adj = adj
        self.n = n
        self.best_cert: Optional[tuple[int, ...]] = None
        self.best_perm: Optional[list[int]] = None
        self.first_cert: Optional[tuple[int, ...]] = None
        self.first_perm: Optional[list[int]] = None
        self.auts: list[tuple[int, ...]] = []
        self.leaves = 0

    def _cert(self, perm: list[int]) -> tuple[int, ...]:
        pos = [0] * self.n
        for i, v in enumerate(perm):
            pos[v] = i
        adj = self.adj
        rows = []
        for v in perm:
            r = 0
            for u in iter_bits(adj[v]):
                r |= 1 << pos[u]
            rows.append(r)
        return tuple(rows)

    def _leaf(self, cells: list[tuple[int, ...]]) -> None:
        self.leaves += 1
        perm = [c[0] for c in cells]
        cert = self._cert(perm)
        if self.first_cert is None:
            self.first_cert, self.first_perm = cert, perm
            self.best_cert, self.best_perm = cert, perm
            return
        for ref_cert, ref_perm in ((self.first_cert, self.first_perm), (self.best_cert, self.best_perm)):
            if cert == ref_cert:
                gamma = [0] * self.n
                for a, b in zip(ref_perm, perm):
                    gamma[a] = b
                g = tuple(gamma)
                if g != tuple(range(self.n)) and g not in self.auts:
                    self.auts.append(g)
                return
        if cert < self.best_cert:
            self.best_cert, self.best_perm = cert, perm

    def _orbit_roots(self, prefix: list[int]) -> list[int]:
        parent = list(range(self.n))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for g in self.auts:
            if all(g[p] == p for p in prefix):
                for a, b in enumerate(g):
                    ra, rb = find(a), find(b)
                    if ra != rb:
                        parent[max(ra, rb)] = min(ra, rb)
        return [find(x) for x in range(self.n)]

    def run(self, cells: list[tuple[int, ...]], prefix: list[int]) -> None:
        if len(cells) == self.n:
            self._leaf(cells)
            return
        idx = min((i for i, c in enumerate(cells) if len(c) > 1), key=lambda i: (len(cells[i]), i))
        target = cells[idx]
        explored: list[int] = []
        for v in target:
            if explored:
                roots = self._orbit_roots(prefix)
                if any(roots[v] == roots[u] for u in explored):
                    continue
            explored.append(v)
            rest = tuple(u for u in target if u != v)
            child = cells[:idx] + [(v,), rest] + cells[idx + 1:]
            self.run(_refine(self.adj, child, [1 << v]), prefix + [v])


def _initial_cells(n: int, colors: Optional[Sequence[Hashable]]) -> list[tuple[int, ...]]:
    if colors is None:
        return [tuple(range(n))] if n else []
    if len(colors) != n:
        raise ValueError("one color per vertex required")
    groups: dict = {}
    for v, c in enumerate(colors):
        groups.setdefault(c, []).append(v)
    return [tuple(groups[c]) for c in sorted(groups)]


def canonical_labeling(
    adj: Sequence[int], colors: Optional[Sequence[Hashable]] = None
) -> tuple[list[int], tuple[int, ...], list[tuple[int, ...]]]:
    """Canonically order the vertices of a graph given by bit rows.

    Returns ``(perm, certificate, automorphisms)`` where ``perm[i]`` is the
    vertex placed at canonical position ``i`` and ``certificate`` is the tuple
    of relabelled rows. Colors, if given, must be sortable; vertices are only
    mapped onto vertices of equal color.
    """
    n = len(adj)
    if n == 0:
        return [], (), []
    cells = _initial_cells(n, colors)
    cells = _refine(adj, cells, [_mask(c) for c in cells])
    s = _Searcher(adj, n)
    s.run(cells, [])
    return s.best_perm, s.best_cert, s.auts


def certificate(adj: Sequence[int], colors: Optional[Sequence[Hashable]] = None) -> tuple:
    """Hashable isomorphism certificate (includes the sorted color multiset)."""
    perm, cert, _ = canonical_labeling(adj, colors)
    col = tuple(colors[v] for v in perm) if colors is not None else ()
    return (len(adj), cert, col)


def same_orbit(adj: Sequence[int], colors: Optional[Sequence[Hashable]], a: int, b: int) -> bool:
    """Exact test whether some color-preserving automorphism maps ``a`` to ``b``."""
    if a == b:
        return True
    base = list(colors) if colors is not None else [0] * len(adj)
    ca = [(c, 0) for c in base]
    cb = list(ca)
    ca[a] = (base[a], 1)
    cb[b] = (base[b], 1)
    return certificate(adj, ca) == certificate(adj, cb)


def orbit_partition(adj: Sequence[int], colors: Optional[Sequence[Hashable]] = None) -> list[int]:
    """Orbit representative (smallest member) for every vertex.

    Orbits under the automorphisms found by the search are merged first, then
    any remaining candidates are settled with :func:`same_orbit`, so the
    result is exact.
    """
    n = len(adj)
    _, _, auts = canonical_labeling(adj, colors)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in auts:
        for a, b in enumerate(g):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    roots = sorted({find(x) for x in range(n)})
    # merge roots that are still in one orbit; cheap invariants first
    for i, r in enumerate(roots):
        if find(r) != r:
            continue
        for s in roots[i + 1:]:
            if find(s) != s:
                continue
            if colors is not None and colors[r] != colors[s]:
                continue
            if adj[r].bit_count() != adj[s].bit_count():
                continue
            if same_orbit(adj, colors, r, s):
                parent[s] = r
    return [find(x) for x in range(n)]


def canonical_form(g: Graph) -> CanonicalForm:
    """Canonical relabelling of ``g``; isomorphic graphs get equal strings."""
    perm, _, _ = canonical_labeling(g.adjacency)
    label = [0] * g.order
    for i, v in enumerate(perm):
        label[v] = i
    return CanonicalForm(tuple(label), write_graph6(g.relabel(label)))


def canonical_string(g: Graph) -> str:
    return canonical_form(g).canonical_string
