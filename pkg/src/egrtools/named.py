"""Small named graphs used as reference inputs (cages, complete graphs, ...)."""

from __future__ import annotations

from itertools import combinations
from typing import Sequence

from .graph import Graph


def lcf(n: int, shifts: Sequence[int], repeats: int) -> Graph:
    """Hamiltonian cubic graph from LCF notation ``[shifts]^repeats``."""
    edges = {(i, (i + 1) % n) for i in range(n)}
    seq = list(shifts) * repeats
    if len(seq) != n:
        raise ValueError("LCF sequence length must equal the order")
    for i, s in enumerate(seq):
        j = (i + s) % n
        edges.add((i, j))
    return Graph.from_edges(n, {(min(a, b), max(a, b)) for a, b in edges})


def complete(n: int) -> Graph:
    return Graph.from_edges(n, combinations(range(n), 2))


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph.from_edges(a + b, ((i, a + j) for i in range(a) for j in range(b)))


def cycle(n: int) -> Graph:
    return Graph.from_edges(n, ((i, (i + 1) % n) for i in range(n)))


def path(n: int) -> Graph:
    return Graph.from_edges(n, ((i, i + 1) for i in range(n - 1)))


def cube() -> Graph:
    return Graph.from_edges(8, ((a, a ^ (1 << i)) for a in range(8) for i in range(3) if a < a ^ (1 << i)))


def prism(n: int = 3) -> Graph:
    edges = [(i, (i + 1) % n) for i in range(n)]
    edges += [(n + i, n + (i + 1) % n) for i in range(n)]
    edges += [(i, n + i) for i in range(n)]
    return Graph.from_edges(2 * n, edges)


def petersen() -> Graph:
    edges = [(i, (i + 1) % 5) for i in range(5)]
    edges += [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    edges += [(i, i + 5) for i in range(5)]
    return Graph.from_edges(10, edges)


def heawood() -> Graph:
    return lcf(14, [5, -5], 7)


def mcgee() -> Graph:
    return lcf(24, [12, 7, -7], 8)


def tutte_coxeter() -> Graph:
    return lcf(30, [-13, -9, 7, -7, 9, 13], 5)


def dodecahedron() -> Graph:
    return lcf(20, [10, 7, 4, -4, -7, 10, -4, 7, -7, 4], 2)


def desargues() -> Graph:
    return lcf(20, [5, -5, 9, -9], 5)


def pappus() -> Graph:
    return lcf(18, [5, 7, -7, 7, -7, -5], 3)


def mobius_kantor() -> Graph:
    return lcf(16, [5, -5], 8)


def coxeter() -> Graph:
    """Non-Hamiltonian cubic graph on 28 vertices built from four 7-cycle orbits."""
    edges = []
    for i in range(7):
        a, b, c, d = i, 7 + i, 14 + i, 21 + i
        edges += [(a, (i + 1) % 7), (b, 7 + (i + 2) % 7), (c, 14 + (i + 3) % 7)]
        edges += [(a, d), (b, d), (c, d)]
    return Graph.from_edges(28, {(min(x, y), max(x, y)) for x, y in edges})


def crown(n: int) -> Graph:
    """K_{n,n} minus a perfect matching."""
    return Graph.from_edges(2 * n, ((i, n + j) for i in range(n) for j in range(n) if i != j))


def two_triangles_bridge() -> Graph:
    return Graph.from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])


REFERENCE = {
    "K4": complete(4),
    "K33": complete_bipartite(3, 3),
    "Q3": cube(),
    "Petersen": petersen(),
    "Heawood": heawood(),
    "TutteCoxeter": tutte_coxeter(),
}
"""The egr reference set; each entry's parameters are checked in the tests."""


def by_name(name: str) -> Graph:
    table = dict(REFERENCE)
    table.update({"McGee": mcgee(), "K5": complete(5), "K44": complete_bipartite(4, 4),
                  "Dodecahedron": dodecahedron(), "Desargues": desargues(), "Pappus": pappus(),
                  "MobiusKantor": mobius_kantor(), "Coxeter": coxeter()})
    try:
        return table[name]
    except KeyError:
        raise KeyError(f"unknown graph name {name!r}; known: {sorted(table)}") from None
