"""Executable forms of the structural lemmas about egr graphs.

Every check takes the hypothesised parameters explicitly, so it can be run
against graphs that are not egr at all; a failing check returns concrete
witnesses that :func:`verify_witness` re-derives from the graph alone.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import ceil, comb
from typing import Iterable, Optional, Sequence

from .cycles import (
    INFINITE,
    EgrParams,
    count_g_cycles_through_path,
    count_g_cycles_through_vertex,
    cycles_of_length,
    girth,
    is_egr,
)
from .errors import BadCandidate, NotApplicable
from .graph import Graph, edge_connectivity, is_connected, iter_bits, min_edge_cut, write_graph6, parse_graph6

EXHAUSTIVE_LIMIT = 10**6


@dataclass
class CheckResult:
    check_name: str
    passed: bool
    witnesses: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "check_name": self.check_name,
            "passed": self.passed,
            "witnesses": self.witnesses,
            "details": self.details,
        }


def _result(name: str, witnesses: list, **details) -> CheckResult:
    return CheckResult(name, not witnesses, witnesses, details)


def half_up(x: int) -> int:
    """ceil(x / 2) for possibly negative x."""
    return -((-x) // 2)


def path_bound_order(g_len: int) -> int:
    """Vertex count u of the longest path that fits on at most one shortest cycle."""
    return half_up(g_len + 3)


def path_bound(k: int, g_len: int, vertices: int) -> Optional[int]:
    """Upper bound on shortest cycles through a path with ``vertices`` vertices."""
    u = path_bound_order(g_len)
    if vertices >= u:
        return 1
    i = u - vertices
    if i > u - 3 or vertices < 3:
        return None
    return (k - 1) ** i


def nonincident_bound(k: int, g_len: int) -> int:
    if g_len < 5:
        raise NotApplicable("the non-incident edge bound needs girth at least 5")
    return (k - 1) ** half_up(g_len - 5)


def _segments(cycle: Sequence[int], m: int) -> Iterable[tuple[int, ...]]:
    n = len(cycle)
    for i in range(n):
        seg = tuple(cycle[(i + j) % n] for j in range(m))
        yield seg if seg <= seg[::-1] else seg[::-1]


def _cycle_edges(cycle: Sequence[int]) -> list[tuple[int, int]]:
    n = len(cycle)
    return [tuple(sorted((cycle[i], cycle[(i + 1) % n]))) for i in range(n)]


def _girth_or_fail(g: Graph) -> int:
    gi = girth(g)
    if gi is INFINITE:
        raise NotApplicable("graph has no cycle")
    return gi


# ---------------------------------------------------------------- checks


def check_vertex_cycle_count(g: Graph, params: EgrParams) -> CheckResult:
    expected = params.k * params.lam // 2
    wit = []
    for x in range(g.order):
        c = count_g_cycles_through_vertex(g, x, params.g)
        if c != expected:
            wit.append({"kind": "vertex_cycles", "vertex": x, "length": params.g,
                        "observed": c, "expected": expected})
    return _result("vertex_cycle_count", wit, expected=expected)


def _intersection_components(c1: Sequence[int], c2: Sequence[int]) -> tuple[int, int]:
    """(number of components, number of edges) of the common subgraph of two cycles."""
    verts = set(c1) & set(c2)
    edges = set(_cycle_edges(c1)) & set(_cycle_edges(c2))
    parent = {v: v for v in verts}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        parent[find(a)] = find(b)
    return len({find(v) for v in verts}), len(edges)


def _intersection_violates(c1, c2, length: int) -> Optional[int]:
    comps, nedges = _intersection_components(c1, c2)
    if comps > 1 and (nedges > 0 or length % 2 == 1):
        return comps
    return None


def check_cycle_intersections(g: Graph, length: Optional[int] = None) -> CheckResult:
    """Pairs of cycles whose common subgraph is disconnected where it must not be.

    ``length`` defaults to the girth; passing a longer length probes the
    statement on cycles that are not shortest.
    """
    L = _girth_or_fail(g) if length is None else length
    cycles = cycles_of_length(g.adjacency, L)
    wit = []
    for c1, c2 in combinations(cycles, 2):
        comps = _intersection_violates(c1, c2, L)
        if comps is not None:
            wit.append({"kind": "cycle_pair", "cycles": [list(c1), list(c2)], "length": L,
                        "observed": comps, "bound": 1})
    return _result("cycle_intersections", wit, length=L, cycles=len(cycles))


def _segment_counts(cycles, lengths: Iterable[int]) -> dict:
    counts: dict = {}
    for c in cycles:
        for m in lengths:
            for seg in _segments(c, m):
                counts[seg] = counts.get(seg, 0) + 1
    return counts


def check_path_containment_bounds(g: Graph, k: int) -> CheckResult:
    gi = _girth_or_fail(g)
    u = path_bound_order(gi)
    sizes = list(range(3, u + 1))
    counts = _segment_counts(cycles_of_length(g.adjacency, gi), sizes)
    wit = []
    for seg, c in sorted(counts.items()):
        b = path_bound(k, gi, len(seg))
        if c > b:
            wit.append({"kind": "path", "path": list(seg), "length": gi, "observed": c, "bound": b})
    bounds = {m: path_bound(k, gi, m) for m in sizes}
    return _result("path_containment_bounds", wit, u=u, bounds=bounds)


def all_p3(g: Graph) -> list[tuple[int, int, int]]:
    out = []
    for x in range(g.order):
        for a, b in combinations(g.neighbors(x), 2):
            out.append((a, x, b))
    return out


def check_p3_exact(g: Graph, params: EgrParams) -> CheckResult:
    if params.k != 3 or params.lam % 2:
        raise NotApplicable("the exact P3 count needs k = 3 and even lambda")
    t = params.lam // 2
    counts = _segment_counts(cycles_of_length(g.adjacency, params.g), [3])
    wit = []
    for p in all_p3(g):
        c = counts.get(p, 0)
        if c != t:
            wit.append({"kind": "p3", "path": list(p), "length": params.g, "observed": c, "expected": t})
    return _result("p3_exact", wit, expected=t)


def _nonincident_pair_counts(cycles) -> dict:
    counts: dict = {}
    for c in cycles:
        es = _cycle_edges(c)
        for e, f in combinations(es, 2):
            if not set(e) & set(f):
                key = (e, f) if e < f else (f, e)
                counts[key] = counts.get(key, 0) + 1
    return counts


def check_nonincident_edge_bound(g: Graph, k: int) -> CheckResult:
    gi = _girth_or_fail(g)
    bound = nonincident_bound(k, gi)
    counts = _nonincident_pair_counts(cycles_of_length(g.adjacency, gi))
    wit = [
        {"kind": "edge_pair", "edges": [list(e), list(f)], "length": gi, "observed": c, "bound": bound}
        for (e, f), c in sorted(counts.items()) if c > bound
    ]
    return _result("nonincident_edge_bound", wit, bound=bound,
                   max_observed=max(counts.values(), default=0))


def _disconnects(g: Graph, removed: Sequence[tuple[int, int]]) -> bool:
    adj = list(g.adjacency)
    for a, b in removed:
        adj[a] &= ~(1 << b)
        adj[b] &= ~(1 << a)
    seen = 1
    frontier = 1
    while frontier:
        nxt = 0
        for v in iter_bits(frontier):
            nxt |= adj[v]
        frontier = nxt & ~seen
        seen |= frontier
    return seen != (1 << g.order) - 1


def _nonincident_sets(edges: Sequence[tuple[int, int]], t: int):
    def rec(start: int, used: int, chosen: list):
        if len(chosen) == t:
            yield tuple(chosen)
            return
        for i in range(start, len(edges)):
            a, b = edges[i]
            if used >> a & 1 or used >> b & 1:
                continue
            chosen.append(edges[i])
            yield from rec(i + 1, used | (1 << a) | (1 << b), chosen)
            chosen.pop()

    yield from rec(0, 0, [])


def _random_nonincident_set(edges, t: int, rng: random.Random):
    pool = list(edges)
    rng.shuffle(pool)
    used = 0
    chosen = []
    for a, b in pool:
        if used >> a & 1 or used >> b & 1:
            continue
        chosen.append((a, b))
        used |= (1 << a) | (1 << b)
        if len(chosen) == t:
            return tuple(sorted(chosen))
    return None


def check_edge_cut_lemmas(
    g: Graph,
    params: EgrParams,
    *,
    force_exhaustive: bool = False,
    seed: int = 0,
    samples: int = 20000,
) -> CheckResult:
    """3-edge-connectivity for cubic graphs and the non-incident-edge cut corollary."""
    if not is_connected(g):
        raise NotApplicable("edge-cut lemmas need a connected graph")
    k, L, lam = params.k, params.g, params.lam
    wit = []
    details: dict = {"connectivity_checked": False, "cut_sizes": {}}
    exponent = half_up(L - 5)
    if k == 3 and lam > Fraction(2) ** exponent:
        details["connectivity_checked"] = True
        ec = edge_connectivity(g)
        details["edge_connectivity"] = ec
        if ec < 3:
            wit.append({"kind": "edge_cut", "edges": [list(e) for e in min_edge_cut(g)],
                        "observed": ec, "bound": 3})
    if L >= 5:
        per = (k - 1) ** exponent
        edges = list(g.edges)
        t = 1
        while lam > (t - 1) * per and t <= g.order // 2:
            total = comb(len(edges), t)
            info = {}
            if force_exhaustive or total <= EXHAUSTIVE_LIMIT:
                info["mode"] = "exhaustive"
                checked = 0
                for s in _nonincident_sets(edges, t):
                    checked += 1
                    if _disconnects(g, s):
                        wit.append({"kind": "nonincident_cut", "edges": [list(e) for e in s],
                                    "observed": len(s), "bound": lam})
                info["sets"] = checked
            else:
                rng = random.Random(seed)
                info.update(mode="sampled", seed=seed, samples=samples)
                seen = set()
                for _ in range(samples):
                    s = _random_nonincident_set(edges, t, rng)
                    if s is None or s in seen:
                        continue
                    seen.add(s)
                    if _disconnects(g, s):
                        wit.append({"kind": "nonincident_cut", "edges": [list(e) for e in s],
                                    "observed": len(s), "bound": lam})
            details["cut_sizes"][t] = info
            t += 1
    return _result("edge_cut_lemmas", wit, **details)


# ---------------------------------------------------------------- subgraph search


def find_subgraph(g: Graph, h: Graph) -> Optional[list[int]]:
    """A (not necessarily induced) embedding of h into g, as h-vertex -> g-vertex."""
    if h.order > g.order:
        return None
    gh, gg = girth(h), girth(g)
    if gh is not INFINITE and (gg is INFINITE or gg > gh):
        return None
    hdeg = h.degrees()
    gdeg = g.degrees()
    if any(a > b for a, b in zip(sorted(hdeg, reverse=True), sorted(gdeg, reverse=True))):
        return None
    # order h vertices so each one (after the first of a component) has a mapped neighbour
    order: list[int] = []
    placed = 0
    while len(order) < h.order:
        cand = [v for v in range(h.order) if not placed >> v & 1]
        linked = [v for v in cand if h.adjacency[v] & placed]
        pool = linked or cand
        v = max(pool, key=lambda x: ((h.adjacency[x] & placed).bit_count(), hdeg[x], -x))
        order.append(v)
        placed |= 1 << v
    gadj, hadj = g.adjacency, h.adjacency
    image = [-1] * h.order

    def rec(i: int, used: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        allowed = ((1 << g.order) - 1) & ~used
        for w in iter_bits(hadj[v]):
            if image[w] >= 0:
                allowed &= gadj[image[w]]
        for x in iter_bits(allowed):
            if gdeg[x] < hdeg[v]:
                continue
            image[v] = x
            if rec(i + 1, used | (1 << x)):
                return True
            image[v] = -1
        return False

    return list(image) if rec(0, 0) else None


def check_forbidden_subgraph(g: Graph, h: Graph, params: EgrParams) -> CheckResult:
    hp = is_egr(h)
    if hp is None or (hp.k, hp.g, hp.lam) != (params.k - 1, params.g, params.lam):
        raise BadCandidate(f"candidate is {hp}, expected egr(w,{params.k - 1},{params.g},{params.lam})")
    mapping = find_subgraph(g, h)
    wit = []
    if mapping is not None:
        wit.append({"kind": "subgraph", "h": write_graph6(h), "mapping": mapping})
    return _result("forbidden_subgraph", wit, candidate=write_graph6(h))


# ---------------------------------------------------------------- witnesses


def verify_witness(g: Graph, w: dict) -> bool:
    """Recount the object cited by a witness and confirm it violates its bound."""
    kind = w["kind"]
    if kind == "vertex_cycles":
        c = count_g_cycles_through_vertex(g, w["vertex"], w["length"])
        return c == w["observed"] != w["expected"]
    if kind in ("path", "p3"):
        c = count_g_cycles_through_path(g, w["path"], w["length"])
        if c != w["observed"]:
            return False
        return c > w["bound"] if kind == "path" else c != w["expected"]
    if kind == "cycle_pair":
        c1, c2 = (tuple(c) for c in w["cycles"])
        for c in (c1, c2):
            if len(c) != w["length"] or len(set(c)) != len(c):
                return False
            if not all(g.has_edge(a, b) for a, b in _cycle_edges(c)):
                return False
        return _intersection_violates(c1, c2, w["length"]) == w["observed"]
    if kind == "edge_pair":
        e, f = (tuple(x) for x in w["edges"])
        n = sum(
            1 for c in cycles_of_length(g.adjacency, w["length"])
            if e in _cycle_edges(c) and f in _cycle_edges(c)
        )
        return n == w["observed"] > w["bound"] and not set(e) & set(f)
    if kind == "edge_cut":
        es = [tuple(e) for e in w["edges"]]
        return (all(g.has_edge(*e) for e in es) and _disconnects(g, es)
                and len(es) == w["observed"] == edge_connectivity(g) < w["bound"])
    if kind == "nonincident_cut":
        es = [tuple(e) for e in w["edges"]]
        ends = [v for e in es for v in e]
        return (all(g.has_edge(*e) for e in es) and len(set(ends)) == len(ends)
                and _disconnects(g, es))
    if kind == "subgraph":
        h = parse_graph6(w["h"])
        m = w["mapping"]
        return len(set(m)) == h.order and all(g.has_edge(m[a], m[b]) for a, b in h.edges)
    raise ValueError(f"unknown witness kind {kind!r}")


def run_suite(
    g: Graph,
    params: EgrParams,
    candidates: Sequence[Graph] = (),
    *,
    force_exhaustive: bool = False,
    seed: int = 0,
    threads: int = 1,
) -> list[CheckResult]:
    """Every applicable check, sorted by check name."""
    jobs = [
        ("vertex_cycle_count", lambda: check_vertex_cycle_count(g, params)),
        ("cycle_intersections", lambda: check_cycle_intersections(g)),
        ("path_containment_bounds", lambda: check_path_containment_bounds(g, params.k)),
        ("p3_exact", lambda: check_p3_exact(g, params)),
        ("nonincident_edge_bound", lambda: check_nonincident_edge_bound(g, params.k)),
        ("edge_cut_lemmas",
         lambda: check_edge_cut_lemmas(g, params, force_exhaustive=force_exhaustive, seed=seed)),
    ]
    jobs += [("forbidden_subgraph", lambda h=h: check_forbidden_subgraph(g, h, params))
             for h in candidates]

    def run(job):
        name, fn = job
        try:
            return fn()
        except NotApplicable as exc:
            return CheckResult(name, True, [], {"not_applicable": str(exc)})

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, jobs))
    else:
        results = [run(j) for j in jobs]
    return sorted(results, key=lambda r: (r.check_name, r.details.get("candidate", "")))
