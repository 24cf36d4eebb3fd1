"""Arithmetic case splits and the mechanised local-completion search.

The local search grows the neighbourhood of a root vertex of a hypothetical
egr(v, k, g, lambda) graph. The ball of radius below half the girth is a
forced tree; the search then assigns, vertex by vertex in index order, every
remaining incidence of the outer layer (and optionally of the first layer of
outside vertices). After each step a fixed set of deduction rules is applied;
a branch dies as soon as one rule reports a contradiction, and the step is
written to the trace together with the partial structure it refers to, so it
can be replayed later by :func:`replay_step`.

Rules and what they enforce:

``girth``            no cycle shorter than g
``edge_overflow``    an edge on more than lambda shortest cycles
``path_overflow``    a path on more shortest cycles than the path-containment bound
``pair_overflow``    two non-incident edges sharing too many shortest cycles
``p3_overflow``      k = 3, lambda = 2t: a P3 on more than t shortest cycles
``edge_final``       an edge that can gain no further cycle but has fewer than lambda
``edge_capacity``    an edge that cannot reach lambda even in the best case
``p3_final``/``p3_capacity``  the same two tests for the exact P3 count (k = 3)
``cut_budget``       a cut edge whose cycles cannot all re-cross the cut
``known_fact``       the structure closed up at an order ruled out by a stored result
``closed_not_egr``   the structure closed up into a graph that is not egr
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Optional, Sequence

from .canon import canonical_labeling, certificate
from .cycles import EgrParams, bfs_distances, cycles_of_length, girth_of_rows, is_egr, list_paths
from .errors import DegreeTooSmall, EvenGirth, OddGirth
from .graph import Graph, iter_bits, write_graph6
from .layers import LayerProfile
from .lemmas import half_up, nonincident_bound, path_bound, path_bound_order

FEASIBLE = "feasible"
INFEASIBLE = "infeasible"
UNKNOWN = "unknown"


# ---------------------------------------------------------------- arithmetic


def feasibility_prefilter(k: int, g: int, lam: int) -> Optional[str]:
    """``None`` if (k, g, lambda) survives the cheap necessary conditions, else a reason."""
    if k < 3 or g < 3 or lam < 1:
        raise ValueError("need k >= 3, g >= 3, lambda >= 1")
    if k * lam % 2:
        return f"k*lambda = {k * lam} is odd, but every vertex lies on k*lambda/2 shortest cycles"
    bound = (k - 1) ** half_up(g - 1)
    if lam > bound:
        return f"lambda = {lam} exceeds (k-1)^ceil((g-1)/2) = {bound} cycles per edge"
    return None


def enumerate_layer_profiles(k: int, g: int, lam: int) -> list[LayerProfile]:
    """All (n_1..n_k) with sum i*n_i = k(k-1)^(t-1) and sum C(i,2)*n_i = k*lambda/2."""
    if g % 2:
        raise OddGirth(g)
    reason = feasibility_prefilter(k, g, lam)
    if reason:
        raise ValueError(reason)
    t = g // 2
    edges = k * (k - 1) ** (t - 1)
    pairs = k * lam // 2
    out = []

    def rec(i: int, counts: list[int], e_left: int, p_left: int) -> None:
        if i == 1:
            if p_left == 0:
                out.append((e_left,) + tuple(reversed(counts)))
            return
        w = comb(i, 2)
        for n in range(min(e_left // i, p_left // w) + 1):
            counts.append(n)
            rec(i - 1, counts, e_left - i * n, p_left - w * n)
            counts.pop()

    rec(k, [], edges, pairs)
    return [LayerProfile(k, t, c) for c in sorted(out)]


def upper_limit_order(k: int, g: int) -> int:
    """Order forced when lambda = (k-1)^((g-1)/2) - 1 and g is odd."""
    if g % 2 == 0:
        raise EvenGirth(g)
    if k < 3:
        raise DegreeTooSmall(k)
    if g < 5:
        raise ValueError("the upper-limit count needs g >= 5")
    return 1 + k * sum((k - 1) ** j for j in range((g - 3) // 2 + 1)) + 1


def upper_limit_order_closed(k: int, g: int) -> int:
    return 2 + k * ((k - 1) ** ((g - 1) // 2) - 1) // (k - 2)


@dataclass(frozen=True)
class KnownFact:
    v: int
    k: int
    g: int
    lam: int
    exists: bool
    source: str


KNOWN_FACTS = {
    (26, 3, 7, 6): KnownFact(26, 3, 7, 6, False, "GJ1"),
    (32, 3, 8, 14): KnownFact(32, 3, 8, 14, False, "GJ1"),
    (18, 4, 5, 8): KnownFact(18, 4, 5, 8, False, "GJ1"),
    (38, 6, 5, 24): KnownFact(38, 6, 5, 24, False, "GJ1"),
}


def known_nonexistence_oracle(v: int, k: int, g: int, lam: int) -> Optional[KnownFact]:
    return KNOWN_FACTS.get((v, k, g, lam))


# ---------------------------------------------------------------- rule evaluation


RULE_NAMES = (
    "edge_overflow", "path_overflow", "p3_overflow", "pair_overflow", "edge_final", "edge_capacity",
    "p3_final", "p3_capacity", "cut_budget", "known_fact", "closed_not_egr",
)
"""Rules that may be switched off; girth and slot shortage are structural and always on."""


def _ekey(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


def _pkey(p: Sequence[int]) -> tuple[int, ...]:
    t = tuple(p)
    r = t[::-1]
    return t if t <= r else r


class _Counts:
    """Shortest-cycle statistics of a partial structure."""

    __slots__ = ("edge", "path", "pair")

    def __init__(self):
        self.edge: dict = {}
        self.path: dict = {}
        self.pair: dict = {}

    def copy(self) -> "_Counts":
        c = _Counts()
        c.edge = dict(self.edge)
        c.path = dict(self.path)
        c.pair = dict(self.pair)
        return c


class Rules:
    """Deduction rules for one parameter set, shared by the search and the replayer."""

    def __init__(self, k: int, g: int, lam: int, disabled: frozenset = frozenset()):
        self.k, self.g, self.lam = k, g, lam
        unknown = set(disabled) - set(RULE_NAMES)
        if unknown:
            raise ValueError(f"unknown rules {sorted(unknown)}")
        self.on = {r: r not in disabled for r in RULE_NAMES}
        self.u = path_bound_order(g)
        self.path_sizes = list(range(3, min(self.u, g) + 1))
        self.exact_p3 = lam // 2 if k == 3 and lam % 2 == 0 else None
        cap = path_bound(k, g, 3)
        if self.exact_p3 is not None:
            cap = min(cap, self.exact_p3)
        self.p3_cap = min(cap, lam)
        self.pair_cap = nonincident_bound(k, g) if g >= 5 else None

    def path_cap(self, m: int) -> int:
        b = path_bound(self.k, self.g, m)
        if m == 3:
            return self.p3_cap
        return b

    # -- incremental bookkeeping

    def add_cycle(self, counts: _Counts, cyc: Sequence[int]) -> Optional[dict]:
        g = len(cyc)
        es = [_ekey(cyc[i], cyc[(i + 1) % g]) for i in range(g)]
        bad = None
        for e in es:
            c = counts.edge.get(e, 0) + 1
            counts.edge[e] = c
            if c > self.lam and bad is None and self.on["edge_overflow"]:
                bad = {"rule": "edge_overflow", "objects": {"edge": list(e)},
                       "values": {"count": c, "lambda": self.lam}}
        for m in self.path_sizes:
            cap = self.path_cap(m)
            for i in range(g):
                key = _pkey([cyc[(i + j) % g] for j in range(m)])
                c = counts.path.get(key, 0) + 1
                counts.path[key] = c
                rule = "p3_overflow" if m == 3 and self.exact_p3 is not None else "path_overflow"
                if c > cap and bad is None and self.on[rule]:
                    bad = {"rule": rule, "objects": {"path": list(key)},
                           "values": {"count": c, "bound": cap}}
        if self.pair_cap is not None:
            for i in range(g):
                for j in range(i + 2, g):
                    if i == 0 and j == g - 1:
                        continue
                    key = (es[i], es[j]) if es[i] < es[j] else (es[j], es[i])
                    c = counts.pair.get(key, 0) + 1
                    counts.pair[key] = c
                    if c > self.pair_cap and bad is None and self.on["pair_overflow"]:
                        bad = {"rule": "pair_overflow",
                               "objects": {"edges": [list(key[0]), list(key[1])]},
                               "values": {"count": c, "bound": self.pair_cap}}
        return bad

    def counts_from_scratch(self, adj: Sequence[int]) -> _Counts:
        counts = _Counts()
        for cyc in cycles_of_length(adj, self.g):
            self.add_cycle(counts, cyc)
        return counts

    # -- global rules

    def _dist_unsat(self, adj: Sequence[int]) -> list[int]:
        n = len(adj)
        far = 4 * n + 4
        unsat = 0
        for v in range(n):
            if adj[v].bit_count() < self.k:
                unsat |= 1 << v
        dist = [far] * n
        seen = unsat
        frontier = unsat
        d = 0
        for v in iter_bits(unsat):
            dist[v] = 0
        while frontier:
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

    def _edge_final(self, du, a, b) -> bool:
        return du[a] + du[b] + 1 > self.g - 1

    def _p3_final(self, du, a, c) -> bool:
        return du[a] + du[c] + 1 > self.g - 2

    def ub_p3(self, counts: _Counts, du, a: int, b: int, c: int) -> int:
        cur = counts.path.get(_pkey((a, b, c)), 0)
        if self._p3_final(du, a, c):
            return cur
        slack = min(self.lam - counts.edge.get(_ekey(a, b), 0), self.lam - counts.edge.get(_ekey(b, c), 0))
        return min(cur + max(slack, 0), max(cur, self.p3_cap))

    def ub_edge(self, adj, counts: _Counts, du, a: int, b: int) -> int:
        cur = counts.edge.get(_ekey(a, b), 0)
        if self._edge_final(du, a, b):
            return cur
        best = None
        for x, y in ((a, b), (b, a)):
            total = 0
            for c in iter_bits(adj[y] & ~(1 << x)):
                total += self.ub_p3(counts, du, x, y, c)
            total += (self.k - adj[y].bit_count()) * self.p3_cap
            best = total if best is None else min(best, total)
        return max(best, cur)

    def check_state(self, adj: Sequence[int], counts: _Counts) -> Optional[dict]:
        n = len(adj)
        k, lam = self.k, self.lam
        du = self._dist_unsat(adj)
        for a in range(n):
            for b in iter_bits(adj[a] >> (a + 1) << (a + 1)):
                cur = counts.edge.get((a, b), 0)
                if self._edge_final(du, a, b):
                    if cur != lam and self.on["edge_final"]:
                        return {"rule": "edge_final", "objects": {"edge": [a, b]},
                                "values": {"count": cur, "lambda": lam}}
                    continue
                ub = self.ub_edge(adj, counts, du, a, b)
                if ub < lam and self.on["edge_capacity"]:
                    return {"rule": "edge_capacity", "objects": {"edge": [a, b]},
                            "values": {"upper_bound": ub, "lambda": lam}}
        if self.exact_p3 is not None:
            t = self.exact_p3
            for b in range(n):
                for a, c in combinations(list(iter_bits(adj[b])), 2):
                    cur = counts.path.get(_pkey((a, b, c)), 0)
                    if self._p3_final(du, a, c):
                        if cur != t and self.on["p3_final"]:
                            return {"rule": "p3_final", "objects": {"path": [a, b, c]},
                                    "values": {"count": cur, "expected": t}}
                    elif self.on["p3_capacity"] and self.ub_p3(counts, du, a, b, c) < t:
                        return {"rule": "p3_capacity", "objects": {"path": [a, b, c]},
                                "values": {"upper_bound": self.ub_p3(counts, du, a, b, c), "expected": t}}
        return self.check_cut(adj, counts, du)

    def _pair_ub(self, adj, counts, du, e, f) -> int:
        common = set(e) & set(f)
        if common:
            (v,) = common
            a = e[0] if e[1] == v else e[1]
            c = f[0] if f[1] == v else f[1]
            return self.ub_p3(counts, du, a, v, c)
        if self.pair_cap is None:
            return self.lam
        return self.pair_cap

    def check_cut(self, adj, counts, du) -> Optional[dict]:
        n = len(adj)
        sat = 0
        for v in range(n):
            if adj[v].bit_count() >= self.k:
                sat |= 1 << v
        full = (1 << n) - 1
        if sat == 0 or sat == full or not self.on["cut_budget"]:
            return None
        cut = []
        for v in iter_bits(sat):
            for w in iter_bits(adj[v] & ~sat):
                cut.append((v, w))
        for e in cut:
            budget = 0
            for f in cut:
                if f is e:
                    continue
                budget += self._pair_ub(adj, counts, du, e, f)
                if budget >= self.lam:
                    break
            if budget < self.lam:
                return {"rule": "cut_budget",
                        "objects": {"edge": list(e), "cut": [list(f) for f in cut]},
                        "values": {"budget": budget, "lambda": self.lam}}
        return None

    def check_closed(self, adj: Sequence[int]) -> Optional[dict]:
        """Rules for a structure in which every vertex has full degree."""
        n = len(adj)
        fact = known_nonexistence_oracle(n, self.k, self.g, self.lam)
        if fact is not None and not fact.exists and self.on["known_fact"]:
            return {"rule": "known_fact", "objects": {"order": n},
                    "values": {"fact": [fact.v, fact.k, fact.g, fact.lam], "source": fact.source}}
        p = is_egr(Graph(n, adj))
        if self.on["closed_not_egr"] and (p is None or (p.k, p.g, p.lam) != (self.k, self.g, self.lam)):
            return {"rule": "closed_not_egr", "objects": {"order": n},
                    "values": {"found": None if p is None else list(p.as_tuple())}}
        return None


def _snapshot(adj: Sequence[int]) -> dict:
    n = len(adj)
    return {"order": n, "edges": [[a, b] for a in range(n) for b in iter_bits(adj[a] >> (a + 1) << (a + 1))]}


def replay_step(step: dict, k: int, g: int, lam: int) -> bool:
    """Rebuild the recorded structure from its edge list and re-derive the contradiction."""
    if step["rule"] == "profile_identity":
        prof = LayerProfile(k, g // 2, tuple(step["objects"]["profile"]))
        return prof.edge_sum() != k * (k - 1) ** (g // 2 - 1) or prof.pair_sum() != k * lam // 2
    state = step["state"]
    n = state["order"]
    adj = [0] * n
    for a, b in state["edges"]:
        adj[a] |= 1 << b
        adj[b] |= 1 << a
    rules = Rules(k, g, lam)
    rule = step["rule"]
    obj = step["objects"]
    if rule == "girth":
        a, b = obj["edge"]
        if adj[a] >> b & 1:
            return False
        adj[a] |= 1 << b
        adj[b] |= 1 << a
        gi = girth_of_rows(adj)
        return isinstance(gi, int) and gi < g
    gi = girth_of_rows(adj)
    if isinstance(gi, int) and gi < g:
        return False
    if any(row.bit_count() > k for row in adj):
        return False
    counts = rules.counts_from_scratch(adj)
    if rule == "edge_overflow":
        return counts.edge.get(tuple(obj["edge"]), 0) > lam
    if rule in ("path_overflow", "p3_overflow"):
        p = _pkey(obj["path"])
        return counts.path.get(p, 0) > rules.path_cap(len(p))
    if rule == "pair_overflow":
        e, f = (tuple(x) for x in obj["edges"])
        return counts.pair.get((e, f), 0) > rules.pair_cap
    if rule in ("known_fact", "closed_not_egr"):
        if any(row.bit_count() != k for row in adj):
            return False
        v = rules.check_closed(adj)
        return v is not None and v["rule"] == rule
    du = rules._dist_unsat(adj)
    if rule == "edge_final":
        a, b = obj["edge"]
        return rules._edge_final(du, a, b) and counts.edge.get(_ekey(a, b), 0) != lam
    if rule == "edge_capacity":
        a, b = obj["edge"]
        return rules.ub_edge(adj, counts, du, a, b) < lam
    if rule == "p3_final":
        a, b, c = obj["path"]
        return rules._p3_final(du, a, c) and counts.path.get(_pkey((a, b, c)), 0) != rules.exact_p3
    if rule == "p3_capacity":
        a, b, c = obj["path"]
        return rules.ub_p3(counts, du, a, b, c) < rules.exact_p3
    if rule == "cut_budget":
        v = rules.check_cut(adj, counts, du)
        return v is not None
    if rule == "slot_shortage":
        x = obj["vertex"]
        need = state["pending_parents"]
        dist = bfs_distances(adj, x, limit=g - 2)
        ok = [y for y in range(n) if need[y] > 0 and not adj[x] >> y & 1 and dist[y] >= g - 1]
        return len(ok) < k - adj[x].bit_count()
    raise ValueError(f"unknown rule {rule!r}")


# ---------------------------------------------------------------- search engine


@dataclass
class CaseVerdict:
    params: EgrParams
    profile: Optional[LayerProfile]
    status: str
    trace: list = field(default_factory=list)
    witness_count: int = 0
    witnesses: list = field(default_factory=list)  # graph6 of surviving structures
    stats: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status == INFEASIBLE and not self.trace:
            raise ValueError("an infeasible verdict needs a non-empty trace")
        if self.status == FEASIBLE and self.witness_count < 1:
            raise ValueError("a feasible verdict needs at least one witness")

    def to_dict(self) -> dict:
        return {
            "params": {"v": self.params.v, "k": self.params.k, "g": self.params.g, "lambda": self.params.lam},
            "profile": None if self.profile is None else list(self.profile.counts),
            "status": self.status,
            "witness_count": self.witness_count,
            "witnesses": self.witnesses,
            "stats": self.stats,
            "trace": self.trace,
        }


def outer_layer_paths(adj: Sequence[int], layer: Sequence[int], depth: int) -> Optional[list[list[int]]]:
    """Components of the outer layer as vertex sequences, or ``None`` if one is not a path."""
    outer = [v for v in range(len(adj)) if layer[v] == depth]
    mask = 0
    for v in outer:
        mask |= 1 << v
    seen = 0
    paths = []
    for v in outer:
        if seen >> v & 1:
            continue
        comp = [v]
        seen |= 1 << v
        i = 0
        while i < len(comp):
            for w in iter_bits(adj[comp[i]] & mask & ~seen):
                seen |= 1 << w
                comp.append(w)
            i += 1
        degs = {u: (adj[u] & mask).bit_count() for u in comp}
        edges = sum(degs.values()) // 2
        if edges != len(comp) - 1 or max(degs.values()) > 2:
            return None
        ends = [u for u in comp if degs[u] <= 1]
        cur, prev, seq = ends[0], None, []
        while cur is not None:
            seq.append(cur)
            nxt = [w for w in iter_bits(adj[cur] & mask) if w != prev]
            prev, cur = cur, (nxt[0] if nxt else None)
        paths.append(seq)
    return paths


def _expect_cubic_girth7_lambda6(adj, layer, full_rules: bool) -> list[str]:
    """Structure every partial completion of the radius-3 ball must have."""
    fails = []
    depth = 3
    outer = [v for v in range(len(adj)) if layer[v] == depth]
    mask = 0
    for v in outer:
        mask |= 1 << v
    parent = {}
    for v in outer:
        (p,) = [w for w in iter_bits(adj[v]) if layer[w] == depth - 1]
        parent[v] = p
    groups: dict = {}
    for v in outer:
        groups.setdefault(parent[v], []).append(v)
    for p, pair in sorted(groups.items()):
        degs = sorted((adj[v] & mask).bit_count() for v in pair)
        if degs != [1, 2]:
            fails.append(f"subbranch under {p} has outer-layer degrees {degs}, expected one odd and one even")
    paths = outer_layer_paths(adj, layer, depth)
    if paths is None:
        fails.append("outer layer contains a cycle or a branching vertex")
    else:
        if len(paths) != 3 or any(len(p) < 2 for p in paths):
            fails.append(f"outer layer splits into paths of sizes {sorted(len(p) for p in paths)}, expected 3 non-trivial")
        if full_rules and any(len(p) >= 5 for p in paths):
            fails.append("a path on 5 or more vertices survived the full rule set")
    return fails


DERIVED_EXPECTATIONS = {(3, 7, 6, 3): _expect_cubic_girth7_lambda6}
"""Structural facts (k, g, lambda, depth) -> checker, asserted on survivors in test mode."""


class _Budget(Exception):
    pass


class _Found(Exception):
    pass


class _State:
    __slots__ = ("adj", "layer", "need", "counts")

    def __init__(self, adj, layer, need, counts):
        self.adj = adj
        self.layer = layer
        self.need = need
        self.counts = counts

    def copy(self) -> "_State":
        return _State(list(self.adj), list(self.layer), list(self.need), self.counts.copy())


@dataclass
class _Unit:
    """Outcome of searching one subtree."""

    survivors: dict = field(default_factory=dict)  # certificate -> (graph6, layers)
    trace: list = field(default_factory=list)
    rule_counts: dict = field(default_factory=dict)
    nodes: int = 0
    exhausted: bool = False


class _Engine:
    def __init__(self, k, g, lam, depth, profile, node_limit, deadline, trace_limit, outside_layer,
                 descending=False, disabled=frozenset(), first_only=False, test_mode=False):
        self.k, self.g, self.lam = k, g, lam
        self.depth = depth
        self.profile = profile
        self.rules = Rules(k, g, lam, disabled)
        self.descending = descending
        self.first_only = first_only
        self.expectations = DERIVED_EXPECTATIONS.get((k, g, lam, depth)) if test_mode else None
        self.full_rules = not disabled
        self.node_limit = node_limit
        self.deadline = deadline
        self.trace_limit = trace_limit
        self.last_layer = depth + 1 if outside_layer else depth
        self.half = g // 2 if g % 2 == 0 else None

    # -- setup

    def initial_state(self) -> _State:
        k = self.k
        tree_depth = self.depth
        if self.profile is not None:
            tree_depth = self.depth - 1
        adj = [0]
        layer = [0]
        frontier = [0]
        for d in range(1, tree_depth + 1):
            nxt = []
            for p in frontier:
                for _ in range(k if p == 0 else k - 1):
                    v = len(adj)
                    adj.append(1 << p)
                    adj[p] |= 1 << v
                    layer.append(d)
                    nxt.append(v)
            frontier = nxt
        need = [0] * len(adj)
        if self.profile is not None:
            # outer layer, most constrained vertices first
            for i in range(len(self.profile.counts), 0, -1):
                for _ in range(self.profile.counts[i - 1]):
                    adj.append(0)
                    layer.append(self.depth)
                    need.append(i)
        return _State(adj, layer, need, _Counts())

    # -- helpers

    def _next_vertex(self, s: _State) -> Optional[int]:
        best = None
        for v, row in enumerate(s.adj):
            if s.layer[v] <= self.last_layer and row.bit_count() < self.k and s.need[v] == 0:
                key = (s.layer[v], -v if self.descending else v)
                if best is None or key < best[0]:
                    best = (key, v)
        return None if best is None else best[1]

    def _candidates(self, s: _State, x: int) -> tuple[list[int], bool, int]:
        """(existing partners, fresh allowed, layer of fresh vertices)."""
        k = self.k
        lx = s.layer[x]
        adj = s.adj
        if any(s.need):
            # parent assignment for the outer layer of an even-girth ball
            cands = [y for y in range(len(adj)) if s.need[y] > 0 and not adj[x] >> y & 1]
            return cands, False, lx + 1
        if lx < self.depth:
            same = []
        else:
            same = [y for y in range(len(adj)) if y != x and s.layer[y] == lx
                    and adj[y].bit_count() < k and not adj[x] >> y & 1]
        outer = [y for y in range(len(adj)) if s.layer[y] == lx + 1
                 and adj[y].bit_count() < k and not adj[x] >> y & 1]
        return same + outer, True, lx + 1

    def _colors(self, s: _State, x: int) -> list:
        cols = [(s.layer[v], s.need[v], 0) for v in range(len(s.adj))]
        cols[x] = (s.layer[x], s.need[x], 1)
        return cols

    def _automorphisms(self, s: _State, x: int) -> list:
        _, _, auts = canonical_labeling(s.adj, self._colors(s, x))
        return auts

    @staticmethod
    def _is_orbit_min(sub: tuple[int, ...], auts) -> bool:
        seen = {sub}
        stack = [sub]
        while stack:
            cur = stack.pop()
            for gam in auts:
                img = tuple(sorted(gam[v] for v in cur))
                if img < sub:
                    return False
                if img not in seen:
                    seen.add(img)
                    stack.append(img)
        return True

    def _add_edge(self, s: _State, a: int, b: int) -> Optional[dict]:
        adj = s.adj
        dist = bfs_distances(adj, a, limit=self.g - 2)
        if dist[b] < self.g - 1:
            return {"rule": "girth", "objects": {"edge": [a, b]},
                    "values": {"distance": dist[b], "minimum": self.g - 1}}
        new_cycles = list_paths(adj, a, b, self.g - 1)
        adj[a] |= 1 << b
        adj[b] |= 1 << a
        if s.need[b] > 0:
            s.need[b] -= 1
        bad = None
        for p in new_cycles:
            v = self.rules.add_cycle(s.counts, p)
            if v is not None and bad is None:
                bad = v
        return bad

    # -- search

    def _record(self, unit: _Unit, violation: dict, s: _State) -> None:
        unit.rule_counts[violation["rule"]] = unit.rule_counts.get(violation["rule"], 0) + 1
        if len(unit.trace) < self.trace_limit:
            step = dict(violation)
            step["state"] = _snapshot(s.adj)
            step["state"]["pending_parents"] = list(s.need)
            step["conclusion"] = "branch closed"
            unit.trace.append(step)

    def children(self, s: _State, unit: _Unit) -> list[_State]:
        """Expand one vertex; dead branches are recorded, live children returned in order."""
        x = self._next_vertex(s)
        slots = self.k - s.adj[x].bit_count()
        cands, fresh_ok, fresh_layer = self._candidates(s, x)
        # girth against x is a per-candidate test
        dist = bfs_distances(s.adj, x, limit=self.g - 2)
        ok = []
        for y in cands:
            if dist[y] < self.g - 1:
                # a restriction rather than a dead branch: counted, not traced
                unit.rule_counts["girth"] = unit.rule_counts.get("girth", 0) + 1
            else:
                ok.append(y)
        if not fresh_ok and len(ok) < slots:
            self._record(unit, {"rule": "slot_shortage", "objects": {"vertex": x, "candidates": ok},
                                "values": {"slots": slots}}, s)
            return []
        auts = self._automorphisms(s, x) if ok else []
        options = []
        for m in range(0, slots + 1 if fresh_ok else 1):
            for sub in combinations(ok, slots - m):
                if not auts or self._is_orbit_min(sub, auts):
                    options.append((sub, m))
        out = []
        for sub, m in options:
            c = s.copy()
            targets = list(sub)
            for _ in range(m):
                v = len(c.adj)
                c.adj.append(0)
                c.layer.append(fresh_layer)
                c.need.append(0)
                targets.append(v)
            bad = None
            for y in targets:
                bad = self._add_edge(c, x, y)
                if bad is not None:
                    break
            if bad is None:
                bad = self.rules.check_state(c.adj, c.counts)
            if bad is not None:
                self._record(unit, bad, c)
                continue
            out.append(c)
        return out

    def terminal(self, s: _State, unit: _Unit) -> None:
        if all(row.bit_count() == self.k for row in s.adj):
            bad = self.rules.check_closed(s.adj)
            if bad is not None:
                self._record(unit, bad, s)
                return
        cert = certificate(s.adj, [(l,) for l in s.layer])
        if cert not in unit.survivors:
            info = {"graph6": write_graph6(Graph(len(s.adj), s.adj)), "layers": list(s.layer)}
            if self.expectations is not None:
                info["expectation_failures"] = self.expectations(s.adj, s.layer, self.full_rules)
            unit.survivors[cert] = info
        if self.first_only:
            raise _Found

    def run(self, s: _State, unit: _Unit) -> None:
        unit.nodes += 1
        if unit.nodes > self.node_limit or (self.deadline is not None and time.monotonic() > self.deadline):
            raise _Budget
        if self._next_vertex(s) is None:
            self.terminal(s, unit)
            return
        for c in self.children(s, unit):
            self.run(c, unit)


def _run_unit(args) -> _Unit:
    engine, state = args
    unit = _Unit()
    try:
        engine.run(state, unit)
    except _Budget:
        unit.exhausted = True
    except _Found:
        pass
    return unit


def natural_depth(g: int) -> int:
    return g // 2 if g % 2 == 0 else (g - 1) // 2


def local_completion_search(
    k: int,
    g: int,
    lam: int,
    profile: Optional[LayerProfile | Sequence[int]] = None,
    depth: Optional[int] = None,
    *,
    node_limit: int = 10**8,
    time_limit: Optional[float] = 3600.0,
    threads: int = 1,
    trace_limit: int = 5000,
    outside_layer: bool = True,
    descending: bool = False,
    disabled_rules: Sequence[str] = (),
    first_witness_only: bool = False,
    test_mode: bool = False,
) -> CaseVerdict:
    """Exhaustively complete the neighbourhood of a root under the deduction rules.

    For even girth at full depth the outer layer is pinned by ``profile``; if
    no profile is given every admissible profile is searched and the verdicts
    are combined.

    ``descending`` expands the highest-index open vertex of the lowest open
    layer instead of the lowest-index one; both orders are exhaustive.
    ``disabled_rules`` switches off deduction rules (for experiments and for
    test mode), and ``test_mode`` checks the stored structural expectations on
    every surviving partial structure.
    """
    reason = feasibility_prefilter(k, g, lam)
    if reason:
        raise ValueError(reason)
    params = EgrParams(None, k, g, lam)
    nat = natural_depth(g)
    d = nat if depth is None else depth
    if not 1 <= d <= nat:
        raise ValueError(f"depth must lie in 1..{nat} for girth {g}")
    use_profile = g % 2 == 0 and d == g // 2
    if use_profile and profile is None:
        verdicts = [
            local_completion_search(k, g, lam, p, d, node_limit=node_limit, time_limit=time_limit,
                                    threads=threads, trace_limit=trace_limit, outside_layer=outside_layer,
                                    descending=descending, disabled_rules=disabled_rules,
                                    first_witness_only=first_witness_only, test_mode=test_mode)
            for p in enumerate_layer_profiles(k, g, lam)
        ]
        return combine_verdicts(params, verdicts)
    if profile is not None and not isinstance(profile, LayerProfile):
        profile = LayerProfile(k, g // 2, tuple(profile))
    if profile is not None:
        if not use_profile:
            raise ValueError("a layer profile only applies to even girth at depth g/2")
        if profile.edge_sum() != k * (k - 1) ** (g // 2 - 1) or profile.pair_sum() != k * lam // 2:
            step = {"rule": "profile_identity", "objects": {"profile": list(profile.counts)},
                    "values": {"edge_sum": profile.edge_sum(), "pair_sum": profile.pair_sum()},
                    "conclusion": "profile violates the layer counting identities",
                    "state": {"order": 0, "edges": []}}
            return CaseVerdict(params, profile, INFEASIBLE, [step], 0, [], {"nodes": 0})
    deadline = None if time_limit is None else time.monotonic() + time_limit
    engine = _Engine(k, g, lam, d, profile if use_profile else None, node_limit, deadline,
                     trace_limit, outside_layer, descending, frozenset(disabled_rules),
                     first_witness_only, test_mode)
    root = engine.initial_state()
    t0 = time.monotonic()
    # the children of the root are the independent work units
    head = _Unit(nodes=1)
    if engine._next_vertex(root) is None:
        try:
            engine.terminal(root, head)
        except _Found:
            pass
        units = []
    else:
        units = engine.children(root, head)
    if threads > 1 and len(units) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_run_unit, [(engine, u) for u in units]))
    else:
        results = []
        for u in units:
            results.append(_run_unit((engine, u)))
            if first_witness_only and results[-1].survivors:
                break
    survivors = dict(head.survivors)
    trace = list(head.trace)
    rule_counts = dict(head.rule_counts)
    nodes = head.nodes
    exhausted = False
    for r in results:
        for cert, info in r.survivors.items():
            survivors.setdefault(cert, info)
        trace.extend(r.trace)
        for name, c in r.rule_counts.items():
            rule_counts[name] = rule_counts.get(name, 0) + c
        nodes += r.nodes
        exhausted = exhausted or r.exhausted
    trace = trace[:trace_limit]
    stats = {"nodes": nodes, "prunes": dict(sorted(rule_counts.items())),
             "seconds": round(time.monotonic() - t0, 3), "depth": d}
    ordered = [survivors[c] for c in sorted(survivors)]
    if test_mode:
        stats["expectation_failures"] = sum(1 for s in ordered if s.get("expectation_failures"))
    if ordered:
        status = FEASIBLE
    elif exhausted:
        status = UNKNOWN
    else:
        status = INFEASIBLE
    return CaseVerdict(params, profile if use_profile else None, status, trace, len(ordered),
                       [s["graph6"] for s in ordered], dict(stats, survivors=ordered[:50]))


def combine_verdicts(params: EgrParams, verdicts: Sequence[CaseVerdict]) -> CaseVerdict:
    statuses = {v.status for v in verdicts}
    if FEASIBLE in statuses:
        status = FEASIBLE
    elif UNKNOWN in statuses:
        status = UNKNOWN
    else:
        status = INFEASIBLE
    trace = [step for v in verdicts for step in v.trace]
    stats = {"cases": [{"profile": None if v.profile is None else list(v.profile.counts),
                        "status": v.status, "nodes": v.stats.get("nodes", 0)} for v in verdicts]}
    return CaseVerdict(params, None, status, trace, sum(v.witness_count for v in verdicts),
                       [w for v in verdicts for w in v.witnesses], stats)
