import itertools
import json
from math import comb

import pytest

from egrtools.cases import (
    FEASIBLE,
    INFEASIBLE,
    KNOWN_FACTS,
    RULE_NAMES,
    UNKNOWN,
    CaseVerdict,
    Rules,
    enumerate_layer_profiles,
    feasibility_prefilter,
    known_nonexistence_oracle,
    local_completion_search,
    outer_layer_paths,
    replay_step,
    upper_limit_order,
    upper_limit_order_closed,
)
from egrtools.canon import canonical_form
from egrtools.cycles import EgrParams, girth, is_egr
from egrtools.errors import DegreeTooSmall, EvenGirth, OddGirth
from egrtools.graph import Graph, parse_graph6
from egrtools.layers import layer_profile
from egrtools.named import by_name, heawood

EVEN_GIRTH_ANCHORS = ["K33", "Q3", "K44", "Heawood", "MobiusKantor", "Pappus", "Desargues", "TutteCoxeter"]


def brute_profiles(k, g, lam):
    """Every vector in the full box 0 <= n_i <= k(k-1)^(t-1) meeting both identities."""
    t = g // 2
    edges = k * (k - 1) ** (t - 1)
    pairs = k * lam // 2
    box = range(edges + 1)
    out = []
    for counts in itertools.product(box, repeat=k):
        if sum(i * n for i, n in enumerate(counts, 1)) == edges and \
                sum(comb(i, 2) * n for i, n in enumerate(counts, 1)) == pairs:
            out.append(counts)
    return sorted(out)


def test_prefilter_examples():
    assert "odd" in feasibility_prefilter(3, 7, 7)
    # 9 is odd and also above the bound of 4; parity is reported first
    assert feasibility_prefilter(3, 5, 9) is not None
    assert "exceeds" in feasibility_prefilter(3, 5, 6)
    assert feasibility_prefilter(3, 5, 4) is None  # Petersen attains the bound
    assert feasibility_prefilter(3, 8, 14) is None
    with pytest.raises(ValueError):
        feasibility_prefilter(2, 5, 2)


def test_prefilter_passes_every_anchor():
    for name in EVEN_GIRTH_ANCHORS + ["K4", "Petersen", "Dodecahedron", "Coxeter"]:
        p = is_egr(by_name(name))
        assert feasibility_prefilter(p.k, p.g, p.lam) is None


def test_profiles_known_case_splits():
    assert [p.counts for p in enumerate_layer_profiles(4, 4, 4)] == [(2, 2, 2, 0), (4, 2, 0, 1)]
    assert [p.counts for p in enumerate_layer_profiles(3, 8, 14)] == [(0, 3, 6), (3, 0, 7)]


def test_profiles_derived_cases():
    assert {p.counts for p in enumerate_layer_profiles(3, 8, 10)} == {(9, 0, 5), (6, 3, 4), (3, 6, 3), (0, 9, 2)}
    assert [p.counts for p in enumerate_layer_profiles(3, 6, 8)] == [(0, 0, 4)]
    assert layer_profile(heawood(), 0).counts == (0, 0, 4)


@pytest.mark.parametrize("k,g,lam", [(3, 4, 2), (3, 4, 4), (3, 6, 4), (3, 6, 8), (3, 8, 10), (3, 8, 14),
                                     (4, 4, 4), (4, 4, 6), (4, 4, 9), (3, 8, 16)])
def test_profiles_match_brute_force_box(k, g, lam):
    assert [p.counts for p in enumerate_layer_profiles(k, g, lam)] == brute_profiles(k, g, lam)


def test_profile_errors():
    with pytest.raises(OddGirth):
        enumerate_layer_profiles(3, 7, 6)
    with pytest.raises(ValueError):
        enumerate_layer_profiles(3, 8, 7)


def test_upper_limit_order():
    assert upper_limit_order(4, 5) == 18
    assert upper_limit_order(6, 5) == 38
    assert upper_limit_order(3, 7) == 23
    for k in range(3, 11):
        for g in range(5, 14, 2):
            assert upper_limit_order(k, g) == upper_limit_order_closed(k, g)
    with pytest.raises(EvenGirth):
        upper_limit_order(3, 6)
    with pytest.raises(DegreeTooSmall):
        upper_limit_order(2, 5)


def test_known_facts():
    assert known_nonexistence_oracle(32, 3, 8, 14).exists is False
    assert known_nonexistence_oracle(18, 4, 5, 8).exists is False
    assert known_nonexistence_oracle(26, 3, 7, 6).source == "GJ1"
    assert known_nonexistence_oracle(10, 3, 5, 4) is None
    assert set(KNOWN_FACTS) == {(26, 3, 7, 6), (32, 3, 8, 14), (18, 4, 5, 8), (38, 6, 5, 24)}
    # the upper-limit orders line up with two of the stored facts
    assert (upper_limit_order(4, 5), 4, 5, 8) in KNOWN_FACTS
    assert (upper_limit_order(6, 5), 6, 5, 24) in KNOWN_FACTS


def test_verdict_invariants():
    with pytest.raises(ValueError):
        CaseVerdict(EgrParams(None, 3, 6, 8), None, INFEASIBLE, [])
    with pytest.raises(ValueError):
        CaseVerdict(EgrParams(None, 3, 6, 8), None, FEASIBLE, [], witness_count=0)


@pytest.mark.parametrize("counts", [(4, 2, 0, 1), (2, 2, 2, 0)])
def test_four_four_four_infeasible_and_replays(counts):
    v = local_completion_search(4, 4, 4, counts, depth=2)
    assert v.status == INFEASIBLE
    assert v.trace
    for step in v.trace:
        assert {"rule", "objects", "values", "conclusion", "state"} <= set(step)
        assert replay_step(step, 4, 4, 4), step
    json.dumps(v.to_dict())


def test_replay_rejects_tampered_step():
    v = local_completion_search(4, 4, 4, (2, 2, 2, 0), depth=2)
    step = next(s for s in v.trace if s["rule"] != "girth")
    tampered = dict(step, state={"order": step["state"]["order"], "edges": []})
    assert not replay_step(tampered, 4, 4, 4)


def test_heawood_witness():
    v = local_completion_search(3, 6, 8, (0, 0, 4), depth=3)
    assert v.status == FEASIBLE and v.witness_count >= 1
    target = canonical_form(heawood()).canonical_string
    assert target in {canonical_form(parse_graph6(w)).canonical_string for w in v.witnesses}


@pytest.mark.parametrize("name", EVEN_GIRTH_ANCHORS)
def test_soundness_anchor_even_girth(name):
    g = by_name(name)
    p = is_egr(g)
    v = local_completion_search(p.k, p.g, p.lam, layer_profile(g, 0), first_witness_only=True, time_limit=120)
    assert v.status == FEASIBLE


def test_soundness_anchor_odd_girth():
    for name in ("K4", "Petersen", "Dodecahedron"):
        p = is_egr(by_name(name))
        assert local_completion_search(p.k, p.g, p.lam, first_witness_only=True).status == FEASIBLE


def test_expansion_order_does_not_change_status():
    cases = [(4, 4, 4, (2, 2, 2, 0), 2), (4, 4, 4, (4, 2, 0, 1), 2), (3, 6, 8, (0, 0, 4), 3),
             (3, 7, 6, None, 3), (3, 6, 6, (0, 3, 2), 3)]
    for k, g, lam, prof, d in cases:
        a = local_completion_search(k, g, lam, prof, depth=d)
        b = local_completion_search(k, g, lam, prof, depth=d, descending=True)
        assert a.status == b.status and a.witness_count == b.witness_count


def test_threads_match_sequential():
    for k, g, lam, prof, d in [(4, 4, 4, (2, 2, 2, 0), 2), (3, 6, 8, (0, 0, 4), 3), (3, 7, 6, None, 3)]:
        one = local_completion_search(k, g, lam, prof, depth=d)
        two = local_completion_search(k, g, lam, prof, depth=d, threads=2)
        assert (one.status, one.witness_count, one.witnesses) == (two.status, two.witness_count, two.witnesses)
        assert all(replay_step(s, k, g, lam) for s in two.trace)


def test_budget_gives_unknown():
    v = local_completion_search(3, 8, 14, (0, 3, 6), node_limit=50)
    assert v.status == UNKNOWN


def test_prefilter_and_profile_rejections_in_verdict():
    with pytest.raises(ValueError):
        local_completion_search(3, 7, 7)
    v = local_completion_search(3, 8, 14, (1, 1, 1), depth=4)
    assert v.status == INFEASIBLE and v.trace[0]["rule"] == "profile_identity"
    assert replay_step(v.trace[0], 3, 8, 14)
    assert not replay_step(dict(v.trace[0], objects={"profile": [3, 0, 7]}), 3, 8, 14)
    with pytest.raises(ValueError):
        local_completion_search(3, 8, 14, depth=5)


def test_rule_names_can_be_disabled():
    v = local_completion_search(4, 4, 4, (4, 2, 0, 1), depth=2, disabled_rules=("cut_budget",))
    assert v.status == INFEASIBLE
    assert "cut_budget" in RULE_NAMES and "girth" not in RULE_NAMES


def test_cubic_girth7_lambda6_full_rules():
    v = local_completion_search(3, 7, 6, depth=3, test_mode=True)
    assert v.status == INFEASIBLE
    assert v.stats["expectation_failures"] == 0
    assert all(replay_step(s, 3, 7, 6) for s in v.trace)


def test_cubic_girth7_lambda6_closure_hits_known_fact():
    """With the cut rule off, the lone survivor closes to a 26-vertex graph ruled out by the stored fact."""
    v = local_completion_search(3, 7, 6, depth=3, outside_layer=False, test_mode=True,
                                disabled_rules=("cut_budget", "pair_overflow"))
    assert v.status == FEASIBLE and v.witness_count == 1
    assert v.stats["expectation_failures"] == 0
    s = parse_graph6(v.witnesses[0])
    layers = v.stats["survivors"][0]["layers"]
    paths = outer_layer_paths(s.adjacency, layers, 3)
    assert paths is not None and len(paths) == 3 and all(2 <= len(p) <= 4 for p in paths)
    short = [x for x in range(s.order) if s.degree(x) == 2]
    assert s.order == 25 and len(short) == 3
    closed = Graph.from_edges(26, list(s.edges) + [(x, 25) for x in short])
    assert girth(closed) == 7 and all(d == 3 for d in closed.degrees())
    assert is_egr(closed) is None
    assert Rules(3, 7, 6).check_closed(closed.adjacency)["rule"] == "known_fact"

