import random
import time

import pytest

from egrtools.cycles import EgrParams, girth, is_egr
from egrtools.errors import BadCandidate, NotApplicable
from egrtools.graph import Graph, parse_graph6
from egrtools.lemmas import (
    check_cycle_intersections,
    check_edge_cut_lemmas,
    check_forbidden_subgraph,
    check_nonincident_edge_bound,
    check_p3_exact,
    check_path_containment_bounds,
    check_vertex_cycle_count,
    find_subgraph,
    nonincident_bound,
    path_bound,
    run_suite,
    verify_witness,
)
from egrtools.named import (
    REFERENCE,
    complete,
    complete_bipartite,
    heawood,
    mcgee,
    petersen,
    tutte_coxeter,
    two_triangles_bridge,
)
from egrtools.search import generate_regular


def params_of(g):
    return is_egr(g)


# one engineered input per check on which it must fail: (check name, thunk)
COUNTEREXAMPLES = {
    "vertex_cycle_count": lambda: (petersen(), check_vertex_cycle_count(petersen(), EgrParams(10, 3, 5, 2))),
    "cycle_intersections": lambda: (complete(4), check_cycle_intersections(complete(4), length=4)),
    "path_containment_bounds": lambda: (complete_bipartite(4, 4),
                                        check_path_containment_bounds(complete_bipartite(4, 4), 3)),
    "p3_exact": lambda: (petersen(), check_p3_exact(petersen(), EgrParams(10, 3, 5, 2))),
    "nonincident_edge_bound": lambda: (heawood(), check_nonincident_edge_bound(heawood(), 2)),
    "edge_cut_lemmas": lambda: (two_triangles_bridge(),
                                check_edge_cut_lemmas(two_triangles_bridge(), EgrParams(6, 3, 3, 2))),
    "forbidden_subgraph": lambda: (complete(5),
                                   check_forbidden_subgraph(complete(5), complete(4), EgrParams(5, 4, 3, 2))),
}


@pytest.mark.parametrize("name", sorted(REFERENCE))
def test_suite_green_on_reference(name):
    g = REFERENCE[name]
    results = run_suite(g, params_of(g), force_exhaustive=True)
    assert [r.check_name for r in results] == sorted(r.check_name for r in results)
    for r in results:
        assert r.passed, (r.check_name, r.witnesses[:2])


@pytest.mark.parametrize("name", sorted(COUNTEREXAMPLES))
def test_counterexample_witnesses_verify(name):
    g, res = COUNTEREXAMPLES[name]()
    assert res.check_name == name
    assert not res.passed and res.witnesses
    assert all(verify_witness(g, w) for w in res.witnesses)


def test_bridge_is_the_cut_witness():
    _, res = COUNTEREXAMPLES["edge_cut_lemmas"]()
    cut = [w for w in res.witnesses if w["kind"] == "edge_cut"]
    assert cut and cut[0]["edges"] == [[2, 3]]


def test_witnesses_do_not_verify_on_other_graphs():
    _, res = COUNTEREXAMPLES["vertex_cycle_count"]()
    w = dict(res.witnesses[0], observed=5)
    assert not verify_witness(petersen(), w)


def test_bounds():
    # cubic girth 8: P6 <= 1, P5 <= 2, P4 <= 4
    assert [path_bound(3, 8, m) for m in (6, 5, 4)] == [1, 2, 4]
    assert path_bound(3, 5, 4) == 1
    assert path_bound(3, 6, 5) == 1
    assert nonincident_bound(3, 5) == 1
    assert nonincident_bound(3, 6) == 2
    assert nonincident_bound(3, 8) == 4
    with pytest.raises(NotApplicable):
        nonincident_bound(3, 4)


def test_check_examples():
    assert check_vertex_cycle_count(heawood(), EgrParams(14, 3, 6, 8)).passed
    assert not check_vertex_cycle_count(mcgee(), EgrParams(24, 3, 7, 6)).passed
    assert check_path_containment_bounds(tutte_coxeter(), 3).passed
    assert check_nonincident_edge_bound(tutte_coxeter(), 3).details["bound"] == 4
    with pytest.raises(NotApplicable):
        check_p3_exact(complete_bipartite(4, 4), EgrParams(8, 4, 4, 9))
    with pytest.raises(NotApplicable):
        check_nonincident_edge_bound(complete_bipartite(3, 3), 3)


def test_edge_cut_modes(monkeypatch):
    res = check_edge_cut_lemmas(heawood(), EgrParams(14, 3, 6, 8))
    assert res.passed and res.details["cut_sizes"][3]["mode"] == "exhaustive"
    import egrtools.lemmas as lemmas_mod

    monkeypatch.setattr(lemmas_mod, "EXHAUSTIVE_LIMIT", 1000)
    res = check_edge_cut_lemmas(tutte_coxeter(), EgrParams(30, 3, 8, 16), seed=7, samples=300)
    assert res.passed
    modes = {v["mode"] for v in res.details["cut_sizes"].values()}
    assert "sampled" in modes
    sampled = [v for v in res.details["cut_sizes"].values() if v["mode"] == "sampled"]
    assert all(v["seed"] == 7 for v in sampled)
    forced = check_edge_cut_lemmas(heawood(), EgrParams(14, 3, 6, 8), force_exhaustive=True)
    assert {v["mode"] for v in forced.details["cut_sizes"].values()} == {"exhaustive"}


def test_forbidden_subgraph_examples():
    k44 = complete_bipartite(4, 4)
    k33 = complete_bipartite(3, 3)
    res = check_forbidden_subgraph(k44, k33, EgrParams(None, 4, 4, 4))
    assert not res.passed and verify_witness(k44, res.witnesses[0])
    assert check_forbidden_subgraph(petersen(), k33, EgrParams(None, 4, 4, 4)).passed
    assert check_forbidden_subgraph(complete(4), k33, EgrParams(None, 4, 4, 4)).passed
    with pytest.raises(BadCandidate):
        check_forbidden_subgraph(k44, k33, EgrParams(None, 4, 4, 6))
    with pytest.raises(BadCandidate):
        check_forbidden_subgraph(k44, mcgee(), EgrParams(None, 4, 7, 6))


def test_find_subgraph_embeds():
    m = find_subgraph(petersen(), Graph.from_edges(5, [(i, (i + 1) % 5) for i in range(5)]))
    assert m is not None and len(set(m)) == 5


def test_p3_failure_implies_not_egr_with_even_lambda():
    """Contrapositive of the exact P3 count on cubic graphs."""
    rng = random.Random(4)
    pool = generate_regular(3, 3, 10) + generate_regular(3, 4, 12)
    for s in rng.sample(pool, 25):
        g = parse_graph6(s)
        for lam in (2, 4, 6):
            res = check_p3_exact(g, EgrParams(g.order, 3, girth(g), lam))
            if not res.passed:
                p = is_egr(g)
                assert p is None or p.lam != lam


def test_suite_threads_and_timing():
    t0 = time.monotonic()
    for g in REFERENCE.values():
        one = [r.to_dict() for r in run_suite(g, params_of(g), force_exhaustive=True)]
        two = [r.to_dict() for r in run_suite(g, params_of(g), force_exhaustive=True, threads=4)]
        assert one == two
    assert time.monotonic() - t0 < 60
