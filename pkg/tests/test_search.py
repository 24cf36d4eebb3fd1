import pytest

from egrtools.canon import canonical_form
from egrtools.cycles import girth, is_egr
from egrtools.errors import ParityViolation
from egrtools.graph import Graph, is_connected, is_regular, parse_graph6
from egrtools.named import complete, complete_bipartite, path, petersen
from egrtools.search import SearchOptions, cut_vertices, generate_regular, search_egr

from oracles import brute_regular_graphs

# (k, g, lambda, v_max) -> canonical results
TARGETS = {
    (3, 4, 4, 6): [canonical_form(complete_bipartite(3, 3)).canonical_string],
    (3, 5, 4, 10): [canonical_form(petersen()).canonical_string],
    (4, 4, 4, 12): [],
}


def test_cubic_counts_match_brute_force():
    for v, want in ((4, 1), (6, 2), (8, 5), (10, 19)):
        ours = generate_regular(3, 3, v)
        assert len(ours) == want
        brute = {canonical_form(Graph.from_edges(v, h.edges())).canonical_string
                 for h in brute_regular_graphs(3, v)}
        assert set(ours) == brute


def test_generator_examples():
    assert generate_regular(3, 3, 4) == [canonical_form(complete(4)).canonical_string]
    assert len(generate_regular(3, 3, 12)) == 85
    assert len(generate_regular(3, 4, 12)) == 22
    assert len(generate_regular(3, 5, 14)) == 9
    assert len(generate_regular(4, 3, 8)) == 6
    with pytest.raises(ParityViolation):
        generate_regular(3, 3, 7)


def test_generated_graphs_are_what_they_claim():
    for k, gmin, v in ((3, 3, 10), (3, 4, 12), (4, 4, 10)):
        out = generate_regular(k, gmin, v)
        assert len(set(out)) == len(out)
        for s in out:
            g = parse_graph6(s)
            assert g.order == v and is_regular(g) == k and is_connected(g) and girth(g) >= gmin
            assert canonical_form(g).canonical_string == s


@pytest.mark.parametrize("target", sorted(TARGETS))
def test_search_targets(target):
    k, g, lam, v_max = target
    out = search_egr(k, g, lam, v_max)
    assert out.complete
    assert out.results == TARGETS[target]
    for s in out.results:
        assert is_egr(parse_graph6(s)).as_tuple()[1:] == (k, g, lam)


@pytest.mark.parametrize("target", sorted(TARGETS))
def test_lambda_pruning_is_safe(target):
    k, g, lam, v_max = target
    on = search_egr(k, g, lam, v_max)
    off = search_egr(k, g, lam, v_max, SearchOptions(lambda_pruning=False))
    assert on.results == off.results


def test_threads_and_repeat_runs_agree():
    for k, g, lam, v_max in sorted(TARGETS):
        a = search_egr(k, g, lam, v_max)
        b = search_egr(k, g, lam, v_max, SearchOptions(threads=8))
        c = search_egr(k, g, lam, v_max)
        assert a.results == b.results == c.results
    assert generate_regular(3, 3, 12, SearchOptions(threads=4, lambda_pruning=False)) == generate_regular(3, 3, 12)


def test_more_cubic_targets():
    # cube, Heawood and the Moebius-Kantor graph are the smallest of their kind
    assert len(search_egr(3, 4, 2, 8).results) == 1
    assert len(search_egr(3, 6, 8, 14).results) == 1
    assert search_egr(3, 3, 2, 12).results == [canonical_form(complete(4)).canonical_string]


def test_prefilter_short_circuits():
    out = search_egr(3, 5, 6, 30)
    assert out.results == [] and "prefilter" in out.stats


def test_budget_marks_incomplete():
    out = search_egr(3, 6, 8, 16, SearchOptions(node_limit=20))
    assert not out.complete


def test_cut_vertices():
    # a path: internal vertices are cut vertices
    assert cut_vertices(list(path(4).adjacency)) == 0b0110
    assert cut_vertices(list(petersen().adjacency)) == 0
