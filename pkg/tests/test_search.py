import pytest

from geodex.automorphism import VertexPermutation
from geodex.canon import canonical_form
from geodex.digraph import (
    Digraph,
    common_in_neighbours,
    common_out_neighbours,
    excess_profile,
    outlier_map,
    verify_path_identity,
)
from geodex.search import SearchConfig, _State, search_excess_one
from oracles import brute_canonical, brute_geodetic_classes


def _enumerate(d: int, k: int, n: int) -> set[tuple]:
    """All leaves of the search tree at order n, up to isomorphism (rules off)."""
    st = _State(d, k, False, False, n=n)
    out = set()

    def rec(v: int):
        if v == n:
            out.add(brute_canonical(st.digraph()))
            return
        for _ in st.children(v):
            rec(v + 1)

    rec(0)
    return out


@pytest.mark.parametrize("k", range(2, 7))
def test_one_regular_finds_the_cycle(k):
    r = search_excess_one(SearchConfig(1, k))
    assert r.exhausted
    assert len(r.found) == 1
    assert canonical_form(r.found[0]) == canonical_form(Digraph.cycle(k + 2))


def test_2_2_empty():
    r = search_excess_one(SearchConfig(2, 2))
    assert r.exhausted and r.found == []
    assert not r.theorem_dependent


@pytest.mark.parametrize("d, classes", [(2, 2), (3, 2), (4, 4)])
def test_k1_class_counts(d, classes):
    # one class per fixed-point-free cycle type on d+2 points
    r = search_excess_one(SearchConfig(d, 1))
    assert r.exhausted and len(r.found) == classes


@pytest.mark.parametrize("d, k, n", [(2, 1, 4), (2, 1, 5), (3, 1, 5), (1, 2, 4), (1, 2, 6), (1, 3, 5)])
def test_search_tree_matches_brute_force(d, k, n):
    assert _enumerate(d, k, n) == brute_geodetic_classes(d, k, n)


@pytest.mark.parametrize("d, k", [(1, 2), (1, 3), (1, 4), (1, 5), (1, 6), (2, 1), (3, 1), (4, 1), (2, 2)])
def test_pruning_rules_do_not_change_results(d, k):
    on = search_excess_one(SearchConfig(d, k))
    off = search_excess_one(SearchConfig(d, k, common_out_rule=False, transposition_rule=False))
    assert on.found == off.found
    assert on.exhausted and off.exhausted


@pytest.mark.parametrize("d, k", [(1, 4), (2, 1), (4, 1), (2, 2), (3, 2)])
def test_parallel_matches_serial(d, k):
    serial = search_excess_one(SearchConfig(d, k))
    parallel = search_excess_one(SearchConfig(d, k, workers=2))
    assert serial == parallel


@pytest.mark.parametrize("d, k", [(1, 3), (1, 6), (2, 1), (3, 1), (4, 1)])
def test_found_digraphs_are_valid(d, k):
    for g in search_excess_one(SearchConfig(d, k)).found:
        assert excess_profile(g, d, k).is_excess_one
        o = outlier_map(g, k)
        assert verify_path_identity(g, k, o)


def test_found_are_pairwise_non_isomorphic():
    found = search_excess_one(SearchConfig(4, 1)).found
    forms = [canonical_form(g) for g in found]
    assert len(set(forms)) == len(forms)


def test_common_out_rule_gated_to_degree_three():
    assert SearchConfig(3, 2).uses_common_out_rule
    assert not SearchConfig(2, 2).uses_common_out_rule
    assert not SearchConfig(3, 1).uses_common_out_rule
    assert not SearchConfig(3, 2, common_out_rule=False).uses_common_out_rule


def test_3_2_with_rule_is_conditional():
    r = search_excess_one(SearchConfig(3, 2))
    assert r.exhausted and r.found == []
    assert r.theorem_dependent


def test_budget_stops_early():
    r = search_excess_one(SearchConfig(2, 1, node_budget=3))
    assert not r.exhausted
    assert r.nodes <= search_excess_one(SearchConfig(2, 1)).nodes


def test_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(0, 2)
    with pytest.raises(ValueError):
        SearchConfig(2, 0)
    with pytest.raises(ValueError):
        SearchConfig(2, 2, workers=0)
    with pytest.raises(ValueError):
        SearchConfig(4, 3)


def test_one_common_neighbour_consistency_on_k1_not_required():
    # the degree-3 rule needs k >= 2; (3,1;+1)-digraphs violate it freely
    g = search_excess_one(SearchConfig(3, 1)).found[0]
    assert any(len(common_out_neighbours(g, u, v)) > 1 for u in range(g.n) for v in range(u + 1, g.n))
    assert any(len(common_in_neighbours(g, u, v)) > 1 for u in range(g.n) for v in range(u + 1, g.n))


def test_equal_neighbourhood_pairs_in_results_are_outlier_pairs():
    for g in search_excess_one(SearchConfig(4, 1)).found:
        o = VertexPermutation(outlier_map(g, 1).o)
        for u in range(g.n):
            for v in range(u + 1, g.n):
                if g.out_adj[u] == g.out_adj[v]:
                    assert o(u) == v and o(v) == u
