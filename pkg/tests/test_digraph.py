import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geodex.automorphism import VertexPermutation
from geodex.digraph import (
    Digraph,
    VertexType,
    closed_walk_trace,
    common_in_neighbours,
    common_out_neighbours,
    converse,
    count_cycles_of_length,
    excess_profile,
    is_diregular,
    is_k_geodetic,
    load_digraph,
    outlier_map,
    store_digraph,
    verify_path_identity,
    vertex_type,
    walk_counts,
)
from geodex.errors import DigraphFormatError, NotAutomorphism, NotExcessOne
from oracles import (
    brute_cycle_count,
    brute_walk_counts,
    digraphs,
    excess_one_fixtures,
    k1_excess_one,
    matrix_power_trace,
    permutation_of_type,
)

K3 = Digraph.complete(3)


FIXTURES = excess_one_fixtures()


# -- construction and text format -------------------------------------------

def test_rejects_loops_and_parallel_arcs():
    with pytest.raises(ValueError):
        Digraph(2, [[0], []])
    with pytest.raises(ValueError):
        Digraph(2, [[1, 1], []])
    with pytest.raises(ValueError):
        Digraph(2, [[2], []])


@given(digraphs())
def test_store_load_roundtrip(g):
    assert load_digraph(store_digraph(g)) == g


def test_load_ignores_comments_and_blanks():
    text = "# a 3-cycle\n3\n\n0: 1\n# middle\n1: 2\n2: 0\n"
    assert load_digraph(text) == Digraph.cycle(3)


@pytest.mark.parametrize(
    "text, line",
    [
        ("x\n", 1),
        ("2\n0: 1\n", None),
        ("2\n0 1\n1: 0\n", 2),
        ("2\n0: a\n1: 0\n", 2),
        ("2\n1: 0\n0: 1\n", 2),
        ("2\n0: 0\n1: 0\n", 2),
        ("2\n0: 1\n1: 5\n", 3),
        ("2\n0: 1 1\n1: 0\n", 2),
    ],
)
def test_load_errors_report_line(text, line):
    with pytest.raises(DigraphFormatError) as info:
        load_digraph(text)
    if line is not None:
        assert info.value.line == line


def test_store_is_canonical():
    g = Digraph(3, [[2, 1], [0], []])
    assert store_digraph(g) == "3\n0: 1 2\n1: 0\n2:\n"


# -- walk counting ----------------------------------------------------------

@settings(max_examples=60)
@given(digraphs(max_n=6), st.integers(1, 4))
def test_walk_counts_match_enumeration(g, k):
    assert [list(r) for r in walk_counts(g, k).counts] == brute_walk_counts(g, k)


@settings(max_examples=60)
@given(digraphs(max_n=7), st.integers(1, 4))
def test_geodetic_iff_counts_at_most_one(g, k):
    report = is_k_geodetic(g, k)
    table = walk_counts(g, k)
    assert report.ok == all(c <= 1 for row in table.counts for c in row)
    if not report.ok:
        u, v, w1, w2 = report.witness
        assert w1 != w2
        for w in (w1, w2):
            assert w[0] == u and w[-1] == v and len(w) - 1 <= k
            assert all(g.has_arc(a, b) for a, b in zip(w, w[1:]))


@settings(max_examples=60)
@given(digraphs(max_n=6), st.integers(1, 5))
def test_closed_walk_trace_matches_matrix_power(g, r):
    assert closed_walk_trace(g, r) == matrix_power_trace(g, r)


@settings(max_examples=60)
@given(digraphs(max_n=6), st.integers(1, 4))
def test_trace_zero_below_horizon_on_geodetic_digraphs(g, k):
    if is_k_geodetic(g, k).ok:
        assert all(closed_walk_trace(g, r) == 0 for r in range(1, k + 1))


@pytest.mark.parametrize("g, k", FIXTURES)
def test_trace_zero_on_fixtures(g, k):
    assert all(closed_walk_trace(g, r) == 0 for r in range(1, k + 1))


def test_closed_walk_trace_examples():
    c4 = Digraph.cycle(4)
    assert closed_walk_trace(c4, 4) == 4
    assert closed_walk_trace(c4, 3) == 0


# -- cycles -----------------------------------------------------------------

def test_count_cycles_examples():
    assert count_cycles_of_length(Digraph.cycle(4), 4) == 1
    assert count_cycles_of_length(K3, 3) == 2
    assert count_cycles_of_length(K3, 2) == 3


@settings(max_examples=60)
@given(digraphs(max_n=6), st.integers(2, 6))
def test_count_cycles_match_brute_force(g, length):
    if length <= g.n:
        assert count_cycles_of_length(g, length) == brute_cycle_count(g, length)


# -- excess profile and outliers --------------------------------------------

@pytest.mark.parametrize("k", range(1, 21))
def test_cycle_is_excess_one(k):
    assert excess_profile(Digraph.cycle(k + 2), 1, k).is_excess_one


def test_profile_fields():
    prof = excess_profile(K3, 2, 1)
    assert (prof.moore, prof.excess, prof.diregular, prof.geodetic) == (3, 0, True, True)
    assert not prof.is_excess_one


def test_outlier_of_four_cycle_is_predecessor():
    o = outlier_map(Digraph.cycle(4), 2)
    assert o.o == (3, 0, 1, 2)


def test_outlier_of_seven_cycle_is_rotation():
    o = outlier_map(Digraph.cycle(7), 5)
    assert o.o == tuple((u - 1) % 7 for u in range(7))


def test_outlier_map_rejects_k3():
    with pytest.raises(NotExcessOne):
        outlier_map(K3, 2)


def test_outlier_map_rejects_wrong_order():
    # every vertex misses two vertices within distance 2
    with pytest.raises(NotExcessOne):
        outlier_map(Digraph.cycle(5), 2)


def test_perturbed_four_cycle_fails():
    g = Digraph(4, [[1], [2], [3], [1]])
    with pytest.raises((NotExcessOne, NotAutomorphism)):
        outlier_map(g, 2)


@pytest.mark.parametrize("g, k", FIXTURES)
def test_path_identity_and_duality(g, k):
    o = outlier_map(g, k)
    assert verify_path_identity(g, k, o)
    assert sorted(o.o) == list(range(g.n)) and all(o(u) != u for u in range(g.n))
    oc = outlier_map(converse(g), k)
    assert oc.o == o.o_inv


@pytest.mark.parametrize("parts", [[2, 2], [3, 2], [2, 2, 2], [4, 2], [3, 3], [5]])
def test_k1_fixture_outlier_is_the_removed_permutation(parts):
    perm = permutation_of_type(parts)
    o = outlier_map(k1_excess_one(perm), 1)
    assert o.o == perm.images


@pytest.mark.parametrize("g, k", FIXTURES)
def test_equal_out_neighbourhoods_are_transposed(g, k):
    o = outlier_map(g, k)
    for u in range(g.n):
        for v in range(g.n):
            if u != v and g.out_adj[u] == g.out_adj[v]:
                assert o(u) == v and o(v) == u
            if u != v and g.in_adj[u] == g.in_adj[v]:
                assert o(u) == v and o(v) == u


def test_transposition_hypothesis_actually_exercised():
    g = k1_excess_one(permutation_of_type([2, 2, 2]))
    assert g.out_adj[0] == g.out_adj[1]


# -- converse, neighbourhoods, vertex types ---------------------------------

def test_converse_of_cycle():
    assert converse(Digraph.cycle(4)) == Digraph(4, [[3], [0], [1], [2]])


@given(digraphs())
def test_converse_involution(g):
    assert converse(converse(g)) == g
    assert all(converse(g).has_arc(v, u) for u, v in g.arcs())


def test_common_neighbours():
    c4 = Digraph.cycle(4)
    assert all(not common_out_neighbours(c4, u, v) for u in range(4) for v in range(4) if u != v)
    assert common_out_neighbours(K3, 0, 1) == {2}
    assert common_in_neighbours(K3, 0, 1) == {2}
    with pytest.raises(ValueError):
        common_out_neighbours(K3, 1, 1)


@pytest.mark.parametrize("k", [2, 5])
def test_cycles_are_all_type_ii(k):
    g = Digraph.cycle(k + 2)
    o = outlier_map(g, k)
    assert all(vertex_type(g, k, o, u) is VertexType.TYPE_II for u in range(g.n))


@pytest.mark.parametrize("g, k", [f for f in FIXTURES if f[1] >= 2])
def test_unique_type_ii_out_neighbour(g, k):
    o = outlier_map(g, k)
    for u in range(g.n):
        if vertex_type(g, k, o, u) is VertexType.TYPE_II:
            type2 = [w for w in g.out_adj[u] if vertex_type(g, k, o, w) is VertexType.TYPE_II]
            assert type2 == [o.o_inv[u]]


def test_type_i_in_k1_fixture():
    perm = permutation_of_type([2, 3])
    g = k1_excess_one(perm)
    o = outlier_map(g, 1)
    types = [vertex_type(g, 1, o, u) for u in range(g.n)]
    # vertices on the 2-cycle of the removed permutation are Type I
    assert types[:2] == [VertexType.TYPE_I] * 2
    assert types[2:] == [VertexType.TYPE_II] * 3


def test_is_diregular():
    assert is_diregular(K3, 2)
    assert not is_diregular(Digraph(3, [[1, 2], [0], [0]]), 1)


def test_random_relabel_preserves_excess_one():
    rng = random.Random(7)
    for g, k in FIXTURES:
        perm = list(range(g.n))
        rng.shuffle(perm)
        h = g.relabel(perm)
        d = g.out_degree(0)
        assert excess_profile(h, d, k).is_excess_one
        o, oh = outlier_map(g, k), outlier_map(h, k)
        assert all(oh(perm[u]) == perm[o(u)] for u in range(g.n))


def test_vertex_permutation_of_outlier_is_automorphism():
    from geodex.automorphism import is_automorphism

    for g, k in FIXTURES:
        assert is_automorphism(g, VertexPermutation(outlier_map(g, k).o))
