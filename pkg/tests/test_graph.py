import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from groupoid_graph.errors import MalformedInputError, PreconditionError
from groupoid_graph.fixtures import example_4_3, o3_graph, z2_swapping_two_loops
from groupoid_graph.graph import (
    GraphAction,
    act_on_path,
    fiber_graphs,
    graph_action_from_dict,
    graph_from_adjacency,
    graph_from_dict,
    is_free,
    make_path,
    orbit_quotient_graph_free,
    trivial_action,
    validate_graph_action,
)
from groupoid_graph.instances import random_free_action, random_fuzz_action, random_graph, random_relabel

adjacency_st = st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(st.integers(0, 2), min_size=n, max_size=n), min_size=n, max_size=n)
)


@given(adjacency_st)
def test_adjacency_roundtrip_and_path_counts(adj):
    adj = np.array(adj, dtype=np.int64)
    E = graph_from_adjacency(adj)
    assert np.array_equal(E.adjacency(), adj)
    # paths of length k ending (range) at x starting at y are counted by A^k
    for k in range(4):
        counts = np.zeros_like(adj)
        for p in E.paths_of_length(k):
            counts[p.vertex, E.path_source(p)] += 1
        assert np.array_equal(counts, np.linalg.matrix_power(adj, k))


def test_sources_and_sinks_by_hand():
    # v0 -> v1 -> v2, loop at v2
    E = graph_from_adjacency(np.array([[0, 0, 0], [1, 0, 0], [0, 1, 1]]))
    assert E.sources == [0]
    assert E.sinks == []
    assert E.flags()["no_sources"] is False
    F = graph_from_adjacency(np.array([[0, 0], [1, 0]]))
    assert F.sinks == [1]


def test_graph_dict_roundtrip_and_bad_refs():
    E = o3_graph()
    E2 = graph_from_dict(E.to_dict())
    assert np.array_equal(E.adjacency(), E2.adjacency())
    with pytest.raises(MalformedInputError):
        graph_from_dict({"vertices": ["a"], "edges": [{"id": "e", "src": "a", "rng": "b"}]})
    with pytest.raises(MalformedInputError):
        graph_from_dict({"vertices": ["a", "a"], "edges": []})


def test_fixture_actions_validate():
    for A in (example_4_3(), z2_swapping_two_loops(), trivial_action(o3_graph())):
        assert validate_graph_action(A).ok
        A2 = graph_action_from_dict(A.to_dict())
        assert np.array_equal(A2.edge_act, A.edge_act)


def test_breaking_range_equivariance_is_reported():
    A = example_4_3()
    et = A.edge_act.copy()
    # send some moved edge to an edge over a different vertex
    g, e = map(int, np.argwhere(et >= 0)[5])
    target_v = A.vertex_act[g, A.graph.e_rng[e]]
    wrong = int(np.flatnonzero(A.graph.e_rng != target_v)[0])
    et[g, e] = wrong
    bad = GraphAction(A.groupoid, A.graph, A.anchor, A.vertex_act, et)
    rep = validate_graph_action(bad)
    assert not rep.ok
    assert "range_equivariance" in rep.violated_axioms


@pytest.mark.parametrize("seed", range(10))
def test_path_action_is_functorial(seed):
    rng = np.random.default_rng(seed)
    A = random_fuzz_action(rng)
    assert validate_graph_action(A).ok
    G, E = A.groupoid, A.graph
    for p in E.paths_of_length(2)[:20]:
        u = int(A.anchor[p.vertex])
        for h in np.flatnonzero(G.src == u)[:4]:
            hp = act_on_path(A, int(h), p)
            assert E.is_path(hp.edges)
            for g in np.flatnonzero(G.src == G.rng[h])[:4]:
                gh = int(G.compose[g, h])
                assert act_on_path(A, int(g), hp) == act_on_path(A, gh, p)


def test_act_on_path_rejects_wrong_anchor():
    A = example_4_3()
    p = make_path(A.graph, [0])
    bad = int(np.flatnonzero(A.groupoid.src != A.anchor[p.vertex])[0])
    with pytest.raises(PreconditionError):
        act_on_path(A, bad, p)
    with pytest.raises(PreconditionError):
        make_path(A.graph, [])


def test_fiber_graphs_partition():
    A = example_4_3()
    fibres = fiber_graphs(A)
    assert sum(f.graph.n_vertices for f in fibres) == A.graph.n_vertices
    assert sum(f.graph.n_edges for f in fibres) == A.graph.n_edges
    assert sorted(np.concatenate([f.edges for f in fibres]).tolist()) == list(range(A.graph.n_edges))
    assert all(f.graph.n_vertices == 1 and f.graph.n_edges == 3 for f in fibres)


@pytest.mark.parametrize("seed", range(5))
def test_free_action_orbit_graph(seed):
    A = random_free_action(np.random.default_rng(seed))
    assert is_free(A)
    Q = orbit_quotient_graph_free(A)
    assert Q.n_edges * 1 <= A.graph.n_edges
    assert not is_free(example_4_3())
    with pytest.raises(PreconditionError):
        orbit_quotient_graph_free(example_4_3())


@settings(max_examples=15)
@given(st.integers(0, 2**31))
def test_random_relabel_preserves_validity(seed):
    rng = np.random.default_rng(seed)
    A = random_fuzz_action(rng)
    B, _ = random_relabel(A, rng)
    assert validate_graph_action(B).ok
    assert sorted(B.graph.adjacency().sum(axis=1)) == sorted(A.graph.adjacency().sum(axis=1))


def test_random_graph_respects_no_sources():
    rng = np.random.default_rng(0)
    for _ in range(20):
        assert not random_graph(rng, no_sources=True).has_sources


@settings(max_examples=20)
@given(st.integers(0, 2**31))
def test_trivial_action_is_valid_on_any_graph(seed):
    E = random_graph(np.random.default_rng(seed))
    A = trivial_action(E)
    assert validate_graph_action(A).ok
    assert len(fiber_graphs(A)) == 1
    assert np.array_equal(orbit_quotient_graph_free(A).adjacency(), E.adjacency())
