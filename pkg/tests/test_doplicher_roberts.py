import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from groupoid_graph.doplicher_roberts import (
    bratteli_dr_fibre,
    core_bratteli,
    dr_dimension_table,
    intertwiner_dimension,
)
from groupoid_graph.errors import PreconditionError
from groupoid_graph.fixtures import example_4_3, loops_with_group, o3_graph
from groupoid_graph.graph import DirectedGraph, act_on_path, fiber_graphs, trivial_action
from groupoid_graph.instances import random_fuzz_action, random_graph
from groupoid_graph.quotient import quotient_graph


def orbit_count_oracle(A, unit, m, n):
    """Count isotropy orbits on pairs (mu, nu) with a common source, by brute force."""
    G, E = A.groupoid, A.graph
    fg = fiber_graphs(A)[unit]
    verts = set(fg.vertices.tolist())
    iso = [int(g) for g in np.flatnonzero((G.src == unit) & (G.rng == unit))]

    def paths(k):
        return [p for p in E.paths_of_length(k) if p.vertex in verts]

    pairs = {
        (mu, nu)
        for mu in paths(m)
        for nu in paths(n)
        if E.path_source(mu) == E.path_source(nu)
    }
    seen, count = set(), 0
    for pr in pairs:
        if pr in seen:
            continue
        count += 1
        seen |= {(act_on_path(A, g, pr[0]), act_on_path(A, g, pr[1])) for g in iso}
    return count


def test_s3_fixture_values():
    A = example_4_3()
    assert intertwiner_dimension(A, 0, 0, 0) == 1
    assert intertwiner_dimension(A, 0, 1, 1) == 2
    assert intertwiner_dimension(A, 0, 2, 2) == (81 + 3 * 1 + 2 * 0) // 6 == 14
    t0 = dr_dimension_table(A, 0, 3)
    t1 = dr_dimension_table(A, 1, 3)
    assert t0.diagonal == (1, 2, 14, 122)
    # both fibres carry the same S3-on-C^3 table
    assert np.array_equal(t0.table, t1.table)
    assert t0.table.tolist() == [[1, 1, 2, 5], [1, 2, 5, 14], [2, 5, 14, 41], [5, 14, 41, 122]]


def test_trivial_isotropy_one_loop():
    A = trivial_action(DirectedGraph(1, np.array([0]), np.array([0])))
    t = dr_dimension_table(A, 0, 4)
    assert (t.table == 1).all()


@settings(max_examples=15)
@given(st.integers(0, 2**31))
def test_trivial_isotropy_counts_path_pairs(seed):
    E = random_graph(np.random.default_rng(seed), max_vertices=4, max_edges=6)
    A = trivial_action(E)
    adj = E.adjacency()
    for m in range(3):
        for n in range(3):
            pm, pn = np.linalg.matrix_power(adj, m), np.linalg.matrix_power(adj, n)
            # pairs with common source: sum over sources y of (#paths from y)^...
            expected = int(pm.sum(axis=0) @ pn.sum(axis=0))
            assert intertwiner_dimension(A, 0, m, n) == expected


@pytest.mark.parametrize("seed", range(12))
def test_burnside_explicit_and_orbit_oracle_agree(seed):
    A = random_fuzz_action(np.random.default_rng(3000 + seed), max_edges=8)
    for u in range(A.groupoid.n_units):
        for m, n in [(0, 0), (0, 1), (1, 1), (1, 2), (2, 2)]:
            b = intertwiner_dimension(A, u, m, n)
            assert b == intertwiner_dimension(A, u, m, n, method="explicit")
            assert b == orbit_count_oracle(A, u, m, n)


@pytest.mark.parametrize("seed", range(6))
def test_table_symmetric_and_monotone(seed):
    A = random_fuzz_action(np.random.default_rng(4000 + seed), max_edges=8)
    t = dr_dimension_table(A, 0, 3)
    assert np.array_equal(t.table, t.table.T)
    assert (t.table[:-1, :-1] <= t.table[1:, 1:]).all()


def test_depth_bound_and_method_errors():
    A = example_4_3()
    with pytest.raises(PreconditionError):
        intertwiner_dimension(A, 0, 9, 0)
    with pytest.raises(PreconditionError):
        intertwiner_dimension(A, 0, 1, 1, method="guess")
    with pytest.raises(PreconditionError):
        intertwiner_dimension(A, 7, 1, 1)


def test_dr_fibre_bratteli_s3():
    B = bratteli_dr_fibre(example_4_3(), 0, 3)
    assert B.validate()
    names = [lv[0] for lv in B.levels]
    assert names[1] == ("pi0", "pi2")  # trivial and standard
    # columns: triv -> (triv, std), std -> (triv, sign, std)
    assert B.multiplicities[1].tolist() == [[1, 1], [0, 1], [1, 2]]
    d = dr_dimension_table(example_4_3(), 0, 3).diagonal
    for k, (_, dims) in enumerate(B.levels):
        assert sum(int(x) ** 2 for x in dims) == d[k]


def test_dr_fibre_trivial_group_three_loops():
    A = loops_with_group(3, [[0, 1, 2]])
    B = core_bratteli(A, "dr-fiber", 4)
    assert all(len(lv[0]) == 1 for lv in B.levels)
    assert all(M.tolist() == [[3]] for M in B.multiplicities)


def test_dr_fibre_rejects_multi_vertex_fibres():
    A = trivial_action(DirectedGraph(2, np.array([0, 1]), np.array([1, 0])))
    with pytest.raises(PreconditionError):
        core_bratteli(A, "dr-fiber", 2)


def test_quotient_bratteli():
    rep = quotient_graph(example_4_3())
    B = core_bratteli(example_4_3(), "quotient-graph", 3, report=rep)
    assert B.validate()
    assert [int(x) for x in B.levels[0][1]] == [2, 2, 4]
    assert all(np.array_equal(M, rep.adjacency.T) for M in B.multiplicities)
    O3 = core_bratteli(trivial_action(o3_graph()), "quotient-graph", 3)
    assert [int(lv[1][0]) for lv in O3.levels] == [1, 3, 9, 27]
    with pytest.raises(PreconditionError):
        core_bratteli(example_4_3(), "elsewhere", 1)
