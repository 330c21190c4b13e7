"""Named built-in instances.

``example-4.3``: two vertices ``v1, v2`` with three loops each
(``a1..a3`` at v1, ``b1..b3`` at v2) and the transitive groupoid with unit
space ``{v1, v2}`` and isotropy S3 permuting loop indices.

``example-4.6``: the two-vertex self-similar action generated by ``g: v -> w``
and ``h: w -> v``.
"""

from __future__ import annotations

import numpy as np

from .graph import DirectedGraph, GraphAction, graph_from_adjacency
from .groupoid import UNDEF, build_transitive_groupoid, group_as_groupoid
from .reptheory import cyclic_group, symmetric_group

FIXTURE_NAMES = ("example-4.3", "example-4.6")


def example_4_3() -> GraphAction:
    """S3 permutes the three loops at each vertex; arrows move between vertices.

    Arrow ``(v, sigma, u)`` sends ``u`` to ``v`` and the i-th loop at ``u`` to
    the ``sigma(i)``-th loop at ``v``.
    """
    K = symmetric_group(3)
    perms = [tuple(int(c) - 1 for c in label) for label in K.labels]
    G = build_transitive_groupoid(["v1", "v2"], K)
    E = DirectedGraph(
        2,
        np.array([0, 0, 0, 1, 1, 1]),
        np.array([0, 0, 0, 1, 1, 1]),
        ("v1", "v2"),
        ("a1", "a2", "a3", "b1", "b2", "b3"),
    )
    m, order = 2, K.order
    vt = np.full((G.n_arrows, 2), UNDEF, dtype=np.int64)
    et = np.full((G.n_arrows, 6), UNDEF, dtype=np.int64)
    for g in range(G.n_arrows):
        rest, iu = divmod(g, m)
        iv, k = divmod(rest, order)
        vt[g, iu] = iv
        for i in range(3):
            et[g, 3 * iu + i] = 3 * iv + perms[k][i]
    return GraphAction(G, E, np.array([0, 1]), vt, et)


def loops_with_group(n_loops: int, perms) -> GraphAction:
    """One vertex with ``n_loops`` loops and the group generated by ``perms``
    acting on them (fewer than ten loops, since labels are one-line notation).
    """
    from .reptheory import permutation_group

    K = permutation_group(perms)
    table_perms = [tuple(int(c) - 1 for c in lab) for lab in K.labels]
    G = group_as_groupoid(K, "v")
    E = DirectedGraph(1, np.zeros(n_loops, dtype=np.int64), np.zeros(n_loops, dtype=np.int64))
    vt = np.zeros((K.order, 1), dtype=np.int64)
    et = np.array(table_perms, dtype=np.int64)
    return GraphAction(G, E, np.array([0]), vt, et)


def z2_trivial_on_vertex() -> GraphAction:
    """Z/2 on a single vertex with no edges."""
    K = cyclic_group(2)
    G = group_as_groupoid(K, "v")
    E = DirectedGraph(1, np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64))
    return GraphAction(G, E, np.array([0]), np.zeros((2, 1), dtype=np.int64), np.zeros((2, 0), dtype=np.int64))


def z2_swapping_two_loops() -> GraphAction:
    return loops_with_group(2, [(1, 0)])


def o3_graph() -> DirectedGraph:
    """One vertex with three loops."""
    return graph_from_adjacency(np.array([[3]]), ["v"])


EXAMPLE_4_6 = {
    "graph": {
        "vertices": ["v", "w"],
        "edges": [
            {"id": "a", "src": "v", "rng": "v"},
            {"id": "b", "src": "v", "rng": "w"},
            {"id": "c", "src": "v", "rng": "w"},
            {"id": "d", "src": "w", "rng": "v"},
        ],
    },
    "generators": [
        {"id": "g", "src": "v", "rng": "w"},
        {"id": "h", "src": "w", "rng": "v"},
    ],
    "transitions": [
        {"gen": "g", "edge": "a", "out_edge": "c", "restriction": ["v"]},
        {"gen": "g", "edge": "d", "out_edge": "b", "restriction": ["h"]},
        {"gen": "h", "edge": "b", "out_edge": "a", "restriction": ["v"]},
        {"gen": "h", "edge": "c", "out_edge": "d", "restriction": ["g"]},
    ],
}


def example_4_6():
    from .selfsimilar import automaton_from_dict

    return automaton_from_dict(EXAMPLE_4_6)
