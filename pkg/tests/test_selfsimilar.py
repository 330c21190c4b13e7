import copy

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from groupoid_graph.errors import MalformedInputError, PreconditionError
from groupoid_graph.fixtures import EXAMPLE_4_6, example_4_6
from groupoid_graph.graph import Path, validate_graph_action
from groupoid_graph.groupoid import validate_groupoid
from groupoid_graph.selfsimilar import (
    automaton_from_dict,
    forest,
    induced_forest_action,
    parse_path,
    parse_word,
    validate_automaton,
)


# Hand-written recursion for the two generators, on strings of edge labels:
#   g.(a mu) = c mu,  g.(d mu) = b (h.mu),  h.(b mu) = a mu,  h.(c mu) = d (g.mu)
def g_oracle(s: str) -> str:
    if not s:
        return ""
    return "c" + s[1:] if s[0] == "a" else "b" + h_oracle(s[1:])


def h_oracle(s: str) -> str:
    if not s:
        return ""
    return "a" + s[1:] if s[0] == "b" else "d" + g_oracle(s[1:])


@pytest.fixture(scope="module")
def aut():
    return example_4_6()


def _label(aut, p):
    return "".join(aut.graph.edge_labels[e] for e in p.edges)


def _random_word(aut, rng, start, length):
    """A composable word of ``length`` tokens whose source is vertex ``start``."""
    word, here = [], start
    for _ in range(length):
        options = [t for t in aut.tokens if aut.token_ends(t)[0] == here]
        if not options:
            break
        t = options[int(rng.integers(len(options)))]
        word.insert(0, t)
        here = aut.token_ends(t)[1]
    return tuple(word) if word else aut.unit_word(start)


def test_fixture_validates(aut):
    assert validate_automaton(aut).ok


def test_matches_hand_recursion(aut):
    v, w = aut.graph.vertex_index["v"], aut.graph.vertex_index["w"]
    for p in aut.paths_up_to(v, 6):
        assert _label(aut, aut.act_path(("g",), p)) == g_oracle(_label(aut, p))
    for p in aut.paths_up_to(w, 6):
        assert _label(aut, aut.act_path(("h",), p)) == h_oracle(_label(aut, p))


def test_worked_values(aut):
    ad = parse_path(aut, "ad")
    cd = aut.act_path(("g",), ad)
    assert aut.path_label(cd) == "cd"
    assert aut.path_label(aut.act_path(("h",), cd)) == "db"
    assert aut.path_label(aut.act_path(("h", "g"), ad)) == "db"
    orbit = {aut.path_label(p) for p in aut.orbit_of_path(ad)}
    assert {"ad", "cd", "db", "ba", "aa", "ca"} <= orbit
    # every orbit element is a length-2 path
    assert all(len(x) == 2 for x in orbit)


def test_unit_word_and_inverses(aut):
    v = aut.graph.vertex_index["v"]
    for p in aut.paths_up_to(v, 4):
        assert aut.act_path(("v",), p) == p
        assert aut.act_path(("g^-1", "g"), p) == p
    eq = aut.depth_bounded_equivalence(("g", "v"), ("g",), 6)
    assert eq.equal and eq.depth == 6
    assert aut.depth_bounded_equivalence(("g",), ("g",), 10).equal


def test_hg_is_not_the_unit(aut):
    eq = aut.depth_bounded_equivalence(("h", "g"), ("v",), 1)
    assert not eq.equal
    assert aut.path_label(eq.witness) == "a"
    assert aut.path_label(eq.image_left) == "d"


@settings(max_examples=40)
@given(st.integers(0, 2**31))
def test_defining_property(seed):
    aut = example_4_6()
    rng = np.random.default_rng(seed)
    start = int(rng.integers(2))
    word = _random_word(aut, rng, start, int(rng.integers(1, 6)))
    paths = aut.paths_up_to(start, 5)
    full = paths[int(rng.integers(len(paths)))]
    cut = int(rng.integers(len(full.edges) + 1))
    mu = Path(full.vertex, full.edges[:cut])
    nu = Path(aut.graph.path_source(mu), full.edges[cut:])
    image = aut.act_path(word, full)
    head = aut.act_path(word, mu)
    tail = aut.act_path(aut.restriction(word, mu), nu)
    assert image.edges == head.edges + tail.edges
    assert len(image.edges) == len(full.edges)


def test_cocycle_identity(aut):
    rng = np.random.default_rng(7)
    for _ in range(500):
        start = int(rng.integers(2))
        w2 = _random_word(aut, rng, start, int(rng.integers(1, 4)))
        mid = aut.word_ends(w2)[1]
        w1 = _random_word(aut, rng, mid, int(rng.integers(1, 4)))
        paths = aut.paths_up_to(start, 3)
        mu = paths[int(rng.integers(len(paths)))]
        lhs = aut.restriction(w1 + w2, mu)
        rhs = aut.restriction(w1, aut.act_path(w2, mu)) + aut.restriction(w2, mu)
        rhs = aut.reduce(rhs, aut.graph.path_source(mu))
        assert aut.depth_bounded_equivalence(lhs, rhs, 4).equal


def test_forest_matches_figure(aut):
    F = forest(aut.graph, 2, aut.path_label)
    names = F.graph.vertex_labels
    children = {
        names[F.index[p]]: sorted(names[F.index[c]] for c in F.children(p))
        for p in F.paths
        if len(p.edges) < 2
    }
    assert children == {
        "v": ["a", "d"],
        "a": ["aa", "ad"],
        "d": ["db", "dc"],
        "w": ["b", "c"],
        "b": ["ba", "bd"],
        "c": ["ca", "cd"],
    }
    F0 = forest(aut.graph, 0)
    assert F0.graph.n_vertices == 2 and F0.graph.n_edges == 0


@pytest.mark.parametrize("depth", [0, 1, 2, 3])
def test_induced_forest_action(aut, depth):
    A = induced_forest_action(aut, depth)
    assert validate_groupoid(A.groupoid).ok
    assert validate_graph_action(A).ok
    T = A.graph
    # equivariance checked edge by edge, exhaustively
    for g in range(A.groupoid.n_arrows):
        for t in np.flatnonzero(A.edge_act[g] >= 0):
            gt = A.edge_act[g, t]
            assert T.e_src[gt] == A.vertex_act[g, T.e_src[t]]
            assert T.e_rng[gt] == A.vertex_act[g, T.e_rng[t]]


def test_trivial_automaton():
    desc = {"graph": copy.deepcopy(EXAMPLE_4_6["graph"]), "generators": [], "transitions": []}
    aut = automaton_from_dict(desc)
    assert validate_automaton(aut).ok
    p = parse_path(aut, "ad")
    assert aut.orbit_of_path(p) == [p]
    A = induced_forest_action(aut, 2)
    assert A.groupoid.n_arrows == 2  # units only


def test_validation_catches_broken_transitions():
    desc = copy.deepcopy(EXAMPLE_4_6)
    desc["transitions"] = desc["transitions"][1:]
    assert "totality" in validate_automaton(automaton_from_dict(desc)).violated_axioms
    desc = copy.deepcopy(EXAMPLE_4_6)
    desc["transitions"][0]["out_edge"] = "b"  # g sends both a and d to b
    rep = validate_automaton(automaton_from_dict(desc))
    assert "edge_bijection" in rep.violated_axioms
    desc = copy.deepcopy(EXAMPLE_4_6)
    desc["transitions"][0]["restriction"] = ["w"]
    assert "restriction_endpoints" in validate_automaton(automaton_from_dict(desc)).violated_axioms


def test_parse_errors(aut):
    with pytest.raises(MalformedInputError):
        parse_path(aut, "xyz")
    with pytest.raises(PreconditionError):
        parse_path(aut, "ab")  # s(a) = v but r(b) = w
    with pytest.raises(MalformedInputError):
        parse_word("  ")
    with pytest.raises(PreconditionError):
        aut.act_path(("g",), parse_path(aut, "b"))  # b ends at w, g starts at v
    with pytest.raises(PreconditionError):
        aut.act_path(("zz",), parse_path(aut, "a"))
    bad = copy.deepcopy(EXAMPLE_4_6)
    bad["generators"][0]["id"] = "v"
    with pytest.raises(MalformedInputError):
        automaton_from_dict(bad)


def test_dict_roundtrip(aut):
    again = automaton_from_dict(aut.to_dict())
    for p in aut.paths_up_to(0, 4):
        assert again.act_path(("g",), p) == aut.act_path(("g",), p)
