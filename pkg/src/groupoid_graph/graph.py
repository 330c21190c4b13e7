"""Finite directed graphs and groupoid actions on them.

Paths are stored range to source: ``e1 e2 ... ek`` with
``src(e_i) == rng(e_{i+1})``, so the leftmost edge is traversed last and
``rng(path) = rng(e1)``.  A path of length zero is identified by its
vertex.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import MalformedInputError, PreconditionError
from .groupoid import (
    UNDEF,
    FiniteGroupoid,
    SpaceAction,
    ValidationReport,
    _check_space_action,
    _Collector,
    _frozen,
    _index,
    _lookup,
    groupoid_from_dict,
    orbits,
    stabilizer,
    trivial_groupoid,
)


class Path(NamedTuple):
    """A finite path: its range vertex and its edges (range to source)."""

    vertex: int
    edges: tuple = ()


@dataclass(frozen=True, eq=False)
class DirectedGraph:
    """``E = (E^0, E^1, r, s)``; multi-edges and loops allowed."""

    n_vertices: int
    e_src: np.ndarray
    e_rng: np.ndarray
    vertex_labels: tuple = ()
    edge_labels: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "e_src", _frozen(self.e_src))
        object.__setattr__(self, "e_rng", _frozen(self.e_rng))
        if self.e_src.shape != self.e_rng.shape or self.e_src.ndim != 1:
            raise MalformedInputError("edge endpoint arrays must have equal length")
        for arr in (self.e_src, self.e_rng):
            if arr.size and (arr.min() < 0 or arr.max() >= self.n_vertices):
                raise MalformedInputError("edge endpoint refers to a missing vertex")
        if not self.vertex_labels:
            object.__setattr__(self, "vertex_labels", tuple(f"v{i}" for i in range(self.n_vertices)))
        if not self.edge_labels:
            object.__setattr__(self, "edge_labels", tuple(f"e{i}" for i in range(self.n_edges)))
        if len(self.vertex_labels) != self.n_vertices or len(self.edge_labels) != self.n_edges:
            raise MalformedInputError("label count mismatch")

    @property
    def n_edges(self) -> int:
        return int(self.e_src.shape[0])

    @functools.cached_property
    def vertex_index(self) -> dict:
        return {lab: i for i, lab in enumerate(self.vertex_labels)}

    @functools.cached_property
    def edge_index(self) -> dict:
        return {lab: i for i, lab in enumerate(self.edge_labels)}

    def adjacency(self) -> np.ndarray:
        """``A[x, y]`` = number of edges with range x and source y."""
        a = np.zeros((self.n_vertices, self.n_vertices), dtype=np.int64)
        np.add.at(a, (self.e_rng, self.e_src), 1)
        return a

    @property
    def sources(self) -> list[int]:
        """Vertices receiving no edge (``r^-1(v)`` empty)."""
        return [v for v in range(self.n_vertices) if not np.any(self.e_rng == v)]

    @property
    def sinks(self) -> list[int]:
        """Vertices emitting no edge (``s^-1(v)`` empty)."""
        return [v for v in range(self.n_vertices) if not np.any(self.e_src == v)]

    @property
    def has_sources(self) -> bool:
        return bool(self.sources)

    @property
    def has_sinks(self) -> bool:
        return bool(self.sinks)

    @property
    def locally_finite(self) -> bool:
        return True

    def flags(self) -> dict:
        return {
            "locally_finite": self.locally_finite,
            "no_sources": not self.has_sources,
            "no_sinks": not self.has_sinks,
        }

    def is_path(self, edges: Sequence[int]) -> bool:
        return all(self.e_src[a] == self.e_rng[b] for a, b in zip(edges, edges[1:]))

    def path_source(self, path: Path) -> int:
        return int(self.e_src[path.edges[-1]]) if path.edges else path.vertex

    def paths_of_length(self, k: int, *, rng: int | None = None) -> list[Path]:
        """All paths of length ``k`` (optionally with a fixed range vertex)."""
        starts = range(self.n_vertices) if rng is None else [rng]
        out = [Path(v, ()) for v in starts]
        for _ in range(k):
            nxt = []
            for p in out:
                s = self.path_source(p)
                for e in np.flatnonzero(self.e_rng == s):
                    nxt.append(Path(p.vertex, p.edges + (int(e),)))
            out = nxt
        return out

    def to_dict(self) -> dict:
        vl = self.vertex_labels
        return {
            "vertices": list(vl),
            "edges": [
                {"id": self.edge_labels[e], "src": vl[int(self.e_src[e])], "rng": vl[int(self.e_rng[e])]}
                for e in range(self.n_edges)
            ],
        }


def graph_from_dict(desc: dict) -> DirectedGraph:
    try:
        vertices = list(desc["vertices"])
        edges = list(desc["edges"])
    except (KeyError, TypeError) as exc:
        raise MalformedInputError(f"graph descriptor missing field: {exc}") from None
    vidx = _index(vertices, "vertex")
    ids = [e.get("id") for e in edges]
    _index(ids, "edge")
    src = [_lookup(vidx, e.get("src"), "vertex") for e in edges]
    rng = [_lookup(vidx, e.get("rng"), "vertex") for e in edges]
    return DirectedGraph(len(vertices), np.array(src, dtype=np.int64), np.array(rng, dtype=np.int64), tuple(vertices), tuple(ids))


def graph_from_adjacency(adj: np.ndarray, labels: Sequence | None = None) -> DirectedGraph:
    """Graph with ``adj[x, y]`` edges from y to x."""
    adj = np.asarray(adj, dtype=np.int64)
    n = adj.shape[0]
    src, rng = [], []
    for x in range(n):
        for y in range(n):
            src.extend([y] * int(adj[x, y]))
            rng.extend([x] * int(adj[x, y]))
    vl = tuple(labels) if labels is not None else tuple(f"v{i}" for i in range(n))
    return DirectedGraph(n, np.array(src, dtype=np.int64), np.array(rng, dtype=np.int64), vl)


# --------------------------------------------------------------------------
# GraphAction


@dataclass(frozen=True, eq=False)
class GraphAction:
    """A groupoid acting on the vertex and edge sets of a graph compatibly.

    ``anchor`` maps vertices to units; edges are anchored through their range.
    """

    groupoid: FiniteGroupoid
    graph: DirectedGraph
    anchor: np.ndarray
    vertex_act: np.ndarray
    edge_act: np.ndarray

    def __post_init__(self):
        for name in ("anchor", "vertex_act", "edge_act"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))
        G, E = self.groupoid, self.graph
        if self.anchor.shape != (E.n_vertices,):
            raise MalformedInputError("anchor needs one unit per vertex")
        if self.vertex_act.shape != (G.n_arrows, E.n_vertices):
            raise MalformedInputError("vertex action table has the wrong shape")
        if self.edge_act.shape != (G.n_arrows, E.n_edges):
            raise MalformedInputError("edge action table has the wrong shape")

    @functools.cached_property
    def vertex_action(self) -> SpaceAction:
        return SpaceAction(self.groupoid, self.anchor, self.vertex_act, self.graph.vertex_labels)

    @functools.cached_property
    def edge_action(self) -> SpaceAction:
        return SpaceAction(
            self.groupoid, self.anchor[self.graph.e_rng], self.edge_act, self.graph.edge_labels
        )

    @functools.cached_property
    def edge_anchor(self) -> np.ndarray:
        return self.anchor[self.graph.e_rng]

    def to_dict(self) -> dict:
        G, E = self.groupoid, self.graph
        al, vl, el = G.arrow_labels, E.vertex_labels, E.edge_labels
        return {
            "groupoid": G.to_dict(),
            "graph": E.to_dict(),
            "anchor": {vl[v]: G.unit_labels[int(self.anchor[v])] for v in range(E.n_vertices)},
            "vertex_action": [
                [al[g], vl[x], vl[int(self.vertex_act[g, x])]]
                for g, x in zip(*np.nonzero(self.vertex_act >= 0))
            ],
            "edge_action": [
                [al[g], el[x], el[int(self.edge_act[g, x])]]
                for g, x in zip(*np.nonzero(self.edge_act >= 0))
            ],
        }


def graph_action_from_dict(desc: dict) -> GraphAction:
    """Parse ``{"groupoid", "graph", "anchor", "vertex_action", "edge_action"}``."""
    try:
        G = groupoid_from_dict(desc["groupoid"])
        E = graph_from_dict(desc["graph"])
        anchor_desc = desc["anchor"]
        vact = desc["vertex_action"]
        eact = desc["edge_action"]
    except (KeyError, TypeError) as exc:
        raise MalformedInputError(f"graph action descriptor missing field: {exc}") from None
    aidx, uidx = G.arrow_index, G.unit_index
    vidx, eidx = E.vertex_index, E.edge_index
    anchor = np.array(
        [_lookup(uidx, anchor_desc.get(v), "unit") for v in E.vertex_labels], dtype=np.int64
    )
    vt = np.full((G.n_arrows, E.n_vertices), UNDEF, dtype=np.int64)
    for g, x, y in vact:
        vt[_lookup(aidx, g, "arrow"), _lookup(vidx, x, "vertex")] = _lookup(vidx, y, "vertex")
    et = np.full((G.n_arrows, E.n_edges), UNDEF, dtype=np.int64)
    for g, x, y in eact:
        et[_lookup(aidx, g, "arrow"), _lookup(eidx, x, "edge")] = _lookup(eidx, y, "edge")
    return GraphAction(G, E, anchor, vt, et)


def validate_graph_action(candidate: GraphAction | dict) -> ValidationReport:
    """Both action axiom sets, ``p r = p s``, and source/range equivariance."""
    A = graph_action_from_dict(candidate) if isinstance(candidate, dict) else candidate
    G, E = A.groupoid, A.graph
    out = _Collector()
    el, al = E.edge_labels, G.arrow_labels
    _check_space_action(A.vertex_action, out, "vertex:")
    _check_space_action(A.edge_action, out, "edge:")
    bad = A.anchor[E.e_rng] != A.anchor[E.e_src]
    for e in np.flatnonzero(bad):
        out.add("anchor_compatible", (el[e],), "p(r(e)) != p(s(e))")
    gs, es = np.nonzero(A.edge_act >= 0)
    ge = A.edge_act[gs, es]
    for name, ends in (("source_equivariance", E.e_src), ("range_equivariance", E.e_rng)):
        lhs = ends[ge]
        rhs = A.vertex_act[gs, ends[es]]
        for i in np.flatnonzero(lhs != rhs):
            out.add(name, (al[gs[i]], el[es[i]]))
    for g in range(G.n_arrows):
        dom = np.flatnonzero(A.edge_anchor == G.src[g])
        cod = np.flatnonzero(A.edge_anchor == G.rng[g])
        img = A.edge_act[g, dom]
        if sorted(img.tolist()) != cod.tolist():
            out.add("edge_fibre_bijection", (al[g],))
    return out.report("graph_action")


def act_on_path(A: GraphAction, g: int, path: Path) -> Path:
    """``g.(e1...ek) = (g.e1)...(g.ek)``; the empty path at v goes to g.v."""
    E = A.graph
    if not E.is_path(path.edges):
        raise PreconditionError("edge sequence is not a composable path")
    if path.edges and int(E.e_rng[path.edges[0]]) != path.vertex:
        raise PreconditionError("path vertex does not match its first edge")
    if A.groupoid.src[g] != A.anchor[path.vertex]:
        raise PreconditionError("arrow source does not match the path's anchor")
    vertex = int(A.vertex_act[g, path.vertex])
    edges = tuple(int(A.edge_act[g, e]) for e in path.edges)
    return Path(vertex, edges)


def make_path(E: DirectedGraph, edges: Sequence[int], vertex: int | None = None) -> Path:
    edges = tuple(int(e) for e in edges)
    if edges:
        return Path(int(E.e_rng[edges[0]]), edges)
    if vertex is None:
        raise PreconditionError("the empty path needs a vertex")
    return Path(int(vertex), ())


@dataclass(frozen=True, eq=False)
class FiberGraph:
    unit: int
    graph: DirectedGraph
    vertices: np.ndarray
    edges: np.ndarray


def fiber_graphs(A: GraphAction) -> list[FiberGraph]:
    """The graphs ``E_u`` over each unit ``u``; their disjoint union is E."""
    E = A.graph
    out = []
    for u in range(A.groupoid.n_units):
        vs = np.flatnonzero(A.anchor == u)
        es = np.flatnonzero(A.edge_anchor == u)
        pos = np.full(E.n_vertices, UNDEF, dtype=np.int64)
        pos[vs] = np.arange(vs.size)
        sub = DirectedGraph(
            int(vs.size),
            pos[E.e_src[es]],
            pos[E.e_rng[es]],
            tuple(E.vertex_labels[v] for v in vs),
            tuple(E.edge_labels[e] for e in es),
        )
        out.append(FiberGraph(u, sub, vs, es))
    return out


def is_free(A: GraphAction) -> bool:
    """True when every vertex and edge stabilizer is trivial (units only)."""
    G = A.groupoid
    for S in (A.vertex_action, A.edge_action):
        for x in range(S.n_points):
            if stabilizer(S, x).size != 1:
                return False
    return True


def orbit_quotient_graph_free(A: GraphAction) -> DirectedGraph:
    """Orbit graph of a free action: vertex orbits and edge orbits."""
    if not is_free(A):
        raise PreconditionError("orbit_quotient_graph_free needs a free action")
    E = A.graph
    vorb = orbits(A.vertex_action)
    eorb = orbits(A.edge_action)
    vpos = np.empty(E.n_vertices, dtype=np.int64)
    for i, o in enumerate(vorb):
        vpos[list(o)] = i
    src = [int(vpos[E.e_src[o[0]]]) for o in eorb]
    rng = [int(vpos[E.e_rng[o[0]]]) for o in eorb]
    return DirectedGraph(
        len(vorb),
        np.array(src, dtype=np.int64),
        np.array(rng, dtype=np.int64),
        tuple(E.vertex_labels[o[0]] for o in vorb),
        tuple(E.edge_labels[o[0]] for o in eorb),
    )


def trivial_action(E: DirectedGraph) -> GraphAction:
    """The one-arrow groupoid acting trivially; every vertex sits over its unit."""
    G = trivial_groupoid(["*"])
    n = E.n_vertices
    vt = np.arange(n, dtype=np.int64)[None, :]
    et = np.arange(E.n_edges, dtype=np.int64)[None, :]
    return GraphAction(G, E, np.zeros(n, dtype=np.int64), vt, et)
