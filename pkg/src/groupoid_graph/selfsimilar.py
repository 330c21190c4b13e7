"""Self-similar groupoid actions on path spaces, given by automata.

Paths use the range convention: ``vE*`` is the set of paths whose range is
``v``, written ``e1 e2 ... ek`` with ``s(e_i) = r(e_{i+1})``.  A generator
``g`` with ``src(g) = v`` acts on ``vE*`` and on a path ``e mu`` by

    g.(e mu) = (g.e) (g|_e . mu)

Words are tuples of tokens read as compositions, so the rightmost token acts
first.  A token is a generator id, its inverse ``id^-1``, or a vertex id
standing for the unit at that vertex.  Equality of words is only ever decided
up to a stated path depth.
"""

from __future__ import annotations

import functools
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import MalformedInputError, PreconditionError
from .graph import DirectedGraph, GraphAction, Path, graph_from_dict
from .groupoid import UNDEF, FiniteGroupoid, ValidationReport, _Collector

INVERSE_SUFFIX = "^-1"

Word = tuple


def invert_token(token: str, units: Iterable[str] = ()) -> str:
    if token in units:
        return token
    if token.endswith(INVERSE_SUFFIX):
        return token[: -len(INVERSE_SUFFIX)]
    return token + INVERSE_SUFFIX


@dataclass(frozen=True, eq=False)
class SelfSimilarAutomaton:
    """Generators with endpoints and per-edge transitions.

    ``out_edge[(g, e)]`` is ``g.e`` and ``restrictions[(g, e)]`` is the word
    ``g|_e``, for every generator ``g`` and edge ``e`` with ``r(e) = src(g)``.
    Inverse tokens are synthesised from these bijections.
    """

    graph: DirectedGraph
    generators: tuple[str, ...]
    gen_src: dict
    gen_rng: dict
    out_edge: dict
    restrictions: dict

    # ---------------------------------------------------------------- tokens

    @functools.cached_property
    def units(self) -> frozenset:
        return frozenset(self.graph.vertex_labels)

    @functools.cached_property
    def _tables(self) -> tuple[dict, dict, dict, dict]:
        """Endpoints, edge maps and restrictions for generators and inverses."""
        src, rng = dict(self.gen_src), dict(self.gen_rng)
        out, res = dict(self.out_edge), dict(self.restrictions)
        for g in self.generators:
            gi = g + INVERSE_SUFFIX
            src[gi], rng[gi] = self.gen_rng[g], self.gen_src[g]
            for (t, e), e2 in self.out_edge.items():
                if t == g:
                    out[(gi, e2)] = e
                    res[(gi, e2)] = self.invert_word(self.restrictions[(g, e)])
        V = self.graph.vertex_index
        for u in self.graph.vertex_labels:
            src[u] = rng[u] = V[u]
        return src, rng, out, res

    @property
    def tokens(self) -> tuple[str, ...]:
        """Generators then their inverses (units excluded)."""
        return self.generators + tuple(g + INVERSE_SUFFIX for g in self.generators)

    def invert_word(self, word: Sequence[str]) -> Word:
        return tuple(invert_token(t, self.units) for t in reversed(word))

    def token_ends(self, token: str) -> tuple[int, int]:
        src, rng, _, _ = self._tables
        try:
            return src[token], rng[token]
        except KeyError:
            raise PreconditionError(f"unknown token {token!r}") from None

    def word_ends(self, word: Sequence[str]) -> tuple[int, int]:
        """``(src, rng)`` of a composable word; raises on endpoint mismatch."""
        if not word:
            raise PreconditionError("empty word; use a unit token")
        ends = [self.token_ends(t) for t in word]
        for (s1, _), (_, r2) in zip(ends, ends[1:]):
            if s1 != r2:
                raise PreconditionError(f"word {' '.join(word)} is not composable")
        return ends[-1][0], ends[0][1]

    # ---------------------------------------------------------------- action

    def unit_word(self, vertex: int) -> Word:
        return (self.graph.vertex_labels[vertex],)

    def _act_token(self, token: str, path: Path) -> Path:
        src, rng, out, res = self._tables
        if token in self.units:
            return path
        if path.edges:
            e = path.edges[0]
            e2 = out[(token, e)]
            tail = Path(int(self.graph.e_src[e]), path.edges[1:])
            moved = self._act_word(res[(token, e)], tail)
            return Path(rng[token], (e2,) + moved.edges)
        return Path(rng[token], ())

    def _act_word(self, word: Sequence[str], path: Path) -> Path:
        for t in reversed(word):
            path = self._act_token(t, path)
        return path

    def _check(self, word: Sequence[str], path: Path) -> None:
        s, _ = self.word_ends(word)
        if path.vertex != s:
            raise PreconditionError("path range does not match the word's source")
        if not self.graph.is_path(path.edges) or (
            path.edges and int(self.graph.e_rng[path.edges[0]]) != path.vertex
        ):
            raise PreconditionError("not a path")

    def act_path(self, word: Sequence[str], path: Path) -> Path:
        self._check(word, path)
        return self._act_word(tuple(word), path)

    def restriction(self, word: Sequence[str], path: Path) -> Word:
        """The freely reduced word ``w|_mu`` with ``w.(mu nu) = (w.mu)(w|_mu . nu)``.

        Computed edge by edge: ``w|_{e mu} = (w|_e)|_mu``, and along one edge
        ``(t1 ... tn)|_e`` is the product of the ``t_i|_{e_i}`` where ``e_i``
        is ``e`` moved by the tokens to the right of ``t_i``.
        """
        self._check(word, path)
        w = self.reduce(word, path.vertex)
        for e in path.edges:
            w = self.reduce(self._restrict_edge(w, e), int(self.graph.e_src[e]))
        return w

    def _restrict_edge(self, word: Sequence[str], e: int) -> list[str]:
        _, _, out, res = self._tables
        pieces: list[str] = []
        for t in reversed(word):
            if t in self.units:
                continue
            pieces[:0] = res[(t, e)]
            e = out[(t, e)]
        return pieces

    def reduce(self, word: Sequence[str], source_vertex: int) -> Word:
        """Drop unit tokens and cancel adjacent inverse pairs; empty becomes a unit."""
        stack: list[str] = []
        for t in word:
            if t in self.units:
                continue
            if stack and stack[-1] == invert_token(t):
                stack.pop()
            else:
                stack.append(t)
        return tuple(stack) if stack else self.unit_word(source_vertex)

    def paths_up_to(self, vertex: int, depth: int) -> list[Path]:
        out = []
        for k in range(depth + 1):
            out.extend(self.graph.paths_of_length(k, rng=vertex))
        return out

    # ---------------------------------------------------------------- queries

    def orbit_of_path(self, path: Path, bound: int | None = None) -> list[Path]:
        """Paths reachable by words of length at most ``bound`` (None: saturate)."""
        seen = {path}
        frontier = deque([(path, 0)])
        while frontier:
            p, d = frontier.popleft()
            if bound is not None and d >= bound:
                continue
            for t in self.tokens:
                s, _ = self.token_ends(t)
                if s != p.vertex:
                    continue
                q = self._act_token(t, p)
                if q not in seen:
                    seen.add(q)
                    frontier.append((q, d + 1))
        return sorted(seen, key=lambda p: (len(p.edges), p.vertex, p.edges))

    def depth_bounded_equivalence(self, w1: Sequence[str], w2: Sequence[str], depth: int) -> "Equivalence":
        """Compare two words on every path of length at most ``depth``."""
        e1, e2 = self.word_ends(w1), self.word_ends(w2)
        if e1 != e2:
            raise PreconditionError("words have different endpoints")
        for p in self.paths_up_to(e1[0], depth):
            a, b = self._act_word(w1, p), self._act_word(w2, p)
            if a != b:
                return Equivalence(False, depth, p, a, b)
        return Equivalence(True, depth)

    def path_label(self, path: Path) -> str:
        if not path.edges:
            return self.graph.vertex_labels[path.vertex]
        labels = [self.graph.edge_labels[e] for e in path.edges]
        sep = "" if all(len(x) == 1 for x in labels) else " "
        return sep.join(labels)

    def to_dict(self) -> dict:
        vl, el = self.graph.vertex_labels, self.graph.edge_labels
        return {
            "graph": self.graph.to_dict(),
            "generators": [
                {"id": g, "src": vl[self.gen_src[g]], "rng": vl[self.gen_rng[g]]} for g in self.generators
            ],
            "transitions": [
                {"gen": g, "edge": el[e], "out_edge": el[e2], "restriction": list(self.restrictions[(g, e)])}
                for (g, e), e2 in sorted(self.out_edge.items())
            ],
        }


@dataclass(frozen=True)
class Equivalence:
    equal: bool
    depth: int
    witness: Path | None = None
    image_left: Path | None = None
    image_right: Path | None = None


def automaton_from_dict(desc: dict) -> SelfSimilarAutomaton:
    try:
        E = graph_from_dict(desc["graph"])
        gens = list(desc["generators"])
        trans = list(desc.get("transitions", []))
    except (KeyError, TypeError) as exc:
        raise MalformedInputError(f"automaton descriptor missing field: {exc}") from None
    V, Eidx = E.vertex_index, E.edge_index
    names, src, rng = [], {}, {}
    for g in gens:
        gid = g.get("id")
        if not isinstance(gid, str) or gid in V or gid in src or gid.endswith(INVERSE_SUFFIX):
            raise MalformedInputError(f"bad generator id {gid!r}")
        if g.get("src") not in V or g.get("rng") not in V:
            raise MalformedInputError(f"generator {gid} has unknown endpoints")
        names.append(gid)
        src[gid], rng[gid] = V[g["src"]], V[g["rng"]]
    known = set(names) | {n + INVERSE_SUFFIX for n in names} | set(V)
    out, res = {}, {}
    for t in trans:
        g, e, e2 = t.get("gen"), t.get("edge"), t.get("out_edge")
        word = t.get("restriction")
        if g not in src or e not in Eidx or e2 not in Eidx:
            raise MalformedInputError(f"transition refers to unknown ids: {t}")
        if not isinstance(word, list) or not word or any(x not in known for x in word):
            raise MalformedInputError(f"bad restriction word in {t}")
        key = (g, Eidx[e])
        if key in out:
            raise MalformedInputError(f"duplicate transition for {g} on {e}")
        out[key] = Eidx[e2]
        res[key] = tuple(word)
    return SelfSimilarAutomaton(E, tuple(names), src, rng, out, res)


def validate_automaton(aut: SelfSimilarAutomaton) -> ValidationReport:
    """Totality, fibre bijections, range equivariance and restriction endpoints."""
    E = aut.graph
    el = E.edge_labels
    c = _Collector()
    if E.has_sources:
        c.add("no_sources", tuple(E.vertex_labels[v] for v in E.sources))
    for g in aut.generators:
        dom = np.flatnonzero(E.e_rng == aut.gen_src[g]).tolist()
        cod = np.flatnonzero(E.e_rng == aut.gen_rng[g]).tolist()
        images = []
        for e in dom:
            if (g, e) not in aut.out_edge:
                c.add("totality", (g, el[e]))
                continue
            e2 = aut.out_edge[(g, e)]
            images.append(e2)
            if E.e_rng[e2] != aut.gen_rng[g]:
                c.add("range_equivariance", (g, el[e]))
            try:
                s, r = aut.word_ends(aut.restrictions[(g, e)])
            except PreconditionError:
                c.add("restriction_composable", (g, el[e]))
                continue
            if s != E.e_src[e] or r != E.e_src[e2]:
                c.add("restriction_endpoints", (g, el[e]))
        if sorted(images) != cod:
            c.add("edge_bijection", (g,))
    for (g, e) in aut.out_edge:
        if E.e_rng[e] != aut.gen_src[g]:
            c.add("transition_domain", (g, el[e]))
    return c.report("automaton")


# --------------------------------------------------------------------------
# the forest T_E and the induced action


@dataclass(frozen=True, eq=False)
class Forest:
    """``T_E`` to depth k: vertices are paths, edges ``(mu, mu e)`` from ``mu e`` to ``mu``."""

    graph: DirectedGraph
    paths: tuple[Path, ...]
    depth: int

    @functools.cached_property
    def index(self) -> dict:
        return {p: i for i, p in enumerate(self.paths)}

    def children(self, path: Path) -> list[Path]:
        i = self.index[path]
        return [self.paths[int(s)] for s in self.graph.e_src[self.graph.e_rng == i]]


def forest(E: DirectedGraph, depth: int, label=None) -> Forest:
    """Vertices ``E*_{<=k}`` ordered by length, then range, then edges."""
    if depth < 0:
        raise PreconditionError("depth must be nonnegative")
    paths = []
    for k in range(depth + 1):
        paths.extend(sorted(E.paths_of_length(k), key=lambda p: (p.vertex, p.edges)))
    index = {p: i for i, p in enumerate(paths)}
    src, rng = [], []
    for p in paths:
        if p.edges:
            parent = Path(p.vertex, p.edges[:-1])
            src.append(index[p])
            rng.append(index[parent])
    label = label or (lambda p: _default_label(E, p))
    vlabels = tuple(label(p) for p in paths)
    elabels = tuple(f"({vlabels[r]},{vlabels[s]})" for s, r in zip(src, rng))
    T = DirectedGraph(len(paths), np.array(src, dtype=np.int64), np.array(rng, dtype=np.int64), vlabels, elabels)
    return Forest(T, tuple(paths), depth)


def _default_label(E: DirectedGraph, p: Path) -> str:
    if not p.edges:
        return E.vertex_labels[p.vertex]
    labels = [E.edge_labels[e] for e in p.edges]
    return ("" if all(len(x) == 1 for x in labels) else ".").join(labels)


def induced_forest_action(aut: SelfSimilarAutomaton, depth: int) -> GraphAction:
    """Groupoid generated by the automaton, acting on the depth-k forest.

    Arrows are the distinct partial bijections ``vE*_{<=k} -> wE*_{<=k}``
    obtained from words; each is labelled by a shortest word producing it.
    """
    E = aut.graph
    F = forest(E, depth, aut.path_label)
    T = F.graph
    trees = [[i for i, p in enumerate(F.paths) if p.vertex == v] for v in range(E.n_vertices)]

    def as_map(word, v):
        return tuple(F.index[aut._act_word(word, F.paths[i])] for i in trees[v])

    # BFS over words: left-multiply by tokens until no new maps appear
    arrows: list[tuple] = []  # (src, rng, map, word)
    seen: dict = {}
    queue = deque()
    for v in range(E.n_vertices):
        key = (v, v, as_map(aut.unit_word(v), v))
        seen[key] = len(arrows)
        arrows.append(key + (aut.unit_word(v),))
        queue.append(len(arrows) - 1)
    while queue:
        s, r, _, word = arrows[queue.popleft()]
        for t in aut.tokens:
            ts, tr = aut.token_ends(t)
            if ts != r:
                continue
            w2 = (t,) + (() if word[0] in aut.units else word)
            key = (s, tr, as_map(w2, s))
            if key not in seen:
                seen[key] = len(arrows)
                arrows.append(key + (w2,))
                queue.append(len(arrows) - 1)
    n = len(arrows)
    srcs = np.array([a[0] for a in arrows], dtype=np.int64)
    rngs = np.array([a[1] for a in arrows], dtype=np.int64)
    # full image of every forest vertex for every arrow
    vt = np.full((n, T.n_vertices), UNDEF, dtype=np.int64)
    for i, (s, _, mp, _) in enumerate(arrows):
        vt[i, trees[s]] = mp
    comp = np.full((n, n), UNDEF, dtype=np.int64)
    for i, (s1, r1, _, _) in enumerate(arrows):
        for j, (s2, r2, m2, _) in enumerate(arrows):
            if s1 == r2:
                composed = tuple(int(vt[i, x]) for x in m2)
                comp[i, j] = seen[(s2, r1, composed)]
    inv = np.empty(n, dtype=np.int64)
    for i, (s, r, mp, _) in enumerate(arrows):
        back = np.empty(len(mp), dtype=np.int64)
        pos = {x: k for k, x in enumerate(trees[r])}
        for k, x in enumerate(mp):
            back[pos[x]] = trees[s][k]
        inv[i] = seen[(r, s, tuple(int(x) for x in back))]
    unit_arrow = np.arange(E.n_vertices, dtype=np.int64)
    labels = tuple(" ".join(a[3]) for a in arrows)
    G = FiniteGroupoid(srcs, rngs, comp, inv, unit_arrow, E.vertex_labels, labels)
    anchor = np.array([p.vertex for p in F.paths], dtype=np.int64)
    eidx = {(int(s), int(r)): k for k, (s, r) in enumerate(zip(T.e_src, T.e_rng))}
    et = np.full((n, T.n_edges), UNDEF, dtype=np.int64)
    for i in range(n):
        for k in range(T.n_edges):
            s, r = int(T.e_src[k]), int(T.e_rng[k])
            if vt[i, r] >= 0:
                et[i, k] = eidx[(int(vt[i, s]), int(vt[i, r]))]
    return GraphAction(G, T, anchor, vt, et)


def parse_path(aut: SelfSimilarAutomaton, text: str | Sequence[str]) -> Path:
    """Read a path from edge labels (space/comma separated, or run together
    when all labels are single characters) or a vertex label."""
    E = aut.graph
    if isinstance(text, str):
        if text in E.vertex_index:
            return Path(E.vertex_index[text], ())
        parts = [p for p in text.replace(",", " ").split() if p]
        if len(parts) == 1 and parts[0] not in E.edge_index:
            parts = list(parts[0])
    else:
        parts = list(text)
        if len(parts) == 1 and parts[0] in E.vertex_index:
            return Path(E.vertex_index[parts[0]], ())
    try:
        edges = tuple(E.edge_index[p] for p in parts)
    except KeyError as exc:
        raise MalformedInputError(f"unknown edge {exc}") from None
    if not edges:
        raise MalformedInputError("empty path")
    if not E.is_path(edges):
        raise PreconditionError("edges do not form a path")
    return Path(int(E.e_rng[edges[0]]), edges)


def parse_word(text: str | Sequence[str]) -> Word:
    if isinstance(text, str):
        parts = [p for p in text.replace(",", " ").split() if p]
    else:
        parts = list(text)
    if not parts:
        raise MalformedInputError("empty word")
    return tuple(parts)
