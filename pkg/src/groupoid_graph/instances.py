"""Random and parametrised instances of graph actions.

Every transitive piece of a graph action with finite isotropy is a coset
space: over a transitive groupoid ``units x K x units`` a vertex orbit is
``units x K/H`` and an edge orbit is ``units x K/L``.  Range and source maps
``cL -> c a H_R`` and ``cL -> c b H_S`` are well defined exactly when
``L <= a H_R a^-1`` and ``L <= b H_S b^-1``.  The builders below assemble
such data into :class:`GraphAction` objects, which is how the fuzz tests get
actions with prescribed isotropy.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .graph import DirectedGraph, GraphAction, trivial_action
from .groupoid import (
    UNDEF,
    FiniteGroupoid,
    GroupoidOnGroupoidAction,
    build_transitive_groupoid,
    disjoint_union,
)
from .reptheory import (
    FiniteGroup,
    cyclic_group,
    direct_product,
    klein_four_group,
    symmetric_group,
    trivial_group,
)

FUZZ_GROUPS = {
    "Z2": lambda: cyclic_group(2),
    "Z3": lambda: cyclic_group(3),
    "Z4": lambda: cyclic_group(4),
    "S3": lambda: symmetric_group(3),
    "Z2xZ2": klein_four_group,
}


# --------------------------------------------------------------------------
# subgroups and cosets


def subgroups(K: FiniteGroup) -> list[tuple[int, ...]]:
    """All subgroups of a small group (closures of at most two generators).

    Enough for groups whose subgroups are 2-generated, which covers every
    group used here.
    """
    n = K.order
    found = set()
    for a in range(n):
        for b in range(a, n):
            found.add(_closure(K, (a, b)))
    return sorted(found, key=lambda s: (len(s), s))


def _closure(K: FiniteGroup, gens: Sequence[int]) -> tuple[int, ...]:
    elems = {K.identity}
    frontier = [K.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = int(K.mul[x, g])
                if y not in elems:
                    elems.add(y)
                    nxt.append(y)
        frontier = nxt
    return tuple(sorted(elems))


def conjugate(K: FiniteGroup, a: int, H: Sequence[int]) -> tuple[int, ...]:
    """``a H a^-1``."""
    ai = K.inverse[a]
    return tuple(sorted({int(K.mul[K.mul[a, h], ai]) for h in H}))


def left_cosets(K: FiniteGroup, H: Sequence[int]) -> np.ndarray:
    """Coset index of every element of K for ``K/H`` (cosets ``cH``).

    Cosets are numbered in order of their smallest element.
    """
    label = np.full(K.order, UNDEF, dtype=np.int64)
    nxt = 0
    for c in range(K.order):
        if label[c] >= 0:
            continue
        label[[int(K.mul[c, h]) for h in H]] = nxt
        nxt += 1
    return label


# --------------------------------------------------------------------------
# coset construction


@dataclass(frozen=True)
class EdgeOrbitSpec:
    """An edge orbit ``K/L`` with range ``cL -> c a H_R`` and source ``cL -> c b H_S``."""

    range_orbit: int
    source_orbit: int
    subgroup: tuple[int, ...]
    range_shift: int = 0
    source_shift: int = 0


@dataclass(frozen=True)
class TransitiveSpec:
    units: tuple[str, ...]
    group: FiniteGroup
    vertex_subgroups: tuple[tuple[int, ...], ...]
    edge_orbits: tuple[EdgeOrbitSpec, ...]


def coset_graph_action(spec: TransitiveSpec) -> GraphAction:
    """Graph action of ``units x K x units`` built from coset data.

    Vertex ``(u, cH_t)`` lies over unit ``u``; arrow ``(v, k, u)`` sends it to
    ``(v, kcH_t)``.  Edges likewise.
    """
    K = spec.group
    G = build_transitive_groupoid(spec.units, K)
    m, order = len(spec.units), K.order

    def layout(subs):
        labels = [left_cosets(K, H) for H in subs]
        counts = [int(lab.max()) + 1 for lab in labels]
        offsets = np.concatenate([[0], np.cumsum([m * c for c in counts])]).astype(np.int64)
        return labels, counts, offsets

    vlab, vcount, voff = layout(spec.vertex_subgroups)
    for es in spec.edge_orbits:
        aHa = set(conjugate(K, es.range_shift, spec.vertex_subgroups[es.range_orbit]))
        bHb = set(conjugate(K, es.source_shift, spec.vertex_subgroups[es.source_orbit]))
        if not set(es.subgroup) <= aHa & bHb:
            raise ValueError("edge subgroup not contained in the conjugated vertex stabilizers")
    elab, ecount, eoff = layout([es.subgroup for es in spec.edge_orbits])

    # a representative element for every coset
    def reps(labels):
        out = []
        for lab in labels:
            r = np.zeros(int(lab.max()) + 1, dtype=np.int64)
            for c in range(order - 1, -1, -1):
                r[lab[c]] = c
            out.append(r)
        return out

    vrep, erep = reps(vlab), reps(elab)
    nV, nE = int(voff[-1]), int(eoff[-1])

    def vid(t, iu, coset):
        return int(voff[t] + iu * vcount[t] + coset)

    def eid(t, iu, coset):
        return int(eoff[t] + iu * ecount[t] + coset)

    anchor = np.empty(nV, dtype=np.int64)
    vnames = []
    for t in range(len(vcount)):
        for iu in range(m):
            for j in range(vcount[t]):
                anchor[vid(t, iu, j)] = iu
                vnames.append(f"{spec.units[iu]}:V{t}.{j}")
    e_src = np.empty(nE, dtype=np.int64)
    e_rng = np.empty(nE, dtype=np.int64)
    enames = []
    for t, es in enumerate(spec.edge_orbits):
        for iu in range(m):
            for j in range(ecount[t]):
                c = erep[t][j]
                e_rng[eid(t, iu, j)] = vid(es.range_orbit, iu, vlab[es.range_orbit][K.mul[c, es.range_shift]])
                e_src[eid(t, iu, j)] = vid(es.source_orbit, iu, vlab[es.source_orbit][K.mul[c, es.source_shift]])
                enames.append(f"{spec.units[iu]}:E{t}.{j}")
    E = DirectedGraph(nV, e_src, e_rng, tuple(vnames), tuple(enames))

    vt = np.full((G.n_arrows, nV), UNDEF, dtype=np.int64)
    et = np.full((G.n_arrows, nE), UNDEF, dtype=np.int64)
    for g in range(G.n_arrows):
        rest, iu = divmod(g, m)
        iv, k = divmod(rest, order)
        for t in range(len(vcount)):
            for j in range(vcount[t]):
                vt[g, vid(t, iu, j)] = vid(t, iv, vlab[t][K.mul[k, vrep[t][j]]])
        for t in range(len(ecount)):
            for j in range(ecount[t]):
                et[g, eid(t, iu, j)] = eid(t, iv, elab[t][K.mul[k, erep[t][j]]])
    return GraphAction(G, E, anchor, vt, et)


def combine_actions(*parts: GraphAction) -> GraphAction:
    """Disjoint union of graph actions (groupoids and graphs side by side)."""
    G = disjoint_union(*(A.groupoid for A in parts))
    nV = sum(A.graph.n_vertices for A in parts)
    nE = sum(A.graph.n_edges for A in parts)
    src, rng, anchor, vl, el = [], [], [], [], []
    vt = np.full((G.n_arrows, nV), UNDEF, dtype=np.int64)
    et = np.full((G.n_arrows, nE), UNDEF, dtype=np.int64)
    ao = uo = vo = eo = 0
    for i, A in enumerate(parts):
        E = A.graph
        src.append(E.e_src + vo)
        rng.append(E.e_rng + vo)
        anchor.append(A.anchor + uo)
        vl.extend(f"c{i}:{x}" for x in E.vertex_labels)
        el.extend(f"c{i}:{x}" for x in E.edge_labels)
        n = A.groupoid.n_arrows
        vt[ao : ao + n, vo : vo + E.n_vertices] = np.where(A.vertex_act >= 0, A.vertex_act + vo, UNDEF)
        et[ao : ao + n, eo : eo + E.n_edges] = np.where(A.edge_act >= 0, A.edge_act + eo, UNDEF)
        ao += n
        uo += A.groupoid.n_units
        vo += E.n_vertices
        eo += E.n_edges
    graph = DirectedGraph(nV, np.concatenate(src), np.concatenate(rng), tuple(vl), tuple(el))
    return GraphAction(G, graph, np.concatenate(anchor), vt, et)


# --------------------------------------------------------------------------
# relabelling


def relabel_graph_action(
    A: GraphAction, vperm: np.ndarray, eperm: np.ndarray, aperm: np.ndarray, uperm: np.ndarray
) -> GraphAction:
    """Rename ids: old vertex ``x`` becomes ``vperm[x]``, and so on."""
    G, E = A.groupoid, A.graph
    vperm, eperm, aperm, uperm = (np.asarray(p, dtype=np.int64) for p in (vperm, eperm, aperm, uperm))

    def inv(p):
        q = np.empty_like(p)
        q[p] = np.arange(p.size)
        return q

    ia, iv, ie, iu = inv(aperm), inv(vperm), inv(eperm), inv(uperm)

    def mapped(table, perm):
        return np.where(table >= 0, perm[np.where(table >= 0, table, 0)], UNDEF)

    comp = mapped(G.compose[np.ix_(ia, ia)], aperm)
    G2 = FiniteGroupoid(
        uperm[G.src[ia]],
        uperm[G.rng[ia]],
        comp,
        aperm[G.inv[ia]],
        aperm[G.unit_arrow[iu]],
        tuple(G.unit_labels[i] for i in iu),
        tuple(G.arrow_labels[i] for i in ia),
    )
    E2 = DirectedGraph(
        E.n_vertices,
        vperm[E.e_src[ie]],
        vperm[E.e_rng[ie]],
        tuple(E.vertex_labels[i] for i in iv),
        tuple(E.edge_labels[i] for i in ie),
    )
    vt = mapped(A.vertex_act[np.ix_(ia, iv)], vperm)
    et = mapped(A.edge_act[np.ix_(ia, ie)], eperm)
    return GraphAction(G2, E2, uperm[A.anchor[iv]], vt, et)


def random_relabel(A: GraphAction, rng: np.random.Generator):
    """Relabel with random permutations; returns the new action and the perms."""
    perms = (
        rng.permutation(A.graph.n_vertices),
        rng.permutation(A.graph.n_edges),
        rng.permutation(A.groupoid.n_arrows),
        rng.permutation(A.groupoid.n_units),
    )
    return relabel_graph_action(A, *perms), perms


# --------------------------------------------------------------------------
# random generators


def random_graph(
    rng: np.random.Generator, *, max_vertices: int = 8, max_edges: int = 20, no_sources: bool = False
) -> DirectedGraph:
    n = int(rng.integers(1, max_vertices + 1))
    k = int(rng.integers(0, max_edges + 1))
    if no_sources:
        k = max(k, n)
    src = rng.integers(0, n, size=k)
    dst = rng.integers(0, n, size=k)
    if no_sources:
        dst[:n] = np.arange(n)  # every vertex receives an edge
    return DirectedGraph(n, src, dst)


def random_trivial_action(rng: np.random.Generator, **kw) -> GraphAction:
    return trivial_action(random_graph(rng, **kw))


def random_transitive_spec(
    rng: np.random.Generator,
    group: FiniteGroup,
    *,
    n_units: int,
    n_vertex_orbits: int,
    max_vertices: int,
    max_edges: int,
    free: bool = False,
    max_edge_orbits: int = 6,
) -> TransitiveSpec | None:
    """Random coset data inside the size budget, or None if it does not fit."""
    subs = subgroups(group)
    trivial = (group.identity,)
    vsubs = []
    budget = max_vertices
    for _ in range(n_vertex_orbits):
        options = [trivial] if free else subs
        options = [H for H in options if n_units * group.order // len(H) <= budget]
        if not options:
            return None
        H = options[int(rng.integers(len(options)))]
        vsubs.append(H)
        budget -= n_units * group.order // len(H)
    edges = []
    ebudget = max_edges
    for _ in range(int(rng.integers(0, max_edge_orbits + 1))):
        R = int(rng.integers(n_vertex_orbits))
        S = int(rng.integers(n_vertex_orbits))
        a = int(rng.integers(group.order))
        b = int(rng.integers(group.order))
        common = set(conjugate(group, a, vsubs[R])) & set(conjugate(group, b, vsubs[S]))
        options = [trivial] if free else [L for L in subs if set(L) <= common]
        options = [L for L in options if n_units * group.order // len(L) <= ebudget]
        if not options:
            continue
        L = options[int(rng.integers(len(options)))]
        edges.append(EdgeOrbitSpec(R, S, L, a, b))
        ebudget -= n_units * group.order // len(L)
    units = tuple(f"u{i}" for i in range(n_units))
    return TransitiveSpec(units, group, tuple(vsubs), tuple(edges))


def random_fuzz_action(
    rng: np.random.Generator,
    *,
    max_vertices: int = 6,
    max_edges: int = 14,
    max_vertex_orbits: int = 3,
    groups: Sequence[str] = tuple(FUZZ_GROUPS),
    free: bool = False,
) -> GraphAction:
    """Random graph action with isotropy drawn from ``groups``.

    Either one transitive groupoid or a disjoint union of two, with at most
    ``max_vertex_orbits`` vertex orbits overall.
    """
    while True:
        n_comp = 1 if rng.random() < 0.7 else 2
        n_orbits_total = int(rng.integers(n_comp, max_vertex_orbits + 1))
        split = [n_orbits_total] if n_comp == 1 else [1, n_orbits_total - 1]
        if 0 in split:
            continue
        parts = []
        vb, eb = max_vertices, max_edges
        for k, n_orb in enumerate(split):
            name = groups[int(rng.integers(len(groups)))]
            K = FUZZ_GROUPS[name]()
            n_units = int(rng.integers(1, 3))
            spec = random_transitive_spec(
                rng,
                K,
                n_units=n_units,
                n_vertex_orbits=n_orb,
                max_vertices=vb - (len(split) - k - 1),
                max_edges=eb,
                free=free,
            )
            if spec is None:
                break
            part = coset_graph_action(spec)
            parts.append(part)
            vb -= part.graph.n_vertices
            eb -= part.graph.n_edges
        else:
            A = parts[0] if len(parts) == 1 else combine_actions(*parts)
            if A.graph.n_vertices <= max_vertices and A.graph.n_edges <= max_edges:
                return A


def random_free_action(rng: np.random.Generator, **kw) -> GraphAction:
    """Free action: trivial vertex and edge stabilizers."""
    groups = kw.pop("groups", ("Z2", "Z3", "S3", "Z2xZ2"))
    return random_fuzz_action(rng, free=True, groups=groups, **kw)


def pair_groupoid_copies(F: DirectedGraph, copies: int) -> GraphAction:
    """Pair groupoid on ``copies`` units acting on disjoint copies of F."""
    n, k = F.n_vertices, F.n_edges
    spec_units = tuple(f"u{i}" for i in range(copies))
    G = build_transitive_groupoid(spec_units, trivial_group())
    nV, nE = copies * n, copies * k
    src = np.concatenate([F.e_src + i * n for i in range(copies)])
    dst = np.concatenate([F.e_rng + i * n for i in range(copies)])
    E = DirectedGraph(nV, src, dst)
    anchor = np.repeat(np.arange(copies), n)
    vt = np.full((G.n_arrows, nV), UNDEF, dtype=np.int64)
    et = np.full((G.n_arrows, nE), UNDEF, dtype=np.int64)
    for g in range(G.n_arrows):
        s, r = int(G.src[g]), int(G.rng[g])
        vt[g, s * n : (s + 1) * n] = np.arange(n) + r * n
        et[g, s * k : (s + 1) * k] = np.arange(k) + r * k
    return GraphAction(G, E, anchor, vt, et)


# --------------------------------------------------------------------------
# groupoids acting on groupoids


def random_groupoid_action(
    rng: np.random.Generator, *, max_arrows: int = 200, trivial_actor: bool = False
) -> GroupoidOnGroupoidAction:
    """G acting diagonally on a fibrewise pair groupoid over a G-set.

    ``max_arrows`` bounds G, H and the crossed product ``G x| H``.

    The target ``H`` has units ``X`` (a coset G-set) and one arrow ``y <- x``
    for every pair in the same fibre, optionally times a small group ``A``
    that G leaves alone.  ``g.(y, a, x) = (g.y, a, g.x)``.
    """
    while True:
        if trivial_actor:
            K = trivial_group()
        else:
            K = FUZZ_GROUPS[list(FUZZ_GROUPS)[int(rng.integers(len(FUZZ_GROUPS)))]]()
        n_units = int(rng.integers(1, 3))
        spec = random_transitive_spec(
            rng, K, n_units=n_units, n_vertex_orbits=int(rng.integers(1, 3)),
            max_vertices=12, max_edges=0, max_edge_orbits=0,
        )
        if spec is None:
            continue
        X = coset_graph_action(spec)
        Aorder = int(rng.integers(1, 3))
        fibre = [np.flatnonzero(X.anchor == u) for u in range(X.groupoid.n_units)]
        n_h = sum(len(f) ** 2 for f in fibre) * Aorder
        per_unit = np.bincount(X.groupoid.src, minlength=X.groupoid.n_units)
        n_cross = sum(len(f) ** 2 * int(per_unit[u]) for u, f in enumerate(fibre)) * Aorder
        if max(n_h, n_cross, X.groupoid.n_arrows) <= max_arrows:
            break
    G = X.groupoid
    Agrp = cyclic_group(Aorder)
    # arrows of H: (y, a, x) with x, y in the same fibre
    triples = [
        (int(y), a, int(x))
        for f in fibre
        for y in f
        for a in range(Aorder)
        for x in f
    ]
    idx = {t: i for i, t in enumerate(triples)}
    n = len(triples)
    nX = X.graph.n_vertices
    hsrc = np.array([t[2] for t in triples], dtype=np.int64)
    hrng = np.array([t[0] for t in triples], dtype=np.int64)
    comp = np.full((n, n), UNDEF, dtype=np.int64)
    for i, (y, a, x) in enumerate(triples):
        for j, (y2, b, x2) in enumerate(triples):
            if x == y2:
                comp[i, j] = idx[(y, int(Agrp.mul[a, b]), x2)]
    inv = np.array([idx[(x, int(Agrp.inverse[a]), y)] for (y, a, x) in triples], dtype=np.int64)
    unit_arrow = np.array([idx[(x, Agrp.identity, x)] for x in range(nX)], dtype=np.int64)
    labels = tuple(f"({X.graph.vertex_labels[y]},{a},{X.graph.vertex_labels[x]})" for y, a, x in triples)
    H = FiniteGroupoid(hsrc, hrng, comp, inv, unit_arrow, X.graph.vertex_labels, labels)
    anchor = X.anchor[hsrc]
    act = np.full((G.n_arrows, n), UNDEF, dtype=np.int64)
    for g in range(G.n_arrows):
        for i, (y, a, x) in enumerate(triples):
            gx = X.vertex_act[g, x]
            if gx >= 0:
                act[g, i] = idx[(int(X.vertex_act[g, y]), a, int(gx))]
    return GroupoidOnGroupoidAction(G, H, anchor, act)
