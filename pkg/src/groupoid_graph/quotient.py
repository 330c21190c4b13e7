"""Spectrum of the vertex crossed product and the quotient graph.

The blocks of ``C_0(E^0) x| G`` are indexed by pairs (vertex orbit O,
irreducible character pi of the basepoint stabilizer G(v_O)), with block size
``|O| deg(pi)``.  The number of edges from ``(O', sigma)`` into ``(O, pi)``
is

    a = sum over edge orbits [e] from O' into O of
        < pi restricted to G(e), sigma o phi_e >_{G(e)}

where ``e`` is normalised to have range ``v_O`` and
``phi_e(c) = g2^-1 c g2`` for an arrow ``g2`` carrying ``w_{O'}`` to ``s(e)``.
The oracle in :mod:`groupoid_graph.oracle` computes the same matrix from
corner dimensions; ``quotient_graph(mode="both")`` insists they agree.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConsistencyError, PreconditionError
from .graph import GraphAction
from .groupoid import orbits, stabilizer_group
from .oracle import OracleAdjacency, oracle_adjacency
from .reptheory import (
    CharacterTable,
    FiniteGroup,
    _complex_json,
    character_table,
    hom_multiplicity,
    restrict_character,
)

MODES = ("fast", "oracle", "both")


@dataclass(frozen=True, eq=False)
class SpectrumPoint:
    orbit_index: int
    basepoint: int
    orbit: tuple[int, ...]
    irrep_index: int
    degree: int
    size: int
    character: np.ndarray = field(repr=False)

    def to_dict(self, A: GraphAction) -> dict:
        vl = A.graph.vertex_labels
        return {
            "orbit": [vl[x] for x in self.orbit],
            "basepoint": vl[self.basepoint],
            "irrep": self.irrep_index,
            "degree": self.degree,
            "size": self.size,
            "character": [_complex_json(v) for v in self.character],
        }


@dataclass(frozen=True, eq=False)
class _OrbitData:
    orbit: tuple[int, ...]
    basepoint: int
    group: FiniteGroup
    arrows: np.ndarray  # G-arrow id of each group element
    table: CharacterTable


def _orbit_data(A: GraphAction) -> list[_OrbitData]:
    out = []
    for orb in orbits(A.vertex_action):
        v = orb[0]
        K, arrows = stabilizer_group(A.vertex_action, v)
        out.append(_OrbitData(orb, v, K, arrows, character_table(K)))
    return out


def spectrum(A: GraphAction) -> list[SpectrumPoint]:
    """One point per (vertex orbit, irreducible character), orbits by smallest vertex."""
    points = []
    for i, od in enumerate(_orbit_data(A)):
        for j, deg in enumerate(od.table.degrees):
            points.append(
                SpectrumPoint(i, od.basepoint, od.orbit, j, deg, len(od.orbit) * deg, od.table.values[j])
            )
    return points


@dataclass(frozen=True, eq=False)
class EdgeOrbitDatum:
    """Normalised representative of an edge orbit and its stabilizer maps.

    ``embedding[i]`` and ``phi[i]`` are positions, inside the range and
    source basepoint stabilizers, of ``stabilizer_arrows[i]`` and of its
    conjugate ``g2^-1 c g2``.
    """

    orbit: tuple[int, ...]
    representative: int
    range_orbit: int
    source_orbit: int
    g1: int
    g2: int
    stabilizer: FiniteGroup
    stabilizer_arrows: np.ndarray
    embedding: np.ndarray
    phi: np.ndarray

    def to_dict(self, A: GraphAction) -> dict:
        el, al = A.graph.edge_labels, A.groupoid.arrow_labels
        return {
            "orbit": [el[e] for e in self.orbit],
            "representative": el[self.representative],
            "range_orbit": self.range_orbit,
            "source_orbit": self.source_orbit,
            "stabilizer": [al[a] for a in self.stabilizer_arrows],
            "g1": al[self.g1],
            "g2": al[self.g2],
        }


def edge_orbit_data(
    A: GraphAction, rng: np.random.Generator | None = None, *, _orbits: list[_OrbitData] | None = None
) -> list[EdgeOrbitDatum]:
    """Normalised representatives of every edge orbit.

    Deterministically: start from the smallest edge of the orbit and move it
    with the smallest arrow carrying its range to ``v_O``; ``g2`` is the
    smallest arrow carrying ``w_{O'}`` to ``s(e)``.  With ``rng`` every one of
    these choices is made at random instead (for choice-independence tests).
    """
    G, E = A.groupoid, A.graph
    odata = _orbits if _orbits is not None else _orbit_data(A)
    orbit_of = np.empty(E.n_vertices, dtype=np.int64)
    for i, od in enumerate(odata):
        orbit_of[list(od.orbit)] = i
    VA, EA = A.vertex_action, A.edge_action
    out = []

    def pick(options):
        options = np.asarray(options)
        if options.size == 0:
            raise ConsistencyError("no arrow available where the orbit structure requires one")
        return int(options[0] if rng is None else options[int(rng.integers(options.size))])

    for orb in orbits(EA):
        e0 = orb[0] if rng is None else int(orb[int(rng.integers(len(orb)))])
        R = int(orbit_of[E.e_rng[e0]])
        v = odata[R].basepoint
        g1 = pick(VA.arrows_carrying(int(E.e_rng[e0]), v))
        e = int(A.edge_act[g1, e0])
        S = int(orbit_of[E.e_src[e]])
        w = odata[S].basepoint
        g2 = pick(VA.arrows_carrying(w, int(E.e_src[e])))
        K, stab = stabilizer_group(EA, e)
        pos_v = {int(a): i for i, a in enumerate(odata[R].arrows)}
        pos_w = {int(a): i for i, a in enumerate(odata[S].arrows)}
        g2i = int(G.inv[g2])
        emb = np.array([pos_v[int(c)] for c in stab], dtype=np.int64)
        phi = np.array(
            [pos_w[int(G.compose[G.compose[g2i, c], g2])] for c in stab], dtype=np.int64
        )
        out.append(EdgeOrbitDatum(tuple(orb), e, R, S, g1, g2, K, stab, emb, phi))
    return out


def character_adjacency(A: GraphAction, rng: np.random.Generator | None = None) -> np.ndarray:
    """Quotient-graph adjacency from characters (rows: range, columns: source)."""
    odata = _orbit_data(A)
    offsets = np.concatenate([[0], np.cumsum([od.table.n_irreps for od in odata])]).astype(np.int64)
    n = int(offsets[-1])
    adj = np.zeros((n, n), dtype=np.int64)
    for d in edge_orbit_data(A, rng, _orbits=odata):
        tv, tw = odata[d.range_orbit].table, odata[d.source_orbit].table
        te = character_table(d.stabilizer)
        res_pi = [restrict_character(chi, tv, te, d.embedding) for chi in tv.values]
        res_sigma = [restrict_character(chi, tw, te, d.phi) for chi in tw.values]
        for i, a in enumerate(res_pi):
            for j, b in enumerate(res_sigma):
                adj[offsets[d.range_orbit] + i, offsets[d.source_orbit] + j] += hom_multiplicity(a, b, te)
    adj.setflags(write=False)
    return adj


# --------------------------------------------------------------------------
# report


@dataclass(frozen=True, eq=False)
class QuotientGraphReport:
    spectrum: tuple[SpectrumPoint, ...]
    adjacency: np.ndarray
    flags: dict
    provenance: str
    warnings: tuple[str, ...] = ()
    oracle: OracleAdjacency | None = field(default=None, repr=False)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(p.size for p in self.spectrum)

    def to_dict(self, A: GraphAction) -> dict:
        return {
            "spectrum": [p.to_dict(A) for p in self.spectrum],
            "sizes": list(self.sizes),
            "adjacency": self.adjacency.tolist(),
            "adjacency_convention": "a[x][y] counts edges from y into x",
            "flags": dict(self.flags),
            "provenance": self.provenance,
            "warnings": list(self.warnings),
        }


def quotient_graph(A: GraphAction, mode: str = "fast") -> QuotientGraphReport:
    """Spectrum and adjacency of the quotient graph.

    ``mode="both"`` runs the character formula and the oracle and raises
    :class:`ConsistencyError` listing every differing entry if they disagree.
    """
    if mode not in MODES:
        raise PreconditionError(f"mode must be one of {MODES}")
    E = A.graph
    flags = {
        "no_sources": not E.has_sources,
        "locally_finite": E.locally_finite,
        "morita_certified": (not E.has_sources) and E.locally_finite,
    }
    warnings = []
    if E.has_sources:
        warnings.append("graph has sources: spectrum and adjacency computed, Morita identification not certified")
    spec = tuple(spectrum(A))
    fast = character_adjacency(A) if mode in ("fast", "both") else None
    orc = oracle_adjacency(A) if mode in ("oracle", "both") else None
    if orc is not None:
        if orc.sizes != tuple(p.size for p in spec):
            raise ConsistencyError(f"oracle block sizes {orc.sizes} differ from spectrum")
    if mode == "both":
        diff = np.argwhere(fast != orc.adjacency)
        if diff.size:
            entries = ", ".join(
                f"[{x}][{y}] fast={fast[x, y]} oracle={orc.adjacency[x, y]}" for x, y in diff
            )
            raise ConsistencyError(f"fast path and oracle disagree: {entries}")
        provenance, adj = "both-agree", fast
    elif mode == "fast":
        provenance, adj = "fast-path", fast
    else:
        provenance, adj = "oracle", orc.adjacency
    sizes = np.array([p.size for p in spec], dtype=np.int64)
    total = int(sizes @ adj @ sizes)
    expected = correspondence_dim(A)
    if total != expected:
        raise ConsistencyError(f"completeness identity failed: {total} != {expected}")
    return QuotientGraphReport(spec, adj, flags, provenance, tuple(warnings), orc)


def vertex_crossed_product_dim(A: GraphAction) -> int:
    return int(np.count_nonzero(A.vertex_act >= 0))


def correspondence_dim(A: GraphAction) -> int:
    """``sum_g |E^1_{r(g)}|``."""
    return int(np.count_nonzero(A.edge_anchor[None, :] == A.groupoid.rng[:, None]))
