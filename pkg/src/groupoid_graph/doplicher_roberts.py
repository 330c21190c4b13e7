"""Intertwiner dimensions and Bratteli data for gauge-invariant cores.

For a unit ``u`` with isotropy ``K`` acting on the fibre graph ``E_u``, the
space ``(rho^m, rho^n)_u`` is the K-invariant part of the span of rank-one
operators ``theta_{mu,nu}`` over path pairs of lengths ``(m, n)`` with a
common source.  Its dimension is a permutation-representation invariant
count, computed either by Burnside's lemma or by an explicit rank.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import PreconditionError
from .graph import GraphAction, fiber_graphs
from .quotient import QuotientGraphReport
from .reptheory import character_table, permutation_character, tensor_decompose

DEFAULT_DEPTH_BOUND = 8
METHODS = ("burnside", "explicit")


@dataclass(frozen=True, eq=False)
class _Fibre:
    unit: int
    vertices: np.ndarray  # global vertex ids
    edges: np.ndarray  # global edge ids
    src: np.ndarray  # local source of each fibre edge
    rng: np.ndarray
    arrows: np.ndarray  # isotropy arrows at the unit
    vperm: np.ndarray  # vperm[k, x]: local image of local vertex x
    eperm: np.ndarray


def _fibre(A: GraphAction, unit: int) -> _Fibre:
    G = A.groupoid
    if not 0 <= unit < G.n_units:
        raise PreconditionError(f"unit {unit} does not exist")
    fg = fiber_graphs(A)[unit]
    _, arrows = G.isotropy_group(unit)
    vpos = np.full(A.graph.n_vertices, -1, dtype=np.int64)
    vpos[fg.vertices] = np.arange(fg.vertices.size)
    epos = np.full(A.graph.n_edges, -1, dtype=np.int64)
    epos[fg.edges] = np.arange(fg.edges.size)
    vperm = vpos[A.vertex_act[np.ix_(arrows, fg.vertices)]]
    eperm = epos[A.edge_act[np.ix_(arrows, fg.edges)]]
    return _Fibre(unit, fg.vertices, fg.edges, fg.graph.e_src, fg.graph.e_rng, arrows, vperm, eperm)


def _fixed_path_counts(f: _Fibre, k: int, length: int) -> np.ndarray:
    """Number of k-fixed paths of each length ending (source side) at each vertex."""
    nv = f.vertices.size
    fixed_v = (f.vperm[k] == np.arange(nv)).astype(object)
    B = np.zeros((nv, nv), dtype=object)
    for j in np.flatnonzero(f.eperm[k] == np.arange(f.edges.size)):
        B[f.rng[j], f.src[j]] += 1
    row = fixed_v.copy()
    for _ in range(length):
        row = row.dot(B)
    return row


def _check_depth(m: int, n: int, bound: int) -> None:
    if min(m, n) < 0:
        raise PreconditionError("path lengths must be nonnegative")
    if max(m, n) > bound:
        raise PreconditionError(f"path length beyond the configured depth bound {bound}")


def _paths_by_source(f: _Fibre, length: int) -> list[tuple[int, ...]]:
    """Local edge tuples (range to source) of the given length; length 0 gives vertices."""
    if length == 0:
        return [(x,) for x in range(f.vertices.size)]
    paths = [(e,) for e in range(f.edges.size)]
    for _ in range(length - 1):
        paths = [p + (e,) for p in paths for e in np.flatnonzero(f.rng == f.src[p[-1]]).tolist()]
    return paths


def intertwiner_dimension(
    A: GraphAction,
    unit: int,
    m: int,
    n: int,
    *,
    method: str = "burnside",
    depth_bound: int = DEFAULT_DEPTH_BOUND,
) -> int:
    """``dim (rho^m, rho^n)_u``.

    ``method="burnside"`` averages fixed-pair counts over the isotropy;
    ``method="explicit"`` builds the permutation action on path pairs and
    takes ``N - rank(stack(P_k - I))``.
    """
    _check_depth(m, n, depth_bound)
    if method not in METHODS:
        raise PreconditionError(f"method must be one of {METHODS}")
    f = _fibre(A, unit)
    order = f.arrows.size
    if method == "burnside":
        total = 0
        for k in range(order):
            total += int(_fixed_path_counts(f, k, m).dot(_fixed_path_counts(f, k, n)))
        if total % order:
            raise PreconditionError("Burnside count not divisible by the group order")
        return total // order
    return _explicit_dimension(f, m, n)


def _explicit_dimension(f: _Fibre, m: int, n: int) -> int:
    def source(p, length):
        return p[0] if length == 0 else int(f.src[p[-1]])

    def move(k, p, length):
        return tuple(int(x) for x in (f.vperm[k][list(p)] if length == 0 else f.eperm[k][list(p)]))

    mus = _paths_by_source(f, m)
    nus = _paths_by_source(f, n)
    pairs = [(a, b) for a in mus for b in nus if source(a, m) == source(b, n)]
    if not pairs:
        return 0
    index = {p: i for i, p in enumerate(pairs)}
    N = len(pairs)
    blocks = []
    for k in range(f.arrows.size):
        P = np.zeros((N, N))
        for i, (a, b) in enumerate(pairs):
            P[index[(move(k, a, m), move(k, b, n))], i] = 1.0
        blocks.append(P - np.eye(N))
    rank = np.linalg.matrix_rank(np.vstack(blocks))
    return int(N - rank)


@dataclass(frozen=True, eq=False)
class IntertwinerDims:
    unit: int
    table: np.ndarray
    method: str
    warnings: tuple[str, ...] = ()

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(int(x) for x in np.diag(self.table))

    def to_dict(self, A: GraphAction) -> dict:
        return {
            "unit": A.groupoid.unit_labels[self.unit],
            "method": self.method,
            "table": self.table.tolist(),
            "warnings": list(self.warnings),
        }


def _fibre_warnings(A: GraphAction, unit: int) -> list[str]:
    g = fiber_graphs(A)[unit].graph
    out = []
    if g.has_sources:
        out.append("fibre graph has sources: the correspondence is not full")
    if g.has_sinks:
        out.append("fibre graph has sinks: the left action is not injective")
    return out


def dr_dimension_table(
    A: GraphAction,
    unit: int,
    depth: int,
    *,
    method: str = "burnside",
    depth_bound: int = DEFAULT_DEPTH_BOUND,
) -> IntertwinerDims:
    """``d[m][n]`` for ``0 <= m, n <= depth``; symmetry and monotonicity verified."""
    _check_depth(depth, depth, depth_bound)
    d = np.zeros((depth + 1, depth + 1), dtype=np.int64)
    for m in range(depth + 1):
        for n in range(m, depth + 1):
            d[m, n] = d[n, m] = intertwiner_dimension(A, unit, m, n, method=method, depth_bound=depth_bound)
    if method == "explicit":
        for m in range(depth + 1):
            for n in range(m + 1, depth + 1):
                if intertwiner_dimension(A, unit, n, m, method=method, depth_bound=depth_bound) != d[m, n]:
                    raise PreconditionError("intertwiner table is not symmetric")
    if np.any(d[:-1, :-1] > d[1:, 1:]):
        raise PreconditionError("embedding T -> T (x) 1 would not be injective")
    d.setflags(write=False)
    return IntertwinerDims(unit, d, method, tuple(_fibre_warnings(A, unit)))


# --------------------------------------------------------------------------
# Bratteli diagrams


@dataclass(frozen=True, eq=False)
class BratteliDiagram:
    """``levels[k] = (labels, dims)``; ``multiplicities[k]`` maps level k to k+1.

    ``dims[k+1] == multiplicities[k] @ dims[k]``.
    """

    levels: tuple[tuple[tuple[str, ...], np.ndarray], ...]
    multiplicities: tuple[np.ndarray, ...]
    source: str
    warnings: tuple[str, ...] = field(default=())

    def validate(self) -> bool:
        for k, M in enumerate(self.multiplicities):
            if not np.array_equal(M.dot(self.levels[k][1]), self.levels[k + 1][1]):
                return False
        return True

    def to_dict(self) -> dict:
        return {
            "source": self.source,
            "levels": [
                {"vertices": list(labels), "dims": [int(x) for x in dims]} for labels, dims in self.levels
            ],
            "multiplicities": [M.tolist() for M in self.multiplicities],
            "warnings": list(self.warnings),
        }


def bratteli_from_quotient(report: QuotientGraphReport, levels: int, *, initial=None) -> BratteliDiagram:
    """AF core of the quotient graph algebra: constant multiplicity ``A^T``.

    ``initial`` defaults to the block sizes of the spectrum.
    """
    adj = np.asarray(report.adjacency, dtype=object)
    labels = tuple(f"O{p.orbit_index}:pi{p.irrep_index}" for p in report.spectrum)
    dims = np.array(initial if initial is not None else report.sizes, dtype=object)
    M = adj.T.copy()
    lv = [(labels, dims)]
    mults = []
    for _ in range(levels):
        dims = M.dot(dims)
        lv.append((labels, dims))
        mults.append(M)
    warnings = () if report.flags.get("no_sources", True) else ("quotient graph has sources",)
    return BratteliDiagram(tuple(lv), tuple(mults), "quotient-graph", warnings)


def bratteli_dr_fibre(A: GraphAction, unit: int, levels: int) -> BratteliDiagram:
    """Irreducible constituents of ``rho^{(x) k}`` for a single-vertex fibre.

    ``M[pi'][pi] = multiplicity of pi' in pi (x) rho``; level 0 is the trivial
    representation.
    """
    f = _fibre(A, unit)
    if f.vertices.size != 1:
        raise PreconditionError(
            "dr-fiber Bratteli mode supports single-vertex fibres only; use the quotient-graph mode"
        )
    K, _ = A.groupoid.isotropy_group(unit)
    table = character_table(K)
    rho = permutation_character(table, f.eperm)
    names = tuple(f"pi{i}" for i in range(table.n_irreps))
    step = np.array([tensor_decompose(chi * rho, table) for chi in table.values], dtype=np.int64).T
    mult = np.zeros(table.n_irreps, dtype=object)
    mult[0] = 1  # trivial character leads the table
    support = [0]
    lv = [((names[0],), np.array([1], dtype=object))]
    mults = []
    for _ in range(levels):
        new_mult = step.astype(object).dot(mult)
        new_support = [i for i in range(table.n_irreps) if new_mult[i] != 0]
        mults.append(step[np.ix_(new_support, support)].astype(object))
        lv.append((tuple(names[i] for i in new_support), new_mult[new_support]))
        mult, support = new_mult, new_support
    return BratteliDiagram(tuple(lv), tuple(mults), "dr-fiber", tuple(_fibre_warnings(A, unit)))


def core_bratteli(
    A: GraphAction,
    source: str,
    levels: int,
    *,
    unit: int = 0,
    report: QuotientGraphReport | None = None,
) -> BratteliDiagram:
    if source == "quotient-graph":
        if report is None:
            from .quotient import quotient_graph

            report = quotient_graph(A, "fast")
        return bratteli_from_quotient(report, levels)
    if source == "dr-fiber":
        return bratteli_dr_fibre(A, unit, levels)
    raise PreconditionError("source must be 'quotient-graph' or 'dr-fiber'")
