"""Brute-force finite-dimensional models used as ground truth.

Everything here is built from explicit bases with 0/1 structure constants:
groupoid convolution algebras (counting measure), the vertex crossed
product as the algebra of the action groupoid, and the crossed-product
correspondence as a bimodule on sections ``(g, e)``.  Block data comes from
minimal central projections; adjacency comes from ranks of corners
``p_x . H . p_y``.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _accel
from .errors import ConsistencyError
from .graph import GraphAction
from .groupoid import (
    UNDEF,
    FiniteGroupoid,
    ValidationReport,
    _Collector,
    action_groupoid,
    action_pairs,
    transitive_components,
)
from .reptheory import FiniteGroup, character_sort_key, conjugacy_classes

PROJECTION_TOL = 1e-8
RANK_TOL = 1e-8


# --------------------------------------------------------------------------
# algebras


@dataclass(frozen=True, eq=False)
class FDStarAlgebra:
    """Finite-dimensional *-algebra with basis products in {basis, 0}.

    ``mul[a, b]`` is the basis element ``ab`` or ``-1`` for zero; ``star[a]``
    is the basis element ``a*``; the unit is the sum of ``unit_basis``.
    """

    mul: np.ndarray
    star: np.ndarray
    unit_basis: np.ndarray
    labels: tuple = ()

    @property
    def dim(self) -> int:
        return int(self.mul.shape[0])

    def product(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        out = np.zeros(self.dim, dtype=complex)
        mask = self.mul >= 0
        np.add.at(out, self.mul[mask], np.outer(x, y)[mask])
        return out

    def adjoint(self, x: np.ndarray) -> np.ndarray:
        out = np.zeros(self.dim, dtype=complex)
        out[self.star] = np.conj(x)
        return out

    def unit(self) -> np.ndarray:
        out = np.zeros(self.dim, dtype=complex)
        out[self.unit_basis] = 1.0
        return out

    @functools.cached_property
    def left_traces(self) -> np.ndarray:
        """``tr(L_b)`` for left multiplication by each basis element."""
        return np.count_nonzero(self.mul == np.arange(self.dim)[None, :], axis=1)

    def left_matrix(self, x: np.ndarray) -> np.ndarray:
        m = np.zeros((self.dim, self.dim), dtype=complex)
        rows, cols = np.nonzero(self.mul >= 0)
        np.add.at(m, (self.mul[rows, cols], cols), x[rows])
        return m

    def right_matrix(self, x: np.ndarray) -> np.ndarray:
        m = np.zeros((self.dim, self.dim), dtype=complex)
        rows, cols = np.nonzero(self.mul >= 0)
        np.add.at(m, (self.mul[rows, cols], rows), x[cols])
        return m

    def to_dict(self) -> dict:
        rows, cols = np.nonzero(self.mul >= 0)
        return {
            "basis": list(self.labels),
            "products": [[int(a), int(b), int(self.mul[a, b])] for a, b in zip(rows, cols)],
            "star": self.star.tolist(),
            "unit": self.unit_basis.tolist(),
        }


def validate_algebra(alg: FDStarAlgebra) -> ValidationReport:
    out = _Collector()
    w = _accel.first_assoc_violation(alg.mul)
    if w[0] >= 0:
        out.add("associativity", w)
    if not np.array_equal(alg.star[alg.star], np.arange(alg.dim)):
        out.add("star_involution", ())
    # (ab)* = b* a*
    ab = alg.mul
    lhs = np.where(ab >= 0, alg.star[np.where(ab >= 0, ab, 0)], UNDEF)
    rhs = alg.mul[alg.star[None, :], alg.star[:, None]]
    for a, b in zip(*np.nonzero(lhs != rhs)):
        out.add("star_antimultiplicative", (int(a), int(b)))
    u = alg.unit()
    for b in range(alg.dim):
        e = np.zeros(alg.dim, dtype=complex)
        e[b] = 1
        if not (np.allclose(alg.product(u, e), e) and np.allclose(alg.product(e, u), e)):
            out.add("unit", (b,))
    return out.report("fd_star_algebra")


def groupoid_algebra(G: FiniteGroupoid) -> FDStarAlgebra:
    """Convolution algebra: ``d_g d_h = d_gh`` when composable, ``d_g* = d_{g^-1}``."""
    return FDStarAlgebra(G.compose, G.inv, G.unit_arrow, G.arrow_labels)


def vertex_crossed_product(A: GraphAction) -> FDStarAlgebra:
    """``C_0(E^0) x| G`` realised as the algebra of the action groupoid on E^0."""
    return groupoid_algebra(action_groupoid(A.vertex_action))


# --------------------------------------------------------------------------
# exact centre


def rational_nullspace(rows: list[dict[int, Fraction]], ncols: int) -> list[dict[int, Fraction]]:
    """Basis of ``{z : row . z = 0 for all rows}`` over the rationals (sparse RREF)."""
    pivots: dict[int, dict[int, Fraction]] = {}
    occurs: dict[int, set[int]] = {}
    for raw in rows:
        row = {c: Fraction(v) for c, v in raw.items() if v != 0}
        for c in [c for c in row if c in pivots]:
            coef = row.get(c)
            if not coef:
                continue
            for cc, vv in pivots[c].items():
                nv = row.get(cc, 0) - coef * vv
                if nv:
                    row[cc] = nv
                else:
                    row.pop(cc, None)
        if not row:
            continue
        p = min(row)
        lead = row[p]
        row = {c: v / lead for c, v in row.items()}
        # eliminate p from existing pivot rows
        for q in list(occurs.get(p, ())):
            prow = pivots[q]
            coef = prow.get(p)
            if not coef:
                continue
            for cc, vv in row.items():
                nv = prow.get(cc, 0) - coef * vv
                if nv:
                    prow[cc] = nv
                    occurs.setdefault(cc, set()).add(q)
                else:
                    prow.pop(cc, None)
                    occurs.get(cc, set()).discard(q)
        pivots[p] = row
        for cc in row:
            occurs.setdefault(cc, set()).add(p)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        vec = {f: Fraction(1)}
        for p, prow in pivots.items():
            if f in prow:
                vec[p] = -prow[f]
        basis.append(vec)
    return basis


def center_basis(alg: FDStarAlgebra) -> list[dict[int, Fraction]]:
    """Exact rational basis of the centre from the commutation equations."""
    n = alg.dim
    eqs: dict[tuple[int, int], dict[int, Fraction]] = {}
    mul = alg.mul
    for b in range(n):
        for c in range(n):
            a = int(mul[c, b])  # z_c d_c d_b
            if a >= 0:
                eq = eqs.setdefault((b, a), {})
                eq[c] = eq.get(c, 0) + 1
            a = int(mul[b, c])  # d_b z_c d_c
            if a >= 0:
                eq = eqs.setdefault((b, a), {})
                eq[c] = eq.get(c, 0) - 1
    unique = {}
    for eq in eqs.values():
        eq = {c: v for c, v in eq.items() if v}
        if eq:
            unique[tuple(sorted(eq.items()))] = eq
    return rational_nullspace(list(unique.values()), n)


# --------------------------------------------------------------------------
# minimal central projections


@dataclass(frozen=True, eq=False)
class BlockDecomposition:
    """Minimal central projections (rows of ``projections``) and block sizes."""

    projections: np.ndarray
    sizes: tuple[int, ...]
    certification_error: float

    def __len__(self) -> int:
        return len(self.sizes)


def minimal_central_projections(alg: FDStarAlgebra, *, seed: int = 0xC0FFEE) -> BlockDecomposition:
    """Split the centre into its minimal idempotents and certify them.

    The centre is solved exactly; its idempotents are eigenvectors of the
    regular representation of a random central element (complex floats,
    certified to ``PROJECTION_TOL``).
    """
    basis = center_basis(alg)
    Z = np.zeros((len(basis), alg.dim), dtype=complex)
    for i, vec in enumerate(basis):
        for c, v in vec.items():
            Z[i, c] = float(v)
    m = Z.shape[0]
    rng = np.random.default_rng(seed)
    error = None
    for _ in range(10):
        if m == 1:
            projs = [alg.unit()]
        else:
            w = rng.normal(size=m) + 1j * rng.normal(size=m)
            c = w @ Z
            mult = np.array([alg.product(c, Z[j]) for j in range(m)])  # rows: c z_j
            coords, *_ = np.linalg.lstsq(Z.T, mult.T, rcond=None)  # column j = coords of c z_j
            eigvals, eigvecs = np.linalg.eig(coords)
            gaps = np.abs(eigvals[:, None] - eigvals[None, :]) + np.eye(m) * 1e9
            if gaps.min() < 1e-7:
                error = "degenerate spectrum of central element"
                continue
            projs = []
            for k in range(m):
                e = eigvecs[:, k] @ Z
                sq = alg.product(e, e)
                lam = np.vdot(e, sq) / np.vdot(e, e)
                projs.append(e / lam)
        P = np.array([_clean(p) for p in projs])
        err = _certify_projections(alg, P)
        if err < PROJECTION_TOL:
            break
        error = f"projection certification error {err:.3g}"
    else:
        raise ConsistencyError(f"minimal central projections failed: {error}")
    sizes = []
    for p in P:
        n2 = float(np.real(p @ alg.left_traces))
        n = int(round(np.sqrt(max(n2, 0.0))))
        if abs(n * n - n2) > 1e-6 or n == 0:
            raise ConsistencyError(f"block dimension {n2} is not a positive square")
        sizes.append(n)

    def key(i):
        p = P[i]
        support = np.flatnonzero(np.abs(p) > 1e-9)
        return (sizes[i], int(support[0]), tuple(-np.round(p.real, 8) + 0.0), tuple(-np.round(p.imag, 8) + 0.0))

    order = sorted(range(m), key=key)
    P = P[order]
    P.setflags(write=False)
    return BlockDecomposition(P, tuple(sizes[i] for i in order), err)


def _clean(p: np.ndarray) -> np.ndarray:
    re = np.where(np.abs(p.real) < 1e-12, 0.0, p.real)
    im = np.where(np.abs(p.imag) < 1e-12, 0.0, p.imag)
    return re + 1j * im


def _certify_projections(alg: FDStarAlgebra, P: np.ndarray) -> float:
    err = 0.0
    unit = alg.unit()
    err = max(err, float(np.max(np.abs(P.sum(axis=0) - unit))))
    for i, p in enumerate(P):
        err = max(err, float(np.max(np.abs(alg.product(p, p) - p))))
        err = max(err, float(np.max(np.abs(alg.adjoint(p) - p))))
        for j in range(i + 1, len(P)):
            err = max(err, float(np.max(np.abs(alg.product(p, P[j])))))
    # centrality against every basis element
    Lp = [alg.left_matrix(p) for p in P]
    Rp = [alg.right_matrix(p) for p in P]
    for L, R in zip(Lp, Rp):
        err = max(err, float(np.max(np.abs(L - R))))
    return err


# --------------------------------------------------------------------------
# the crossed-product correspondence


@dataclass(frozen=True, eq=False)
class FDCorrespondence:
    """Sections ``(g, e)`` with ``p(r(e)) = r(g)`` as a bimodule.

    ``left[b, xi]`` / ``right[xi, b]`` give the basis result of acting with
    algebra basis element ``b`` (or -1 for zero); ``inner[xi, eta]`` is the
    algebra basis element ``<xi, eta>`` (or -1).
    """

    algebra: FDStarAlgebra
    basis: np.ndarray
    left: np.ndarray
    right: np.ndarray
    inner: np.ndarray

    @property
    def dim(self) -> int:
        return int(self.basis.shape[0])

    def left_operator(self, a: np.ndarray) -> np.ndarray:
        """Matrix of ``xi -> a . xi``."""
        D = self.dim
        m = np.zeros((D, D), dtype=complex)
        for b in np.flatnonzero(np.abs(a) > 0):
            cols = np.flatnonzero(self.left[b] >= 0)
            m[self.left[b, cols], cols] += a[b]
        return m

    def right_operator(self, a: np.ndarray) -> np.ndarray:
        """Matrix of ``xi -> xi . a``."""
        D = self.dim
        m = np.zeros((D, D), dtype=complex)
        for b in np.flatnonzero(np.abs(a) > 0):
            rows = np.flatnonzero(self.right[:, b] >= 0)
            m[self.right[rows, b], rows] += a[b]
        return m


def correspondence_crossed_product(A: GraphAction) -> FDCorrespondence:
    """Finite-sum realisation of the crossed-product correspondence.

    With counting measure and delta bases:

    * ``(l, x) . (k, e) = (lk, l.e)`` when ``r(e) = x``
    * ``(k, e) . (m, z) = (km, e)`` when ``s(e) = (km).z``
    * ``<(k, e), (m, f)> = (k^-1 m, m^-1 . s(e))`` when ``e = f``

    where ``(l, x)`` is the action-groupoid arrow ``x -> l.x``.
    """
    G, E = A.groupoid, A.graph
    alg = vertex_crossed_product(A)
    pairs = action_pairs(A.vertex_action)
    NA = pairs.shape[0]
    aidx = np.full(A.vertex_act.shape, UNDEF, dtype=np.int64)
    aidx[pairs[:, 0], pairs[:, 1]] = np.arange(NA)

    ks, es = np.nonzero(A.edge_anchor[None, :] == G.rng[:, None])
    basis = np.stack([ks, es], axis=1).astype(np.int64)
    D = basis.shape[0]
    bidx = np.full((G.n_arrows, E.n_edges), UNDEF, dtype=np.int64)
    bidx[ks, es] = np.arange(D)

    left = np.full((NA, D), UNDEF, dtype=np.int64)
    right = np.full((D, NA), UNDEF, dtype=np.int64)
    inner = np.full((D, D), UNDEF, dtype=np.int64)
    ls, xs = pairs[:, 0], pairs[:, 1]
    for j, (k, e) in enumerate(basis):
        # left: (l, x) with x == r(e)
        sel = np.flatnonzero(xs == E.e_rng[e])
        for b in sel:
            l = ls[b]
            left[b, j] = bidx[G.compose[l, k], A.edge_act[l, e]]
        # right: (m, z) with s(k) == r(m) and (km).z == s(e)
        sel = np.flatnonzero(G.rng[ls] == G.src[k])
        for c in sel:
            m, z = ls[c], xs[c]
            km = G.compose[k, m]
            if A.vertex_act[km, z] == E.e_src[e]:
                right[j, c] = bidx[km, e]
    for j, (k, e) in enumerate(basis):
        same = np.flatnonzero(basis[:, 1] == e)
        kinv = G.inv[k]
        for t in same:
            m = basis[t, 0]
            g = G.compose[kinv, m]
            y = A.vertex_act[G.inv[m], E.e_src[e]]
            inner[j, t] = aidx[g, y]
    for arr in (basis, left, right, inner):
        arr.setflags(write=False)
    return FDCorrespondence(alg, basis, left, right, inner)


def validate_correspondence(M: FDCorrespondence) -> ValidationReport:
    """Module laws, commuting actions and the inner-product identities."""
    out = _Collector()
    alg = M.algebra
    w = _accel.first_module_violation(M.left, alg.mul)
    if w[0] >= 0:
        out.add("left_module", w)
    w = _accel.first_module_violation(M.right.T, alg.mul, reverse=True)
    if w[0] >= 0:
        out.add("right_module", w)
    w = _accel.first_bimodule_violation(M.left, M.right)
    if w[0] >= 0:
        out.add("actions_commute", w)
    ip = M.inner
    # <xi, eta . c> == <xi, eta> c
    for c in range(alg.dim):
        eta_c = M.right[:, c]
        lhs = np.where(eta_c[None, :] >= 0, ip[:, np.where(eta_c >= 0, eta_c, 0)], UNDEF)
        rhs = np.where(ip >= 0, alg.mul[np.where(ip >= 0, ip, 0), c], UNDEF)
        for xi, eta in zip(*np.nonzero(lhs != rhs)):
            out.add("inner_right_linear", (int(xi), int(eta), c))
    # <xi, eta>* == <eta, xi>
    starred = np.where(ip >= 0, alg.star[np.where(ip >= 0, ip, 0)], UNDEF)
    for xi, eta in zip(*np.nonzero(starred != ip.T)):
        out.add("inner_hermitian", (int(xi), int(eta)))
    # <b xi, eta> == <xi, b* eta>
    for b in range(alg.dim):
        bx = M.left[b]
        lhs = np.where(bx[:, None] >= 0, ip[np.where(bx >= 0, bx, 0), :], UNDEF)
        by = M.left[alg.star[b]]
        rhs = np.where(by[None, :] >= 0, ip[:, np.where(by >= 0, by, 0)], UNDEF)
        for xi, eta in zip(*np.nonzero(lhs != rhs)):
            out.add("left_adjointable", (b, int(xi), int(eta)))
    return out.report("fd_correspondence")


def corner_dimension(
    M: FDCorrespondence, p: np.ndarray, q: np.ndarray, *, method: str = "rank"
) -> int:
    """Dimension of ``p . M . q`` for central projections p, q.

    ``method="rank"`` takes the numerical rank of ``xi -> p xi q`` and checks
    it against the trace (the map is idempotent); ``method="trace"`` returns
    the certified trace alone.
    """
    T = M.left_operator(p) @ M.right_operator(q)
    tr = complex(np.trace(T))
    tr_int = int(round(tr.real))
    if abs(tr - tr_int) > 1e-6:
        raise ConsistencyError(f"corner trace {tr} is not an integer")
    if method == "trace":
        return tr_int
    if T.shape[0] == 0:
        return 0
    sv = np.linalg.svd(T, compute_uv=False)
    rank = int(np.count_nonzero(sv > RANK_TOL * max(1.0, sv[0])))
    if rank != tr_int:
        raise ConsistencyError(f"corner rank {rank} disagrees with trace {tr_int}")
    return rank


# --------------------------------------------------------------------------
# oracle adjacency


@dataclass(frozen=True, eq=False)
class OracleBlock:
    """A block of the vertex crossed product labelled by orbit and character."""

    basepoint: int
    orbit: tuple[int, ...]
    size: int
    degree: int
    class_reps: tuple[int, ...]
    character: np.ndarray
    projection: np.ndarray = field(repr=False)


@dataclass(frozen=True, eq=False)
class OracleAdjacency:
    blocks: tuple[OracleBlock, ...]
    adjacency: np.ndarray
    algebra_dim: int
    correspondence_dim: int
    warnings: tuple[str, ...] = ()

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(b.size for b in self.blocks)


def label_blocks(A: GraphAction, alg: FDStarAlgebra, dec: BlockDecomposition) -> list[OracleBlock]:
    """Read off (orbit, character) labels from the projections' coefficients.

    On the isotropy of the basepoint ``v`` a minimal central projection has
    coefficients ``(d/|H|) conj(chi(h))``; inverting this recovers chi.
    """
    G = A.groupoid
    AG = action_groupoid(A.vertex_action)
    pairs = action_pairs(A.vertex_action)
    out = []
    comps = transitive_components(AG)
    for p, n in zip(dec.projections, dec.sizes):
        hits = []
        for comp in comps:
            if np.any(np.abs(p[comp.isotropy_arrows]) > 1e-9):
                hits.append(comp)
        if len(hits) != 1:
            raise ConsistencyError("central projection is not supported on one orbit")
        comp = hits[0]
        v = comp.basepoint
        arrows = comp.isotropy_arrows  # action arrows (h, v), sorted by h
        gs = pairs[arrows, 0]
        order = np.argsort(gs)
        arrows, gs = arrows[order], gs[order]
        pos = {int(a): i for i, a in enumerate(gs)}
        table = np.array([[pos[int(G.compose[a, b])] for b in gs] for a in gs])
        H = FiniteGroup(table)
        classes = conjugacy_classes(H)
        if n % len(comp.units):
            raise ConsistencyError("block size is not a multiple of the orbit size")
        d = n // len(comp.units)
        chi = np.array(
            [np.conj(p[arrows[c.representative]]) * H.order / d for c in classes], dtype=complex
        )
        out.append(
            OracleBlock(
                basepoint=v,
                orbit=comp.units,
                size=n,
                degree=d,
                class_reps=tuple(int(gs[c.representative]) for c in classes),
                character=chi,
                projection=p,
            )
        )
    out.sort(key=lambda b: (b.basepoint, character_sort_key(b.character)))
    return out


def oracle_adjacency(A: GraphAction, *, method: str = "rank") -> OracleAdjacency:
    """Adjacency ``a_xy = dim(p_x H p_y) / (n_x n_y)`` computed by brute force."""
    M = correspondence_crossed_product(A)
    alg = M.algebra
    dec = minimal_central_projections(alg)
    blocks = label_blocks(A, alg, dec)
    k = len(blocks)
    Ls = [M.left_operator(b.projection) for b in blocks]
    Rs = [M.right_operator(b.projection) for b in blocks]
    adj = np.zeros((k, k), dtype=np.int64)
    for x in range(k):
        for y in range(k):
            T = Ls[x] @ Rs[y]
            dim = _rank_of_idempotent(T, method)
            nn = blocks[x].size * blocks[y].size
            if dim % nn:
                raise ConsistencyError(
                    f"corner dimension {dim} not divisible by {blocks[x].size}*{blocks[y].size}"
                )
            adj[x, y] = dim // nn
    warnings = []
    if A.graph.has_sources:
        warnings.append(
            "graph has sources: the Katsura ideal is not all of C0(E^0); Morita identification not certified"
        )
    adj.setflags(write=False)
    return OracleAdjacency(tuple(blocks), adj, alg.dim, M.dim, tuple(warnings))


def _rank_of_idempotent(T: np.ndarray, method: str) -> int:
    tr = complex(np.trace(T))
    tr_int = int(round(tr.real))
    if abs(tr - tr_int) > 1e-6:
        raise ConsistencyError(f"corner trace {tr} is not an integer")
    if method == "trace" or T.shape[0] == 0:
        return tr_int
    sv = np.linalg.svd(T, compute_uv=False)
    rank = int(np.count_nonzero(sv > RANK_TOL * max(1.0, sv[0])))
    if rank != tr_int:
        raise ConsistencyError(f"corner rank {rank} disagrees with trace {tr_int}")
    return rank


# --------------------------------------------------------------------------
# compact-operator dimension check


@dataclass(frozen=True)
class KappaReport:
    compact_operators_dim: int
    bundle_crossed_product_dim: int
    method: str
    amenability: str = "automatic for finite groupoids (recorded, not checked)"

    @property
    def ok(self) -> bool:
        return self.compact_operators_dim == self.bundle_crossed_product_dim

    def to_dict(self) -> dict:
        return {
            "compact_operators_dim": self.compact_operators_dim,
            "bundle_crossed_product_dim": self.bundle_crossed_product_dim,
            "method": self.method,
            "ok": self.ok,
            "amenability": self.amenability,
        }


def compact_operator_span_dim(M: FDCorrespondence) -> tuple[int, str]:
    """``dim span{theta_{xi,eta}}`` with ``theta_{xi,eta}(zeta) = xi <eta, zeta>``.

    Each theta on basis vectors is a partial map of basis to basis.  Distinct
    maps with pairwise disjoint matrix supports are independent; otherwise
    the rank is taken numerically.
    """
    D = M.dim
    if D == 0:
        return 0, "empty"
    maps = []
    for eta in range(D):
        a = M.inner[eta]  # <eta, zeta> for every zeta
        ok = a >= 0
        cols = np.where(ok[None, :], M.right[:, np.where(ok, a, 0)], UNDEF)  # row xi
        maps.append(cols)
    allmaps = np.concatenate(maps, axis=0)
    allmaps = allmaps[np.any(allmaps >= 0, axis=1)]
    uniq = np.unique(allmaps, axis=0)
    rows, zetas = np.nonzero(uniq >= 0)
    cells = uniq[rows, zetas] * D + zetas
    if np.unique(cells).size == cells.size:
        return int(uniq.shape[0]), "disjoint-supports"
    mat = np.zeros((uniq.shape[0], D * D))
    mat[rows, cells] = 1.0
    return int(np.linalg.matrix_rank(mat)), "numeric-rank"


def compact_bundle_crossed_product_dim(A: GraphAction) -> int:
    """Sections ``(g, theta_{e,f})`` with ``s(e) = s(f)`` over ``r(g)``."""
    G, E = A.groupoid, A.graph
    per_unit = np.zeros(G.n_units, dtype=np.int64)
    for u in range(G.n_units):
        es = np.flatnonzero(A.edge_anchor == u)
        srcs = E.e_src[es]
        _, counts = np.unique(srcs, return_counts=True)
        per_unit[u] = int(np.sum(counts**2))
    return int(per_unit[G.rng].sum())


def kappa_dimension_check(A: GraphAction) -> KappaReport:
    M = correspondence_crossed_product(A)
    left, how = compact_operator_span_dim(M)
    right = compact_bundle_crossed_product_dim(A)
    return KappaReport(left, right, how)
