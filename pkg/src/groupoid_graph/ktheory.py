"""Smith normal form over the integers and K-theory of graph algebras.

All arithmetic is on Python ints (object arrays), so entries never
overflow.  Pivoting is deterministic: the nonzero entry of smallest absolute
value in the remaining block, ties broken by (row, column).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyError, MalformedInputError, PreconditionError


def _as_int_matrix(M) -> np.ndarray:
    arr = np.asarray(M, dtype=object)
    if arr.ndim != 2:
        raise MalformedInputError("expected a 2-d integer matrix")
    out = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        if isinstance(v, (bool, np.bool_)) or int(v) != v:
            raise MalformedInputError(f"non-integer entry {v!r}")
        out[idx] = int(v)
    return out


def _identity(n: int) -> np.ndarray:
    I = np.zeros((n, n), dtype=object)
    for i in range(n):
        I[i, i] = 1
    return I


def smith_normal_form(M) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``(U, S, V)`` with ``U @ M @ V == S``, U and V unimodular.

    S is diagonal with nonnegative entries ``d1 | d2 | ...``.  The identity and
    ``|det U| = |det V| = 1`` are verified before returning.
    """
    A = _as_int_matrix(M)
    m, n = A.shape
    S = A.copy()
    U, V = _identity(m), _identity(n)
    t = 0
    while t < min(m, n):
        block = S[t:, t:]
        nz = [(abs(block[i, j]), i, j) for i in range(m - t) for j in range(n - t) if block[i, j] != 0]
        if not nz:
            break
        _, i, j = min(nz)
        _swap_rows(S, U, t, t + i)
        _swap_cols(S, V, t, t + j)
        while True:
            done = True
            # clear column t below the pivot
            for i in range(t + 1, m):
                if S[i, t] != 0:
                    q = S[i, t] // S[t, t]
                    _add_row(S, U, i, t, -q)
                    if S[i, t] != 0:
                        done = False
            # clear row t right of the pivot
            for j in range(t + 1, n):
                if S[t, j] != 0:
                    q = S[t, j] // S[t, t]
                    _add_col(S, V, j, t, -q)
                    if S[t, j] != 0:
                        done = False
            if not done:
                _repivot(S, U, V, t)
                continue
            # divisibility: pivot must divide the rest of the block
            bad = [
                (i, j)
                for i in range(t + 1, m)
                for j in range(t + 1, n)
                if S[i, j] % S[t, t] != 0
            ]
            if bad:
                i, _ = bad[0]
                _add_row(S, U, t, i, 1)
                continue
            break
        if S[t, t] < 0:
            S[t, :] = -S[t, :]
            U[t, :] = -U[t, :]
        t += 1
    _verify(A, U, S, V)
    return U, S, V


def _repivot(S, U, V, t):
    """Move the smallest nonzero entry of row t / column t into the pivot."""
    m, n = S.shape
    cands = [(abs(S[i, t]), 0, i, t) for i in range(t, m) if S[i, t] != 0]
    cands += [(abs(S[t, j]), 1, t, j) for j in range(t, n) if S[t, j] != 0]
    _, _, i, j = min(cands)
    _swap_rows(S, U, t, i)
    _swap_cols(S, V, t, j)


def _swap_rows(S, U, a, b):
    if a != b:
        S[[a, b], :] = S[[b, a], :]
        U[[a, b], :] = U[[b, a], :]


def _swap_cols(S, V, a, b):
    if a != b:
        S[:, [a, b]] = S[:, [b, a]]
        V[:, [a, b]] = V[:, [b, a]]


def _add_row(S, U, target, source, k):
    S[target, :] = S[target, :] + k * S[source, :]
    U[target, :] = U[target, :] + k * U[source, :]


def _add_col(S, V, target, source, k):
    S[:, target] = S[:, target] + k * S[:, source]
    V[:, target] = V[:, target] + k * V[:, source]


def int_det(M: np.ndarray) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    A = [list(map(int, row)) for row in np.asarray(M, dtype=object)]
    n = len(A)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def _verify(A, U, S, V) -> None:
    if not np.array_equal(U.dot(A).dot(V), S):
        raise ConsistencyError("U M V != S")
    m, n = S.shape
    for i in range(m):
        for j in range(n):
            if i != j and S[i, j] != 0:
                raise ConsistencyError("S is not diagonal")
    diag = [S[i, i] for i in range(min(m, n))]
    for a, b in zip(diag, diag[1:]):
        if (a == 0 and b != 0) or (a != 0 and b % a != 0):
            raise ConsistencyError("diagonal fails the divisibility chain")
    if abs(int_det(U)) != 1 or abs(int_det(V)) != 1:
        raise ConsistencyError("transform is not unimodular")


@dataclass(frozen=True)
class AbelianGroupInvariants:
    """``Z^rank + Z/t1 + ... + Z/tk`` with ``t1 | t2 | ...`` and every ``ti >= 2``."""

    rank: int
    torsion: tuple[int, ...] = ()

    def to_dict(self) -> dict:
        return {"rank": self.rank, "torsion": list(self.torsion)}

    def __str__(self) -> str:
        parts = ["Z"] * self.rank if self.rank <= 3 else [f"Z^{self.rank}"]
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"


def cokernel(M) -> AbelianGroupInvariants:
    _, S, _ = smith_normal_form(M)
    m, n = S.shape
    diag = [int(S[i, i]) for i in range(min(m, n))]
    nonzero = [d for d in diag if d != 0]
    return AbelianGroupInvariants(m - len(nonzero), tuple(d for d in nonzero if d > 1))


def kernel_rank(M) -> int:
    _, S, _ = smith_normal_form(M)
    m, n = S.shape
    return n - sum(1 for i in range(min(m, n)) if S[i, i] != 0)


def graph_k_theory(adjacency, *, no_sources: bool | None = None) -> tuple[AbelianGroupInvariants, AbelianGroupInvariants]:
    """``K0 = coker(I - A^T)``, ``K1 = ker(I - A^T)`` for ``A[x, y]`` = edges y -> x.

    Requires every vertex to receive an edge (no sources, row-finite is
    automatic for finite matrices).
    """
    A = _as_int_matrix(adjacency)
    if A.shape[0] != A.shape[1]:
        raise MalformedInputError("adjacency must be square")
    if (A < 0).any():
        raise MalformedInputError("adjacency entries must be nonnegative")
    computed = all(any(A[x, y] != 0 for y in range(A.shape[1])) for x in range(A.shape[0]))
    if no_sources is False or not computed:
        raise PreconditionError(
            "K-theory formula needs a graph without sources (every vertex must receive an edge)"
        )
    M = _identity(A.shape[0]) - A.T
    return cokernel(M), AbelianGroupInvariants(kernel_rank(M))
