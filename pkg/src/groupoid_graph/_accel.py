"""Hot enumeration kernels with a numba path and a pure-numpy fallback.

Every exhaustive check in the package (associativity over composable
triples, bimodule compatibility over (algebra, module, algebra) triples,
orbit labelling of permutation sets) funnels through the functions here.
Each kernel exists twice: an explicit loop version compiled with
``numba.njit`` and a vectorised numpy version.  Both return identical
results; the loop version also stops at the first witness.

Set ``GROUPOID_GRAPH_DISABLE_NUMBA=1`` to force the numpy path (also used
automatically when numba is not importable).
"""

from __future__ import annotations

import os

import numpy as np

try:  # pragma: no cover - exercised implicitly
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    HAVE_NUMBA = False

NUMBA_DISABLED = os.environ.get("GROUPOID_GRAPH_DISABLE_NUMBA", "").lower() in {
    "1",
    "true",
    "yes",
    "on",
}
USE_NUMBA = HAVE_NUMBA and not NUMBA_DISABLED

NO_WITNESS = (-1, -1, -1)


def _njit(func):
    if HAVE_NUMBA:
        return numba.njit(cache=False, nogil=True)(func)
    return func


# --------------------------------------------------------------------------
# associativity of a partial composition table (-1 = undefined)


def _assoc_loops(table):
    n = table.shape[0]
    for g in range(n):
        for h in range(n):
            gh = table[g, h]
            if gh < 0:
                continue
            for k in range(n):
                hk = table[h, k]
                if hk < 0:
                    continue
                left = table[gh, k]
                right = table[g, hk]
                if left != right:
                    return g, h, k
    return -1, -1, -1


_assoc_jit = _njit(_assoc_loops)


def _assoc_numpy(table):
    n = table.shape[0]
    for g in range(n):
        hs = np.flatnonzero(table[g] >= 0)
        if hs.size == 0:
            continue
        gh = table[g, hs]
        hk = table[hs, :]
        defined = hk >= 0
        left = table[gh, :]
        right = np.where(defined, table[g, np.where(defined, hk, 0)], -1)
        bad = defined & (left != right)
        if bad.any():
            i, k = np.unravel_index(np.argmax(bad), bad.shape)
            return int(g), int(hs[i]), int(k)
    return NO_WITNESS


def first_assoc_violation(table: np.ndarray, *, use_numba: bool | None = None):
    """First ``(g, h, k)`` with ``gh``, ``hk`` defined and ``(gh)k != g(hk)``.

    Returns ``(-1, -1, -1)`` when the table is associative.
    """
    table = np.ascontiguousarray(table, dtype=np.int64)
    if _pick(use_numba):
        return tuple(int(x) for x in _assoc_jit(table))
    return _assoc_numpy(table)


# --------------------------------------------------------------------------
# left module over a partial 0/1 algebra: (b1 b2).x == b1.(b2.x)


def _module_loops(act, mul, reverse):
    nb = act.shape[0]
    nx = act.shape[1]
    for b1 in range(nb):
        for b2 in range(nb):
            b12 = mul[b1, b2]
            for x in range(nx):
                lhs = act[b12, x] if b12 >= 0 else -1
                if reverse:
                    y = act[b1, x]
                    rhs = act[b2, y] if y >= 0 else -1
                else:
                    y = act[b2, x]
                    rhs = act[b1, y] if y >= 0 else -1
                if lhs != rhs:
                    return b1, b2, x
    return -1, -1, -1


_module_jit = _njit(_module_loops)


def _module_numpy(act, mul, reverse):
    nb, nx = act.shape
    for b1 in range(nb):
        b12 = mul[b1, :]
        lhs = np.where((b12 >= 0)[:, None], act[np.where(b12 >= 0, b12, 0), :], -1)
        if reverse:
            y = act[b1, :]
            rhs = np.where((y >= 0)[None, :], act[:, np.where(y >= 0, y, 0)], -1)
        else:
            y = act
            rhs = np.where(y >= 0, act[b1, np.where(y >= 0, y, 0)], -1)
        bad = lhs != rhs
        if bad.any():
            b2, x = np.unravel_index(np.argmax(bad), bad.shape)
            return int(b1), int(b2), int(x)
    return NO_WITNESS


def first_module_violation(
    act: np.ndarray, mul: np.ndarray, *, reverse: bool = False, use_numba: bool | None = None
):
    """Check ``act[mul[b1, b2], x] == act[b1, act[b2, x]]`` for every triple.

    With ``reverse=True`` the anti-homomorphism law ``act[mul[b1, b2], x] ==
    act[b2, act[b1, x]]`` is checked instead (right actions written as
    ``act[c, x] = x.c``).
    """
    act = np.ascontiguousarray(act, dtype=np.int64)
    mul = np.ascontiguousarray(mul, dtype=np.int64)
    if _pick(use_numba):
        return tuple(int(x) for x in _module_jit(act, mul, bool(reverse)))
    return _module_numpy(act, mul, bool(reverse))


# --------------------------------------------------------------------------
# commuting left/right actions: (b.x).c == b.(x.c)


def _bimodule_loops(left, right):
    nb = left.shape[0]
    nx = left.shape[1]
    nc = right.shape[1]
    for b in range(nb):
        for x in range(nx):
            bx = left[b, x]
            for c in range(nc):
                xc = right[x, c]
                lhs = right[bx, c] if bx >= 0 else -1
                rhs = left[b, xc] if xc >= 0 else -1
                if lhs != rhs:
                    return b, x, c
    return -1, -1, -1


_bimodule_jit = _njit(_bimodule_loops)


def _bimodule_numpy(left, right):
    nb, nx = left.shape
    for b in range(nb):
        bx = left[b, :]
        lhs = np.where((bx >= 0)[:, None], right[np.where(bx >= 0, bx, 0), :], -1)
        rhs = np.where(right >= 0, left[b, np.where(right >= 0, right, 0)], -1)
        bad = lhs != rhs
        if bad.any():
            x, c = np.unravel_index(np.argmax(bad), bad.shape)
            return int(b), int(x), int(c)
    return NO_WITNESS


def first_bimodule_violation(
    left: np.ndarray, right: np.ndarray, *, use_numba: bool | None = None
):
    """First ``(b, x, c)`` where ``(b.x).c`` and ``b.(x.c)`` differ."""
    left = np.ascontiguousarray(left, dtype=np.int64)
    right = np.ascontiguousarray(right, dtype=np.int64)
    if _pick(use_numba):
        return tuple(int(x) for x in _bimodule_jit(left, right))
    return _bimodule_numpy(left, right)


# --------------------------------------------------------------------------
# orbits of a set of permutations: label = smallest point in the orbit


def _orbit_loops(perms):
    npts = perms.shape[1]
    parent = np.arange(npts)
    for row in range(perms.shape[0]):
        for x in range(npts):
            a = x
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            b = perms[row, x]
            while parent[b] != b:
                parent[b] = parent[parent[b]]
                b = parent[b]
            if a < b:
                parent[b] = a
            elif b < a:
                parent[a] = b
    labels = np.empty(npts, dtype=np.int64)
    for x in range(npts):
        a = x
        while parent[a] != a:
            a = parent[a]
        labels[x] = a
    return labels


_orbit_jit = _njit(_orbit_loops)


def _orbit_numpy(perms):
    npts = perms.shape[1]
    labels = np.arange(npts)
    while True:
        new = labels.copy()
        for perm in perms:
            np.minimum.at(new, perm, new)
            new = np.minimum(new, new[perm])
        new = new[new]
        if np.array_equal(new, labels):
            return labels
        labels = new


def orbit_labels(perms: np.ndarray, *, use_numba: bool | None = None) -> np.ndarray:
    """Orbit label (smallest member) of every point under the given permutations."""
    perms = np.ascontiguousarray(np.atleast_2d(perms), dtype=np.int64)
    if perms.shape[1] == 0:
        return np.zeros(0, dtype=np.int64)
    if _pick(use_numba):
        return _orbit_jit(perms)
    return _orbit_numpy(perms)


def _pick(use_numba):
    if use_numba is None:
        return USE_NUMBA
    return bool(use_numba) and HAVE_NUMBA
