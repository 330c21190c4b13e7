"""Finite groups and their complex character theory.

Character tables are computed with Burnside's class-sum method: the class
multiplication coefficients define commuting matrices whose common
eigenvectors are the central characters.  Values are kept as certified
complex floats; every multiplicity leaving this module is an exact ``int``
that passed an integrality check.
"""

from __future__ import annotations

import functools
import itertools
import threading
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _accel
from .errors import ConsistencyError, MalformedInputError, PreconditionError

DEFAULT_ORDER_BOUND = 512
INTEGRALITY_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A finite group given by its multiplication table.

    ``mul[a, b]`` is the index of the product ``ab``.  Labels are only used for
    display and serialisation.
    """

    mul: np.ndarray
    labels: tuple = ()

    def __post_init__(self):
        mul = np.asarray(self.mul, dtype=np.int64)
        if mul.ndim != 2 or mul.shape[0] != mul.shape[1] or mul.shape[0] == 0:
            raise MalformedInputError("group table must be a non-empty square array")
        n = mul.shape[0]
        if mul.min() < 0 or mul.max() >= n:
            raise MalformedInputError("group table entries out of range")
        mul.setflags(write=False)
        object.__setattr__(self, "mul", mul)
        if not self.labels:
            object.__setattr__(self, "labels", tuple(str(i) for i in range(n)))
        elif len(self.labels) != n:
            raise MalformedInputError("one label per group element required")

    @property
    def order(self) -> int:
        return self.mul.shape[0]

    @functools.cached_property
    def identity(self) -> int:
        ar = np.arange(self.order)
        for e in range(self.order):
            if np.array_equal(self.mul[e], ar) and np.array_equal(self.mul[:, e], ar):
                return e
        raise MalformedInputError("group table has no identity element")

    @functools.cached_property
    def inverse(self) -> np.ndarray:
        rows, cols = np.nonzero(self.mul == self.identity)
        inv = np.full(self.order, -1, dtype=np.int64)
        inv[rows] = cols
        if (inv < 0).any():
            raise MalformedInputError("group table has an element without inverse")
        inv.setflags(write=False)
        return inv

    def validate(self) -> list[str]:
        """Return the list of violated group axioms (empty when valid)."""
        problems = []
        try:
            self.identity
            self.inverse
        except MalformedInputError as exc:
            problems.append(str(exc))
            return problems
        ar = np.arange(self.order)
        for row in self.mul:
            if not np.array_equal(np.sort(row), ar):
                problems.append("a row of the table is not a permutation")
                break
        witness = _accel.first_assoc_violation(self.mul)
        if witness[0] >= 0:
            problems.append(f"associativity fails at {witness}")
        return problems

    def table_key(self) -> bytes:
        return self.mul.tobytes() + str(self.order).encode()

    def subgroup(self, elements: Sequence[int]) -> tuple["FiniteGroup", np.ndarray]:
        """Subgroup on ``elements`` (sorted) plus the embedding into ``self``."""
        elems = np.array(sorted(set(int(e) for e in elements)), dtype=np.int64)
        pos = {int(e): i for i, e in enumerate(elems)}
        try:
            sub = np.array([[pos[int(self.mul[a, b])] for b in elems] for a in elems])
        except KeyError:
            raise PreconditionError("element set is not closed under multiplication")
        group = FiniteGroup(sub, tuple(self.labels[e] for e in elems))
        return group, elems

    def to_dict(self) -> dict:
        return {"elements": list(self.labels), "table": self.mul.tolist()}


def group_from_dict(desc: dict) -> FiniteGroup:
    """Parse ``{"elements": [...], "table": [[...]]}``.

    Table entries may be element labels or integer positions.
    """
    try:
        elements = list(desc["elements"])
        table = desc["table"]
    except (KeyError, TypeError) as exc:
        raise MalformedInputError(f"group descriptor missing field: {exc}") from None
    index = {e: i for i, e in enumerate(elements)}
    if len(index) != len(elements):
        raise MalformedInputError("duplicate group element ids")
    rows = []
    for row in table:
        if len(row) != len(elements):
            raise MalformedInputError("group table row has wrong length")
        cur = []
        for entry in row:
            if entry in index:
                cur.append(index[entry])
            elif isinstance(entry, int) and 0 <= entry < len(elements):
                cur.append(entry)
            else:
                raise MalformedInputError(f"dangling group element {entry!r}")
        rows.append(cur)
    if len(rows) != len(elements):
        raise MalformedInputError("group table has wrong number of rows")
    return FiniteGroup(np.array(rows, dtype=np.int64), tuple(str(e) for e in elements))


# --------------------------------------------------------------------------
# standard groups


def trivial_group() -> FiniteGroup:
    return FiniteGroup(np.zeros((1, 1), dtype=np.int64), ("e",))


def cyclic_group(n: int) -> FiniteGroup:
    ar = np.arange(n)
    return FiniteGroup((ar[:, None] + ar[None, :]) % n, tuple(str(i) for i in range(n)))


def permutation_group(perms: Sequence[Sequence[int]]) -> FiniteGroup:
    """Group generated by the given permutations of ``range(d)`` (closure)."""
    perms = [tuple(int(x) for x in p) for p in perms]
    if not perms:
        raise PreconditionError("need at least one generator")
    d = len(perms[0])
    ident = tuple(range(d))
    elems = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for a in frontier:
            for p in perms:
                c = tuple(p[a[i]] for i in range(d))
                if c not in elems:
                    elems.add(c)
                    nxt.append(c)
        frontier = nxt
    ordered = sorted(elems)
    pos = {p: i for i, p in enumerate(ordered)}
    # (ab)(i) = a(b(i))
    table = [[pos[tuple(a[b[i]] for i in range(d))] for b in ordered] for a in ordered]
    labels = tuple("".join(str(x + 1) for x in p) for p in ordered)
    return FiniteGroup(np.array(table, dtype=np.int64), labels)


def symmetric_group(d: int) -> FiniteGroup:
    """S_d on one-line notation, elements in lexicographic order."""
    perms = list(itertools.permutations(range(d)))
    pos = {p: i for i, p in enumerate(perms)}
    table = [[pos[tuple(a[b[i]] for i in range(d))] for b in perms] for a in perms]
    labels = tuple("".join(str(x + 1) for x in p) for p in perms)
    return FiniteGroup(np.array(table, dtype=np.int64), labels)


def direct_product(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    m = h.order
    idx = np.arange(g.order * m)
    a, b = np.divmod(idx, m)
    table = g.mul[a[:, None], a[None, :]] * m + h.mul[b[:, None], b[None, :]]
    labels = tuple(f"({x},{y})" for x in g.labels for y in h.labels)
    return FiniteGroup(table, labels)


def klein_four_group() -> FiniteGroup:
    return direct_product(cyclic_group(2), cyclic_group(2))


# --------------------------------------------------------------------------
# conjugacy classes


@dataclass(frozen=True)
class ConjugacyClass:
    representative: int
    elements: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.elements)


def conjugacy_classes(group: FiniteGroup) -> list[ConjugacyClass]:
    """Conjugacy classes, identity class first, then by representative.

    The representative of a class is its smallest element.
    """
    inv = group.inverse
    n = group.order
    # permutation x -> a x a^-1 for every a
    perms = group.mul[group.mul[np.arange(n)[:, None], np.arange(n)[None, :]], inv[:, None]]
    labels = _accel.orbit_labels(perms)
    out = []
    for rep in np.unique(labels):
        members = tuple(int(x) for x in np.flatnonzero(labels == rep))
        out.append(ConjugacyClass(int(rep), members))
    out.sort(key=lambda c: (c.representative != group.identity, c.representative))
    return out


def class_index(group: FiniteGroup, classes: Sequence[ConjugacyClass]) -> np.ndarray:
    idx = np.empty(group.order, dtype=np.int64)
    for i, c in enumerate(classes):
        idx[list(c.elements)] = i
    return idx


# --------------------------------------------------------------------------
# character tables


def character_sort_key(values: np.ndarray) -> tuple:
    """Ordering of irreducible characters: degree, then values descending.

    Values are compared by (real, imaginary) parts, larger first, so the
    trivial character leads among the linear ones.
    """
    vals = np.asarray(values, dtype=complex)
    degree = int(round(vals[0].real))
    parts = []
    for v in vals:
        parts.append(-round(float(v.real), 6) + 0.0)
        parts.append(-round(float(v.imag), 6) + 0.0)
    return (degree, tuple(parts))


@dataclass(frozen=True, eq=False)
class CharacterTable:
    """Irreducible characters of ``group`` evaluated on its conjugacy classes.

    ``values[i, c]`` is the value of the i-th irreducible character on class
    ``c``; the class containing the identity is always column 0.
    """

    group: FiniteGroup
    classes: tuple[ConjugacyClass, ...]
    values: np.ndarray
    certification_error: float = 0.0
    class_of: np.ndarray = field(default=None, repr=False)

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(int(round(v.real)) for v in self.values[:, 0])

    @property
    def class_sizes(self) -> np.ndarray:
        return np.array([c.size for c in self.classes], dtype=np.int64)

    @property
    def n_irreps(self) -> int:
        return self.values.shape[0]

    def inner(self, alpha: np.ndarray, beta: np.ndarray) -> complex:
        """``(1/|K|) sum_g conj(alpha(g)) beta(g)`` on class functions."""
        sizes = self.class_sizes
        return complex(np.sum(sizes * np.conj(alpha) * beta) / self.group.order)

    def to_dict(self) -> dict:
        return {
            "classes": [
                {"representative": self.group.labels[c.representative], "size": c.size}
                for c in self.classes
            ],
            "degrees": list(self.degrees),
            "rows": [[_complex_json(v) for v in row] for row in self.values],
        }


def _complex_json(v: complex):
    re = round(float(v.real), 10) + 0.0
    im = round(float(v.imag), 10) + 0.0
    if im == 0.0:
        return int(re) if re == int(re) else re
    return [re, im]


def _snap(values: np.ndarray) -> np.ndarray:
    re = values.real.copy()
    im = values.imag.copy()
    near = np.abs(re - np.round(re)) < 1e-9
    re[near] = np.round(re[near])
    im[np.abs(im) < 1e-9] = 0.0
    near = np.abs(im - np.round(im)) < 1e-9
    im[near] = np.round(im[near])
    return re + 1j * im


def class_multiplication_coefficients(group: FiniteGroup, classes) -> np.ndarray:
    """``a[i, j, k] = #{(x, y) in C_i x C_j : xy = g_k}`` for representatives g_k."""
    r = len(classes)
    cidx = class_index(group, classes)
    inv = group.inverse
    reps = np.array([c.representative for c in classes])
    a = np.zeros((r, r, r), dtype=np.int64)
    for i, c in enumerate(classes):
        xs = np.array(c.elements)
        # y = x^-1 g_k
        ys = group.mul[inv[xs][:, None], reps[None, :]]
        js = cidx[ys]
        for k in range(r):
            np.add.at(a[i, :, k], js[:, k], 1)
    return a


def _burnside_table(group: FiniteGroup, classes) -> tuple[np.ndarray, float]:
    r = len(classes)
    n = group.order
    sizes = np.array([c.size for c in classes], dtype=float)
    if r == 1:
        return np.ones((1, 1), dtype=complex), 0.0
    coeffs = class_multiplication_coefficients(group, classes)
    mats = coeffs.astype(float)  # mats[i] acts on vectors indexed by classes
    rng = np.random.default_rng(0x5EED)
    last_error = None
    for _ in range(12):
        weights = rng.normal(size=r) + 1j * rng.normal(size=r)
        combo = np.tensordot(weights, mats, axes=1)
        eigvals, eigvecs = np.linalg.eig(combo)
        gaps = np.abs(eigvals[:, None] - eigvals[None, :]) + np.eye(r) * 1e9
        if gaps.min() < 1e-7:
            last_error = "degenerate eigenvalues"
            continue
        omegas = eigvecs / eigvecs[0:1, :]
        rows = []
        for col in range(r):
            omega = omegas[:, col]
            d2 = n / np.sum(np.abs(omega) ** 2 / sizes)
            d = np.sqrt(d2.real)
            rows.append(d * omega / sizes)
        values = np.array(rows)
        values = _snap(values)
        err = _orthonormality_error(values, sizes, n)
        if err < INTEGRALITY_TOL:
            return values, err
        last_error = f"orthonormality error {err:.3g}"
    raise ConsistencyError(f"character table certification failed: {last_error}")


def _orthonormality_error(values, sizes, order) -> float:
    gram = (values * sizes) @ np.conj(values).T / order
    err = float(np.max(np.abs(gram - np.eye(values.shape[0]))))
    degrees = values[:, 0]
    err = max(err, float(np.max(np.abs(degrees - np.round(degrees.real)))))
    err = max(err, abs(float(np.sum(np.abs(degrees) ** 2)) - order))
    return err


_TABLE_CACHE: dict[bytes, CharacterTable] = {}
_TABLE_LOCK = threading.Lock()


def character_table(group: FiniteGroup, *, order_bound: int = DEFAULT_ORDER_BOUND) -> CharacterTable:
    """Certified character table, rows sorted by :func:`character_sort_key`.

    Tables are memoised per multiplication table; the cache is shared across
    threads behind a lock.
    """
    if group.order > order_bound:
        raise PreconditionError(
            f"group order {group.order} exceeds the configured bound {order_bound}"
        )
    key = group.table_key()
    with _TABLE_LOCK:
        hit = _TABLE_CACHE.get(key)
    if hit is not None:
        if hit.group is group:
            return hit
        return CharacterTable(group, hit.classes, hit.values, hit.certification_error, hit.class_of)
    classes = conjugacy_classes(group)
    values, err = _burnside_table(group, classes)
    order = sorted(range(values.shape[0]), key=lambda i: character_sort_key(values[i]))
    values = values[order]
    values.setflags(write=False)
    cidx = class_index(group, classes)
    cidx.setflags(write=False)
    table = CharacterTable(group, tuple(classes), values, err, cidx)
    _check_table(table)
    with _TABLE_LOCK:
        _TABLE_CACHE.setdefault(key, table)
    return table


def _check_table(table: CharacterTable) -> None:
    sizes = table.class_sizes
    err = _orthonormality_error(table.values, sizes, table.group.order)
    if err > INTEGRALITY_TOL:
        raise ConsistencyError(f"character table fails orthonormality ({err:.3g})")
    # products of rows decompose with non-negative integer multiplicities
    for i in range(table.n_irreps):
        for j in range(i, table.n_irreps):
            prod = table.values[i] * table.values[j]
            mult = (table.values.conj() * sizes) @ prod / table.group.order
            if np.any(np.abs(mult - np.round(mult.real)) > INTEGRALITY_TOL) or np.any(
                np.round(mult.real) < 0
            ):
                raise ConsistencyError("product of irreducible characters is not a character")


def clear_table_cache() -> None:
    with _TABLE_LOCK:
        _TABLE_CACHE.clear()


# --------------------------------------------------------------------------
# class functions


def _certified_int(value: complex, what: str) -> int:
    rounded = round(value.real)
    if abs(value - rounded) > INTEGRALITY_TOL:
        raise ConsistencyError(f"{what} is not integral: {value}")
    return int(rounded)


def tensor_decompose(chi: np.ndarray, table: CharacterTable) -> np.ndarray:
    """Multiplicity of each irreducible of ``table`` in the character ``chi``.

    Raises :class:`PreconditionError` for virtual characters (negative
    multiplicities) and :class:`ConsistencyError` for non-integral ones.
    """
    chi = np.asarray(chi, dtype=complex)
    if chi.shape != (len(table.classes),):
        raise MalformedInputError("class function has the wrong number of classes")
    raw = (table.values.conj() * table.class_sizes) @ chi / table.group.order
    mult = np.array([_certified_int(v, "multiplicity") for v in raw], dtype=np.int64)
    if (mult < 0).any():
        raise PreconditionError("virtual character: negative multiplicity")
    degree = _certified_int(chi[0], "degree")
    if int(mult @ np.array(table.degrees)) != degree:
        raise ConsistencyError("multiplicities do not add up to the degree")
    return mult


def hom_multiplicity(alpha: np.ndarray, beta: np.ndarray, table: CharacterTable) -> int:
    """``dim Hom_K(V_alpha, V_beta)`` for genuine characters alpha, beta."""
    tensor_decompose(alpha, table)
    tensor_decompose(beta, table)
    value = table.inner(np.asarray(alpha, dtype=complex), np.asarray(beta, dtype=complex))
    result = _certified_int(value, "hom multiplicity")
    if result < 0:
        raise ConsistencyError("negative hom multiplicity")
    return result


def check_homomorphism(source: FiniteGroup, target: FiniteGroup, phi: np.ndarray) -> bool:
    phi = np.asarray(phi, dtype=np.int64)
    lhs = phi[source.mul]
    rhs = target.mul[phi[:, None], phi[None, :]]
    return bool(np.array_equal(lhs, rhs))


def restrict_character(
    chi: np.ndarray,
    table: CharacterTable,
    sub_table: CharacterTable,
    embedding: np.ndarray,
) -> np.ndarray:
    """Pull ``chi`` on ``table.group`` back along an injective homomorphism.

    ``embedding[h]`` is the image of element ``h`` of ``sub_table.group``.
    """
    embedding = np.asarray(embedding, dtype=np.int64)
    sub = sub_table.group
    if embedding.shape != (sub.order,):
        raise MalformedInputError("embedding must list one image per element")
    if len(set(embedding.tolist())) != sub.order:
        raise PreconditionError("embedding is not injective")
    if not check_homomorphism(sub, table.group, embedding):
        raise PreconditionError("embedding is not a homomorphism")
    chi = np.asarray(chi, dtype=complex)
    reps = [c.representative for c in sub_table.classes]
    return chi[table.class_of[embedding[reps]]]


def permutation_character(table: CharacterTable, perms: np.ndarray) -> np.ndarray:
    """Character of the permutation representation ``perms[g]`` of the group."""
    perms = np.asarray(perms)
    reps = [c.representative for c in table.classes]
    fixed = np.array([np.count_nonzero(perms[g] == np.arange(perms.shape[1])) for g in reps])
    return fixed.astype(complex)
