"""Finite groupoids, their actions on finite sets and on other groupoids.

Arrows and units are dense integer ids ``0..n-1`` in input order; labels
are carried alongside for I/O.  Partial maps are total integer tables with
``UNDEF`` (-1) marking "not defined".  Whenever a representative must be
chosen the smallest id wins, so every output is reproducible.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

import numpy as np

from . import _accel
from .errors import MalformedInputError, PreconditionError
from .reptheory import FiniteGroup, group_from_dict

UNDEF = -1
MAX_WITNESSES = 5


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: tuple
    detail: str = ""

    def to_dict(self) -> dict:
        return {"axiom": self.axiom, "witness": list(self.witness), "detail": self.detail}


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of an axiom check; ``ok`` when nothing was violated."""

    kind: str
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def violated_axioms(self) -> list[str]:
        return sorted({v.axiom for v in self.violations})

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "ok": self.ok,
            "violations": [v.to_dict() for v in self.violations],
        }


class _Collector:
    def __init__(self, labeler=None):
        self.items: list[Violation] = []
        self.counts: dict[str, int] = {}
        self.labeler = labeler

    def add(self, axiom: str, witness: Iterable, detail: str = "") -> None:
        n = self.counts.get(axiom, 0)
        self.counts[axiom] = n + 1
        if n < MAX_WITNESSES:
            self.items.append(Violation(axiom, tuple(witness), detail))

    def report(self, kind: str) -> ValidationReport:
        return ValidationReport(kind, tuple(self.items))


def _frozen(a, dtype=np.int64) -> np.ndarray:
    arr = np.array(a, dtype=dtype)
    arr.setflags(write=False)
    return arr


# --------------------------------------------------------------------------
# FiniteGroupoid


@dataclass(frozen=True, eq=False)
class FiniteGroupoid:
    """A finite groupoid as explicit tables.

    ``compose[g, h]`` is ``gh`` (defined when ``src[g] == rng[h]``), so the
    product is read right to left like composition of maps.
    """

    src: np.ndarray
    rng: np.ndarray
    compose: np.ndarray
    inv: np.ndarray
    unit_arrow: np.ndarray
    unit_labels: tuple = ()
    arrow_labels: tuple = ()

    def __post_init__(self):
        for name in ("src", "rng", "compose", "inv", "unit_arrow"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))
        n, m = self.n_arrows, self.n_units
        if self.compose.shape != (n, n):
            raise MalformedInputError("composition table must be n_arrows x n_arrows")
        if self.rng.shape != (n,) or self.inv.shape != (n,):
            raise MalformedInputError("src, rng and inv need one entry per arrow")
        for name, arr, bound in (
            ("src", self.src, m),
            ("rng", self.rng, m),
            ("inv", self.inv, n),
            ("unit_arrow", self.unit_arrow, n),
        ):
            if arr.size and (arr.min() < 0 or arr.max() >= bound):
                raise MalformedInputError(f"{name} refers to a missing id")
        if self.compose.size and (self.compose.min() < UNDEF or self.compose.max() >= n):
            raise MalformedInputError("composition table refers to a missing arrow")
        if not self.unit_labels:
            object.__setattr__(self, "unit_labels", tuple(f"u{i}" for i in range(m)))
        if not self.arrow_labels:
            object.__setattr__(self, "arrow_labels", tuple(f"g{i}" for i in range(n)))
        if len(self.unit_labels) != m or len(self.arrow_labels) != n:
            raise MalformedInputError("label count mismatch")

    @property
    def n_arrows(self) -> int:
        return int(self.src.shape[0])

    @property
    def n_units(self) -> int:
        return int(self.unit_arrow.shape[0])

    def mul(self, g: int, h: int) -> int:
        gh = int(self.compose[g, h])
        if gh == UNDEF:
            raise PreconditionError(
                f"{self.arrow_labels[g]} and {self.arrow_labels[h]} are not composable"
            )
        return gh

    def arrows_between(self, source: int, target: int) -> np.ndarray:
        """``G_source^target``: arrows from ``source`` to ``target``."""
        return np.flatnonzero((self.src == source) & (self.rng == target))

    def isotropy(self, unit: int) -> np.ndarray:
        return self.arrows_between(unit, unit)

    def isotropy_group(self, unit: int) -> tuple[FiniteGroup, np.ndarray]:
        """Isotropy at ``unit`` as a group plus the element -> arrow map."""
        arrows = self.isotropy(unit)
        pos = {int(a): i for i, a in enumerate(arrows)}
        table = np.array([[pos[int(self.compose[a, b])] for b in arrows] for a in arrows])
        return FiniteGroup(table, tuple(self.arrow_labels[a] for a in arrows)), arrows

    def is_unit_arrow(self, g: int) -> bool:
        return int(self.unit_arrow[self.src[g]]) == g

    @functools.cached_property
    def unit_index(self) -> dict:
        return {lab: i for i, lab in enumerate(self.unit_labels)}

    @functools.cached_property
    def arrow_index(self) -> dict:
        return {lab: i for i, lab in enumerate(self.arrow_labels)}

    def to_dict(self) -> dict:
        al, ul = self.arrow_labels, self.unit_labels
        comp = [
            [al[g], al[h], al[int(self.compose[g, h])]]
            for g, h in zip(*np.nonzero(self.compose >= 0))
        ]
        return {
            "units": list(ul),
            "arrows": [
                {"id": al[g], "src": ul[int(self.src[g])], "rng": ul[int(self.rng[g])]}
                for g in range(self.n_arrows)
            ],
            "unit_arrows": {ul[u]: al[int(self.unit_arrow[u])] for u in range(self.n_units)},
            "compose": comp,
            "inv": [[al[g], al[int(self.inv[g])]] for g in range(self.n_arrows)],
        }


def validate_groupoid(candidate: FiniteGroupoid | dict, *, check_associativity: bool = True) -> ValidationReport:
    """Check every groupoid axiom; each failure comes with a witness.

    Dictionaries are parsed first; dangling ids raise
    :class:`MalformedInputError` rather than producing a report.
    """
    G = groupoid_from_dict(candidate) if isinstance(candidate, dict) else candidate
    lab = G.arrow_labels
    out = _Collector()
    src, rng, comp, inv, ua = G.src, G.rng, G.compose, G.inv, G.unit_arrow
    n = G.n_arrows

    composable = src[:, None] == rng[None, :]
    defined = comp >= 0
    for g, h in zip(*np.nonzero(composable != defined)):
        gh = int(comp[g, h])
        out.add(
            "composability",
            (lab[g], lab[h], lab[gh] if gh >= 0 else None),
            "defined" if gh >= 0 else "missing",
        )
    ok_pairs = np.nonzero(defined & composable)
    gh = comp[ok_pairs]
    bad = (src[gh] != src[ok_pairs[1]]) | (rng[gh] != rng[ok_pairs[0]])
    for g, h in zip(ok_pairs[0][bad], ok_pairs[1][bad]):
        out.add("compose_endpoints", (lab[g], lab[h], lab[int(comp[g, h])]))

    for u in range(G.n_units):
        e = int(ua[u])
        if src[e] != u or rng[e] != u:
            out.add("unit_endpoints", (G.unit_labels[u], lab[e]))
    for g in range(n):
        left = ua[rng[g]]
        right = ua[src[g]]
        if comp[left, g] != g or comp[g, right] != g:
            out.add("unit_neutral", (lab[g], lab[left], lab[right]))
        gi = int(inv[g])
        if src[gi] != rng[g] or rng[gi] != src[g]:
            out.add("inverse_endpoints", (lab[g], lab[gi]))
            continue
        if comp[g, gi] != ua[rng[g]] or comp[gi, g] != ua[src[g]]:
            out.add("inverse", (lab[g], lab[gi]))

    if check_associativity and not out.counts.get("composability"):
        w = _accel.first_assoc_violation(comp)
        if w[0] >= 0:
            out.add("associativity", tuple(lab[x] for x in w))
    return out.report("groupoid")


def _parse_transitive(desc: dict) -> FiniteGroupoid:
    try:
        units = list(desc["units"])
        group = group_from_dict(desc["group"])
    except (KeyError, TypeError) as exc:
        raise MalformedInputError(f"transitive descriptor missing field: {exc}") from None
    return build_transitive_groupoid(units, group)


def groupoid_from_dict(desc: dict) -> FiniteGroupoid:
    """Parse either the explicit table format or the transitive shorthand.

    In the explicit format ``arrows`` defaults to one identity arrow per unit
    (named after the unit), and products with unit arrows that the
    ``compose`` list leaves out are filled in by the unit laws.
    """
    if not isinstance(desc, dict):
        raise MalformedInputError("groupoid descriptor must be an object")
    if "transitive" in desc:
        return _parse_transitive(desc["transitive"])
    try:
        units = list(desc["units"])
        arrows = list(desc.get("arrows", [{"id": u, "src": u, "rng": u} for u in desc["units"]]))
        compose = desc.get("compose", [])
    except (KeyError, TypeError) as exc:
        raise MalformedInputError(f"groupoid descriptor missing field: {exc}") from None
    uidx = _index(units, "unit")
    ids = [a.get("id") if isinstance(a, dict) else None for a in arrows]
    if any(i is None for i in ids):
        raise MalformedInputError("every arrow needs an id")
    aidx = _index(ids, "arrow")
    n = len(ids)
    src = [_lookup(uidx, a.get("src"), "unit") for a in arrows]
    rng = [_lookup(uidx, a.get("rng"), "unit") for a in arrows]
    table = np.full((n, n), UNDEF, dtype=np.int64)
    for entry in compose:
        if len(entry) != 3:
            raise MalformedInputError(f"compose entry {entry!r} must be [g1, g2, g12]")
        g, h, gh = (_lookup(aidx, x, "arrow") for x in entry)
        table[g, h] = gh
    unit_arrows = desc.get("unit_arrows")
    ua = []
    for u, ulab in enumerate(units):
        if unit_arrows is not None:
            ua.append(_lookup(aidx, unit_arrows.get(ulab), "arrow"))
        elif ulab in aidx:
            ua.append(aidx[ulab])
        else:
            cands = [
                g for g in range(n) if src[g] == u and rng[g] == u and table[g, g] == g
            ]
            if not cands:
                raise MalformedInputError(f"no unit arrow found for unit {ulab!r}")
            ua.append(cands[0])
    for g in range(n):
        if table[ua[rng[g]], g] == UNDEF:
            table[ua[rng[g]], g] = g
        if table[g, ua[src[g]]] == UNDEF:
            table[g, ua[src[g]]] = g
    if "inv" in desc:
        inv = [UNDEF] * n
        for entry in desc["inv"]:
            g, gi = (_lookup(aidx, x, "arrow") for x in entry)
            inv[g] = gi
        if UNDEF in inv:
            raise MalformedInputError("inverse table is incomplete")
    else:
        inv = []
        for g in range(n):
            cands = [h for h in range(n) if table[g, h] == ua[rng[g]] and table[h, g] == ua[src[g]]]
            if not cands:
                raise MalformedInputError(f"arrow {ids[g]!r} has no inverse in the table")
            inv.append(cands[0])
    return FiniteGroupoid(src, rng, table, inv, ua, tuple(units), tuple(ids))


def _index(items: Sequence, what: str) -> dict:
    idx = {}
    for i, x in enumerate(items):
        if x in idx:
            raise MalformedInputError(f"duplicate {what} id {x!r}")
        idx[x] = i
    return idx


def _lookup(index: dict, key: Any, what: str) -> int:
    try:
        return index[key]
    except (KeyError, TypeError):
        raise MalformedInputError(f"dangling {what} id {key!r}") from None


def build_transitive_groupoid(units: Sequence, group: FiniteGroup) -> FiniteGroupoid:
    """The groupoid ``units x K x units`` with ``(v,k,u): u -> v``.

    Arrow ``(v, k, u)`` has id ``(iv * |K| + k) * m + iu``; composition is
    ``(w,k1,v)(v,k2,u) = (w,k1k2,u)``.
    """
    units = list(units)
    m = len(units)
    if m == 0:
        raise PreconditionError("a transitive groupoid needs at least one unit")
    order = group.order
    n = m * m * order
    ids = np.arange(n)
    rest, iu = np.divmod(ids, m)
    iv, k = np.divmod(rest, order)
    comp = np.full((n, n), UNDEF, dtype=np.int64)
    ok = iu[:, None] == iv[None, :]
    prod = (iv[:, None] * order + group.mul[k[:, None], k[None, :]]) * m + iu[None, :]
    comp[ok] = prod[ok]
    inv = (iu * order + group.inverse[k]) * m + iv
    e = group.identity
    unit_arrow = (np.arange(m) * order + e) * m + np.arange(m)
    labels = tuple(
        f"({units[a]},{group.labels[b]},{units[c]})" for a, b, c in zip(iv, k, iu)
    )
    return FiniteGroupoid(iu, iv, comp, inv, unit_arrow, tuple(units), labels)


def group_as_groupoid(group: FiniteGroup, unit: str = "*") -> FiniteGroupoid:
    return build_transitive_groupoid([unit], group)


def trivial_groupoid(units: Sequence) -> FiniteGroupoid:
    """Only unit arrows (the space ``units`` viewed as a groupoid)."""
    units = list(units)
    m = len(units)
    comp = np.full((m, m), UNDEF, dtype=np.int64)
    comp[np.arange(m), np.arange(m)] = np.arange(m)
    ar = np.arange(m)
    return FiniteGroupoid(ar, ar, comp, ar, ar, tuple(units), tuple(units))


def pair_groupoid(units: Sequence) -> FiniteGroupoid:
    """``units x units`` with exactly one arrow between any two units."""
    from .reptheory import trivial_group

    G = build_transitive_groupoid(units, trivial_group())
    labels = tuple(f"({G.unit_labels[r]},{G.unit_labels[s]})" for r, s in zip(G.rng, G.src))
    return FiniteGroupoid(G.src, G.rng, G.compose, G.inv, G.unit_arrow, G.unit_labels, labels)


def disjoint_union(*groupoids: FiniteGroupoid) -> FiniteGroupoid:
    srcs, rngs, invs, uas, ulabs, alabs = [], [], [], [], [], []
    n_total = sum(G.n_arrows for G in groupoids)
    comp = np.full((n_total, n_total), UNDEF, dtype=np.int64)
    a_off = u_off = 0
    for G in groupoids:
        n = G.n_arrows
        srcs.append(G.src + u_off)
        rngs.append(G.rng + u_off)
        invs.append(G.inv + a_off)
        uas.append(G.unit_arrow + a_off)
        block = np.where(G.compose >= 0, G.compose + a_off, UNDEF)
        comp[a_off : a_off + n, a_off : a_off + n] = block
        ulabs.extend(G.unit_labels)
        alabs.extend(G.arrow_labels)
        a_off += n
        u_off += G.n_units
    return FiniteGroupoid(
        np.concatenate(srcs),
        np.concatenate(rngs),
        comp,
        np.concatenate(invs),
        np.concatenate(uas),
        tuple(ulabs),
        tuple(alabs),
    )


# --------------------------------------------------------------------------
# transitive components


@dataclass(frozen=True, eq=False)
class TransitiveComponent:
    units: tuple[int, ...]
    basepoint: int
    isotropy: FiniteGroup
    isotropy_arrows: np.ndarray

    def to_dict(self, G: FiniteGroupoid) -> dict:
        return {
            "units": [G.unit_labels[u] for u in self.units],
            "basepoint": G.unit_labels[self.basepoint],
            "isotropy_order": self.isotropy.order,
            "isotropy": [G.arrow_labels[a] for a in self.isotropy_arrows],
        }


def unit_orbit_labels(G: FiniteGroupoid) -> np.ndarray:
    """Smallest unit in the orbit of each unit (orbit relation u ~ v iff G_u^v nonempty)."""
    parent = list(range(G.n_units))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for s, r in zip(G.src.tolist(), G.rng.tolist()):
        a, b = find(s), find(r)
        if a != b:
            parent[max(a, b)] = min(a, b)
    return np.array([find(u) for u in range(G.n_units)], dtype=np.int64)


def transitive_components(G: FiniteGroupoid) -> list[TransitiveComponent]:
    """Partition of the units into orbits, each with its basepoint isotropy."""
    labels = unit_orbit_labels(G)
    out = []
    for base in np.unique(labels):
        units = tuple(int(u) for u in np.flatnonzero(labels == base))
        group, arrows = G.isotropy_group(int(base))
        out.append(TransitiveComponent(units, int(base), group, arrows))
    return out


# --------------------------------------------------------------------------
# actions on finite sets


@dataclass(frozen=True, eq=False)
class SpaceAction:
    """Action of a groupoid on a finite set fibred over its units.

    ``act[g, x]`` is ``g.x`` when ``src[g] == anchor[x]`` and ``UNDEF``
    otherwise.
    """

    groupoid: FiniteGroupoid
    anchor: np.ndarray
    act: np.ndarray
    point_labels: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "anchor", _frozen(self.anchor))
        object.__setattr__(self, "act", _frozen(self.act))
        G = self.groupoid
        npts = self.anchor.shape[0]
        if self.act.shape != (G.n_arrows, npts):
            raise MalformedInputError("action table must be n_arrows x n_points")
        if npts and (self.anchor.min() < 0 or self.anchor.max() >= G.n_units):
            raise MalformedInputError("anchor refers to a missing unit")
        if self.act.size and (self.act.min() < UNDEF or self.act.max() >= npts):
            raise MalformedInputError("action table refers to a missing point")
        if not self.point_labels:
            object.__setattr__(self, "point_labels", tuple(f"x{i}" for i in range(npts)))
        elif len(self.point_labels) != npts:
            raise MalformedInputError("label count mismatch")

    @property
    def n_points(self) -> int:
        return int(self.anchor.shape[0])

    def apply(self, g: int, x: int) -> int:
        y = int(self.act[g, x])
        if y == UNDEF:
            raise PreconditionError(
                f"{self.groupoid.arrow_labels[g]} cannot act on {self.point_labels[x]}"
            )
        return y

    def arrows_carrying(self, x: int, y: int) -> np.ndarray:
        """Arrows ``g`` with ``g.x == y``, ascending."""
        return np.flatnonzero(self.act[:, x] == y)


def validate_space_action(A: SpaceAction, *, kind: str = "space_action") -> ValidationReport:
    out = _Collector()
    _check_space_action(A, out, "")
    return out.report(kind)


def _check_space_action(A: SpaceAction, out: _Collector, prefix: str) -> None:
    G = A.groupoid
    al, pl = G.arrow_labels, A.point_labels
    act = A.act
    should = G.src[:, None] == A.anchor[None, :]
    for g, x in zip(*np.nonzero(should != (act >= 0))):
        out.add(prefix + "action_domain", (al[g], pl[x]))
    gs, xs = np.nonzero(should & (act >= 0))
    ys = act[gs, xs]
    bad = A.anchor[ys] != G.rng[gs]
    for g, x in zip(gs[bad], xs[bad]):
        out.add(prefix + "anchor_equivariance", (al[g], pl[x], pl[int(act[g, x])]))
    for x in range(A.n_points):
        e = G.unit_arrow[A.anchor[x]]
        if act[e, x] != x:
            out.add(prefix + "unit_acts_trivially", (al[e], pl[x]))
    # (g1 g2).x == g1.(g2.x)
    w = _accel.first_module_violation(act, G.compose)
    if w[0] >= 0:
        g1, g2, x = w
        out.add(prefix + "multiplicativity", (al[g1], al[g2], pl[x]))


def orbit_labels(A: SpaceAction) -> np.ndarray:
    """Smallest point of the orbit of every point."""
    act = A.act
    perms = np.where(act >= 0, act, np.arange(A.n_points)[None, :])
    return _accel.orbit_labels(perms)


def orbits(A: SpaceAction) -> list[tuple[int, ...]]:
    """Orbits ``G*x`` ordered by smallest member."""
    labels = orbit_labels(A)
    return [tuple(int(x) for x in np.flatnonzero(labels == b)) for b in np.unique(labels)]


def stabilizer(A: SpaceAction, x: int) -> np.ndarray:
    """``G(x) = {g : g.x = x}``, a subgroup of the isotropy at ``anchor(x)``."""
    if not 0 <= x < A.n_points:
        raise PreconditionError(f"point {x} is not in the space")
    return np.flatnonzero(A.act[:, x] == x)


def stabilizer_group(A: SpaceAction, x: int) -> tuple[FiniteGroup, np.ndarray]:
    arrows = stabilizer(A, x)
    comp = A.groupoid.compose
    pos = {int(a): i for i, a in enumerate(arrows)}
    table = np.array([[pos[int(comp[a, b])] for b in arrows] for a in arrows])
    return FiniteGroup(table, tuple(A.groupoid.arrow_labels[a] for a in arrows)), arrows


def fixed_points(A: SpaceAction) -> list[int]:
    """Points fixed by every isotropy arrow at their anchor."""
    G = A.groupoid
    iso = G.src == G.rng
    out = []
    for x in range(A.n_points):
        gs = np.flatnonzero(iso & (G.src == A.anchor[x]))
        if np.all(A.act[gs, x] == x):
            out.append(x)
    return out


def action_pairs(A: SpaceAction) -> np.ndarray:
    """Arrows of the action groupoid as ``(g, x)`` rows, sorted by g then x."""
    gs, xs = np.nonzero(A.act >= 0)
    return np.stack([gs, xs], axis=1).astype(np.int64)


def action_groupoid(A: SpaceAction) -> FiniteGroupoid:
    """``G x| X`` with arrows ``(g, x): x -> g.x`` and units identified with X."""
    G = A.groupoid
    pairs = action_pairs(A)
    n = pairs.shape[0]
    index = np.full(A.act.shape, UNDEF, dtype=np.int64)
    index[pairs[:, 0], pairs[:, 1]] = np.arange(n)
    g, x = pairs[:, 0], pairs[:, 1]
    gx = A.act[g, x]
    # (g1, y)(g2, x) defined iff y = g2.x ; product (g1 g2, x)
    ok = x[:, None] == gx[None, :]
    g12 = G.compose[g[:, None], g[None, :]]
    comp = np.full((n, n), UNDEF, dtype=np.int64)
    rows, cols = np.nonzero(ok)
    comp[rows, cols] = index[g12[rows, cols], x[cols]]
    inv = index[G.inv[g], gx]
    unit_arrow = index[G.unit_arrow[A.anchor], np.arange(A.n_points)]
    labels = tuple(f"({G.arrow_labels[a]},{A.point_labels[b]})" for a, b in pairs)
    return FiniteGroupoid(x, gx, comp, inv, unit_arrow, A.point_labels, labels)


# --------------------------------------------------------------------------
# groupoid acting on a groupoid


@dataclass(frozen=True, eq=False)
class GroupoidOnGroupoidAction:
    """``actor`` acting on ``target`` through ``anchor: H -> G^0``."""

    actor: FiniteGroupoid
    target: FiniteGroupoid
    anchor: np.ndarray
    act: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "anchor", _frozen(self.anchor))
        object.__setattr__(self, "act", _frozen(self.act))
        G, H = self.actor, self.target
        if self.anchor.shape != (H.n_arrows,):
            raise MalformedInputError("anchor needs one unit per target arrow")
        if self.act.shape != (G.n_arrows, H.n_arrows):
            raise MalformedInputError("action table must be |G| x |H|")
        if self.anchor.size and (self.anchor.min() < 0 or self.anchor.max() >= G.n_units):
            raise MalformedInputError("anchor refers to a missing unit")
        if self.act.size and (self.act.min() < UNDEF or self.act.max() >= H.n_arrows):
            raise MalformedInputError("action table refers to a missing arrow")

    def unit_space_action(self) -> SpaceAction:
        """The induced action on ``H^0``."""
        H = self.target
        ua = H.unit_arrow
        unit_of_arrow = np.full(H.n_arrows, UNDEF, dtype=np.int64)
        unit_of_arrow[ua] = np.arange(H.n_units)
        sub = self.act[:, ua]
        act = np.where(sub >= 0, unit_of_arrow[np.where(sub >= 0, sub, 0)], UNDEF)
        return SpaceAction(self.actor, self.anchor[ua], act, H.unit_labels)

    def arrow_action(self) -> SpaceAction:
        """The action on the arrow set of ``H`` viewed as a plain set."""
        return SpaceAction(self.actor, self.anchor, self.act, self.target.arrow_labels)


def validate_groupoid_action(A: GroupoidOnGroupoidAction) -> ValidationReport:
    G, H = A.actor, A.target
    out = _Collector()
    _check_space_action(A.arrow_action(), out, "")
    gl, hl = G.arrow_labels, H.arrow_labels
    act = A.act
    # g.(h1 h2) == (g.h1)(g.h2)
    h1s, h2s = np.nonzero(H.compose >= 0)
    h12 = H.compose[h1s, h2s]
    for g in range(G.n_arrows):
        lhs = act[g, h12]
        a1 = act[g, h1s]
        a2 = act[g, h2s]
        defined = (a1 >= 0) & (a2 >= 0)
        rhs = np.where(defined, H.compose[np.where(a1 >= 0, a1, 0), np.where(a2 >= 0, a2, 0)], UNDEF)
        bad = (lhs >= 0) & (lhs != rhs)
        for i in np.flatnonzero(bad):
            out.add("multiplicative_in_target", (gl[g], hl[h1s[i]], hl[h2s[i]]))
    # anchor is constant along composable H-arrows (p = p0 s = p0 r)
    bad = A.anchor[h12] != A.anchor[h1s]
    for i in np.flatnonzero(bad):
        out.add("anchor_on_products", (hl[h1s[i]], hl[h2s[i]]))
    return out.report("groupoid_action")


def crossed_product_groupoid(A: GroupoidOnGroupoidAction) -> FiniteGroupoid:
    """``G x| H`` with ``(g1,h1)(g2,h2) = (g1 g2, (g2^-1 . h1) h2)``.

    Arrows are the pairs ``(g, h)`` with ``src(g) = p(h)`` sorted by g then h;
    units are identified with ``H^0`` via ``u -> (p(u), u)``.
    """
    G, H = A.actor, A.target
    gs, hs = np.nonzero(A.act >= 0)
    n = gs.shape[0]
    index = np.full(A.act.shape, UNDEF, dtype=np.int64)
    index[gs, hs] = np.arange(n)
    h_unit_of_arrow = np.full(H.n_arrows, UNDEF, dtype=np.int64)
    h_unit_of_arrow[H.unit_arrow] = np.arange(H.n_units)

    src = H.src[hs]
    rng_arrow = A.act[gs, H.unit_arrow[H.rng[hs]]]
    rng = h_unit_of_arrow[rng_arrow]

    comp = np.full((n, n), UNDEF, dtype=np.int64)
    # composable iff s(g1) = r(g2) and g2^-1 . s(h1) = r(h2); equivalently
    # s(g1, h1) == r(g2, h2)
    rows, cols = np.nonzero(src[:, None] == rng[None, :])
    for i, j in zip(rows.tolist(), cols.tolist()):
        g1, h1, g2, h2 = gs[i], hs[i], gs[j], hs[j]
        g12 = G.compose[g1, g2]
        moved = A.act[G.inv[g2], h1]
        h = H.compose[moved, h2]
        comp[i, j] = index[g12, h]
    inv = index[G.inv[gs], A.act[gs, H.inv[hs]]]
    unit_arrow = index[G.unit_arrow[A.anchor[H.unit_arrow]], H.unit_arrow]
    labels = tuple(f"({G.arrow_labels[a]},{H.arrow_labels[b]})" for a, b in zip(gs, hs))
    return FiniteGroupoid(src, rng, comp, inv, unit_arrow, H.unit_labels, labels)


def crossed_product_pairs(A: GroupoidOnGroupoidAction) -> np.ndarray:
    gs, hs = np.nonzero(A.act >= 0)
    return np.stack([gs, hs], axis=1).astype(np.int64)


def fixed_subgroupoid(A: GroupoidOnGroupoidAction) -> tuple[FiniteGroupoid, np.ndarray]:
    """``H^G`` (arrows fixed by the isotropy at their anchor) and its arrow ids in H.

    Closure under composition and inverses is verified; the result may be
    empty.
    """
    G, H = A.actor, A.target
    keep = []
    for h in range(H.n_arrows):
        iso = G.isotropy(int(A.anchor[h]))
        if np.all(A.act[iso, h] == h):
            keep.append(h)
    keep = np.array(keep, dtype=np.int64)
    pos = np.full(H.n_arrows, UNDEF, dtype=np.int64)
    pos[keep] = np.arange(keep.size)
    units = [u for u in range(H.n_units) if pos[H.unit_arrow[u]] >= 0]
    upos = {u: i for i, u in enumerate(units)}
    sub = H.compose[np.ix_(keep, keep)] if keep.size else np.zeros((0, 0), dtype=np.int64)
    if (sub[sub >= 0].size and (pos[sub[sub >= 0]] < 0).any()) or (pos[H.inv[keep]] < 0).any():
        raise PreconditionError("fixed points are not closed under composition")
    comp = np.where(sub >= 0, pos[np.where(sub >= 0, sub, 0)], UNDEF)
    src = np.array([upos[int(H.src[h])] for h in keep], dtype=np.int64)
    rng = np.array([upos[int(H.rng[h])] for h in keep], dtype=np.int64)
    F = FiniteGroupoid(
        src,
        rng,
        comp,
        pos[H.inv[keep]],
        np.array([pos[H.unit_arrow[u]] for u in units], dtype=np.int64),
        tuple(H.unit_labels[u] for u in units),
        tuple(H.arrow_labels[h] for h in keep),
    )
    return F, keep


def invariant_sections(A: GroupoidOnGroupoidAction) -> list[tuple[int, ...]]:
    """All sections ``sigma: G^0 -> H^0`` with ``p(sigma(u)) = u`` and
    ``g.sigma(u) = sigma(g.u)``.

    Requires a transitive actor.  A section is determined by its value at the
    basepoint, so candidates are the units over the basepoint.
    """
    G = A.actor
    comps = transitive_components(G)
    if len(comps) != 1:
        raise PreconditionError("invariant_sections needs a transitive actor groupoid")
    X = A.unit_space_action()
    base = comps[0].basepoint
    sections = []
    for a in np.flatnonzero(X.anchor == base):
        sigma = []
        for v in range(G.n_units):
            g = int(G.arrows_between(base, v)[0])
            sigma.append(int(X.act[g, a]))
        ok = all(X.act[g, sigma[G.src[g]]] == sigma[G.rng[g]] for g in range(G.n_arrows))
        if ok:
            sections.append(tuple(sigma))
    return sections


def all_sections_bruteforce(A: GroupoidOnGroupoidAction) -> list[tuple[int, ...]]:
    """Invariant sections by enumerating every section (small inputs only)."""
    G = A.actor
    X = A.unit_space_action()
    fibres = [np.flatnonzero(X.anchor == u).tolist() for u in range(G.n_units)]
    out = []
    for sigma in itertools.product(*fibres):
        if all(X.act[g, sigma[G.src[g]]] == sigma[G.rng[g]] for g in range(G.n_arrows)):
            out.append(tuple(int(s) for s in sigma))
    return out
