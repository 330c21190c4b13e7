"""Loading JSON descriptors and built-in fixtures."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from typing import Any

from . import fixtures
from .errors import MalformedInputError
from .graph import GraphAction, graph_action_from_dict, graph_from_dict, trivial_action
from .groupoid import FiniteGroupoid, groupoid_from_dict
from .selfsimilar import SelfSimilarAutomaton, automaton_from_dict

KINDS = ("groupoid", "graph", "graph-action", "automaton")


@dataclass(frozen=True)
class Loaded:
    kind: str
    obj: Any
    raw: dict
    source: str
    digest: str


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False)


def digest(raw: dict) -> str:
    return "sha256:" + hashlib.sha256(canonical_json(raw).encode()).hexdigest()


def detect_kind(raw: dict) -> str:
    if not isinstance(raw, dict):
        raise MalformedInputError("descriptor must be a JSON object")
    if "kind" in raw:
        if raw["kind"] not in KINDS:
            raise MalformedInputError(f"unknown descriptor kind {raw['kind']!r}")
        return raw["kind"]
    if "generators" in raw or "transitions" in raw:
        return "automaton"
    if "groupoid" in raw and "graph" in raw:
        return "graph-action"
    if "vertices" in raw and "edges" in raw:
        return "graph"
    if "arrows" in raw or "transitive" in raw or "units" in raw:
        return "groupoid"
    raise MalformedInputError("cannot tell what kind of descriptor this is")


def parse(raw: dict, kind: str | None = None):
    kind = kind or detect_kind(raw)
    if kind == "groupoid":
        return kind, groupoid_from_dict(raw)
    if kind == "graph":
        return kind, graph_from_dict(raw)
    if kind == "graph-action":
        return kind, graph_action_from_dict(raw)
    if kind == "automaton":
        return kind, automaton_from_dict(raw)
    raise MalformedInputError(f"unknown descriptor kind {kind!r}")


def load_fixture(name: str) -> Loaded:
    if name == "example-4.3":
        A = fixtures.example_4_3()
        raw = A.to_dict()
        return Loaded("graph-action", A, raw, f"fixture:{name}", digest(raw))
    if name == "example-4.6":
        raw = fixtures.EXAMPLE_4_6
        return Loaded("automaton", fixtures.example_4_6(), raw, f"fixture:{name}", digest(raw))
    raise MalformedInputError(f"unknown fixture {name!r}; choose from {', '.join(fixtures.FIXTURE_NAMES)}")


def load_text(text: str, source: str, kind: str | None = None) -> Loaded:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInputError(f"invalid JSON: {exc}") from None
    kind, obj = parse(raw, kind)
    return Loaded(kind, obj, raw, source, digest(raw))


def as_graph_action(loaded: Loaded) -> GraphAction:
    """Graph actions pass through; a bare graph gets the trivial action."""
    if loaded.kind == "graph-action":
        return loaded.obj
    if loaded.kind == "graph":
        return trivial_action(loaded.obj)
    raise MalformedInputError(f"expected a graph action, got a {loaded.kind} descriptor")


def as_automaton(loaded: Loaded) -> SelfSimilarAutomaton:
    if loaded.kind != "automaton":
        raise MalformedInputError(f"expected an automaton, got a {loaded.kind} descriptor")
    return loaded.obj


def as_groupoid(loaded: Loaded) -> FiniteGroupoid:
    if loaded.kind == "groupoid":
        return loaded.obj
    if loaded.kind == "graph-action":
        return loaded.obj.groupoid
    raise MalformedInputError(f"expected a groupoid, got a {loaded.kind} descriptor")
