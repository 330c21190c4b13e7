"""Command-line entry point.

Every command prints one JSON manifest on standard output and a short human
summary on standard error.  Exit codes: 0 success, 2 validation failure,
3 internal consistency failure, 4 malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .descriptors import (
    Loaded,
    as_automaton,
    as_graph_action,
    as_groupoid,
    canonical_json,
    load_fixture,
    load_text,
)
from .errors import ConsistencyError, MalformedInputError, PreconditionError
from .graph import fiber_graphs, validate_graph_action
from .groupoid import fixed_points, orbits, stabilizer, validate_groupoid

EXIT_OK, EXIT_INVALID, EXIT_INTERNAL, EXIT_MALFORMED = 0, 2, 3, 4


class ValidationFailed(Exception):
    def __init__(self, outputs: dict, summary: str):
        super().__init__(summary)
        self.outputs = outputs


# --------------------------------------------------------------------------
# input


def _load(args) -> Loaded:
    if args.fixture and args.input:
        raise MalformedInputError("give either an input file or --fixture, not both")
    if args.fixture:
        return load_fixture(args.fixture)
    if not args.input:
        raise MalformedInputError("no input: pass a JSON file, '-' for stdin, or --fixture")
    if args.input == "-":
        return load_text(sys.stdin.read(), "stdin", getattr(args, "kind", None))
    try:
        with open(args.input, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise MalformedInputError(f"cannot read {args.input}: {exc.strerror}") from None
    return load_text(text, args.input, getattr(args, "kind", None))


def _require_valid_action(A):
    rep = validate_graph_action(A)
    if not rep.ok:
        raise ValidationFailed({"validation": rep.to_dict()}, "graph action is invalid: " + ", ".join(rep.violated_axioms))
    return A


def _unit(A, label):
    if label is None:
        return 0
    try:
        return A.groupoid.unit_index[label]
    except KeyError:
        raise MalformedInputError(f"unknown unit {label!r}") from None


# --------------------------------------------------------------------------
# commands


def cmd_validate(args, L: Loaded):
    from .selfsimilar import validate_automaton

    if L.kind == "groupoid":
        rep = validate_groupoid(L.obj)
    elif L.kind in ("graph-action", "graph"):
        rep = validate_graph_action(as_graph_action(L))
    else:
        rep = validate_automaton(L.obj)
    out = {"kind": L.kind, "validation": rep.to_dict()}
    if not rep.ok:
        raise ValidationFailed(out, f"{L.kind}: violated " + ", ".join(rep.violated_axioms))
    return out, f"{L.kind}: ok"


def cmd_orbits(args, L: Loaded):
    A = _require_valid_action(as_graph_action(L))
    E, G = A.graph, A.groupoid
    vl, el = E.vertex_labels, E.edge_labels

    def describe(S, labels):
        return [
            {"points": [labels[x] for x in o], "stabilizer_order": int(stabilizer(S, o[0]).size)}
            for o in orbits(S)
        ]

    out = {
        "vertex_orbits": describe(A.vertex_action, vl),
        "edge_orbits": describe(A.edge_action, el),
        "fixed_vertices": [vl[x] for x in fixed_points(A.vertex_action)],
        "fixed_edges": [el[x] for x in fixed_points(A.edge_action)],
        "fiber_graphs": [
            {
                "unit": G.unit_labels[f.unit],
                "vertices": list(f.graph.vertex_labels),
                "edges": list(f.graph.edge_labels),
            }
            for f in fiber_graphs(A)
        ],
        "flags": E.flags(),
    }
    return out, f"{len(out['vertex_orbits'])} vertex orbits, {len(out['edge_orbits'])} edge orbits"


def cmd_spectrum(args, L: Loaded):
    from .quotient import spectrum, vertex_crossed_product_dim

    A = _require_valid_action(as_graph_action(L))
    pts = spectrum(A)
    sizes = [p.size for p in pts]
    out = {
        "spectrum": [p.to_dict(A) for p in pts],
        "sizes": sizes,
        "sum_of_squares": int(sum(n * n for n in sizes)),
        "vertex_crossed_product_dim": vertex_crossed_product_dim(A),
        "provenance": "fast-path",
    }
    return out, f"block sizes {sizes}"


def cmd_quotient(args, L: Loaded):
    from .quotient import quotient_graph

    A = _require_valid_action(as_graph_action(L))
    rep = quotient_graph(A, args.mode)
    out = rep.to_dict(A)
    return out, f"sizes {list(rep.sizes)}, adjacency {rep.adjacency.tolist()} ({rep.provenance})"


def cmd_kappa(args, L: Loaded):
    from .oracle import kappa_dimension_check

    A = _require_valid_action(as_graph_action(L))
    rep = kappa_dimension_check(A)
    if not rep.ok:
        raise ConsistencyError(
            f"compact operators {rep.compact_operators_dim} != bundle crossed product {rep.bundle_crossed_product_dim}"
        )
    return rep.to_dict(), f"dimensions agree: {rep.compact_operators_dim}"


def cmd_dr_dims(args, L: Loaded):
    from .doplicher_roberts import dr_dimension_table

    A = _require_valid_action(as_graph_action(L))
    units = range(A.groupoid.n_units) if args.unit is None else [_unit(A, args.unit)]
    tables = []
    for u in units:
        if args.method == "both":
            t1 = dr_dimension_table(A, u, args.depth, method="burnside")
            t2 = dr_dimension_table(A, u, args.depth, method="explicit")
            if not np.array_equal(t1.table, t2.table):
                raise ConsistencyError(f"Burnside and explicit tables differ at unit {A.groupoid.unit_labels[u]}")
            d = t1.to_dict(A)
            d["method"] = "both-agree"
        else:
            d = dr_dimension_table(A, u, args.depth, method=args.method).to_dict(A)
        tables.append(d)
    diag = [[row[i] for i, row in enumerate(t["table"])] for t in tables]
    return {"tables": tables, "depth": args.depth}, f"diagonals {diag}"


def cmd_dr_bratteli(args, L: Loaded):
    from .doplicher_roberts import core_bratteli

    A = _require_valid_action(as_graph_action(L))
    B = core_bratteli(A, args.source, args.levels, unit=_unit(A, args.unit))
    out = B.to_dict()
    return out, f"{args.source}: level dims {[[int(x) for x in d] for _, d in B.levels]}"


def cmd_selfsim(args, L: Loaded):
    from .selfsimilar import forest, induced_forest_action, parse_path, parse_word

    aut = as_automaton(L)
    from .selfsimilar import validate_automaton

    rep = validate_automaton(aut)
    if not rep.ok:
        raise ValidationFailed({"validation": rep.to_dict()}, "automaton is invalid")
    label = aut.path_label
    if args.selfsim_cmd == "act":
        w, p = parse_word(args.word), parse_path(aut, args.path)
        image = aut.act_path(w, p)
        res = aut.restriction(w, p)
        out = {"word": list(w), "path": label(p), "image": label(image), "restriction": list(res)}
        return out, f"{' '.join(w)} . {label(p)} = {label(image)}"
    if args.selfsim_cmd == "orbit":
        p = parse_path(aut, args.path)
        orb = aut.orbit_of_path(p, args.bound)
        out = {"path": label(p), "word_length_bound": args.bound, "orbit": [label(q) for q in orb]}
        return out, f"orbit of {label(p)} has {len(orb)} paths"
    if args.selfsim_cmd == "equiv":
        w1, w2 = parse_word(args.word), parse_word(args.other)
        eq = aut.depth_bounded_equivalence(w1, w2, args.depth)
        out = {"word": list(w1), "other": list(w2), "depth": args.depth, "equal_to_depth": eq.equal}
        if not eq.equal:
            out["witness"] = label(eq.witness)
            out["images"] = [label(eq.image_left), label(eq.image_right)]
            return out, f"distinguished by {label(eq.witness)}"
        return out, f"equal on paths of length <= {args.depth}"
    if args.selfsim_cmd == "forest":
        F = forest(aut.graph, args.depth, label)
        GA = induced_forest_action(aut, args.depth)
        vrep = validate_graph_action(GA)
        if not vrep.ok:
            raise ConsistencyError("induced forest action fails validation: " + ", ".join(vrep.violated_axioms))
        out = {
            "depth": args.depth,
            "vertices": [label(p) for p in F.paths],
            "children": {label(p): [label(c) for c in F.children(p)] for p in F.paths},
            "induced_groupoid_arrows": GA.groupoid.n_arrows,
            "induced_action_valid": vrep.ok,
        }
        return out, f"forest with {len(F.paths)} vertices; induced groupoid has {GA.groupoid.n_arrows} arrows"
    raise MalformedInputError("unknown selfsim subcommand")


def cmd_ktheory(args, L: Loaded | None):
    from .ktheory import graph_k_theory

    results = {}
    if args.adjacency is not None:
        try:
            adj = json.loads(args.adjacency)
        except json.JSONDecodeError as exc:
            raise MalformedInputError(f"--adjacency is not JSON: {exc}") from None
        k0, k1 = graph_k_theory(adj)
        results["adjacency"] = {"K0": k0.to_dict(), "K1": k1.to_dict()}
        return results, f"K0 = {k0}, K1 = {k1}"
    from .quotient import quotient_graph

    A = _require_valid_action(as_graph_action(L))
    rep = quotient_graph(A, args.mode)
    k0, k1 = graph_k_theory(rep.adjacency, no_sources=rep.flags["no_sources"])
    results["quotient"] = {
        "adjacency": rep.adjacency.tolist(),
        "provenance": rep.provenance,
        "K0": k0.to_dict(),
        "K1": k1.to_dict(),
    }
    fibres = []
    for f in fiber_graphs(A):
        a0, a1 = graph_k_theory(f.graph.adjacency())
        fibres.append({"unit": A.groupoid.unit_labels[f.unit], "K0": a0.to_dict(), "K1": a1.to_dict()})
    results["fibers"] = fibres
    return results, f"quotient K0 = {k0}, K1 = {k1}"


def cmd_export_dot(args, L: Loaded):
    from .dot import bratteli_to_dot, graph_to_dot, quotient_to_dot

    what = args.what
    if L.kind == "automaton":
        if what != "forest":
            raise MalformedInputError("automata export only as --what forest")
        from .selfsimilar import forest

        aut = as_automaton(L)
        text = graph_to_dot(forest(aut.graph, args.depth, aut.path_label).graph, "forest")
    else:
        A = _require_valid_action(as_graph_action(L))
        if what == "graph":
            text = graph_to_dot(A.graph)
        elif what == "quotient":
            from .quotient import quotient_graph

            text = quotient_to_dot(quotient_graph(A, args.mode))
        elif what == "bratteli":
            from .doplicher_roberts import core_bratteli

            text = bratteli_to_dot(core_bratteli(A, args.source, args.depth, unit=_unit(A, args.unit)))
        else:
            raise MalformedInputError(f"cannot export {what} from a {L.kind} descriptor")
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    return {"what": what, "dot": text, "written_to": args.output}, f"exported {what} ({len(text.splitlines())} lines)"


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="groupoid-graph", description="Groupoid actions on finite graphs.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("input", nargs="?", help="JSON descriptor file, or '-' for stdin")
        sp.add_argument("--fixture", choices=["example-4.3", "example-4.6"])
        sp.set_defaults(func=func)
        return sp

    sp = add("validate", cmd_validate, "check axioms of a groupoid, graph action or automaton")
    sp.add_argument("--kind", choices=["groupoid", "graph", "graph-action", "automaton"])
    add("orbits", cmd_orbits, "vertex/edge orbits, stabilizers, fixed points, fibre graphs")
    add("spectrum", cmd_spectrum, "blocks of the vertex crossed product")
    sp = add("quotient-graph", cmd_quotient, "quotient graph adjacency")
    sp.add_argument("--mode", choices=["fast", "oracle", "both"], default="fast")
    add("kappa-check", cmd_kappa, "compact-operator dimension identity")
    sp = add("dr-dims", cmd_dr_dims, "intertwiner dimension tables")
    sp.add_argument("--depth", type=int, default=2)
    sp.add_argument("--unit", help="unit label (default: every unit)")
    sp.add_argument("--method", choices=["burnside", "explicit", "both"], default="burnside")
    sp = add("dr-bratteli", cmd_dr_bratteli, "Bratteli diagram of a gauge-invariant core")
    sp.add_argument("--levels", type=int, default=3)
    sp.add_argument("--source", choices=["quotient-graph", "dr-fiber"], default="quotient-graph")
    sp.add_argument("--unit")
    sp = add("selfsim", cmd_selfsim, "self-similar automaton queries")
    sp.add_argument("selfsim_cmd", choices=["act", "orbit", "equiv", "forest"])
    sp.add_argument("--word", default=None, help="tokens separated by spaces or commas")
    sp.add_argument("--other", default=None, help="second word for equiv")
    sp.add_argument("--path", default=None, help="edge labels, or a vertex label")
    sp.add_argument("--depth", type=int, default=2)
    sp.add_argument("--bound", type=int, default=None, help="word-length bound for orbit")
    sp = add("ktheory", cmd_ktheory, "K-groups of the quotient graph (or of --adjacency)")
    sp.add_argument("--adjacency", help="JSON matrix a[x][y] = edges y -> x")
    sp.add_argument("--mode", choices=["fast", "oracle", "both"], default="fast")
    sp = add("export-dot", cmd_export_dot, "Graphviz export")
    sp.add_argument("--what", choices=["graph", "quotient", "bratteli", "forest"], default="quotient")
    sp.add_argument("--mode", choices=["fast", "oracle", "both"], default="fast")
    sp.add_argument("--source", choices=["quotient-graph", "dr-fiber"], default="quotient-graph")
    sp.add_argument("--unit")
    sp.add_argument("--depth", type=int, default=2)
    sp.add_argument("-o", "--output")
    return p


def _manifest(args, L: Loaded | None, status: str, outputs: dict) -> dict:
    flags = {
        k: v
        for k, v in sorted(vars(args).items())
        if k not in ("func", "input", "fixture", "command", "output") and v is not None
    }
    provenance = outputs.get("provenance") or outputs.get("quotient", {}).get("provenance")
    if provenance is None:
        provenance = {"dr-dims": f"dr-{getattr(args, 'method', '')}"}.get(args.command, "exact")
    inputs = None
    if L is not None:
        inputs = {"source": L.source, "kind": L.kind, "digest": L.digest}
    return {
        "command": args.command,
        "tool_version": __version__,
        "inputs": inputs,
        "flags": flags,
        "status": status,
        "provenance": provenance,
        "outputs": outputs,
    }


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    L = None
    try:
        if args.command == "selfsim":
            if args.selfsim_cmd in ("act", "equiv") and not args.word:
                raise MalformedInputError("--word is required")
            if args.selfsim_cmd == "equiv" and not args.other:
                raise MalformedInputError("--other is required for equiv")
            if args.selfsim_cmd in ("act", "orbit") and not args.path:
                raise MalformedInputError("--path is required")
        if not (args.command == "ktheory" and args.adjacency is not None):
            L = _load(args)
        outputs, summary = args.func(args, L)
        code, status = EXIT_OK, "ok"
    except ValidationFailed as exc:
        outputs, summary, code, status = exc.outputs, str(exc), EXIT_INVALID, "validation-failure"
    except PreconditionError as exc:
        outputs, summary, code, status = {"error": str(exc)}, str(exc), EXIT_INVALID, "validation-failure"
    except MalformedInputError as exc:
        outputs, summary, code, status = {"error": str(exc)}, str(exc), EXIT_MALFORMED, "malformed-input"
    except ConsistencyError as exc:
        outputs, summary, code, status = {"error": str(exc)}, str(exc), EXIT_INTERNAL, "internal-consistency-failure"
    sys.stdout.write(canonical_json(_manifest(args, L, status, outputs)) + "\n")
    sys.stderr.write(f"[{args.command}] {status}: {summary}\n")
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
