"""Deterministic Graphviz DOT export."""

from __future__ import annotations

import numpy as np

from .doplicher_roberts import BratteliDiagram
from .graph import DirectedGraph
from .quotient import QuotientGraphReport


def _q(s: str) -> str:
    return '"' + str(s).replace("\\", "\\\\").replace('"', '\\"') + '"'


def graph_to_dot(E: DirectedGraph, name: str = "E") -> str:
    """Edges drawn source -> range, in edge-id order."""
    lines = [f"digraph {_q(name)} {{"]
    for v in E.vertex_labels:
        lines.append(f"  {_q(v)};")
    for e in range(E.n_edges):
        s, r = E.vertex_labels[int(E.e_src[e])], E.vertex_labels[int(E.e_rng[e])]
        lines.append(f"  {_q(s)} -> {_q(r)} [label={_q(E.edge_labels[e])}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def quotient_to_dot(report: QuotientGraphReport, name: str = "quotient") -> str:
    """``a[x][y]`` parallel edges drawn ``y -> x``; nodes carry block sizes."""
    labels = [f"O{p.orbit_index}:pi{p.irrep_index}" for p in report.spectrum]
    lines = [f"digraph {_q(name)} {{", f"  // provenance: {report.provenance}"]
    for lab, p in zip(labels, report.spectrum):
        lines.append(f"  {_q(lab)} [label={_q(f'{lab} (n={p.size})')}];")
    adj = np.asarray(report.adjacency)
    for x in range(adj.shape[0]):
        for y in range(adj.shape[1]):
            for _ in range(int(adj[x, y])):
                lines.append(f"  {_q(labels[y])} -> {_q(labels[x])};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def bratteli_to_dot(diagram: BratteliDiagram, name: str = "bratteli") -> str:
    """Levels as ranks; edge labels give multiplicities."""
    lines = [f"digraph {_q(name)} {{", "  rankdir=TB;"]
    for k, (labels, dims) in enumerate(diagram.levels):
        nodes = " ".join(_q(f"{k}:{lab}") for lab in labels)
        lines.append(f"  {{ rank=same; {nodes} }}")
        for lab, d in zip(labels, dims):
            lines.append(f"  {_q(f'{k}:{lab}')} [label={_q(f'{lab} [{d}]')}];")
    for k, M in enumerate(diagram.multiplicities):
        lo, hi = diagram.levels[k][0], diagram.levels[k + 1][0]
        for i, top in enumerate(hi):
            for j, bottom in enumerate(lo):
                if M[i, j]:
                    lines.append(f"  {_q(f'{k}:{bottom}')} -> {_q(f'{k + 1}:{top}')} [label={_q(M[i, j])}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
