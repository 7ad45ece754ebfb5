"""Graphviz DOT rendering of a plan."""

from __future__ import annotations

import json

from .plan import Plan

__all__ = ["to_dot", "BOUNDARY_NODE"]

BOUNDARY_NODE = "∂"


def _q(text: str) -> str:
    return json.dumps(text, ensure_ascii=False)


def _block_label(kind: str, params: dict) -> str:
    if kind == "SubPlanRef":
        inner = params["plan"]
        return f"{kind}\\n{len(inner.blocks)} blocks"
    shown = ", ".join(f"{k}={json.dumps(v, sort_keys=True)}" for k, v in sorted(params.items()))
    return f"{kind}\\n{shown}" if shown else kind


def to_dot(plan: Plan, name: str = "plan") -> str:
    """One node per block, one edge per gluing, residual slots as edges into the boundary node."""
    out = [f"graph {_q(name)} {{", "  node [shape=box];"]
    for b in plan.blocks:
        label = _block_label(b.kind, b.params).replace('"', "'")
        out.append(f'  {_q(b.id)} [label="{label}"];')
    for g in plan.gluings:
        w = g.witness
        label = f"{type(w).__name__} ({w.tier})"
        style = ", style=dashed" if w.tier == "necessary" else ""
        out.append(
            f"  {_q(g.a.block)} -- {_q(g.b.block)} "
            f"[label={_q(label)}, taillabel={_q(g.a.slot)}, headlabel={_q(g.b.slot)}{style}];"
        )
    if plan.residual:
        out.append(f"  {_q(BOUNDARY_NODE)} [shape=doublecircle];")
        for r, t in zip(plan.residual, plan.target):
            out.append(f"  {_q(r.block)} -- {_q(BOUNDARY_NODE)} [label={_q(str(t))}, taillabel={_q(r.slot)}];")
    out.append("}")
    return "\n".join(out) + "\n"
