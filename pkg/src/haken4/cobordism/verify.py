"""Independent plan checker.

Nothing here trusts the generators: block boundaries are recomputed from the
block parameters, every gluing is re-matched, and the slot bookkeeping,
connectivity and residual boundary are checked from scratch.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Mapping

from ..bundles import GluingError, UnknownChart, match_gluing
from ..mcg import ChartError, SurfaceChart, UnknownCurve
from ..sl2z import MalformedInput
from .blocks import BLOCK_KINDS, expected_slots
from .plan import Plan, PlanFormatError, SlotRef, labels_equal, plan_from_dict

__all__ = ["GluingCheck", "VerificationReport", "verify", "verify_document", "PASS", "PASS_NECESSARY", "FAIL"]

PASS = "pass"
PASS_NECESSARY = "pass-necessary-only"
FAIL = "fail"

_CHECK_ERRORS = (GluingError, UnknownChart, UnknownCurve, ChartError, MalformedInput)


@dataclass(frozen=True)
class GluingCheck:
    index: int
    a: SlotRef
    b: SlotRef
    witness: str
    ok: bool
    tier: str | None = None
    code: str | None = None
    message: str = ""

    @property
    def necessary_only(self) -> bool:
        return self.ok and self.tier == "necessary"


@dataclass
class VerificationReport:
    status: str = FAIL
    gluings: list[GluingCheck] = field(default_factory=list)
    connected: bool = False
    residual_match: bool = False
    necessary_relabels: int = 0
    diagnostics: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.status != FAIL

    @property
    def necessary_only_count(self) -> int:
        return sum(g.necessary_only for g in self.gluings) + self.necessary_relabels

    def render(self) -> str:
        lines = [f"status: {self.status}"]
        for g in self.gluings:
            if g.ok:
                flag = "  [necessary-condition only]" if g.necessary_only else ""
                lines.append(f"  gluing {g.index}: {g.a} <-> {g.b} via {g.witness}: ok ({g.tier}){flag}")
            else:
                lines.append(f"  gluing {g.index}: {g.a} <-> {g.b} via {g.witness}: FAIL {g.code}: {g.message}")
        lines.append(f"connected: {'yes' if self.connected else 'no'}")
        lines.append(f"residual matches target: {'yes' if self.residual_match else 'no'}")
        if self.necessary_only_count:
            lines.append(f"necessary-only witnesses: {self.necessary_only_count}")
        lines.extend(f"diagnostic: {d}" for d in self.diagnostics)
        return "\n".join(lines)


def _bipartite_match(n_left: int, n_right: int, ok) -> list[int] | None:
    """Perfect matching left -> right under predicate ``ok``, or None (Kuhn's algorithm)."""
    match_right: list[int | None] = [None] * n_right

    def augment(i: int, seen: set[int]) -> bool:
        for j in range(n_right):
            if j in seen or not ok(i, j):
                continue
            seen.add(j)
            if match_right[j] is None or augment(match_right[j], seen):
                match_right[j] = i
                return True
        return False

    if n_left != n_right:
        return None
    for i in range(n_left):
        if not augment(i, set()):
            return None
    out = [0] * n_left
    for j, i in enumerate(match_right):
        out[i] = j
    return out


def verify(plan: Plan, charts: Mapping[str, SurfaceChart] | None = None) -> VerificationReport:
    report = VerificationReport()
    diag = report.diagnostics
    registry = {**plan.charts, **(charts or {})}
    nested_necessary = 0

    # (1) blocks and their slot formulas
    ids = Counter(b.id for b in plan.blocks)
    for bid, n in ids.items():
        if n > 1:
            diag.append(f"duplicate block id {bid!r}")
    slots: dict[SlotRef, object] = {}
    for b in plan.blocks:
        sids = Counter(s.slot_id for s in b.slots)
        for sid, n in sids.items():
            if n > 1:
                diag.append(f"block {b.id!r}: duplicate slot id {sid!r}")
        for s in b.slots:
            slots[SlotRef(b.id, s.slot_id)] = s.label
        if b.kind not in BLOCK_KINDS:
            diag.append(f"block {b.id!r}: unknown kind {b.kind!r}")
            continue
        try:
            expected = expected_slots(b.kind, b.params, registry)
        except (*_CHECK_ERRORS, KeyError, TypeError, ValueError) as exc:
            diag.append(f"block {b.id!r}: bad parameters ({type(exc).__name__}: {exc})")
            continue
        got = [(s.slot_id, s.label) for s in b.slots]
        want = [(s.slot_id, s.label) for s in expected]
        if got != want:
            diag.append(f"block {b.id!r}: slot-formula mismatch, expected {_fmt(want)}, found {_fmt(got)}")
        if b.kind == "SubPlanRef":
            inner = verify(b.params["plan"], registry)
            if not inner.ok:
                diag.append(f"block {b.id!r}: nested plan fails verification")
            nested_necessary += inner.necessary_only_count

    # (2) gluings
    for i, g in enumerate(plan.gluings):
        wname = type(g.witness).__name__
        missing = [r for r in (g.a, g.b) if r not in slots]
        if missing:
            msg = ", ".join(str(r) for r in missing)
            report.gluings.append(GluingCheck(i, g.a, g.b, wname, False, code="unknown-slot", message=msg))
            continue
        try:
            res = match_gluing(slots[g.a], slots[g.b], g.witness, registry)
        except _CHECK_ERRORS as exc:
            code = getattr(exc, "code", "check-error")
            report.gluings.append(GluingCheck(i, g.a, g.b, wname, False, code=code, message=str(exc)))
            continue
        report.gluings.append(GluingCheck(i, g.a, g.b, wname, True, tier=res.tier))
    for g in report.gluings:
        if not g.ok:
            diag.append(f"gluing {g.index} ({g.a} <-> {g.b}): {g.code}: {g.message}")

    # (3) slot accounting
    uses = Counter()
    for g in plan.gluings:
        uses[g.a] += 1
        uses[g.b] += 1
    for r in plan.residual:
        uses[r] += 1
    for r, n in sorted(uses.items()):
        if r not in slots:
            diag.append(f"reference to unknown slot {r}")
        elif n > 1:
            diag.append(f"slot {r} used {n} times")
    for r in slots:
        if uses[r] == 0:
            diag.append(f"dangling slot {r}")

    # (4) connectivity of the gluing graph
    parent = {b.id: b.id for b in plan.blocks}

    def find(x: str) -> str:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in plan.gluings:
        if g.a.block in parent and g.b.block in parent:
            parent[find(g.a.block)] = find(g.b.block)
    report.connected = len({find(x) for x in parent}) <= 1
    if not report.connected:
        diag.append("gluing graph is not connected")

    # (5) residual boundary against the declared target
    known_residual = [r for r in plan.residual if r in slots]
    for r in plan.relabel:
        if r not in plan.residual:
            diag.append(f"relabel witness for non-residual slot {r}")
    tiers: dict[tuple[int, int], str] = {}

    def compatible(i: int, j: int) -> bool:
        r = known_residual[i]
        phys, tgt = slots[r], plan.target[j]
        if labels_equal(phys, tgt):
            tiers[(i, j)] = "exact"
            return True
        w = plan.relabel.get(r)
        if w is None:
            return False
        try:
            tiers[(i, j)] = match_gluing(phys.inverse(), tgt, w, registry).tier
        except _CHECK_ERRORS:
            return False
        return True

    matching = None
    if len(known_residual) == len(plan.residual):
        matching = _bipartite_match(len(known_residual), len(plan.target), compatible)
    report.residual_match = matching is not None
    if matching is None:
        shown = ", ".join(str(t) for t in plan.target)
        diag.append(f"residual slots do not match declared target [{shown}]")
    else:
        report.necessary_relabels = sum(tiers[(i, j)] == "necessary" for i, j in enumerate(matching))
    report.necessary_relabels += nested_necessary

    if diag:
        report.status = FAIL
    elif report.necessary_only_count:
        report.status = PASS_NECESSARY
    else:
        report.status = PASS
    return report


def verify_document(doc, charts: Mapping[str, SurfaceChart] | None = None) -> VerificationReport:
    """Verify a plan given as a parsed document; parse errors become a failing report."""
    try:
        plan = plan_from_dict(doc)
    except PlanFormatError as exc:
        return VerificationReport(status=FAIL, diagnostics=[f"parse error: {exc}"])
    return verify(plan, charts)


def _fmt(pairs) -> str:
    return "[" + ", ".join(f"{sid}={lab}" for sid, lab in pairs) + "]"
