"""Block kinds, plan generators, plan composition and the independent verifier."""

from .blocks import BLOCK_KINDS, LANTERN_CHART, Block, expected_slots
from .generators import (
    EmptyWord,
    MalformedSequence,
    MoveSequence,
    MoveStep,
    gen_lantern_assembly,
    load_sequence,
    plan_cobordism,
    plan_surface_bundle,
    plan_torus_bundle,
)
from .plan import (
    Gluing,
    NotResidual,
    Plan,
    PlanFormatError,
    SlotRef,
    compose,
    dumps,
    load_plan,
    loads,
    plan_from_dict,
    plan_to_dict,
    save_plan,
)
from .dot import to_dot
from .verify import FAIL, PASS, PASS_NECESSARY, VerificationReport, verify, verify_document

__all__ = [
    "BLOCK_KINDS", "LANTERN_CHART", "Block", "expected_slots",
    "EmptyWord", "MalformedSequence", "MoveSequence", "MoveStep",
    "gen_lantern_assembly", "load_sequence", "plan_cobordism", "plan_surface_bundle", "plan_torus_bundle",
    "Gluing", "NotResidual", "Plan", "PlanFormatError", "SlotRef", "compose",
    "dumps", "load_plan", "loads", "plan_from_dict", "plan_to_dict", "save_plan",
    "to_dot", "FAIL", "PASS", "PASS_NECESSARY", "VerificationReport", "verify", "verify_document",
]
