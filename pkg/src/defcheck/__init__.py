"""Evaluate, model-check and decompose rule-set definitions over first-order structures."""

from .engine import (
    Exactness,
    Expansion,
    InductionTrace,
    Verdict,
    check_definition,
    check_program_model,
    check_split_equivalence,
    entails_literal,
    ground,
    immediate_consequence,
    induction_process,
    lhm,
    program_model_report,
    satisfies_def,
    satisfies_fo,
    unique_expansion,
)
from .model import (
    ConstructorSet,
    ExtensionalStructure,
    Relation,
    TermGeneratedStructure,
    find_isomorphism,
    herbrand_universe,
    satisfies_herbrand_axiom,
)
from .oracle import brute_force_minimal_check, clark_completion, enumerate_completion_models
from .parser import format_program, format_structure, parse_literal, parse_program, parse_structure
from .syntax import Definition, Program, Rule, classify, dependency_graph, is_inductive, stratify, validate_partition

__all__ = [name for name in dir() if not name.startswith("_")]
