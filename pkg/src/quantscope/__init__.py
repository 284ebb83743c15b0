"""Judging natural-language quantifiers under several competing semantics."""

from .engine import EvalConfig, MajoritySemantics, evaluate
from .explain import explain
from .judgment import Judgment, Verdict
from .kb import KnowledgeBase, Literal, validate
from .logic import QuantifierKind, Statement, contradictory, o_corner_paraphrases, opposition_corner
from .parser import parse_arith_formula, parse_kb, parse_statement

__all__ = [
    "EvalConfig", "MajoritySemantics", "evaluate", "explain", "Judgment", "Verdict",
    "KnowledgeBase", "Literal", "validate", "QuantifierKind", "Statement",
    "contradictory", "o_corner_paraphrases", "opposition_corner",
    "parse_arith_formula", "parse_kb", "parse_statement",
]
