"""Rendering judgments as text traces and as machine-readable key/value trees.

The machine format is line oriented.  Each line is ``path: value`` where
``path`` is a dot-separated walk through nested mappings and lists (list
items are addressed by index).  Mapping keys keep insertion order, so the
output is stable for a given judgment.
"""

from __future__ import annotations

import dataclasses
import enum
from fractions import Fraction
from typing import Any, Iterator

from .arith import CardinalityClass, DensityKind, DensityResult
from .judgment import (
    AssertionSource, CardinalityClasses, CardinalityComparison, Check,
    ConceptualCounterexample, DegenerateCardinality, DensityEvidence,
    DualRefutation, EncounterProof, ExistentialWitness, GenericProof,
    IncompatibilityRefutation, IndividualCounterexample, Judgment, NoEvidence,
    OmegaProof,
)
from .kb import GenericDerivation, Literal
from .logic import Statement


def format_ratio(r: Fraction) -> str:
    return repr(float(r))


def _check(c: Check) -> str:
    return f"{c.individual}: {c.literal} ({c.source})"


def density_lines(result: DensityResult, label: str = "") -> list[str]:
    prefix = f"{label} " if label else ""
    if result.kind is DensityKind.EXACT:
        return [f"{prefix}exact density {result.exact} (one period checked up to {result.sample_bound})"]
    lines = [f"{prefix}N={row.N} count={row.count} ratio={format_ratio(row.ratio)}" for row in result.rows]
    state = "converged" if result.converged else "not converged"
    lines.append(f"{prefix}{state} (epsilon {result.epsilon}, last three ratios)")
    return lines


def evidence_lines(e) -> list[str]:
    """One line per proof step."""
    if isinstance(e, OmegaProof):
        if not e.checks:
            return [f"omega rule: no instances, vacuously all {e.literal}"]
        return [f"omega rule: {_check(c)}" for c in e.checks]
    if isinstance(e, GenericProof):
        return [f"generic proof: {e.derivation}; no exception subconcept, no counterexample"]
    if isinstance(e, AssertionSource):
        return [f"assertion: {e.derivation}"]
    if isinstance(e, ExistentialWitness):
        return [f"witness: {_check(e.check)}"]
    if isinstance(e, IndividualCounterexample):
        return [f"individual refutation: {_check(e.check)}"]
    if isinstance(e, ConceptualCounterexample):
        where = e.concept if e.concept == e.restriction else f"{e.concept} <: {e.restriction}"
        return [f"conceptual refutation: {where} has {e.derivation.literal} by {e.derivation}"]
    if isinstance(e, CardinalityComparison):
        return [f"cardinality: {e.positive} known yes, {e.negative} known no, {e.unknown} unknown"]
    if isinstance(e, (CardinalityClasses, DegenerateCardinality)):
        return [f"cardinality: body {e.body}, complement {e.complement}"]
    if isinstance(e, DensityEvidence):
        lines = density_lines(e.body, "body")
        if e.base is not None:
            lines += density_lines(e.base, "restriction")
        if e.relative:
            bound = f" with margin {e.margin}" if e.margin is not None else ""
            lines.append(f"relative density {format_ratio(e.relative[-1])} ({e.relative[-1]}) "
                         f"against threshold {e.threshold}{bound}")
        return lines
    if isinstance(e, EncounterProof):
        return [f"encounter: majority property {x.prop} meets {e.literal} at {x.kind} {x.witness}"
                for x in e.encounters]
    if isinstance(e, DualRefutation):
        return [f"dual quantifier: {e.negative} known no >= {e.positive} known yes + {e.unknown} unknown"]
    if isinstance(e, IncompatibilityRefutation):
        return [f"incompatibility: majority property {e.prop} does not meet {e.literal} ({e.source})"]
    if isinstance(e, NoEvidence):
        return [f"no decision: {e.reason}"]
    raise TypeError(f"unknown evidence {e!r}")


def explain(j: Judgment) -> str:
    lines = [f"{j.statement}: {j.verdict.value} [{j.semantics}]"]
    for step in j.steps:
        lines += ["  " + line for line in evidence_lines(step)]
    lines += [f"  note: {note}" for note in j.notes]
    return "\n".join(lines) + "\n"


# -- machine format -------------------------------------------------------------


def to_tree(value: Any) -> Any:
    """Plain nested dicts/lists/strings for any judgment component."""
    if isinstance(value, (Statement, Literal, GenericDerivation, CardinalityClass)):
        tree = {"text": str(value)}
        if isinstance(value, GenericDerivation):
            tree["chain"] = list(value.chain)
        return tree
    if isinstance(value, DensityResult):
        tree = {"kind": value.kind.value, "sample_bound": str(value.sample_bound)}
        if value.exact is not None:
            tree["exact"] = str(value.exact)
        if value.rows:
            tree["rows"] = [{"N": str(r.N), "count": str(r.count), "ratio": format_ratio(r.ratio)}
                            for r in value.rows]
            tree["converged"] = str(value.converged).lower()
        return tree
    if dataclasses.is_dataclass(value):
        tree = {"type": type(value).__name__}
        for f in dataclasses.fields(value):
            tree[f.name] = to_tree(getattr(value, f.name))
        return tree
    if isinstance(value, (list, tuple)):
        return [to_tree(v) for v in value]
    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, bool):
        return str(value).lower()
    if value is None:
        return "none"
    return str(value)


def judgment_tree(j: Judgment) -> dict:
    tree = {
        "statement": str(j.statement),
        "verdict": j.verdict.value,
        "semantics": j.semantics,
        "evidence": to_tree(j.evidence),
    }
    if j.trace:
        tree["trace"] = to_tree(list(j.trace))
    tree["notes"] = list(j.notes)
    return tree


def flatten(tree: Any, prefix: str = "") -> Iterator[str]:
    if isinstance(tree, dict):
        for key, value in tree.items():
            yield from flatten(value, f"{prefix}.{key}" if prefix else key)
    elif isinstance(tree, list):
        if not tree:
            yield f"{prefix}: []"
        for i, value in enumerate(tree):
            yield from flatten(value, f"{prefix}.{i}")
    else:
        text = str(tree).replace("\\", "\\\\").replace("\n", "\\n")
        yield f"{prefix}: {text}"


def render_machine(tree: dict) -> str:
    return "\n".join(flatten(tree)) + "\n"
