"""Verdicts and the evidence that backs them."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .arith import CardinalityClass, DensityResult
from .kb import GenericDerivation, Literal
from .logic import Statement


class Verdict(enum.Enum):
    ASSERTED = "Asserted"
    REFUTED = "Refuted"
    UNDETERMINED = "Undetermined"
    DEGENERATE = "Degenerate"


Entity = Union[str, int]  # an individual name, or a natural number


@dataclass(frozen=True)
class Check:
    """One premise of an omega-rule proof: the sign an instance is known to have."""

    individual: Entity
    literal: Literal
    source: str  # "fact", "arithmetic", or the inherited axiom used


@dataclass(frozen=True)
class OmegaProof:
    literal: Literal
    checks: tuple[Check, ...]


@dataclass(frozen=True)
class GenericProof:
    derivation: GenericDerivation
    exceptions_checked: bool = True


@dataclass(frozen=True)
class AssertionSource:
    """The generic derivation a refuted universal claim was asserted from."""

    derivation: GenericDerivation


@dataclass(frozen=True)
class ExistentialWitness:
    check: Check


@dataclass(frozen=True)
class IndividualCounterexample:
    check: Check


@dataclass(frozen=True)
class ConceptualCounterexample:
    concept: str
    derivation: GenericDerivation
    restriction: str
    populated: bool


@dataclass(frozen=True)
class CardinalityComparison:
    positive: int
    negative: int
    unknown: int


@dataclass(frozen=True)
class CardinalityClasses:
    body: CardinalityClass
    complement: CardinalityClass


@dataclass(frozen=True)
class DegenerateCardinality:
    body: CardinalityClass
    complement: CardinalityClass


@dataclass(frozen=True)
class DensityEvidence:
    body: DensityResult
    base: Optional[DensityResult]
    relative: tuple[Fraction, ...]
    threshold: Fraction = Fraction(1, 2)
    margin: Optional[Fraction] = None


@dataclass(frozen=True)
class Encounter:
    prop: str
    witness: str
    kind: str  # "individual" or "concept"


@dataclass(frozen=True)
class EncounterProof:
    literal: Literal
    encounters: tuple[Encounter, ...]


@dataclass(frozen=True)
class DualRefutation:
    positive: int
    negative: int
    unknown: int


@dataclass(frozen=True)
class IncompatibilityRefutation:
    prop: str
    literal: Literal
    source: str


@dataclass(frozen=True)
class NoEvidence:
    reason: str


Evidence = Union[
    OmegaProof, GenericProof, AssertionSource, ExistentialWitness,
    IndividualCounterexample, ConceptualCounterexample, CardinalityComparison,
    CardinalityClasses, DegenerateCardinality, DensityEvidence, EncounterProof,
    DualRefutation, IncompatibilityRefutation, NoEvidence,
]


@dataclass(frozen=True)
class Judgment:
    """A verdict on ``statement`` with its primary evidence.

    ``trace`` lists every step in presentation order when more than the
    primary evidence is worth showing; ``evidence`` is always one of them.
    """

    statement: Statement
    verdict: Verdict
    evidence: Evidence
    semantics: str
    notes: tuple[str, ...] = ()
    trace: tuple[Evidence, ...] = field(default=())

    @property
    def steps(self) -> tuple[Evidence, ...]:
        return self.trace or (self.evidence,)
