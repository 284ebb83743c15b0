"""Judging quantified statements.

Each quantifier has its own proof and refutation rules.  Over a concept,
``each`` is checked instance by instance (an omega rule), while ``every``
is proved from a generic axiom and refuted either by a counterexample
individual or by an exceptional subconcept.  ``majority`` can be read by
cardinality, by natural density, or by proof-theoretic rules built on the
concept's declared majority properties.

Unknown facts block both assertion and refutation.  Individuals without a
fact fall back on the generic sign of their concept, and the trace says so.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import arith
from .arith import And, ArithFormula, CardinalityKind, Not, render_formula
from .judgment import (
    AssertionSource, CardinalityClasses, CardinalityComparison, Check,
    ConceptualCounterexample, DegenerateCardinality, DensityEvidence,
    DualRefutation, Encounter, EncounterProof, ExistentialWitness,
    GenericProof, IncompatibilityRefutation, IndividualCounterexample,
    Judgment, NoEvidence, OmegaProof, Verdict,
)
from .kb import (
    AmbiguousInheritance, KnowledgeBase, Literal, ensure_valid,
    entailed_disjoint, entails_generic, exception_subconcepts,
    instances_of, majority_properties,
)
from .logic import NAT, THEME_NOTE, QuantifierKind, Statement

HALF = Fraction(1, 2)
DEGENERATE_NOTE = "equal infinite cardinality: cardinality semantics cannot decide"
KNOWLEDGE_NOTE = "some knowledge is required: no majority properties are declared for {}"


class EvaluationError(Exception):
    pass


class UnresolvableSymbol(EvaluationError):
    pass


class InfiniteRestriction(EvaluationError):
    pass


class SemanticsUnavailable(EvaluationError):
    pass


class MajoritySemantics(enum.Enum):
    CARDINALITY = "cardinality"
    DENSITY = "density"
    PROOF_THEORETIC = "proof_theoretic"


@dataclass(frozen=True)
class EvalConfig:
    majority_semantics: Optional[MajoritySemantics] = None  # None: by restriction
    search_bound: int = 10**6
    schedule: tuple[int, ...] = arith.DEFAULT_SCHEDULE
    epsilon: float = arith.DEFAULT_EPSILON
    margin: float = 0.02


# -- instance scanning ----------------------------------------------------------


def known_sign(kb: KnowledgeBase, individual: str, predicate: str) -> Optional[Check]:
    """What is known about ``predicate`` of ``individual``: a fact, else a generic default."""
    fact = kb.fact(individual, predicate)
    if fact is not None:
        return Check(individual, fact.literal, "fact")
    try:
        derivation = entails_generic(kb, kb.concept_of(individual), predicate)
    except AmbiguousInheritance:
        return None
    if derivation is None:
        return None
    return Check(individual, derivation.literal, f"default from {derivation}")


@dataclass
class _Scan:
    instances: list[str]
    agree: list[Check]
    disagree: list[Check]
    unknown: list[str]


def _scan(kb: KnowledgeBase, c: str, lit: Literal) -> _Scan:
    scan = _Scan(instances_of(kb, c), [], [], [])
    for x in scan.instances:
        check = known_sign(kb, x, lit.predicate)
        if check is None:
            scan.unknown.append(x)
        elif check.literal == lit:
            scan.agree.append(check)
        else:
            scan.disagree.append(check)
    return scan


def _default_notes(checks: Sequence[Check]) -> list[str]:
    return [f"{c.individual} has no fact for {c.literal.predicate}; used the {c.source}"
            for c in checks if c.source != "fact"]


def _resolve(kb: KnowledgeBase, c: str, lit: Literal) -> None:
    if c == NAT:
        raise InfiniteRestriction(
            "the omega rule over all of Nat is not executable; use density or a bounded check"
        )
    if not kb.has_concept(c):
        raise UnresolvableSymbol(f"unknown concept {c!r}")
    if lit.predicate not in kb.predicates:
        raise UnresolvableSymbol(f"unknown predicate {lit.predicate!r}")


def _statement(kind: QuantifierKind, c: str, lit: Literal) -> Statement:
    return Statement(kind, c, lit.predicate, lit.positive)


def _undetermined_unknown(s: Statement, scan: _Scan, semantics: str, what: str) -> Judgment:
    reason = f"{what}; unknown for {', '.join(scan.unknown)}"
    return Judgment(s, Verdict.UNDETERMINED, NoEvidence(reason), semantics)


# -- universal, existential and negative corners over concepts -----------------------


def evaluate_distributive(kb: KnowledgeBase, c: str, lit: Literal) -> Judgment:
    """``each c lit``: one premise per instance."""
    _resolve(kb, c, lit)
    s = _statement(QuantifierKind.EACH, c, lit)
    scan = _scan(kb, c, lit)
    if scan.disagree:
        first = scan.disagree[0]
        return Judgment(s, Verdict.REFUTED, IndividualCounterexample(first),
                        "distributive", tuple(_default_notes([first])))
    if scan.unknown:
        return _undetermined_unknown(s, scan, "distributive", "no counterexample")
    notes = _default_notes(scan.agree)
    if not scan.instances:
        notes.append(f"vacuously true: {c} has no instances")
    return Judgment(s, Verdict.ASSERTED, OmegaProof(lit, tuple(scan.agree)),
                    "distributive", tuple(notes))


def evaluate_generic(kb: KnowledgeBase, c: str, lit: Literal) -> Judgment:
    """``every c lit``: proved from the concept, refuted conceptually or individually."""
    _resolve(kb, c, lit)
    s = _statement(QuantifierKind.EVERY, c, lit)
    try:
        derivation = entails_generic(kb, c, lit.predicate)
    except AmbiguousInheritance as exc:
        return Judgment(s, Verdict.UNDETERMINED, NoEvidence("ambiguous inheritance"),
                        "generic", (f"warning: {exc}",))
    if derivation is None:
        reason = f"no generic axiom for {lit.predicate} on {c} or its ancestors"
        return Judgment(s, Verdict.UNDETERMINED, NoEvidence(reason), "generic")

    individuals = _scan(kb, c, lit).disagree
    individual_notes = [f"individual counterexample: {x.individual}: {x.literal} ({x.source})"
                        for x in individuals]

    if derivation.literal != lit:
        own = ConceptualCounterexample(c, derivation, c, bool(instances_of(kb, c)))
        trace = (own, *(IndividualCounterexample(x) for x in individuals[:1]))
        return Judgment(s, Verdict.REFUTED, own, "generic", tuple(individual_notes), trace)

    exceptions = exception_subconcepts(kb, c, lit.predicate, lit.positive)
    trace = [AssertionSource(derivation)]
    if individuals:
        trace.append(IndividualCounterexample(individuals[0]))
    if exceptions:
        sub, sub_derivation = exceptions[0]
        conceptual = ConceptualCounterexample(sub, sub_derivation, c, bool(instances_of(kb, sub)))
        trace.append(conceptual)
        notes = list(individual_notes)
        if individuals:
            notes.append("conceptual refutation shown as primary evidence ahead of the individual one")
        if not conceptual.populated:
            notes.append(f"{sub} has no instances; an empty exception concept still refutes")
        notes.extend(f"further exception: {d}" for d, _ in exceptions[1:])
        return Judgment(s, Verdict.REFUTED, conceptual, "generic", tuple(notes), tuple(trace))
    if individuals:
        return Judgment(s, Verdict.REFUTED, trace[1], "generic",
                        tuple(individual_notes[1:]), tuple(trace))
    return Judgment(s, Verdict.ASSERTED, GenericProof(derivation), "generic")


def evaluate_exists(kb: KnowledgeBase, c: str, lit: Literal) -> Judgment:
    _resolve(kb, c, lit)
    s = _statement(QuantifierKind.SOME, c, lit)
    scan = _scan(kb, c, lit)
    if scan.agree:
        first = scan.agree[0]
        return Judgment(s, Verdict.ASSERTED, ExistentialWitness(first),
                        "existential", tuple(_default_notes([first])))
    if scan.unknown:
        return _undetermined_unknown(s, scan, "existential", "no witness")
    notes = _default_notes(scan.disagree)
    if not scan.instances:
        notes.append(f"{c} has no instances: no witness exists")
    return Judgment(s, Verdict.REFUTED, OmegaProof(-lit, tuple(scan.disagree)),
                    "existential", tuple(notes))


def evaluate_no(kb: KnowledgeBase, c: str, lit: Literal) -> Judgment:
    _resolve(kb, c, lit)
    s = _statement(QuantifierKind.NO, c, lit)
    scan = _scan(kb, c, lit)
    if scan.agree:
        first = scan.agree[0]
        return Judgment(s, Verdict.REFUTED, IndividualCounterexample(first),
                        "negative-universal", tuple(_default_notes([first])))
    if scan.unknown:
        return _undetermined_unknown(s, scan, "negative-universal", "no counterexample")
    notes = _default_notes(scan.disagree)
    if not scan.instances:
        notes.append(f"vacuously true: {c} has no instances")
    return Judgment(s, Verdict.ASSERTED, OmegaProof(-lit, tuple(scan.disagree)),
                    "negative-universal", tuple(notes))


def evaluate_not_all(kb: KnowledgeBase, c: str, lit: Literal) -> Judgment:
    _resolve(kb, c, lit)
    s = _statement(QuantifierKind.NOT_ALL, c, lit)
    scan = _scan(kb, c, lit)
    notes = [THEME_NOTE]
    if scan.disagree:
        first = scan.disagree[0]
        return Judgment(s, Verdict.ASSERTED, ExistentialWitness(first),
                        "not-all", tuple(_default_notes([first]) + notes))
    if scan.unknown:
        j = _undetermined_unknown(s, scan, "not-all", "no witness")
        return Judgment(j.statement, j.verdict, j.evidence, j.semantics, tuple(notes))
    notes = _default_notes(scan.agree) + notes
    if not scan.instances:
        notes.append(f"{s.restriction} has no instances: no witness exists")
    return Judgment(s, Verdict.REFUTED, OmegaProof(lit, tuple(scan.agree)),
                    "not-all", tuple(notes))


# -- the same corners over Nat, by bounded search ---------------------------------


def _nat_formula(s: Statement) -> ArithFormula:
    f = s.body if s.positive else Not(s.body)
    return f if s.domain is None else And(s.domain, f)


def _nat_complement(s: Statement) -> ArithFormula:
    f = s.body if not s.positive else Not(s.body)
    return f if s.domain is None else And(s.domain, f)


def _nat_literal(f: ArithFormula) -> Literal:
    return Literal(render_formula(f))


def _evaluate_nat_corner(s: Statement, cfg: EvalConfig) -> Judgment:
    bound = cfg.search_bound
    semantics = "bounded-search"
    want_positive = s.quantifier in (QuantifierKind.SOME, QuantifierKind.NO)
    target = _nat_formula(s) if want_positive else _nat_complement(s)
    n = arith.first_witness(target, bound)
    lit = _nat_literal(s.body if s.positive == want_positive else Not(s.body))
    if n is None:
        if s.quantifier in (QuantifierKind.SOME, QuantifierKind.NOT_ALL):
            reason = f"no witness up to {bound}; bounded search never refutes"
        else:
            reason = (f"no counterexample up to {bound}; the omega rule over Nat is not "
                      "executable, use density or a bounded check")
        return Judgment(s, Verdict.UNDETERMINED, NoEvidence(reason), semantics)
    check = Check(n, lit, "arithmetic")
    if s.quantifier in (QuantifierKind.SOME, QuantifierKind.NOT_ALL):
        notes = (THEME_NOTE,) if s.quantifier is QuantifierKind.NOT_ALL else ()
        return Judgment(s, Verdict.ASSERTED, ExistentialWitness(check), semantics, notes)
    return Judgment(s, Verdict.REFUTED, IndividualCounterexample(check), semantics)


# -- majority ---------------------------------------------------------------------


def majority_by_cardinality(s: Statement, kb: Optional[KnowledgeBase] = None,
                            cfg: EvalConfig = EvalConfig()) -> Judgment:
    """``|A| > |M - A|``, counted over instances or classified over Nat."""
    if s.over_nat:
        inside = arith.cardinality_class(_nat_formula(s), cfg.search_bound)
        outside = arith.cardinality_class(_nat_complement(s), cfg.search_bound)
        if inside.infinite and outside.infinite:
            return Judgment(s, Verdict.DEGENERATE, DegenerateCardinality(inside, outside),
                            "cardinality", (DEGENERATE_NOTE,))
        evidence = CardinalityClasses(inside, outside)
        if CardinalityKind.UNKNOWN_BEYOND_PROBE in (inside.kind, outside.kind):
            return Judgment(s, Verdict.UNDETERMINED, evidence, "cardinality",
                            ("a finite count lies beyond the probe bound",))
        if inside.infinite:
            verdict = Verdict.ASSERTED
        elif outside.infinite:
            verdict = Verdict.REFUTED
        else:
            verdict = Verdict.ASSERTED if inside.count > outside.count else Verdict.REFUTED
        return Judgment(s, verdict, evidence, "cardinality")

    lit = Literal(s.body, s.positive)
    _resolve(kb, s.restriction, lit)
    scan = _scan(kb, s.restriction, lit)
    a, b, u = len(scan.agree), len(scan.disagree), len(scan.unknown)
    evidence = CardinalityComparison(a, b, u)
    notes = tuple(_default_notes(scan.agree + scan.disagree))
    if a > b + u:
        return Judgment(s, Verdict.ASSERTED, evidence, "cardinality", notes)
    if b >= a + u:
        return Judgment(s, Verdict.REFUTED, evidence, "cardinality", notes)
    return Judgment(s, Verdict.UNDETERMINED, evidence, "cardinality",
                    notes + (f"{u} unknown instance(s) could swing the count",))


def _monotone(values: Sequence[Fraction], rising: bool) -> bool:
    pairs = zip(values, values[1:])
    return all(b >= a for a, b in pairs) if rising else all(b <= a for a, b in pairs)


def majority_by_density(s: Statement, cfg: EvalConfig = EvalConfig()) -> Judgment:
    """Relative natural density of the body within the restriction, against one half.

    Prime-free formulas get an exact rational verdict.  Otherwise the
    prefix ratios along ``cfg.schedule`` must clear one half by
    ``cfg.margin`` and either have converged or be moving away from one half.
    """
    if not s.over_nat:
        raise SemanticsUnavailable("density semantics needs the Nat restriction")
    body = _nat_formula(s)
    base_formula = s.domain
    semantics = "density"
    measure_note = "measure: natural density"
    exact = not arith.mentions_prime(body) and (
        base_formula is None or not arith.mentions_prime(base_formula))

    if exact:
        inside = arith.exact_density(body)
        base = arith.exact_density(base_formula) if base_formula is not None else None
        base_value = base.exact if base is not None else Fraction(1)
        if base_value == 0:
            evidence = DensityEvidence(inside, base, ())
            return Judgment(s, Verdict.DEGENERATE, evidence, semantics,
                            ("the restriction has density 0; relative density is undefined", measure_note))
        d = inside.exact / base_value
        evidence = DensityEvidence(inside, base, (d,))
        verdict = Verdict.ASSERTED if d > HALF else Verdict.REFUTED
        return Judgment(s, verdict, evidence, semantics, (measure_note + " (exact)",))

    margin = Fraction(str(cfg.margin))
    if base_formula is not None and not arith.mentions_prime(base_formula):
        base = arith.exact_density(base_formula)
        if base.exact == 0:
            return Judgment(s, Verdict.DEGENERATE, DensityEvidence(base, None, ()), semantics,
                            ("the restriction has density 0; relative density is undefined", measure_note))
    inside = arith.estimate_density(body, cfg.schedule, cfg.epsilon)
    base = (arith.estimate_density(base_formula, cfg.schedule, cfg.epsilon)
            if base_formula is not None else None)
    denominators = [r.count for r in base.rows] if base is not None else [r.N for r in inside.rows]
    if denominators[-1] == 0:
        evidence = DensityEvidence(inside, base, (), margin=margin)
        return Judgment(s, Verdict.DEGENERATE, evidence, semantics,
                        ("the restriction is empty at every checkpoint; relative density is undefined",
                         measure_note))
    relative = tuple(Fraction(r.count, d) for r, d in zip(inside.rows, denominators) if d)
    evidence = DensityEvidence(inside, base, relative, margin=margin)
    settled = arith.converged(relative, cfg.epsilon)
    last = relative[-1]
    notes = [measure_note + " (estimated from prefix ratios)"]
    if last >= HALF + margin and (settled or _monotone(relative, rising=True)):
        return Judgment(s, Verdict.ASSERTED, evidence, semantics, tuple(notes))
    if last <= HALF - margin and (settled or _monotone(relative, rising=False)):
        return Judgment(s, Verdict.REFUTED, evidence, semantics, tuple(notes))
    notes.append("ratios neither settled nor moving away from one half by the margin")
    return Judgment(s, Verdict.UNDETERMINED, evidence, semantics, tuple(notes))


def _encounter(kb: KnowledgeBase, c: str, prop: str, lit: Literal) -> Optional[Encounter]:
    want = Literal(prop)
    for x in instances_of(kb, c):
        b = known_sign(kb, x, prop)
        a = known_sign(kb, x, lit.predicate)
        if b is not None and a is not None and b.literal == want and a.literal == lit:
            return Encounter(prop, x, "individual")
    for d in [c, *kb.subconcepts(c)]:
        try:
            b = entails_generic(kb, d, prop)
            a = entails_generic(kb, d, lit.predicate)
        except AmbiguousInheritance:
            continue
        if b is not None and a is not None and b.literal == want and a.literal == lit:
            return Encounter(prop, d, "concept")
    return None


def majority_proof_theoretic(kb: KnowledgeBase, c: str, lit: Literal) -> Judgment:
    """Majority from declared majority properties.

    Refuted when a majority property cannot meet the body, or when the
    known instances already show that at most half satisfy it.  Asserted
    when every majority property meets the body at some witness.
    """
    _resolve(kb, c, lit)
    s = _statement(QuantifierKind.MAJORITY, c, lit)
    semantics = "proof-theoretic"
    props = majority_properties(kb, c)
    for prop in props:
        if entailed_disjoint(kb, Literal(prop), lit):
            source = ("complementary literals" if prop == lit.predicate
                      else f"declared disjoint {prop} {lit.predicate}")
            return Judgment(s, Verdict.REFUTED, IncompatibilityRefutation(prop, lit, source), semantics)

    scan = _scan(kb, c, lit)
    a, b, u = len(scan.agree), len(scan.disagree), len(scan.unknown)
    if scan.instances and b >= a + u:
        return Judgment(s, Verdict.REFUTED, DualRefutation(a, b, u), semantics,
                        ("at most half, and a majority is strict",))
    if not props:
        return Judgment(s, Verdict.UNDETERMINED, NoEvidence("no majority properties"),
                        semantics, (KNOWLEDGE_NOTE.format(c),))
    encounters = []
    for prop in props:
        found = _encounter(kb, c, prop, lit)
        if found is None:
            return Judgment(s, Verdict.UNDETERMINED,
                            NoEvidence(f"majority property {prop} meets {lit} nowhere in {c}"), semantics)
        encounters.append(found)
    return Judgment(s, Verdict.ASSERTED, EncounterProof(lit, tuple(encounters)), semantics,
                    ("the majority properties are not checked to jointly cover the concept",))


# -- dispatch -----------------------------------------------------------------------

_CONCEPT_EVALUATORS = {
    QuantifierKind.EACH: evaluate_distributive,
    QuantifierKind.EVERY: evaluate_generic,
    QuantifierKind.SOME: evaluate_exists,
    QuantifierKind.NO: evaluate_no,
    QuantifierKind.NOT_ALL: evaluate_not_all,
}


def evaluate(s: Statement, kb: Optional[KnowledgeBase] = None, cfg: EvalConfig = EvalConfig()) -> Judgment:
    kb = kb if kb is not None else KnowledgeBase()
    ensure_valid(kb)
    semantics = cfg.majority_semantics

    if s.over_nat:
        if isinstance(s.body, str):
            raise UnresolvableSymbol(f"{s.body!r} is not an arithmetic formula")
        if s.quantifier is not QuantifierKind.MAJORITY:
            return _evaluate_nat_corner(s, cfg)
        if semantics is MajoritySemantics.PROOF_THEORETIC:
            raise SemanticsUnavailable("proof-theoretic majority needs a concept with majority properties")
        if semantics is MajoritySemantics.CARDINALITY:
            return majority_by_cardinality(s, kb, cfg)
        return majority_by_density(s, cfg)

    if not isinstance(s.body, str) or s.domain is not None:
        raise UnresolvableSymbol(f"{s}: arithmetic formulas need the Nat restriction")
    lit = Literal(s.body, s.positive)
    if s.quantifier is not QuantifierKind.MAJORITY:
        return _CONCEPT_EVALUATORS[s.quantifier](kb, s.restriction, lit)
    if semantics is MajoritySemantics.PROOF_THEORETIC:
        return majority_proof_theoretic(kb, s.restriction, lit)
    j = majority_by_cardinality(s, kb, cfg)
    if semantics is MajoritySemantics.DENSITY:
        note = f"density needs an infinite arithmetic domain; {s.restriction} is finite, used cardinality"
        return Judgment(j.statement, j.verdict, j.evidence, j.semantics, (note, *j.notes), j.trace)
    return j
