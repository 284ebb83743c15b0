"""Knowledge bases: a concept taxonomy with generic axioms and individuals.

Facts are three-valued.  A missing fact is unknown, never false.  Generic
axioms are inherited down the taxonomy, and the axiom reached in the
fewest subsumption steps wins, so a subconcept may contradict its parent
(basset hounds do not bite although dogs may).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Optional

from .logic import NAT

TOP = "Thing"


class KBError(Exception):
    pass


class UnknownConcept(KBError, KeyError):
    def __str__(self):
        return f"unknown concept {self.args[0]!r}"


class UnknownPredicate(KBError, KeyError):
    def __str__(self):
        return f"unknown predicate {self.args[0]!r}"


class UnknownIndividual(KBError, KeyError):
    def __str__(self):
        return f"unknown individual {self.args[0]!r}"


class AmbiguousInheritance(KBError):
    def __init__(self, concept: str, predicate: str, sources: list["Axiom"]):
        self.concept = concept
        self.predicate = predicate
        self.sources = sources
        listed = ", ".join(str(a) for a in sources)
        super().__init__(f"{concept} inherits conflicting axioms for {predicate}: {listed}")


class InvalidKnowledgeBase(KBError):
    def __init__(self, report: "ValidationReport"):
        self.report = report
        super().__init__("; ".join(str(i) for i in report.errors))


@dataclass(frozen=True)
class Literal:
    predicate: str
    positive: bool = True

    def __neg__(self) -> "Literal":
        return Literal(self.predicate, not self.positive)

    def __str__(self) -> str:
        return self.predicate if self.positive else "!" + self.predicate


@dataclass(frozen=True)
class Axiom:
    concept: str
    predicate: str
    positive: bool = True

    @property
    def literal(self) -> Literal:
        return Literal(self.predicate, self.positive)

    def __str__(self) -> str:
        return f"{self.concept}: {self.literal}"


@dataclass(frozen=True)
class Individual:
    name: str
    concept: str


@dataclass(frozen=True)
class Fact:
    individual: str
    predicate: str
    positive: bool = True

    @property
    def literal(self) -> Literal:
        return Literal(self.predicate, self.positive)

    def __str__(self) -> str:
        return f"{self.individual}: {self.literal}"


@dataclass(frozen=True)
class GenericDerivation:
    """How a concept comes to carry a generic sign for a predicate.

    ``chain`` runs from the concept bearing the axiom down to ``concept``.
    """

    concept: str
    literal: Literal
    chain: tuple[str, ...]

    @property
    def axiom(self) -> Axiom:
        return Axiom(self.chain[0], self.literal.predicate, self.literal.positive)

    @property
    def inherited(self) -> bool:
        return len(self.chain) > 1

    def __str__(self) -> str:
        if self.inherited:
            return f"axiom {self.axiom} inherited along {' <: '.join(reversed(self.chain))}"
        return f"axiom {self.axiom}"


@dataclass(frozen=True)
class Issue:
    code: str
    message: str
    line: Optional[int] = None

    def __str__(self) -> str:
        where = f"line {self.line}: " if self.line is not None else ""
        return f"{where}{self.code}: {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    errors: tuple[Issue, ...] = ()
    warnings: tuple[Issue, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.errors


@dataclass(frozen=True)
class KnowledgeBase:
    concepts: tuple[str, ...] = ()
    subsumptions: tuple[tuple[str, str], ...] = ()  # (child, parent)
    axioms: tuple[Axiom, ...] = ()
    individuals: tuple[Individual, ...] = ()
    facts: tuple[Fact, ...] = ()
    majority_props: tuple[tuple[str, tuple[str, ...]], ...] = ()
    disjoint: tuple[frozenset[str], ...] = ()
    # declaration -> source line, filled in by the text parser
    lines: Mapping[tuple, int] = field(default_factory=dict, compare=False, hash=False, repr=False)

    # -- indexes ------------------------------------------------------------

    @cached_property
    def _concept_order(self) -> dict[str, int]:
        order = {TOP: -1}
        for c in self.concepts:
            order.setdefault(c, len(order))
        return order

    @cached_property
    def _parents(self) -> dict[str, tuple[str, ...]]:
        parents: dict[str, list[str]] = {c: [] for c in self._concept_order}
        for child, parent in self.subsumptions:
            if child in parents and parent in parents and parent not in parents[child]:
                parents[child].append(parent)
        for c, ps in parents.items():
            if c != TOP and not ps:
                ps.append(TOP)
        return {c: tuple(ps) for c, ps in parents.items()}

    @cached_property
    def _axioms(self) -> dict[tuple[str, str], list[Axiom]]:
        index: dict[tuple[str, str], list[Axiom]] = {}
        for a in self.axioms:
            bucket = index.setdefault((a.concept, a.predicate), [])
            if a not in bucket:
                bucket.append(a)
        return index

    @cached_property
    def _facts(self) -> dict[tuple[str, str], list[Fact]]:
        index: dict[tuple[str, str], list[Fact]] = {}
        for f in self.facts:
            bucket = index.setdefault((f.individual, f.predicate), [])
            if f not in bucket:
                bucket.append(f)
        return index

    @cached_property
    def _individuals(self) -> dict[str, str]:
        index: dict[str, str] = {}
        for ind in self.individuals:
            index.setdefault(ind.name, ind.concept)
        return index

    @cached_property
    def predicates(self) -> frozenset[str]:
        names = {a.predicate for a in self.axioms}
        names |= {f.predicate for f in self.facts}
        names |= {p for _, props in self.majority_props for p in props}
        names |= {p for pair in self.disjoint for p in pair}
        return frozenset(names)

    @cached_property
    def report(self) -> ValidationReport:
        return validate(self)

    # -- lookups ------------------------------------------------------------

    def has_concept(self, c: str) -> bool:
        return c in self._concept_order

    def _require_concept(self, c: str) -> None:
        if c not in self._concept_order:
            raise UnknownConcept(c)

    def _require_predicate(self, p: str) -> None:
        if p not in self.predicates:
            raise UnknownPredicate(p)

    def parents(self, c: str) -> tuple[str, ...]:
        self._require_concept(c)
        return self._parents[c]

    def concept_of(self, individual: str) -> str:
        try:
            return self._individuals[individual]
        except KeyError:
            raise UnknownIndividual(individual) from None

    def fact(self, individual: str, predicate: str) -> Optional[Fact]:
        """The recorded fact, or ``None`` when unknown."""
        found = self._facts.get((individual, predicate))
        return found[0] if found else None

    def axioms_on(self, c: str, predicate: str) -> list[Axiom]:
        return list(self._axioms.get((c, predicate), ()))

    def line_of(self, *key) -> Optional[int]:
        return self.lines.get(key)

    def ancestors(self, c: str) -> dict[str, int]:
        """Every ancestor of ``c`` (itself included) with its shortest distance."""
        self._require_concept(c)
        return dict(self._distances(c))

    def _distances(self, c: str) -> dict[str, int]:
        return self._ancestor_table[c][0]

    @cached_property
    def _ancestor_table(self) -> dict[str, tuple[dict[str, int], dict[str, str]]]:
        # breadth-first upward search per concept; parents visited in declaration order
        table = {}
        for c in self._concept_order:
            dist = {c: 0}
            via: dict[str, str] = {}
            queue = deque([c])
            while queue:
                cur = queue.popleft()
                for p in self._parents[cur]:
                    if p not in dist:
                        dist[p] = dist[cur] + 1
                        via[p] = cur
                        queue.append(p)
            table[c] = (dist, via)
        return table

    def subconcepts(self, c: str) -> list[str]:
        """Strict subconcepts of ``c`` in declaration order."""
        self._require_concept(c)
        return [d for d in self._concept_order if d != c and c in self._distances(d)]


# -- validation ---------------------------------------------------------------


def validate(kb: KnowledgeBase) -> ValidationReport:
    """Collect every structural problem in ``kb``.

    Errors make the knowledge base unusable for evaluation; warnings
    (ambiguous inheritance) only degrade the affected queries.
    """
    errors: list[Issue] = []
    declared = set(kb.concepts) | {TOP}

    if NAT in declared:
        errors.append(Issue("ReservedConcept", f"{NAT} names the built-in arithmetic domain",
                            kb.line_of("concept", NAT)))
    for child, parent in kb.subsumptions:
        for name in (child, parent):
            if name not in declared:
                errors.append(Issue("UnknownConcept", f"{child} <: {parent} mentions undeclared {name}",
                                    kb.line_of("subsumption", child, parent)))
    for cycle in _cycles(kb):
        line = kb.line_of("subsumption", cycle[0], cycle[1])
        errors.append(Issue("SubsumptionCycle", " <: ".join(cycle), line))

    seen_contradiction = set()
    for a in kb.axioms:
        if a.concept not in declared:
            errors.append(Issue("UnknownConcept", f"axiom on undeclared concept {a.concept}",
                                kb.line_of("axiom", a.concept, a.predicate, a.positive)))
        key = (a.concept, a.predicate)
        if key not in seen_contradiction and len(kb.axioms_on(*key)) > 1:
            seen_contradiction.add(key)
            errors.append(Issue("SameConceptContradiction",
                                f"{a.concept} carries both {a.predicate} and !{a.predicate}",
                                kb.line_of("axiom", a.concept, a.predicate, not a.positive)))

    first_concept: dict[str, str] = {}
    for ind in kb.individuals:
        if ind.concept not in declared:
            errors.append(Issue("UnknownConcept", f"individual {ind.name} of undeclared concept {ind.concept}",
                                kb.line_of("individual", ind.name, ind.concept)))
        prior = first_concept.setdefault(ind.name, ind.concept)
        if prior != ind.concept:
            errors.append(Issue("DuplicateIndividual", f"{ind.name} declared as both {prior} and {ind.concept}",
                                kb.line_of("individual", ind.name, ind.concept)))

    seen_facts = set()
    for f in kb.facts:
        if f.individual not in first_concept:
            errors.append(Issue("UnknownIndividual", f"fact about undeclared individual {f.individual}",
                                kb.line_of("fact", f.individual, f.predicate, f.positive)))
        key = (f.individual, f.predicate)
        if key not in seen_facts and len(kb._facts[key]) > 1:
            seen_facts.add(key)
            errors.append(Issue("ContradictoryFacts",
                                f"{f.individual} has both {f.predicate} and !{f.predicate}",
                                kb.line_of("fact", f.individual, f.predicate, not f.positive)))

    for c, _ in kb.majority_props:
        if c not in declared:
            errors.append(Issue("UnknownConcept", f"majority_props for undeclared concept {c}",
                                kb.line_of("majority_props", c)))

    warnings: list[Issue] = []
    if not errors:
        for c in kb._concept_order:
            for p in sorted(kb.predicates):
                try:
                    entails_generic(kb, c, p)
                except AmbiguousInheritance as exc:
                    warnings.append(Issue("AmbiguousInheritance", str(exc), kb.line_of("concept", c)))
    return ValidationReport(tuple(errors), tuple(warnings))


def _cycles(kb: KnowledgeBase) -> list[list[str]]:
    graph: dict[str, list[str]] = {}
    for child, parent in kb.subsumptions:
        graph.setdefault(child, [])
        if parent not in graph[child]:
            graph[child].append(parent)
    WHITE, GREY, BLACK = 0, 1, 2
    colour: dict[str, int] = {}
    found: list[list[str]] = []
    path: list[str] = []

    def visit(node: str) -> None:
        colour[node] = GREY
        path.append(node)
        for nxt in graph.get(node, ()):
            state = colour.get(nxt, WHITE)
            if state == GREY:
                found.append(path[path.index(nxt):] + [nxt])
            elif state == WHITE:
                visit(nxt)
        path.pop()
        colour[node] = BLACK

    for node in list(graph):
        if colour.get(node, WHITE) == WHITE:
            visit(node)
    return found


def ensure_valid(kb: KnowledgeBase) -> None:
    if not kb.report.ok:
        raise InvalidKnowledgeBase(kb.report)


# -- queries --------------------------------------------------------------------


def subsumes(kb: KnowledgeBase, ancestor: str, descendant: str) -> bool:
    kb._require_concept(ancestor)
    kb._require_concept(descendant)
    return ancestor in kb._distances(descendant)


def instances_of(kb: KnowledgeBase, c: str) -> list[str]:
    kb._require_concept(c)
    seen = set()
    out = []
    for ind in kb.individuals:
        if ind.name not in seen and ind.concept in kb._concept_order and c in kb._distances(ind.concept):
            seen.add(ind.name)
            out.append(ind.name)
    return out


def entails_generic(kb: KnowledgeBase, c: str, p: str) -> Optional[GenericDerivation]:
    """The generic sign of ``p`` on ``c``, from the nearest axiom-bearing ancestor.

    Returns ``None`` when no ancestor has an axiom for ``p``.  Among the
    nearest bearers, one that sits below another wins; incomparable bearers
    with opposite signs raise :class:`AmbiguousInheritance`.
    """
    kb._require_concept(c)
    kb._require_predicate(p)
    dist, via = kb._ancestor_table[c]
    bearers = [a for a in dist if kb.axioms_on(a, p)]
    if not bearers:
        return None
    nearest = min(dist[a] for a in bearers)
    tied = [a for a in bearers if dist[a] == nearest]
    tied = [a for a in tied if not any(b != a and a in kb._distances(b) for b in tied)]
    found = [kb.axioms_on(a, p)[0] for a in tied]
    if len({a.positive for a in found}) > 1:
        raise AmbiguousInheritance(c, p, found)
    bearer = tied[0]
    chain = [bearer]
    while chain[-1] != c:
        # walk back down the breadth-first tree toward c
        chain.append(via[chain[-1]])
    return GenericDerivation(c, found[0].literal, tuple(chain))


def exception_subconcepts(
    kb: KnowledgeBase, c: str, p: str, positive: bool = True
) -> list[tuple[str, GenericDerivation]]:
    """Strict subconcepts of ``c`` whose generic sign for ``p`` opposes ``positive``.

    Subconcepts with ambiguous inheritance are skipped.
    """
    kb._require_concept(c)
    out = []
    for d in kb.subconcepts(c):
        try:
            derivation = entails_generic(kb, d, p)
        except AmbiguousInheritance:
            continue
        if derivation is not None and derivation.literal.positive != positive:
            out.append((d, derivation))
    return out


def entailed_disjoint(kb: KnowledgeBase, p: Literal | str, q: Literal | str) -> bool:
    """True iff nothing can satisfy both literals.

    Holds for complementary literals and for declared-disjoint positive ones.
    """
    p = Literal(p) if isinstance(p, str) else p
    q = Literal(q) if isinstance(q, str) else q
    kb._require_predicate(p.predicate)
    kb._require_predicate(q.predicate)
    if p.predicate == q.predicate:
        return p.positive != q.positive
    if p.positive and q.positive:
        return frozenset((p.predicate, q.predicate)) in kb.disjoint
    return False


def majority_properties(kb: KnowledgeBase, c: str) -> list[str]:
    """The declared majority properties of ``c`` itself; ancestors are not consulted."""
    kb._require_concept(c)
    out: list[str] = []
    for concept, props in kb.majority_props:
        if concept == c:
            out.extend(p for p in props if p not in out)
    return out
