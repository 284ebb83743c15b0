"""Parsers for statements, arithmetic formulas and ``.qkb`` knowledge bases.

Statement grammar::

    stmt        := quant restriction body
    quant       := "each" | "every" | "some" | "no" | "not_all" | "majority"
    restriction := IDENT | "Nat" ["[" formula "]"]
    body        := ["!"] IDENT          (concept restriction)
                 | formula              (Nat restriction)

Formula grammar, loosest first::

    formula := conj ("|" conj)*
    conj    := unary ("&" unary)*
    unary   := "!" unary | atom
    atom    := "prime" | INT "|" "n" | "n" "mod" INT "==" INT
             | "n" ("<" | "<=" | ">" | ">=") INT | "(" formula ")"

Knowledge bases are line based; ``#`` starts a comment::

    concept C [<: D, E ...]
    axiom C : [!]p
    individual x : C
    fact x : [!]p
    majority_props C : p1, p2, ...
    disjoint p q
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

from . import arith
from .arith import And, ArithFormula, Compare, Congruence, Divides, Not, Or, Prime
from .kb import Axiom, Fact, Individual, KnowledgeBase
from .logic import NAT, QuantifierKind, Statement


@dataclass(frozen=True)
class SourceSpan:
    line: int
    column: int
    length: int = 1

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


class ParseError(Exception):
    def __init__(self, span: SourceSpan, expected: Sequence[str], found: str):
        self.span = span
        self.expected = tuple(expected)
        self.found = found
        super().__init__(f"{span}: expected {_one_of(self.expected)}, found {found}")


class DomainError(ParseError, arith.DomainError):
    def __init__(self, span: SourceSpan, message: str):
        self.span = span
        self.expected = ("a value inside the domain",)
        self.found = message
        Exception.__init__(self, f"{span}: {message}")


class KBParseError(Exception):
    """Every malformed line of a knowledge base, in line order."""

    def __init__(self, errors: Sequence[ParseError]):
        self.errors = list(errors)
        super().__init__("\n".join(str(e) for e in self.errors))


def _one_of(expected: Sequence[str]) -> str:
    if len(expected) == 1:
        return expected[0]
    return "one of " + ", ".join(expected)


# -- tokens -------------------------------------------------------------------

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<int>[0-9]+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<sym><:|<=|>=|==|[<>!&|()\[\]:,])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # "int", "ident", "sym" or "eof"
    text: str
    span: SourceSpan

    def describe(self) -> str:
        return "end of input" if self.kind == "eof" else repr(self.text)


def tokenize(text: str, line: int = 1) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(SourceSpan(line, pos + 1), ["a token"], repr(text[pos]))
        if m.lastgroup != "ws":
            tokens.append(Token(m.lastgroup, m.group(), SourceSpan(line, pos + 1, m.end() - pos)))
        pos = m.end()
    tokens.append(Token("eof", "", SourceSpan(line, len(text) + 1)))
    return tokens


class _Cursor:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.i = 0

    @property
    def peek(self) -> Token:
        return self.tokens[self.i]

    def at(self, *texts: str) -> bool:
        tok = self.peek
        return tok.kind in ("sym", "ident") and tok.text in texts

    def advance(self) -> Token:
        tok = self.tokens[self.i]
        if tok.kind != "eof":
            self.i += 1
        return tok

    def fail(self, *expected: str) -> ParseError:
        return ParseError(self.peek.span, expected, self.peek.describe())

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise self.fail(repr(text))
        return self.advance()

    def ident(self, what: str) -> Token:
        if self.peek.kind != "ident":
            raise self.fail(what)
        return self.advance()

    def integer(self, what: str) -> tuple[int, Token]:
        if self.peek.kind != "int":
            raise self.fail(what)
        tok = self.advance()
        return int(tok.text), tok

    def end(self) -> None:
        if self.peek.kind != "eof":
            raise self.fail("end of input")


# -- formulas -----------------------------------------------------------------

_COMPARISONS = ("<", "<=", ">", ">=")
_FORMULA_START = ("'prime'", "an integer", "'n'", "'!'", "'('")


def _formula(cur: _Cursor) -> ArithFormula:
    f = _conj(cur)
    while cur.at("|"):
        cur.advance()
        f = Or(f, _conj(cur))
    return f


def _conj(cur: _Cursor) -> ArithFormula:
    f = _unary(cur)
    while cur.at("&"):
        cur.advance()
        f = And(f, _unary(cur))
    return f


def _unary(cur: _Cursor) -> ArithFormula:
    if cur.at("!"):
        cur.advance()
        return Not(_unary(cur))
    return _atom(cur)


def _atom(cur: _Cursor) -> ArithFormula:
    tok = cur.peek
    if cur.at("("):
        cur.advance()
        f = _formula(cur)
        cur.expect(")")
        return f
    if tok.kind == "ident" and tok.text == "prime":
        cur.advance()
        return Prime()
    if tok.kind == "int":
        k, k_tok = cur.integer("an integer")
        cur.expect("|")
        cur.expect("n")
        if k < 1:
            raise DomainError(k_tok.span, f"divisor must be >= 1, got {k}")
        return Divides(k)
    if tok.kind == "ident" and tok.text == "n":
        cur.advance()
        if cur.at("mod"):
            cur.advance()
            m, m_tok = cur.integer("a modulus")
            cur.expect("==")
            r, r_tok = cur.integer("a residue")
            if m < 1:
                raise DomainError(m_tok.span, f"modulus must be >= 1, got {m}")
            if r >= m:
                raise DomainError(r_tok.span, f"residue must be < {m}, got {r}")
            return Congruence(m, r)
        if cur.at(*_COMPARISONS):
            op = cur.advance().text
            c, _ = cur.integer("an integer")
            return Compare(op, c)
        raise cur.fail("'mod'", *(repr(op) for op in _COMPARISONS))
    raise cur.fail(*_FORMULA_START)


def parse_arith_formula(text: str) -> ArithFormula:
    cur = _Cursor(tokenize(text))
    f = _formula(cur)
    cur.end()
    return f


# -- statements ---------------------------------------------------------------

_QUANTIFIERS = {k.keyword: k for k in QuantifierKind}


def _statement(cur: _Cursor) -> Statement:
    tok = cur.peek
    if tok.kind != "ident" or tok.text not in _QUANTIFIERS:
        raise cur.fail(*(repr(k) for k in _QUANTIFIERS))
    quantifier = _QUANTIFIERS[cur.advance().text]
    restriction = cur.ident("a concept name or 'Nat'").text
    if restriction != NAT:
        positive = True
        if cur.at("!"):
            cur.advance()
            positive = False
        body = cur.ident("a predicate name").text
        cur.end()
        return Statement(quantifier, restriction, body, positive)
    domain = None
    if cur.at("["):
        cur.advance()
        domain = _formula(cur)
        cur.expect("]")
    formula = _formula(cur)
    cur.end()
    if isinstance(formula, Not):
        return Statement(quantifier, NAT, formula.arg, False, domain)
    return Statement(quantifier, NAT, formula, True, domain)


def parse_statement(text: str, line: int = 1) -> Statement:
    """Parse one statement, e.g. ``"every Dog may_bite"`` or ``"majority Nat !prime"``."""
    return _statement(_Cursor(tokenize(text, line)))


# -- knowledge bases ----------------------------------------------------------

_DIRECTIVES = ("concept", "axiom", "individual", "fact", "majority_props", "disjoint")


class _KBBuilder:
    def __init__(self):
        self.concepts: list[str] = []
        self.subsumptions: list[tuple[str, str]] = []
        self.axioms: list[Axiom] = []
        self.individuals: list[Individual] = []
        self.facts: list[Fact] = []
        self.majority_props: list[tuple[str, tuple[str, ...]]] = []
        self.disjoint: list[frozenset[str]] = []
        self.lines: dict[tuple, int] = {}

    def note(self, key: tuple, line: int) -> None:
        self.lines.setdefault(key, line)

    def build(self) -> KnowledgeBase:
        return KnowledgeBase(
            concepts=tuple(self.concepts),
            subsumptions=tuple(self.subsumptions),
            axioms=tuple(self.axioms),
            individuals=tuple(self.individuals),
            facts=tuple(self.facts),
            majority_props=tuple(self.majority_props),
            disjoint=tuple(self.disjoint),
            lines=self.lines,
        )


def _signed_name(cur: _Cursor, what: str) -> tuple[str, bool]:
    positive = True
    if cur.at("!"):
        cur.advance()
        positive = False
    return cur.ident(what).text, positive


def _kb_line(cur: _Cursor, kb: _KBBuilder, line: int) -> None:
    tok = cur.peek
    if tok.kind != "ident" or tok.text not in _DIRECTIVES:
        raise cur.fail(*(repr(d) for d in _DIRECTIVES))
    directive = cur.advance().text
    if directive == "concept":
        name = cur.ident("a concept name").text
        parents = []
        if cur.at("<:"):
            cur.advance()
            parents.append(cur.ident("a parent concept name").text)
            while cur.at(","):
                cur.advance()
                parents.append(cur.ident("a parent concept name").text)
        cur.end()
        if name not in kb.concepts:
            kb.concepts.append(name)
        kb.note(("concept", name), line)
        for parent in parents:
            kb.subsumptions.append((name, parent))
            kb.note(("subsumption", name, parent), line)
    elif directive == "axiom":
        concept = cur.ident("a concept name").text
        cur.expect(":")
        pred, positive = _signed_name(cur, "a predicate name")
        cur.end()
        kb.axioms.append(Axiom(concept, pred, positive))
        kb.note(("axiom", concept, pred, positive), line)
    elif directive == "individual":
        name = cur.ident("an individual name").text
        cur.expect(":")
        concept = cur.ident("a concept name").text
        cur.end()
        kb.individuals.append(Individual(name, concept))
        kb.note(("individual", name, concept), line)
    elif directive == "fact":
        name = cur.ident("an individual name").text
        cur.expect(":")
        pred, positive = _signed_name(cur, "a predicate name")
        cur.end()
        kb.facts.append(Fact(name, pred, positive))
        kb.note(("fact", name, pred, positive), line)
    elif directive == "majority_props":
        concept = cur.ident("a concept name").text
        cur.expect(":")
        props = [cur.ident("a predicate name").text]
        while cur.at(","):
            cur.advance()
            props.append(cur.ident("a predicate name").text)
        cur.end()
        kb.majority_props.append((concept, tuple(props)))
        kb.note(("majority_props", concept), line)
    else:
        p = cur.ident("a predicate name").text
        q = cur.ident("a predicate name").text
        cur.end()
        kb.disjoint.append(frozenset((p, q)))
        kb.note(("disjoint", p, q), line)


def parse_kb(text: str) -> KnowledgeBase:
    """Parse a ``.qkb`` document.

    Raises :class:`KBParseError` listing one error per malformed line.  The
    result is not validated here; see :func:`quantscope.kb.validate`.
    """
    kb = _KBBuilder()
    errors = []
    for number, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0]
        if not content.strip():
            continue
        try:
            _kb_line(_Cursor(tokenize(content, line=number)), kb, number)
        except ParseError as exc:
            errors.append(exc)
    if errors:
        raise KBParseError(errors)
    return kb.build()
