"""Quantified statements and the square of opposition."""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Optional, Union

from .arith import ArithFormula, Not, render_formula

NAT = "Nat"


class QuantifierKind(enum.Enum):
    EACH = "each"          # distributive: ranges over the members of a collection
    EVERY = "every"        # generic: a claim about the generic element
    SOME = "some"
    NO = "no"
    NOT_ALL = "not_all"    # the unlexicalised fourth corner
    MAJORITY = "majority"

    @property
    def keyword(self) -> str:
        return self.value


class Corner(enum.Enum):
    A = "A"  # universal affirmative
    E = "E"  # universal negative
    I = "I"  # particular affirmative
    O = "O"  # particular negative


class LogicError(Exception):
    pass


class MajorityHasNoContradictoryCorner(LogicError):
    pass


class NotOCorner(LogicError):
    pass


@dataclass(frozen=True)
class Statement:
    """A quantifier applied to a restriction and a (possibly negated) body.

    ``restriction`` is a concept name or ``"Nat"``. ``body`` is a predicate
    name for concept restrictions and an :class:`ArithFormula` for ``Nat``.
    ``domain`` optionally narrows ``Nat`` to a definable subset.
    """

    quantifier: QuantifierKind
    restriction: str
    body: Union[str, ArithFormula]
    positive: bool = True
    domain: Optional[ArithFormula] = None

    @property
    def over_nat(self) -> bool:
        return self.restriction == NAT

    def __str__(self) -> str:
        return render_statement(self)


def render_statement(s: Statement) -> str:
    restriction = s.restriction
    if s.domain is not None:
        restriction = f"{NAT}[{render_formula(s.domain)}]"
    if isinstance(s.body, str):
        body = s.body if s.positive else "!" + s.body
    else:
        body = render_formula(s.body if s.positive else Not(s.body))
    return f"{s.quantifier.keyword} {restriction} {body}"


_CORNERS = {
    QuantifierKind.EACH: Corner.A,
    QuantifierKind.EVERY: Corner.A,
    QuantifierKind.NO: Corner.E,
    QuantifierKind.SOME: Corner.I,
    QuantifierKind.NOT_ALL: Corner.O,
}

_CONTRADICTORY = {
    QuantifierKind.EACH: QuantifierKind.NOT_ALL,
    QuantifierKind.EVERY: QuantifierKind.NOT_ALL,
    QuantifierKind.NOT_ALL: QuantifierKind.EACH,
    QuantifierKind.SOME: QuantifierKind.NO,
    QuantifierKind.NO: QuantifierKind.SOME,
}


def opposition_corner(s: Statement) -> Optional[Corner]:
    """The corner of the square occupied by ``s``; ``None`` for majority."""
    return _CORNERS.get(s.quantifier)


def contradictory(s: Statement) -> Statement:
    try:
        kind = _CONTRADICTORY[s.quantifier]
    except KeyError:
        raise MajorityHasNoContradictoryCorner(
            f"{s}: majority has no contradictory corner; use the dual quantifier"
        ) from None
    return replace(s, quantifier=kind)


THEME_NOTE = (
    "'not_all R b' and 'some R !b' are logically equivalent; "
    "they differ only in theme and focus"
)


def o_corner_paraphrases(s: Statement) -> tuple[Statement, Statement]:
    """Both surface forms of an O-corner claim: not-all and some-not."""
    if opposition_corner(s) is not Corner.O:
        raise NotOCorner(f"{s} is not at the O corner")
    return s, replace(s, quantifier=QuantifierKind.SOME, positive=not s.positive)
