import pytest
from hypothesis import given

from oracles import total_assignments
from quantscope.engine import evaluate
from quantscope.judgment import Verdict
from quantscope.kb import Fact, Individual, KnowledgeBase, Axiom
from quantscope.logic import (
    Corner, MajorityHasNoContradictoryCorner, NotOCorner, QuantifierKind,
    contradictory, o_corner_paraphrases, opposition_corner,
)
from quantscope.parser import parse_statement
from strategies import statements


def corner(text):
    return opposition_corner(parse_statement(text))


class TestCorners:
    @pytest.mark.parametrize("text, expected", [
        ("not_all Laureate deserves_award", Corner.O),
        ("each D P", Corner.A),
        ("every D P", Corner.A),
        ("some D P", Corner.I),
        ("no D P", Corner.E),
    ])
    def test_mapping(self, text, expected):
        assert corner(text) is expected

    def test_majority_has_no_corner(self):
        assert corner("majority Nat prime") is None

    def test_exactly_six_kinds(self):
        assert len(QuantifierKind) == 6


class TestContradictory:
    @pytest.mark.parametrize("text, expected", [
        ("each Laureate deserves", "not_all Laureate deserves"),
        ("not_all Laureate deserves", "each Laureate deserves"),
        ("some Dog may_bite", "no Dog may_bite"),
        ("no Dog may_bite", "some Dog may_bite"),
        ("every Dog may_bite", "not_all Dog may_bite"),
    ])
    def test_pairs(self, text, expected):
        assert contradictory(parse_statement(text)) == parse_statement(expected)

    def test_majority_rejected(self):
        with pytest.raises(MajorityHasNoContradictoryCorner):
            contradictory(parse_statement("majority Nat prime"))

    @given(statements())
    def test_involution(self, s):
        if s.quantifier in (QuantifierKind.MAJORITY, QuantifierKind.EVERY):
            return
        assert contradictory(contradictory(s)) == s


class TestParaphrases:
    def test_laureates(self):
        o = parse_statement("not_all Laureate deserves")
        assert o_corner_paraphrases(o) == (o, parse_statement("some Laureate !deserves"))

    def test_requires_o_corner(self):
        with pytest.raises(NotOCorner):
            o_corner_paraphrases(parse_statement("some Laureate deserves"))

    def test_empty_restriction_refutes_both(self):
        kb = KnowledgeBase(concepts=("Laureate",), axioms=(Axiom("Laureate", "deserves"),))
        for form in o_corner_paraphrases(parse_statement("not_all Laureate deserves")):
            assert evaluate(form, kb).verdict is Verdict.REFUTED

    def test_forms_agree_on_all_small_total_models(self):
        o = parse_statement("not_all C p")
        forms = o_corner_paraphrases(o)
        for facts in total_assignments(4):
            kb = _total_kb(facts)
            verdicts = {evaluate(f, kb).verdict for f in forms}
            assert len(verdicts) == 1, facts


def _total_kb(facts):
    names = [f"x{i}" for i in range(len(facts))]
    return KnowledgeBase(
        concepts=("C",),
        individuals=tuple(Individual(n, "C") for n in names),
        facts=tuple(Fact(n, "p", v) for n, v in zip(names, facts)),
        disjoint=(frozenset({"p", "q"}),),  # keeps p declared when there are no facts
    )


def test_exactly_one_of_each_contradictory_pair_on_total_models():
    for facts in total_assignments(4):
        kb = _total_kb(facts)
        v = {k: evaluate(parse_statement(f"{k} C p"), kb).verdict for k in ("each", "not_all", "no", "some")}
        assert [v["each"], v["not_all"]].count(Verdict.ASSERTED) == 1
        assert [v["no"], v["some"]].count(Verdict.ASSERTED) == 1
