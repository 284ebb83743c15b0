"""End-to-end acceptance checks, one test per criterion.

Each test prints a single ``criterion N: PASS|FAIL ...`` line to the
terminal, even when pytest captures output.
"""

import random
import re
import subprocess
import sys
import time
from fractions import Fraction
from itertools import product

from conftest import GOLDEN_DIR, KB_DIR, load_kb
from oracles import bytearray_prime_counts, total_assignments, truth_table
from quantscope.arith import (
    And, Compare, Congruence, Divides, Not, Or, estimate_density, exact_density,
)
from quantscope.cli import main
from quantscope.engine import (
    DEGENERATE_NOTE, EvalConfig, MajoritySemantics, evaluate,
    evaluate_distributive, evaluate_generic,
)
from quantscope.explain import explain, judgment_tree, render_machine
from quantscope.judgment import (
    ConceptualCounterexample, IndividualCounterexample, Verdict,
)
from quantscope.kb import Literal
from quantscope.logic import QuantifierKind, Statement
from quantscope.parser import parse_kb, parse_statement

A, R = Verdict.ASSERTED, Verdict.REFUTED
CORNERS = ("each", "some", "no", "not_all")


def report(capsys, number, title, failures, detail=""):
    status = "PASS" if not failures else "FAIL"
    line = f"criterion {number}: {status} {title}"
    if detail:
        line += f" ({detail})"
    with capsys.disabled():
        print(f"\n{line}")
        for failure in failures[:5]:
            print(f"    {failure}")
    assert not failures, failures


def family_kb(facts, extra=""):
    # majority_props declares p even when there are no individuals; no
    # evaluator checked here reads it
    text = "concept C\nmajority_props C : p\n" + extra
    for i, value in enumerate(facts):
        text += f"individual x{i} : C\nfact x{i} : {'' if value else '!'}p\n"
    return parse_kb(text)


def test_prime_density_reproduction(capsys):
    expected = bytearray_prime_counts([10**3, 10**4, 10**5, 10**6])
    start = time.perf_counter()
    proc = subprocess.run([sys.executable, "-m", "quantscope", "density", "prime"],
                          capture_output=True, text=True)
    elapsed = time.perf_counter() - start
    rows = re.findall(r"N=(\d+) count=(\d+) ratio=([0-9.e-]+)", proc.stdout)
    counts = [int(c) for _, c, _ in rows]
    ratios = [Fraction(int(c), int(n)) for n, c, _ in rows]
    failures = []
    if proc.returncode != 0:
        failures.append(f"exit code {proc.returncode}: {proc.stderr.strip()}")
    if [int(n) for n, _, _ in rows] != [10**3, 10**4, 10**5, 10**6]:
        failures.append(f"checkpoints {[n for n, _, _ in rows]}")
    if counts != expected or counts != [168, 1229, 9592, 78498]:
        failures.append(f"counts {counts}, oracle {expected}")
    if not all(b < a for a, b in zip(ratios, ratios[1:])):
        failures.append(f"ratios not strictly decreasing: {ratios}")
    if elapsed >= 5:
        failures.append(f"took {elapsed:.2f}s")
    report(capsys, 1, "prime density counts 168/1229/9592/78498, decreasing ratios",
           failures, f"{elapsed:.2f}s")


def test_prime_sentence_pair(capsys):
    cases = [
        ("majority Nat prime", [], 1),
        ("majority Nat !prime", [], 0),
        ("majority Nat prime", ["--semantics", "cardinality"], 3),
        ("majority Nat !prime", ["--semantics", "cardinality"], 3),
    ]
    failures = []
    codes = []
    for text, flags, code in cases:
        got = main(["eval", "-", text, *flags])
        out = capsys.readouterr().out
        codes.append(got)
        if got != code:
            failures.append(f"{text} {flags}: exit {got}, wanted {code}")
        if flags and DEGENERATE_NOTE not in out:
            failures.append(f"{text} {flags}: missing note {DEGENERATE_NOTE!r}")
    for text, verdict in [("majority Nat prime", R), ("majority Nat !prime", A)]:
        j = evaluate(parse_statement(text), cfg=EvalConfig(MajoritySemantics.DENSITY))
        if j.verdict is not verdict:
            failures.append(f"{text} under density: {j.verdict.value}")
    report(capsys, 2, "prime/non-prime majority under density and cardinality",
           failures, "exit codes " + "/".join(map(str, codes)))


def test_dog_dialogue_golden(capsys):
    kb = load_kb("dogs.qkb")
    failures = []
    every = evaluate(parse_statement("every Dog may_bite"), kb)
    each = evaluate(parse_statement("each Dog may_bite"), kb)
    if every.verdict is not R:
        failures.append(f"every: {every.verdict.value}")
    if not (isinstance(every.evidence, ConceptualCounterexample) and every.evidence.concept == "BassetHound"):
        failures.append(f"every primary evidence {every.evidence}")
    if not any("Rex" in note and "counterexample" in note for note in every.notes):
        failures.append(f"every notes lack Rex: {every.notes}")
    if each.verdict is not R or not isinstance(each.evidence, IndividualCounterexample) \
            or each.evidence.check.individual != "Rex":
        failures.append(f"each: {each.verdict.value} {each.evidence}")
    for name, j in (("every", every), ("each", each)):
        renders = {
            "text": explain(j),
            "machine": render_machine({"format": "machine", **judgment_tree(j)}),
        }
        for fmt, rendered in renders.items():
            path = GOLDEN_DIR / f"dog_{name}.{fmt}.txt"
            if rendered.encode() != path.read_bytes():
                failures.append(f"{path.name} differs")
    report(capsys, 3, "dog dialogue golden traces", failures)


def test_oracle_equivalence(capsys):
    failures = []
    checked = 0
    start = time.perf_counter()
    for facts in total_assignments(4):
        kb = family_kb(facts)
        expected = truth_table(facts)
        for keyword in (*CORNERS, "majority"):
            j = evaluate(parse_statement(f"{keyword} C p"), kb, EvalConfig(MajoritySemantics.CARDINALITY))
            want = A if expected[keyword] else R
            checked += 1
            if j.verdict is not want:
                failures.append(f"{keyword} on {facts}: {j.verdict.value}, oracle {want.value}")
    elapsed = time.perf_counter() - start
    if elapsed >= 10:
        failures.append(f"took {elapsed:.2f}s")
    report(capsys, 4, "truth-table oracle agreement on all total models up to 4 individuals",
           failures, f"{checked} verdicts, {len(failures)} mismatches, {elapsed:.2f}s")


def test_opposition_coherence(capsys):
    failures = []
    models = 0
    for facts in total_assignments(4):
        kb = family_kb(facts)
        models += 1
        v = {k: evaluate(parse_statement(f"{k} C p"), kb).verdict for k in CORNERS}
        for x, y in (("each", "not_all"), ("no", "some")):
            if v[x] is v[y]:
                failures.append(f"{x}/{y} both {v[x].value} on {facts}")
    report(capsys, 5, "contradictory corners never share a verdict",
           failures, f"{models} models, {len(failures)} violations")


def random_formula(rng, depth=0):
    if depth >= 3 or rng.random() < 0.35:
        kind = rng.randrange(3)
        if kind == 0:
            return Divides(rng.randint(1, 12))
        if kind == 1:
            m = rng.randint(1, 12)
            return Congruence(m, rng.randrange(m))
        return Compare(rng.choice(["<", "<=", ">", ">="]), rng.randint(0, 50))
    op = rng.randrange(3)
    if op == 0:
        return Not(random_formula(rng, depth + 1))
    left, right = random_formula(rng, depth + 1), random_formula(rng, depth + 1)
    return And(left, right) if op == 1 else Or(left, right)


def test_exact_density_laws(capsys):
    rng = random.Random(20240611)
    failures = []
    worst = Fraction(0)
    for _ in range(200):
        f = random_formula(rng)
        d = exact_density(f).exact
        if d + exact_density(Not(f)).exact != 1:
            failures.append(f"complement law fails for {f}")
        estimate = estimate_density(f, (10**5,)).value
        worst = max(worst, abs(estimate - d))
        if abs(estimate - d) > Fraction(1, 100):
            failures.append(f"estimate {float(estimate)} vs exact {d} for {f}")
    report(capsys, 6, "exact density complement law and estimator agreement on 200 formulas",
           failures, f"largest estimate error {float(worst):.6f}")


def test_strict_majority_boundary(capsys):
    failures = []
    j = evaluate(parse_statement("majority Nat (2 | n)"))
    if j.verdict is not R or j.evidence.relative != (Fraction(1, 2),):
        failures.append(f"majority Nat (2 | n): {j.verdict.value} {j.evidence}")
    split = family_kb([True] * 5 + [False] * 5)
    for text in ("majority C p", "majority C !p"):
        got = evaluate(parse_statement(text), split).verdict
        if got is not R:
            failures.append(f"{text} on 5/5 split: {got.value}")

    boundary = 0
    for n in range(0, 11, 2):
        for facts in set(product((True, False), repeat=n)):
            if facts.count(True) * 2 != n:
                continue
            kb = family_kb(facts)
            for sem in (MajoritySemantics.CARDINALITY, MajoritySemantics.PROOF_THEORETIC):
                for text in ("majority C p", "majority C !p"):
                    boundary += 1
                    if evaluate(parse_statement(text), kb, EvalConfig(sem)).verdict is A:
                        failures.append(f"{text} Asserted on {facts} under {sem.value}")
    rng = random.Random(7)
    halves = [Divides(2), Congruence(2, 1), Or(Congruence(4, 0), Congruence(4, 1))]
    while len(halves) < 40:
        f = random_formula(rng)
        if exact_density(f).exact == Fraction(1, 2):
            halves.append(f)
    for f in halves:
        for body in (f, Not(f)):
            boundary += 1
            if evaluate(Statement(QuantifierKind.MAJORITY, "Nat", body)).verdict is A:
                failures.append(f"majority Nat {body} Asserted at density 1/2")
    restricted = evaluate(parse_statement("majority Nat[2 | n] n mod 4 == 0"))
    boundary += 1
    if restricted.verdict is A:
        failures.append("relative density 1/2 Asserted")
    report(capsys, 7, "strict majority at exactly one half is never Asserted",
           failures, f"{boundary} boundary cases")


def test_generic_distributive_divergence(capsys):
    failures = []
    kb = load_kb("divergence.qkb")
    each = evaluate_distributive(kb, "Bird", Literal("flies"))
    every = evaluate_generic(kb, "Bird", Literal("flies"))
    if each.verdict is not A or every.verdict is not R:
        failures.append(f"divergence.qkb: each {each.verdict.value}, every {every.verdict.value}")
    if not (isinstance(every.evidence, ConceptualCounterexample) and not every.evidence.populated):
        failures.append(f"divergence.qkb evidence {every.evidence}")

    shapes = 0
    for top in (None, True, False):
        for sub in (True, False):
            axioms = f"concept E <: C\naxiom E : {'' if sub else '!'}p\n"
            if top is not None:
                axioms += f"axiom C : {'' if top else '!'}p\n"
            for n in range(5):
                for facts in product((True, False), repeat=n):
                    for members in product("CE", repeat=n):
                        text = axioms + "".join(
                            f"individual x{i} : {c}\nfact x{i} : {'' if v else '!'}p\n"
                            for i, (v, c) in enumerate(zip(facts, members)))
                        kb = family_kb((), text)
                        shapes += 1
                        for lit in (Literal("p"), Literal("p", False)):
                            g = evaluate_generic(kb, "C", lit).verdict
                            d = evaluate_distributive(kb, "C", lit).verdict
                            if g is A and d is R:
                                failures.append(f"generic Asserted, distributive Refuted: {text!r} {lit}")
    report(capsys, 8, "generic/distributive divergence only in the expected direction",
           failures, f"{shapes} knowledge bases")


def test_proof_theoretic_rules(capsys):
    cfg = EvalConfig(MajoritySemantics.PROOF_THEORETIC)
    cases = [
        ("majority_encounter.qkb", "majority Citizen votes", A, None),
        ("majority_disjoint.qkb", "majority Animal breathes_water", R, None),
        ("majority_empty.qkb", "majority Voter votes", Verdict.UNDETERMINED, "some knowledge is required"),
    ]
    failures = []
    for name, text, verdict, note in cases:
        assert (KB_DIR / name).exists()
        j = evaluate(parse_statement(text), load_kb(name), cfg)
        if j.verdict is not verdict:
            failures.append(f"{name}: {j.verdict.value}, wanted {verdict.value}")
        if note and not any(n.startswith(note) for n in j.notes):
            failures.append(f"{name}: missing note {note!r}")
    report(capsys, 9, "proof-theoretic majority: encounter, incompatibility, no knowledge", failures)
