import io
import subprocess
import sys

import pytest

from conftest import GOLDEN_DIR, KB_DIR
from quantscope.cli import main


def run(capsys, *argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def kb(name):
    return str(KB_DIR / name)


class TestEval:
    @pytest.mark.parametrize("argv, code", [
        (["eval", "-", "majority Nat prime"], 1),
        (["eval", "-", "majority Nat !prime"], 0),
        (["eval", "-", "majority Nat prime", "--semantics", "cardinality"], 3),
        (["eval", "-", "majority Nat !prime", "--semantics", "cardinality"], 3),
        (["eval", "-", "each Nat n > 0", "--search-bound", "1000"], 2),
        (["eval", "-", "majority Nat prime", "--semantics", "proof_theoretic"], 64),
        (["eval", "-", "majority Nat 2 |"], 65),
        (["eval", "-", "every Dog may_bite"], 65),
    ])
    def test_exit_codes(self, capsys, argv, code):
        assert run(capsys, *argv)[0] == code

    def test_golden_trace(self, capsys):
        code, out, _ = run(capsys, "eval", kb("dogs.qkb"), "every Dog may_bite")
        assert code == 1
        assert out == (GOLDEN_DIR / "dog_every.text.txt").read_text()

    def test_machine_format(self, capsys):
        code, out, _ = run(capsys, "eval", kb("dogs.qkb"), "each Dog may_bite", "--format", "machine")
        assert out == (GOLDEN_DIR / "dog_each.machine.txt").read_text()
        assert "verdict: Refuted" in out.splitlines()

    def test_stdin_takes_largest_code(self, capsys, monkeypatch):
        lines = "some Dog may_bite   # refuted\n\nno Dog may_bite\nsome Dog barks\n"
        code, out, err = run(capsys, "eval", kb("dogs.qkb"), "-", stdin=lines, monkeypatch=monkeypatch)
        assert code == 65
        assert out.count("some Dog may_bite: Refuted") == 1
        assert "no Dog may_bite: Asserted" in out
        assert "barks" in err

    def test_parse_error_location(self, capsys):
        _, _, err = run(capsys, "eval", "-", "every Dog")
        assert "1:10" in err

    def test_invalid_kb(self, capsys):
        code, _, err = run(capsys, "eval", kb("cyclic.qkb"), "every C p")
        assert code == 65
        assert "SubsumptionCycle" in err

    def test_missing_file(self, capsys, tmp_path):
        assert run(capsys, "eval", str(tmp_path / "nope.qkb"), "every C p")[0] == 66

    def test_usage(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["frobnicate"])
        assert info.value.code == 64


class TestDensity:
    def test_prime_golden(self, capsys):
        code, out, _ = run(capsys, "density", "prime")
        assert code == 0
        assert out == (GOLDEN_DIR / "density_prime.text.txt").read_text()

    def test_exact_only(self, capsys):
        _, out, _ = run(capsys, "density", "(2 | n) | n mod 4 == 1", "--exact")
        assert "exact density 3/4" in out
        assert "N=" not in out

    def test_exact_rejected_for_prime(self, capsys):
        _, out, _ = run(capsys, "density", "prime", "--exact", "--schedule", "100,1000")
        assert "exact density rejected" in out
        assert "N=1000 count=168" in out

    def test_bad_schedule(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["density", "prime", "--schedule", "100,10"])
        assert info.value.code == 64

    def test_sieve_cap(self, capsys, monkeypatch):
        monkeypatch.setenv("QUANTSCOPE_MAX_SIEVE", "1000")
        assert run(capsys, "density", "prime")[0] == 64


class TestSquare:
    def test_dogs_golden(self, capsys):
        code, out, _ = run(capsys, "square", kb("dogs.qkb"), "Dog", "may_bite")
        assert code == 0
        assert out == (GOLDEN_DIR / "square_dogs.text.txt").read_text()

    def test_empty_concept(self, capsys):
        code, out, _ = run(capsys, "square", kb("empty_concept.qkb"), "Unicorn", "horned", "--format", "machine")
        assert code == 0
        lines = out.splitlines()
        assert "evidence.A.verdict: Asserted" in lines
        assert "evidence.O.verdict: Refuted" in lines


class TestCheck:
    @pytest.mark.parametrize("name, code", [
        ("dogs.qkb", 0), ("cyclic.qkb", 65), ("contradictory.qkb", 65),
    ])
    def test_codes(self, capsys, name, code):
        assert run(capsys, "check", kb(name))[0] == code

    def test_parse_errors_listed(self, capsys, tmp_path):
        bad = tmp_path / "bad.qkb"
        bad.write_text("concept A\nconcpt B\naxiom A p\n")
        code, _, err = run(capsys, "check", str(bad))
        assert code == 65
        assert len(err.strip().splitlines()) == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "quantscope", "eval", str(KB_DIR / "dogs.qkb"),
                           "each Dog may_bite"], capture_output=True, text=True)
    assert proc.returncode == 1
    assert proc.stdout.startswith("each Dog may_bite: Refuted")
