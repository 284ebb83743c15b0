from pathlib import Path

import pytest

from quantscope.parser import parse_kb

KB_DIR = Path(__file__).resolve().parent.parent / "kbs"
GOLDEN_DIR = Path(__file__).resolve().parent / "golden"

DOG_KB = """\
concept Dog
concept BassetHound <: Dog
axiom Dog : may_bite
axiom BassetHound : !may_bite
individual Rex : Dog
fact Rex : !may_bite
"""


def load_kb(name):
    return parse_kb((KB_DIR / name).read_text())


@pytest.fixture
def dog_kb():
    return parse_kb(DOG_KB)
