from __future__ import annotations

import sys
from importlib.resources import files
from pathlib import Path

import pytest

from eliminative import parse_kb, parse_term

sys.path.insert(0, str(Path(__file__).parent))

# criterion number -> (title, passed, note); filled by test_acceptance
RESULTS: dict[int, tuple[str, bool, str]] = {}

CORPORA = Path(str(files("eliminative").joinpath("corpora")))


def corpus(name: str):
    return parse_kb((CORPORA / f"{name}.kb").read_text(encoding="utf-8"))


GRIMM_QUERY = "causation(c:X, c:Y)"
DECIPHER_QUERY = "causation(C1, šth) & causation(C2, hzbwb)"


def kb_path(name: str) -> str:
    return str(CORPORA / f"{name}.kb")


# one command per shipped corpus, as CLI argument lists
FIXTURE_COMMANDS = [
    ["--kb", kb_path("grimm"), "--query", GRIMM_QUERY],
    ["--kb", kb_path("grimm"), "--mode", "saturate", "--query", GRIMM_QUERY],
    ["--kb", kb_path("decipher"), "--query", DECIPHER_QUERY],
    ["--kb", kb_path("grimm_exception"), "--query", GRIMM_QUERY, "--em", "strict-all"],
    ["--kb", kb_path("morphemes"), "--mode", "saturate"],
    ["--kb", kb_path("mcv"), "--query", "causation(accent(X), gr-meaning(Y))"],
]


def T(text: str):
    return parse_term(text)


@pytest.fixture
def grimm():
    return corpus("grimm")


@pytest.fixture
def grimm_exception():
    return corpus("grimm_exception")


@pytest.fixture
def decipher():
    return corpus("decipher")


@pytest.fixture
def morphemes():
    return corpus("morphemes")


@pytest.fixture
def mcv():
    return corpus("mcv")


def pytest_terminal_summary(terminalreporter):
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        title, ok, note = RESULTS[number]
        line = f"criterion {number} {'PASS' if ok else 'FAIL'}  {title}"
        terminalreporter.write_line(line + (f"  ({note})" if note else ""))
