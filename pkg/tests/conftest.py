import sys
from pathlib import Path

import pytest

from sepinv.frontend import parse_system

CORPUS_DIR = Path(__file__).resolve().parents[1] / "src" / "sepinv" / "corpus"


@pytest.fixture
def fig5():
    return parse_system((CORPUS_DIR / "fig5.ts").read_text())


@pytest.fixture
def corpus_dir():
    return CORPUS_DIR


def pytest_terminal_summary(terminalreporter):
    lines = getattr(sys.modules.get("test_acceptance"), "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda l: int(l.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
