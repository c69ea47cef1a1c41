from pathlib import Path

import pytest

from qcartan.dsl import parse_presentation

DATA = Path(__file__).resolve().parent.parent / "data"


def load(name: str):
    return parse_presentation((DATA / name).read_text())


def pres(text: str):
    return parse_presentation(text)


@pytest.fixture
def lambda5():
    return load("lambda5.qvr")


@pytest.fixture
def lambda6():
    return load("lambda6.qvr")


@pytest.fixture
def algebra_a():
    return load("algebra_a.qvr")


@pytest.fixture
def algebra_b():
    return load("algebra_b.qvr")


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
