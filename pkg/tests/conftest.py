from __future__ import annotations

import random

import pytest

from zeta3pell.eisenstein import EisensteinInt


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240601)


def random_eis(r: random.Random, size: int) -> EisensteinInt:
    return EisensteinInt(r.randint(-size, size), r.randint(-size, size))


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report():
    """Record one pass/fail line per acceptance criterion."""

    def add(criterion: int, ok: bool, detail: str) -> None:
        ACCEPTANCE_LINES.append(f"criterion {criterion}: {'PASS' if ok else 'FAIL'}  {detail}")
        print(ACCEPTANCE_LINES[-1])

    return add


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
