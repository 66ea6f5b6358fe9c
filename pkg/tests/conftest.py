import functools

import pytest

from softinv import builtin_model, explore
from softinv.oracle import BoundSpec, explore_concrete

GRID = [(t, n) for t in (1, 2, 3) for n in (2, 3)]

ACCEPTANCE_LINES: list[str] = []


@functools.lru_cache(maxsize=None)
def space(name):
    return explore(builtin_model(name))


@functools.lru_cache(maxsize=None)
def concrete(name, threads, nodes):
    return explore_concrete(builtin_model(name), BoundSpec(threads, nodes))


@pytest.fixture(scope="session")
def spaces():
    return space


@pytest.fixture(scope="session")
def concretes():
    return concrete


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
