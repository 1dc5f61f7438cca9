import numpy as np
import pytest

from slicecauchy.fueter import FUETER

_ACCEPTANCE = []


@pytest.fixture
def acceptance():
    """Record one summary line per acceptance criterion."""
    def record(tag: str, ok: bool, detail: str):
        line = f"{'PASS' if ok else 'FAIL'}  {tag}: {detail}"
        _ACCEPTANCE.append(line)
        print(line)
        return ok
    return record


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def clean_table():
    yield FUETER
    FUETER.reset()


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)
