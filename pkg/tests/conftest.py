import numpy as np
import pytest

from ghzdistill.stabcode import bitflip3, five_qubit, steane, yy3


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(params=["five_qubit", "bitflip3", "yy3", "steane"])
def builtin_code(request):
    return {"five_qubit": five_qubit, "bitflip3": bitflip3, "yy3": yy3, "steane": steane}[request.param]()


ACCEPTANCE_KEY = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[ACCEPTANCE_KEY] = {}


@pytest.fixture
def acceptance(request):
    """Record one PASS/FAIL line per acceptance criterion."""
    lines = request.config.stash[ACCEPTANCE_KEY]

    def record(number, title, ok, detail=""):
        status = "PASS" if ok else "FAIL"
        lines[number] = f"{status}  criterion {number:>2}: {title}" + (f" ({detail})" if detail else "")
        return ok

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(ACCEPTANCE_KEY, {})
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(lines):
        terminalreporter.write_line(lines[number])
