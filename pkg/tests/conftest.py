import numpy as np
import pytest

from biphoton.config import make_config


@pytest.fixture(scope="session")
def baseline():
    """1 mm BBO, 405 nm pump, sigma_p = 1 nm, w_p = 10 um, 5 nm / 10 um filters."""
    return make_config()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


VERDICTS = pytest.StashKey[list]()


@pytest.fixture
def verdict(request):
    """Record and print one PASS/FAIL line for an acceptance criterion, then assert it."""
    lines = request.config.stash.setdefault(VERDICTS, [])

    def record(criterion, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'} criterion {criterion}: {detail}"
        lines.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(VERDICTS, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
