import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")

C0 = 299792458.0
KB = 1.380649e-23


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)


def freq_for_ka(ka, radius):
    """Frequency at which a sphere of ``radius`` has electrical size ``ka``."""
    return ka * C0 / (2 * np.pi * radius)


_ACCEPTANCE_KEY = pytest.StashKey[list]()


@pytest.fixture
def criterion(request):
    """``report(number, passed, detail)`` records and prints one verdict line."""
    lines = request.config.stash.setdefault(_ACCEPTANCE_KEY, [])

    def report(number, passed, detail):
        line = f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}"
        lines.append((number, line))
        print(line)
        return passed

    return report


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
