"""Shared fixtures and Hypothesis profile."""

import pytest
from hypothesis import settings

from germmult.corpus import corpus
from germmult.germ import hypersurface

# Exact arithmetic on Fractions is slow enough that per-example deadlines
# only produce flaky failures.
settings.register_profile("germmult", deadline=None, max_examples=40)
settings.load_profile("germmult")


@pytest.fixture(scope="session")
def full_corpus():
    return corpus()


@pytest.fixture(scope="session")
def real_corpus(full_corpus):
    return [g for g in full_corpus if g.is_real]


@pytest.fixture
def cusp():
    return hypersurface("y^3 - x^2", "xy", name="cusp")


@pytest.fixture
def line():
    return hypersurface("y", "xy", name="line")


@pytest.fixture
def surface():
    return hypersurface("z^3 - x^5*y - x*y^5", "xyz", name="surface-V")


_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def record(request):
    """Append a one-line criterion result to the acceptance summary."""
    lines = request.config.stash.setdefault(_ACCEPTANCE, [])
    return lines.append


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(lines, key=lambda s: int(s.split()[1])):
        terminalreporter.write_line(line)
