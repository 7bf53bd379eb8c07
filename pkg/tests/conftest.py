import numpy as np
import pytest

from fracbs import _backend


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(params=_backend.available())
def backend_name(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
