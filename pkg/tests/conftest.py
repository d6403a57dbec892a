import math

import numpy as np
import pytest

from spontaneous_entropy import _backend
from spontaneous_entropy.modes import enumerate_1d
from spontaneous_entropy.params import PhysicalParams

BACKENDS = ["python"] + (["compiled"] if _backend.compiled is not None else [])


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


@pytest.fixture(scope="session")
def default_params():
    return PhysicalParams()


@pytest.fixture(scope="session")
def modes_1d(default_params):
    """Gamma = 1e-3, spacing Gamma/20, window 50 HWHM-free widths: 4000 modes."""
    return enumerate_1d(default_params, 50)


@pytest.fixture(scope="session")
def modes_500():
    """500-mode 1D set (250 frequencies, spacing Gamma/10, W = 12.5)."""
    p = PhysicalParams(box_length=20 * math.pi / 1e-3)
    m = enumerate_1d(p, 12.5)
    assert m.size == 500
    return m


def rng(seed=0):
    return np.random.default_rng(seed)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None:
        return
    terminalreporter.section("acceptance criteria")
    ran = {int(r.nodeid.split("criterion_")[1][:2])
           for key in ("passed", "failed", "error")
           for r in terminalreporter.stats.get(key, [])
           if "test_acceptance.py::test_criterion_" in getattr(r, "nodeid", "")}
    for n in sorted(ran | set(mod.RESULTS)):
        terminalreporter.write_line(mod.RESULTS.get(n, f"FAIL criterion {n}: raised before reporting"))
