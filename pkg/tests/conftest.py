import numpy as np
import pytest

from wqed.model import CouplingConfig, EmitterConfig, Linear, Nonlinear, Setup

SEED = 1234567

# Common figure parameters: Omega = 0.2, gamma2 = 0.1, gamma3 = Delta = 0.
OC_EMITTER = EmitterConfig(1.0, 0.0, 0.1, 0.0, 0.2)
LOSSLESS_EMITTER = EmitterConfig(1.0, 0.0, 0.0, 0.0, 0.2)
OC_COUPLING = CouplingConfig.symmetric_rate(0.4)

_ACCEPTANCE_LINES = []


@pytest.fixture
def rng(request):
    print(f"rng seed {SEED}")
    return np.random.default_rng(SEED)


@pytest.fixture
def oc_linear():
    return Setup(OC_EMITTER, OC_COUPLING, Linear())


@pytest.fixture
def oc_nonlinear():
    return Setup(OC_EMITTER, OC_COUPLING, Nonlinear(2.5))


@pytest.fixture
def acceptance_report():
    def report(criterion, ok, detail):
        line = f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line
    return report


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
