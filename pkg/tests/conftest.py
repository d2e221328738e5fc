import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hopfcyc import fixtures as fx  # noqa: E402
from hopfcyc.hopf import CoefficientDatum  # noqa: E402
from hopfcyc.linalg import FieldSpec  # noqa: E402


@pytest.fixture
def Q():
    return FieldSpec.Q()


@pytest.fixture
def kZ2(Q):
    return fx.group_algebra(Q, 2)


@pytest.fixture
def H4(Q):
    return fx.sweedler(Q)


@pytest.fixture
def trivial_M(kZ2):
    return CoefficientDatum.trivial(kZ2)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(results):
        ok, msg = results[k]
        terminalreporter.write_line("criterion %d: %s  %s" % (k, "pass" if ok else "FAIL", msg))
