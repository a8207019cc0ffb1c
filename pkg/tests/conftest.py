import json
import sys
from pathlib import Path

import pytest

from guessbound import _backend
from guessbound.bounds import ProtocolParams

HERE = Path(__file__).parent

BACKENDS = [_backend.python_kernels]
if _backend.compiled_kernels is not None:
    BACKENDS.append(_backend.compiled_kernels)


@pytest.fixture(params=BACKENDS, ids=lambda m: m.__name__.rsplit(".", 1)[-1])
def kernel_impl(request):
    return request.param


@pytest.fixture(scope="session")
def golden():
    return json.loads((HERE / "golden.json").read_text())


@pytest.fixture(scope="session")
def golden_splitmix():
    return json.loads((HERE / "golden_splitmix.json").read_text())


TABLE_N_TOTALS = (10_000, 100_000, 1_000_000)


@pytest.fixture(params=TABLE_N_TOTALS, ids=lambda n: f"Ntol={n:.0e}")
def table_params(request):
    return ProtocolParams.standard(request.param)


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if acceptance is None or not acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(acceptance.RESULTS):
        terminalreporter.write_line(acceptance.RESULTS[number])
