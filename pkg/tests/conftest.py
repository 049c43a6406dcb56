import warnings

import numpy as np
import pytest

from lfwavelets.galois_field import FieldParams
from lfwavelets.lambda_indexing import DegenerateLambdaWarning, LambdaLattice, NumraParams
from lfwavelets.local_field import LocalField

ACCEPTANCE: dict[int, tuple[str, bool]] = {}


def make_lattice(p=2, c=1, N=1, r=1, nu=None) -> LambdaLattice:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateLambdaWarning)
        return LambdaLattice(NumraParams(FieldParams(p, c), N, r, nu))


@pytest.fixture
def lat2():
    return make_lattice(2)


@pytest.fixture
def lat3():
    return make_lattice(3)


@pytest.fixture
def K2():
    return LocalField(FieldParams(2, 1))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        title, ok = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {title}")
