import numpy as np
import pytest

from steadywork.analytic import OrderingMode
from steadywork.core import Basis, DensityMatrix, make_system
from steadywork.reservoir import ReservoirSpec

# acceptance criterion id -> (passed, detail); filled by test_acceptance
ACCEPTANCE: dict[str, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {key}: {detail}")


@pytest.fixture
def record():
    def _record(key: str, passed: bool, detail: str) -> bool:
        ACCEPTANCE[key] = (bool(passed), detail)
        return bool(passed)

    return _record


@pytest.fixture
def symmetric():
    return make_system(10.0, 10.0, 2.0)


def random_density(rng: np.random.Generator, n: int = 4) -> np.ndarray:
    """Random full-rank density matrix from a Ginibre draw."""
    g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    m = g @ g.conj().T
    return m / np.trace(m).real


def random_unitary(rng: np.random.Generator, n: int = 4) -> np.ndarray:
    q, r = np.linalg.qr(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def boson_pair(T1, T2, J=1.0):
    return ReservoirSpec.boson(T1, J), ReservoirSpec.boson(T2, J)


def fermion_pair(T, mu1, mu2, J=1.0):
    return ReservoirSpec.fermion(T, mu1, J), ReservoirSpec.fermion(T, mu2, J)


PHYSICAL = OrderingMode.PHYSICAL
LITERAL = OrderingMode.PAPER_LITERAL
__all__ = ["Basis", "DensityMatrix"]
