import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from steadywork.core import Basis, DensityMatrix, make_system, to_basis
from steadywork.ergotropy import (
    ergotropy,
    ergotropy_bruteforce,
    ergotropy_from_arrays,
    internal_energy,
    passive_state,
    work_report,
)

from conftest import random_density, random_unitary


def _gibbs(system, T):
    w = np.exp(-np.array(system.energies) / T)
    return DensityMatrix.from_populations(w / w.sum())


def test_internal_energy_examples(symmetric):
    assert internal_energy(DensityMatrix.from_populations([1, 0, 0, 0]), symmetric) == 0.0
    assert internal_energy(DensityMatrix(np.eye(4) / 4, Basis.ENERGY), symmetric) == pytest.approx(10.0)
    # exp(-e/10)/Z on (0, 9, 11, 20)
    assert internal_energy(_gibbs(symmetric, 10.0), symmetric) == pytest.approx(5.348593, abs=1e-6)


def test_internal_energy_respects_basis(symmetric):
    rho = DensityMatrix(random_density(np.random.default_rng(0)), Basis.ENERGY)
    std = to_basis(rho, symmetric, Basis.STANDARD)
    assert internal_energy(std, symmetric) == pytest.approx(internal_energy(rho, symmetric), abs=1e-12)
    assert ergotropy(std, symmetric) == pytest.approx(ergotropy(rho, symmetric), abs=1e-12)


def test_passive_state_examples(symmetric):
    g = _gibbs(symmetric, 3.0)
    np.testing.assert_allclose(passive_state(g, symmetric).entries, g.entries, atol=1e-15)
    top = DensityMatrix.from_populations([0, 0, 0, 1])
    np.testing.assert_allclose(passive_state(top, symmetric).populations, [1, 0, 0, 0], atol=1e-15)
    rho = DensityMatrix.from_populations([0, 0.2, 0.3, 0.5])
    np.testing.assert_allclose(passive_state(rho, symmetric).entries, np.diag([0.5, 0.3, 0.2, 0.0]), atol=1e-15)


def test_ergotropy_examples(symmetric):
    assert ergotropy(DensityMatrix.from_populations([0, 0, 0, 1]), symmetric) == 20.0
    rho = DensityMatrix.from_populations([0, 0.2, 0.3, 0.5])
    rep = work_report(rho, symmetric)
    assert rep.internal_energy == pytest.approx(15.1, abs=1e-12)
    assert rep.passive_energy == pytest.approx(4.9, abs=1e-12)
    assert rep.ergotropy == pytest.approx(10.2, abs=1e-12)
    assert rep.populations_sorted == pytest.approx((0.5, 0.3, 0.2, 0.0))
    assert rep.energies == pytest.approx((0, 9, 11, 20))
    assert set(rep.as_dict()) == {"internal_energy", "passive_energy", "ergotropy", "populations_sorted", "energies"}
    assert abs(ergotropy(DensityMatrix(np.eye(4) / 4, Basis.ENERGY), symmetric)) <= 1e-12
    assert abs(ergotropy_bruteforce(DensityMatrix(np.eye(4) / 4, Basis.ENERGY), symmetric)) <= 1e-12


@pytest.mark.parametrize("T", [0.1, 1.0, 5.0, 50.0])
def test_gibbs_is_passive(symmetric, T):
    assert abs(ergotropy(_gibbs(symmetric, T), symmetric)) <= 1e-12


def test_pure_states_give_full_energy(symmetric):
    rng = np.random.default_rng(5)
    for _ in range(50):
        v = rng.normal(size=4) + 1j * rng.normal(size=4)
        v /= np.linalg.norm(v)
        rho = DensityMatrix(np.outer(v, v.conj()), Basis.ENERGY)
        assert ergotropy(rho, symmetric) == pytest.approx(internal_energy(rho, symmetric), abs=1e-10)
        assert ergotropy_bruteforce(rho, symmetric) == pytest.approx(internal_energy(rho, symmetric), abs=1e-10)


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(1.0, 20), st.floats(-3, 3), st.floats(0.05, 0.95))
def test_properties(seed, w, Delta, frac):
    system = make_system(w + Delta / 4, w - Delta / 4, frac * 2 * np.sqrt((w + Delta / 4) * (w - Delta / 4)))
    rng = np.random.default_rng(seed)
    rho = DensityMatrix(random_density(rng), Basis.ENERGY)
    rep = work_report(rho, system)
    assert rep.ergotropy == pytest.approx(rep.internal_energy - rep.passive_energy, abs=1e-12)
    assert -1e-12 <= rep.ergotropy <= rep.internal_energy + 1e-12
    assert abs(ergotropy(passive_state(rho, system), system)) <= 1e-12
    # covariance: rotate the state and the Hamiltonian together
    v = random_unitary(rng)
    h = system.hamiltonian(Basis.ENERGY)
    e, vecs = np.linalg.eigh(v @ h @ v.conj().T)
    rotated = ergotropy_from_arrays(v @ rho.entries @ v.conj().T, e, vecs)
    assert rotated == pytest.approx(rep.ergotropy, abs=1e-10)


def test_degenerate_spectrum_tie_invariance(symmetric):
    """Rotating inside a degenerate eigenspace of rho cannot change the ergotropy."""
    rng = np.random.default_rng(9)
    base = np.array([0.4, 0.4, 0.1, 0.1])
    for perm in itertools.permutations(range(4)):
        pops = base[list(perm)]
        rho = DensityMatrix.from_populations(pops)
        expected = ergotropy_bruteforce(rho, symmetric)
        assert ergotropy(rho, symmetric) == pytest.approx(expected, abs=1e-12)
        w = np.eye(4, dtype=complex)
        for value in (0.4, 0.1):
            b = np.flatnonzero(pops == value)
            w[np.ix_(b, b)] = random_unitary(rng, 2)
        mixed = DensityMatrix(w @ rho.entries @ w.conj().T, Basis.ENERGY)
        assert ergotropy(mixed, symmetric) == pytest.approx(expected, abs=1e-10)
