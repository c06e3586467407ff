import math

import numpy as np
import pytest
import scipy.linalg

from steadywork.analytic import analytic_steady_state
from steadywork.core import Basis, DensityMatrix, make_system, to_basis
from steadywork.redfield import (
    IntegrationError,
    Liouvillian,
    NullSpaceError,
    build_generator,
    build_system_operators,
    evolve,
    residual,
    rk4_step_matrix,
    sandwich,
    singular_gap,
    steady_state_nullspace,
    unvec,
    vec,
)
from steadywork.reservoir import ReservoirSpec

from conftest import boson_pair, fermion_pair, random_density

# vec index of entry (r, c) under column stacking
def _idx(r, c):
    return c * 4 + r


POPULATION_ROWS = [_idx(i, i) for i in range(4)]
COHERENCE_COLS = [_idx(1, 2), _idx(2, 1)]


def test_vectorization_convention():
    rng = np.random.default_rng(1)
    a, b, r = (rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)) for _ in range(3))
    np.testing.assert_array_equal(unvec(vec(r)), r)
    np.testing.assert_allclose(sandwich(a, b) @ vec(r), vec(a @ r @ b), atol=1e-12)
    assert vec(r)[1] == r[1, 0]


def test_system_operators_symmetric(symmetric):
    ops = build_system_operators(symmetric)
    h = 1 / math.sqrt(2)
    assert ops.A1[2, 3] == pytest.approx(h) and ops.A1[0, 1] == pytest.approx(-h)
    assert ops.A2[2, 3] == pytest.approx(h) and ops.A2[0, 1] == pytest.approx(h)
    for op in (ops.A1, ops.B1, ops.A2, ops.B2):
        assert np.count_nonzero(op) == 2


@pytest.mark.parametrize("w1,w2,lam", [(10, 10, 2), (12, 8, 6), (8, 12, 6), (3, 17, 1)])
def test_system_operators_are_sigma_minus(w1, w2, lam):
    system = make_system(w1, w2, lam)
    ops = build_system_operators(system)
    s, c = math.sin(system.theta / 2), math.cos(system.theta / 2)
    assert np.allclose(sorted(np.abs(ops.A1[ops.A1 != 0])), [s, s])
    assert np.allclose(sorted(np.abs(ops.B1[ops.B1 != 0])), [c, c])
    for A, B in ((ops.A1, ops.B1), (ops.A2, ops.B2)):
        m = A.conj().T @ A + B.conj().T @ B
        np.testing.assert_allclose(m, np.diag(np.diag(m)), atol=1e-15)
        assert np.trace(m).real == pytest.approx(2.0)
    # sigma_- of each qubit, (ee, eg, ge, gg) order
    sm = np.array([[0, 0], [1, 0]])
    s1, s2 = np.kron(sm, np.eye(2)), np.kron(np.eye(2), sm)
    u = np.asarray(system.basis_unitary)
    np.testing.assert_allclose(u @ (ops.A1 + ops.B1) @ u.conj().T, s1, atol=1e-15)
    np.testing.assert_allclose(u @ (ops.A2 + ops.B2) @ u.conj().T, s2, atol=1e-15)


GENERATORS = [
    (make_system(10, 10, 2), *boson_pair(1.0, 5.0)),
    (make_system(10, 10, 2), *fermion_pair(1.0, 2.0, 6.0)),
    (make_system(11, 9, 6), *boson_pair(2.0, 4.0, 0.5)),
    (make_system(12, 8, 3), ReservoirSpec.boson(1.0, 1.0), ReservoirSpec.boson(2.0, 3.0)),
]


@pytest.mark.parametrize("secular", [False, True])
@pytest.mark.parametrize("case", range(len(GENERATORS)))
def test_generator_structure(case, secular):
    L = build_generator(*GENERATORS[case], secular=secular)
    rng = np.random.default_rng(case)
    for _ in range(100):
        rho = random_density(rng)
        image = L.apply(rho)
        assert abs(np.trace(image)) <= 1e-12
        assert np.max(np.abs(image - image.conj().T)) <= 1e-12
    x, y = random_density(rng), random_density(rng)
    np.testing.assert_allclose(L.apply(2.0 * x - 0.5j * y), 2.0 * L.apply(x) - 0.5j * L.apply(y), atol=1e-12)


def test_hermiticity_preserved_random_draws():
    rng = np.random.default_rng(11)
    for k in range(1000):
        w1, w2 = rng.uniform(2, 20, size=2)
        system = make_system(w1, w2, rng.uniform(0.05, 1.9) * math.sqrt(w1 * w2))
        L = build_generator(system, *boson_pair(rng.uniform(0.3, 20), rng.uniform(0.3, 20), rng.uniform(0.1, 3)))
        a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        image = L.apply(a + a.conj().T)
        assert np.max(np.abs(image - image.conj().T)) <= 1e-12 * max(1.0, np.max(np.abs(image)))


def test_gibbs_in_null_space(symmetric):
    r = ReservoirSpec.boson(10.0)
    L = build_generator(symmetric, r, r)
    w = np.exp(-np.array(symmetric.energies) / 10.0)
    gibbs = DensityMatrix.from_populations(w / w.sum())
    assert residual(L, gibbs) <= 1e-10


def test_secular_block_decoupling():
    for system, r1, r2 in GENERATORS[:1] + [(make_system(10, 10, 2), *boson_pair(3.0, 3.0))]:
        m = build_generator(system, r1, r2, secular=True).matrix
        assert np.max(np.abs(m[np.ix_(POPULATION_ROWS, COHERENCE_COLS)])) <= 1e-14
    # the full generator does couple them away from equilibrium
    m = build_generator(*GENERATORS[0]).matrix
    assert np.max(np.abs(m[np.ix_(POPULATION_ROWS, COHERENCE_COLS)])) > 1e-3


def test_nullspace_gibbs_fixture(symmetric):
    r = ReservoirSpec.boson(10.0)
    rho = steady_state_nullspace(build_generator(symmetric, r, r))
    w = np.exp(-np.array(symmetric.energies) / 10.0)
    np.testing.assert_allclose(rho.entries, np.diag(w / w.sum()), atol=1e-12)
    np.testing.assert_allclose(rho.populations, [0.533397, 0.216863, 0.177552, 0.072187], atol=1e-6)


def test_nullspace_noneq_examples(symmetric):
    for pair in (boson_pair(1.0, 5.0), fermion_pair(1.0, 2.0, 6.0)):
        rho = steady_state_nullspace(build_generator(symmetric, *pair))
        assert abs(rho.entries[1, 2]) > 1e-3
        ref = analytic_steady_state(symmetric, *pair)
        assert np.max(np.abs(rho.entries - ref.entries)) <= 1e-8


def test_nullspace_degenerate_raises():
    with pytest.raises(NullSpaceError) as info:
        steady_state_nullspace(Liouvillian(np.zeros((16, 16))))
    assert info.value.singular_values.shape == (16,)
    # no dissipation: every diagonal state is stationary
    h = make_system(10, 10, 2).hamiltonian()
    from steadywork.redfield import left, right

    with pytest.raises(NullSpaceError):
        steady_state_nullspace(Liouvillian(-1j * (left(h) - right(h))))


def test_secular_vs_nonsecular(symmetric):
    r = ReservoirSpec.boson(2.0)
    a = steady_state_nullspace(build_generator(symmetric, r, r))
    b = steady_state_nullspace(build_generator(symmetric, r, r, secular=True))
    np.testing.assert_allclose(a.populations, b.populations, atol=1e-8)
    pair = boson_pair(1.0, 5.0)
    a = steady_state_nullspace(build_generator(symmetric, *pair))
    b = steady_state_nullspace(build_generator(symmetric, *pair, secular=True))
    assert np.max(np.abs(a.entries - b.entries)) > 1e-4
    assert singular_gap(build_generator(symmetric, *pair)) > 1e-6


def test_evolve_zero_generator_is_identity():
    rho0 = DensityMatrix(random_density(np.random.default_rng(3)), Basis.ENERGY)
    out = evolve(Liouvillian(np.zeros((16, 16))), rho0, 5.0, 0.1)
    np.testing.assert_array_equal(out.entries, rho0.entries)


def test_evolve_guards(symmetric):
    L = build_generator(symmetric, *boson_pair(1.0, 2.0))
    rho0 = DensityMatrix.from_populations([1, 0, 0, 0])
    with pytest.raises(ValueError):
        evolve(L, rho0, 1.0, 1.0)
    with pytest.raises(ValueError):
        evolve(L, rho0, -1.0, 1e-3)
    with pytest.raises(ValueError):
        evolve(L, to_basis(rho0, symmetric, Basis.STANDARD), 1.0, 1e-3)
    # a trace-growing "generator" trips the drift check
    with pytest.raises(IntegrationError):
        evolve(Liouvillian(0.01 * np.eye(16)), rho0, 1.0, 0.5)


def test_evolve_converges_to_gibbs(symmetric):
    r = ReservoirSpec.boson(10.0)
    L = build_generator(symmetric, r, r)
    dt = 0.09 / L.norm
    ground = DensityMatrix.from_populations([1, 0, 0, 0])
    out = evolve(L, ground, 200.0, dt)
    target = steady_state_nullspace(L)
    assert np.max(np.abs(out.entries - target.entries)) <= 1e-8
    assert out.trace_error <= 1e-10


def test_rk4_step_matches_exponential_series():
    L = build_generator(*GENERATORS[0]).matrix
    h = 0.01 / np.linalg.norm(L, 2)
    exact = scipy.linalg.expm(h * L)
    assert np.max(np.abs(rk4_step_matrix(L, h) - exact)) < (h * np.linalg.norm(L, 2)) ** 5
