"""Non-secular Bloch-Redfield generator, null-space steady state and RK4 evolution.

Density matrices are vectorized by column stacking, so that
``vec(X @ rho @ Y) == kron(Y.T, X) @ vec(rho)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import Basis, CoupledQubitSystem, DensityMatrix
from .reservoir import RateSet, ReservoirSpec, transition_rates

NULLSPACE_RTOL = 1e-10
RESIDUAL_TOL = 1e-10
STABILITY_LIMIT = 0.1
TRACE_DRIFT_LIMIT = 1e-6

_I4 = np.eye(4, dtype=complex)


class NullSpaceError(RuntimeError):
    def __init__(self, message: str, singular_values: np.ndarray):
        super().__init__(message)
        self.singular_values = singular_values


class IntegrationError(RuntimeError):
    pass


def vec(m: np.ndarray) -> np.ndarray:
    return np.asarray(m).reshape(-1, order="F")


def unvec(v: np.ndarray) -> np.ndarray:
    n = math.isqrt(v.size)
    return np.asarray(v).reshape((n, n), order="F")


def left(x: np.ndarray) -> np.ndarray:
    """Superoperator of rho -> x @ rho."""
    return np.kron(_I4, x)


def right(y: np.ndarray) -> np.ndarray:
    """Superoperator of rho -> rho @ y."""
    return np.kron(y.T, _I4)


def sandwich(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Superoperator of rho -> x @ rho @ y."""
    return np.kron(y.T, x)


def _dyad(i: int, j: int) -> np.ndarray:
    m = np.zeros((4, 4), dtype=complex)
    m[i - 1, j - 1] = 1.0
    return m


@dataclass(frozen=True)
class SystemOperators:
    """Energy-basis pieces of sigma_-^(i): A_i at omega_-, B_i at omega_+."""

    A1: np.ndarray = field(repr=False)
    B1: np.ndarray = field(repr=False)
    A2: np.ndarray = field(repr=False)
    B2: np.ndarray = field(repr=False)


def build_system_operators(system: CoupledQubitSystem) -> SystemOperators:
    s, c = math.sin(0.5 * system.theta), math.cos(0.5 * system.theta)
    return SystemOperators(
        A1=s * (_dyad(3, 4) - _dyad(1, 2)),
        B1=c * (_dyad(2, 4) + _dyad(1, 3)),
        A2=c * (_dyad(3, 4) + _dyad(1, 2)),
        B2=s * (_dyad(1, 3) - _dyad(2, 4)),
    )


@dataclass(frozen=True)
class Liouvillian:
    matrix: np.ndarray = field(repr=False)
    system: CoupledQubitSystem | None = None
    reservoirs: tuple[ReservoirSpec, ReservoirSpec] | None = None
    secular: bool = False

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (16, 16):
            raise ValueError(f"Liouvillian must be 16x16, got {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return unvec(self.matrix @ vec(rho))

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.matrix, 2))


def _lindblad(x: np.ndarray) -> np.ndarray:
    """2 x rho x^H - x^H x rho - rho x^H x."""
    xd = x.conj().T
    xdx = xd @ x
    return 2.0 * sandwich(x, xd) - left(xdx) - right(xdx)


def _same_frequency(A, B, r: RateSet) -> np.ndarray:
    Ad, Bd = A.conj().T, B.conj().T
    return (
        r.gamma_plus * _lindblad(Bd)
        + r.gamma_minus * _lindblad(Ad)
        + r.Gamma_plus * _lindblad(B)
        + r.Gamma_minus * _lindblad(A)
    )


def _cross_frequency(A, B, r: RateSet) -> np.ndarray:
    Ad, Bd = A.conj().T, B.conj().T
    absorb = sandwich(Ad, B) + sandwich(Bd, A)
    emit = sandwich(A, Bd) + sandwich(B, Ad)
    return (
        r.gamma_plus * (absorb - left(A @ Bd) - right(B @ Ad))
        + r.gamma_minus * (absorb - left(B @ Ad) - right(A @ Bd))
        + r.Gamma_plus * (emit - left(Ad @ B) - right(Bd @ A))
        + r.Gamma_minus * (emit - left(Bd @ A) - right(Ad @ B))
    )


def build_generator(
    system: CoupledQubitSystem,
    reservoir1: ReservoirSpec,
    reservoir2: ReservoirSpec,
    secular: bool = False,
) -> Liouvillian:
    """-i[H_S, .] + sum_i N_i + (unless ``secular``) sum_i S_i, in the energy basis."""
    h = system.hamiltonian(Basis.ENERGY)
    L = -1j * (left(h) - right(h))
    ops = build_system_operators(system)
    for (A, B), res in (((ops.A1, ops.B1), reservoir1), ((ops.A2, ops.B2), reservoir2)):
        rates = transition_rates(res, system)
        L = L + _same_frequency(A, B, rates)
        if not secular:
            L = L + _cross_frequency(A, B, rates)
    return Liouvillian(L, system, (reservoir1, reservoir2), secular)


def steady_state_nullspace(liouvillian: Liouvillian) -> DensityMatrix:
    """Stationary state from the smallest right singular vector of L."""
    _, sv, vh = np.linalg.svd(liouvillian.matrix)
    threshold = NULLSPACE_RTOL * sv[0]
    null_dim = int(np.sum(sv <= threshold))
    if null_dim != 1:
        raise NullSpaceError(
            f"null space has dimension {null_dim} (expected 1); smallest singular values "
            f"{sv[-3:]}, threshold {threshold:.3e}",
            sv,
        )
    m = unvec(vh[-1].conj())
    m = 0.5 * (m + m.conj().T)
    m = m / np.trace(m)
    rho = DensityMatrix(m, Basis.ENERGY)
    res = residual(liouvillian, rho)
    if res > RESIDUAL_TOL:
        raise NullSpaceError(f"steady-state residual {res:.3e} exceeds tolerance", sv)
    return rho


def singular_gap(liouvillian: Liouvillian) -> float:
    """Ratio of the second-smallest to the largest singular value."""
    sv = np.linalg.svd(liouvillian.matrix, compute_uv=False)
    return float(sv[-2] / sv[0])


def residual(liouvillian: Liouvillian, rho: DensityMatrix) -> float:
    return float(np.linalg.norm(liouvillian.matrix @ vec(rho.entries)))


def rk4_step_matrix(matrix: np.ndarray, h: float) -> np.ndarray:
    """One classical RK4 step for d/dt v = L v, written as a matrix polynomial."""
    hl = h * matrix
    hl2 = hl @ hl
    hl3 = hl2 @ hl
    return np.eye(matrix.shape[0]) + hl + hl2 / 2.0 + hl3 / 6.0 + hl3 @ hl / 24.0


def evolve(
    liouvillian: Liouvillian,
    rho0: DensityMatrix,
    t_final: float,
    dt: float,
) -> DensityMatrix:
    """Fixed-step RK4 integration of d rho/dt = L rho from 0 to ``t_final``.

    The step is shrunk so an integer number of steps lands on ``t_final``.
    Requires dt * ||L||_2 <= 0.1.
    """
    if rho0.basis is not Basis.ENERGY:
        raise ValueError("evolve works in the energy basis")
    if t_final < 0 or dt <= 0:
        raise ValueError(f"need t_final >= 0 and dt > 0, got t_final={t_final}, dt={dt}")
    norm = liouvillian.norm
    if dt * norm > STABILITY_LIMIT:
        raise ValueError(
            f"dt={dt} too large: dt*||L|| = {dt * norm:.3g} > {STABILITY_LIMIT}"
        )
    if t_final == 0:
        return rho0
    n_steps = max(1, math.ceil(t_final / dt - 1e-9))
    h = t_final / n_steps
    step = rk4_step_matrix(liouvillian.matrix, h)
    v = vec(rho0.entries).astype(complex)
    # trace of unvec(v) is the sum of the diagonal slots of v
    diag = np.arange(4) * 5
    for k in range(n_steps):
        v = step @ v
        if k % 256 == 0 or k == n_steps - 1:
            drift = abs(v[diag].sum() - 1.0)
            if not np.isfinite(drift) or drift > TRACE_DRIFT_LIMIT:
                raise IntegrationError(
                    f"trace drift {drift:.3e} at step {k + 1}/{n_steps} (t={h * (k + 1):.6g})"
                )
    m = unvec(v)
    return DensityMatrix(0.5 * (m + m.conj().T), Basis.ENERGY)
