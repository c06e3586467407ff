"""Two-qubit Hamiltonian, its eigensystem and basis changes.

Units are hbar = k_B = 1. The standard (product) basis is ordered
(|ee>, |eg>, |ge>, |gg>), the first letter labelling qubit 1. The energy
basis is ordered by ascending energy (|e1>, |e2>, |e3>, |e4>).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-10
POSITIVITY_TOL = 1e-10

STANDARD_LABELS = ("ee", "eg", "ge", "gg")
ENERGY_LABELS = ("e1", "e2", "e3", "e4")


class Basis(str, enum.Enum):
    ENERGY = "energy"
    STANDARD = "standard"


@dataclass(frozen=True)
class SystemParams:
    """Bare qubit frequencies and the exchange coupling ``lam``."""

    omega1: float
    omega2: float
    lam: float

    def __post_init__(self):
        if not (self.omega1 > 0 and self.omega2 > 0):
            raise ValueError(
                f"qubit frequencies must be positive, got omega1={self.omega1}, omega2={self.omega2}"
            )
        if not self.lam >= 0:
            raise ValueError(f"coupling must be non-negative, got lambda={self.lam}")
        limit = 2.0 * math.sqrt(self.omega1 * self.omega2)
        if self.lam >= limit:
            raise ValueError(
                f"coupling too strong: lambda={self.lam} must be < 2*sqrt(omega1*omega2)={limit:.6g}"
            )


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class CoupledQubitSystem:
    params: SystemParams
    delta: float
    Delta: float
    Omega: float
    theta: float
    energies: tuple[float, float, float, float]
    basis_unitary: np.ndarray = field(repr=False)

    @property
    def eigenvectors(self) -> tuple[np.ndarray, ...]:
        """Energy eigenvectors as standard-basis coordinate vectors."""
        return tuple(self.basis_unitary[:, k] for k in range(4))

    @property
    def omega_plus(self) -> float:
        """Transition frequency (delta + Omega)/2 of the e1<->e3, e2<->e4 pair."""
        return 0.5 * (self.delta + self.Omega)

    @property
    def omega_minus(self) -> float:
        """Transition frequency (delta - Omega)/2 of the e1<->e2, e3<->e4 pair."""
        return 0.5 * (self.delta - self.Omega)

    @property
    def symmetric(self) -> bool:
        return self.Delta == 0.0

    def hamiltonian(self, basis: Basis = Basis.ENERGY) -> np.ndarray:
        if Basis(basis) is Basis.ENERGY:
            return np.diag(np.asarray(self.energies, dtype=complex))
        return standard_hamiltonian(self.params)


def mixing_angle(Delta: float, lam: float) -> float:
    if Delta == 0.0:
        return 0.5 * math.pi
    if Delta > 0.0:
        return math.atan(lam / Delta)
    return math.pi + math.atan(lam / Delta)


def standard_hamiltonian(params: SystemParams) -> np.ndarray:
    """H_S in the (|ee>, |eg>, |ge>, |gg>) basis."""
    w1, w2, lam = params.omega1, params.omega2, params.lam
    h = np.diag([w1 + w2, w1, w2, 0.0]).astype(complex)
    h[1, 2] = h[2, 1] = 0.5 * lam
    return h


def diagonalize_coupled_qubits(params: SystemParams) -> CoupledQubitSystem:
    """Closed-form eigensystem of the coupled-qubit Hamiltonian.

    The single-excitation eigenvectors are

        |e2> = -sin(theta/2)|eg> + cos(theta/2)|ge>
        |e3> =  cos(theta/2)|eg> + sin(theta/2)|ge>

    which is the pair the jump operators A_i, B_i are built from.
    """
    delta = params.omega1 + params.omega2
    Delta = params.omega1 - params.omega2
    Omega = math.hypot(Delta, params.lam)
    theta = mixing_angle(Delta, params.lam)
    s, c = math.sin(0.5 * theta), math.cos(0.5 * theta)
    energies = (0.0, 0.5 * (delta - Omega), 0.5 * (delta + Omega), delta)

    u = np.zeros((4, 4), dtype=complex)
    u[3, 0] = 1.0  # |e1> = |gg>
    u[1, 1], u[2, 1] = -s, c
    u[1, 2], u[2, 2] = c, s
    u[0, 3] = 1.0  # |e4> = |ee>
    return CoupledQubitSystem(
        params=params,
        delta=delta,
        Delta=Delta,
        Omega=Omega,
        theta=theta,
        energies=energies,
        basis_unitary=_readonly(u),
    )


def make_system(omega1: float, omega2: float, lam: float) -> CoupledQubitSystem:
    return diagonalize_coupled_qubits(SystemParams(omega1, omega2, lam))


def hermiticity_error(m: np.ndarray) -> float:
    m = np.asarray(m)
    return float(np.max(np.abs(m - m.conj().T)))


@dataclass(frozen=True)
class DensityMatrix:
    """A 4x4 density matrix tagged with the basis it is written in.

    Hermiticity and unit trace are enforced on construction. Positivity is
    exposed through :attr:`min_eigenvalue` / :attr:`is_positive` instead of
    being enforced, since non-secular master equations can produce slightly
    negative populations far from equilibrium.
    """

    entries: np.ndarray = field(repr=False)
    basis: Basis = Basis.ENERGY

    def __post_init__(self):
        m = np.array(self.entries, dtype=complex)
        if m.shape != (4, 4):
            raise ValueError(f"density matrix must be 4x4, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValueError("density matrix has non-finite entries")
        herr = hermiticity_error(m)
        if herr > HERMITIAN_TOL:
            raise ValueError(f"density matrix not Hermitian (max |rho - rho^H| = {herr:.3e})")
        terr = abs(np.trace(m) - 1.0)
        if terr > TRACE_TOL:
            raise ValueError(f"density matrix trace deviates from 1 by {terr:.3e}")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)
        object.__setattr__(self, "basis", Basis(self.basis))

    @classmethod
    def from_populations(cls, populations, basis: Basis = Basis.ENERGY) -> "DensityMatrix":
        return cls(np.diag(np.asarray(populations, dtype=complex)), basis)

    @property
    def populations(self) -> np.ndarray:
        return np.real(np.diag(self.entries)).copy()

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.entries)

    @property
    def min_eigenvalue(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def is_positive(self) -> bool:
        return self.min_eigenvalue >= -POSITIVITY_TOL

    @property
    def trace_error(self) -> float:
        return float(abs(np.trace(self.entries) - 1.0))

    @property
    def purity(self) -> float:
        return float(np.real(np.trace(self.entries @ self.entries)))

    @property
    def labels(self) -> tuple[str, ...]:
        return ENERGY_LABELS if self.basis is Basis.ENERGY else STANDARD_LABELS


def hermitian_eig(matrix: np.ndarray, tol: float = 1e-10) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a small Hermitian matrix.

    Eigenvalues ascend; each eigenvector column is rephased so that its
    largest-magnitude component (first one on ties) is real and positive.
    """
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    scale = max(1.0, float(np.max(np.abs(m))))
    herr = hermiticity_error(m)
    if herr > tol * scale:
        raise ValueError(f"matrix is not Hermitian (max |M - M^H| = {herr:.3e})")
    m = 0.5 * (m + m.conj().T)
    w, v = np.linalg.eigh(m)
    for k in range(v.shape[1]):
        col = v[:, k]
        j = int(np.argmax(np.abs(col)))
        v[:, k] = col * (abs(col[j]) / col[j])
        v[j, k] = abs(v[j, k])
    return w, v


def to_basis(rho: DensityMatrix, system: CoupledQubitSystem, target: Basis) -> DensityMatrix:
    """Re-express ``rho`` in ``target`` basis by exact unitary conjugation."""
    target = Basis(target)
    if rho.basis is target:
        return rho
    u = system.basis_unitary
    if target is Basis.STANDARD:
        m = u @ rho.entries @ u.conj().T
    else:
        m = u.conj().T @ rho.entries @ u
    return DensityMatrix(0.5 * (m + m.conj().T), target)
