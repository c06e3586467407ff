"""Internal energy, passive state and ergotropy."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .core import Basis, CoupledQubitSystem, DensityMatrix, hermitian_eig


@dataclass(frozen=True)
class WorkReport:
    internal_energy: float
    passive_energy: float
    ergotropy: float
    populations_sorted: tuple[float, ...]
    energies: tuple[float, ...]

    def as_dict(self) -> dict:
        return {
            "internal_energy": self.internal_energy,
            "passive_energy": self.passive_energy,
            "ergotropy": self.ergotropy,
            "populations_sorted": list(self.populations_sorted),
            "energies": list(self.energies),
        }


def _energy_frame(rho: DensityMatrix, system: CoupledQubitSystem):
    """Ascending energies and their eigenvectors written in rho's basis."""
    energies = np.asarray(system.energies, dtype=float)
    if rho.basis is Basis.ENERGY:
        return energies, np.eye(4, dtype=complex)
    return energies, np.asarray(system.basis_unitary)


def internal_energy(rho: DensityMatrix, system: CoupledQubitSystem) -> float:
    h = system.hamiltonian(rho.basis)
    return float(np.real(np.trace(rho.entries @ h)))


def passive_state(rho: DensityMatrix, system: CoupledQubitSystem) -> DensityMatrix:
    """Spectrum of rho sorted descending onto ascending energy levels (energy basis)."""
    r, _ = hermitian_eig(rho.entries)
    return DensityMatrix.from_populations(r[::-1], Basis.ENERGY)


def ergotropy_from_arrays(rho: np.ndarray, energies: np.ndarray, energy_vectors: np.ndarray) -> float:
    """sum_{n,m} r_n e_m (|<r_n|e_m>|^2 - delta_nm), r descending, e ascending.

    ``energy_vectors`` holds the Hamiltonian eigenvectors as columns, in the
    same basis as ``rho``.
    """
    r, vr = hermitian_eig(rho)
    r, vr = r[::-1], vr[:, ::-1]
    order = np.argsort(energies, kind="stable")
    e = np.asarray(energies, dtype=float)[order]
    ve = np.asarray(energy_vectors)[:, order]
    overlap = np.abs(vr.conj().T @ ve) ** 2
    return float(r @ (overlap - np.eye(len(e))) @ e)


def ergotropy(rho: DensityMatrix, system: CoupledQubitSystem) -> float:
    energies, vectors = _energy_frame(rho, system)
    return ergotropy_from_arrays(rho.entries, energies, vectors)


def ergotropy_bruteforce(rho: DensityMatrix, system: CoupledQubitSystem) -> float:
    """U(rho) minus the least energy over all 24 assignments of rho's spectrum to levels.

    Test oracle only.
    """
    r = np.linalg.eigvalsh(rho.entries)
    e = np.asarray(system.energies, dtype=float)
    best = min(float(np.dot(r[list(p)], e)) for p in itertools.permutations(range(4)))
    return internal_energy(rho, system) - best


def work_report(rho: DensityMatrix, system: CoupledQubitSystem) -> WorkReport:
    u = internal_energy(rho, system)
    passive = passive_state(rho, system)
    pe = internal_energy(passive, system)
    return WorkReport(
        internal_energy=u,
        passive_energy=pe,
        ergotropy=ergotropy(rho, system),
        populations_sorted=tuple(float(x) for x in passive.populations),
        energies=tuple(float(x) for x in system.energies),
    )
