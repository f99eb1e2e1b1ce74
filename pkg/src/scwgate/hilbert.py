"""Composite atom (x) Fock Hilbert space and the elementary operators on it.

Five atomic levels are kept: the two qubit ground states, a dark reservoir
level that collects Rydberg decay, and the two Rydberg levels. The photon
factor is a Fock ladder truncated at ``n_max``. Composite indexing is
atom-major: ``index = atom_index * (n_max + 1) + photon_number``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum

import numpy as np

from . import qmath

__all__ = [
    "AtomLevel",
    "SpaceSpec",
    "PureState",
    "DensityMatrix",
    "SpaceMismatchError",
    "IndexOutOfRangeError",
    "annihilation",
    "atom_op",
    "basis_state",
    "fidelity_with_pure",
    "partial_trace_photon",
]

ATOM_DIM = 5


class AtomLevel(IntEnum):
    """Atomic levels, index order fixed for reproducible matrix layouts."""

    A0 = 0   # qubit |0_a>, dark to both fields
    A1 = 1   # qubit |1_a>, laser-coupled to R1
    G = 2    # reservoir level collecting Rydberg decay, dark
    R1 = 3   # lower Rydberg level
    R2 = 4   # upper Rydberg level, microwave-coupled to R1


class SpaceMismatchError(ValueError):
    """States or operators live on different composite spaces."""


class IndexOutOfRangeError(IndexError):
    """Photon number outside the truncated Fock ladder."""


@dataclass(frozen=True)
class SpaceSpec:
    """Shape of the composite space: 5 atomic levels times (n_max+1) Fock states."""

    n_max: int

    def __post_init__(self):
        if self.n_max < 0:
            raise ValueError(f"n_max must be >= 0, got {self.n_max}")

    @property
    def photon_dim(self) -> int:
        return self.n_max + 1

    @property
    def atom_dim(self) -> int:
        return ATOM_DIM

    @property
    def total_dim(self) -> int:
        return ATOM_DIM * (self.n_max + 1)

    def index(self, level: AtomLevel, n: int) -> int:
        if not 0 <= n <= self.n_max:
            raise IndexOutOfRangeError(f"photon number {n} outside [0, {self.n_max}]")
        return int(level) * self.photon_dim + n


@dataclass(frozen=True)
class PureState:
    """Normalized state vector on a composite space."""

    space: SpaceSpec
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (self.space.total_dim,):
            raise SpaceMismatchError(
                f"amplitude vector of length {amps.shape} does not match dim {self.space.total_dim}"
            )
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > 1e-9:
            raise ValueError(f"state norm {norm} deviates from 1 by more than 1e-9")
        object.__setattr__(self, "amplitudes", amps / norm)


@dataclass(frozen=True)
class DensityMatrix:
    """Density operator on a composite space.

    Construction checks Hermiticity and unit trace; the eigenvalue floor is
    monitored by the evolution engine rather than enforced here.
    """

    space: SpaceSpec
    matrix: np.ndarray = field(repr=False)
    validate: bool = True

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        d = self.space.total_dim
        if m.shape != (d, d):
            raise SpaceMismatchError(f"matrix shape {m.shape} does not match dim {d}")
        object.__setattr__(self, "matrix", m)
        if self.validate:
            herm = float(np.max(np.abs(m - m.conj().T)))
            if herm > 1e-9:
                raise ValueError(f"Hermiticity residue {herm:.3e} > 1e-9")
            tr = complex(np.trace(m))
            if abs(tr - 1.0) > 1e-8:
                raise ValueError(f"trace {tr} deviates from 1 by more than 1e-8")

    @classmethod
    def from_pure(cls, psi: PureState) -> "DensityMatrix":
        return cls(psi.space, np.outer(psi.amplitudes, psi.amplitudes.conj()))

    def min_eigenvalue(self) -> float:
        w, _ = qmath.hermitian_eigs(self.matrix)
        return float(w[0])


def annihilation(n_max: int) -> np.ndarray:
    """Photon annihilation operator on the (n_max+1)-dimensional Fock ladder,
    a[n-1, n] = sqrt(n)."""
    if n_max < 0:
        raise ValueError(f"n_max must be >= 0, got {n_max}")
    return np.diag(np.sqrt(np.arange(1.0, n_max + 1)), 1).astype(complex)


def atom_op(bra: AtomLevel, ket: AtomLevel, space: SpaceSpec) -> np.ndarray:
    """|bra><ket| on the atomic factor, identity on the photon factor."""
    m = np.zeros((ATOM_DIM, ATOM_DIM), dtype=complex)
    m[int(bra), int(ket)] = 1.0
    return qmath.kron(m, np.eye(space.photon_dim, dtype=complex))


def basis_state(level: AtomLevel, n: int, space: SpaceSpec) -> PureState:
    """Computational basis vector |level, n photons>."""
    amps = np.zeros(space.total_dim, dtype=complex)
    amps[space.index(level, n)] = 1.0
    return PureState(space, amps)


def fidelity_with_pure(rho: DensityMatrix, psi: PureState) -> float:
    """<psi| rho |psi>, checked to be real within 1e-10 before the residue is dropped."""
    if rho.space != psi.space:
        raise SpaceMismatchError("state and density matrix live on different spaces")
    val = complex(psi.amplitudes.conj() @ rho.matrix @ psi.amplitudes)
    if abs(val.imag) > 1e-10:
        raise ValueError(f"fidelity has imaginary residue {val.imag:.3e}")
    return float(val.real)


def partial_trace_photon(rho: DensityMatrix) -> np.ndarray:
    """Trace out the Fock factor, returning the 5x5 atomic state."""
    d = rho.space.total_dim
    if rho.matrix.shape != (d, d):
        raise SpaceMismatchError("density matrix does not match its declared space")
    np_dim = rho.space.photon_dim
    blocks = rho.matrix.reshape(ATOM_DIM, np_dim, ATOM_DIM, np_dim)
    return np.einsum("injn->ij", blocks)
