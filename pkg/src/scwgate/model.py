"""Physical system builders: parameters, the driven Hamiltonian, and the
dissipation channels.

Unit conventions (fixed project-wide): angular frequencies in rad/us, times
and lifetimes in us, temperature in K, hbar = 1 everywhere except inside the
thermal-occupation formula where SI constants enter explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import qmath
from .hilbert import AtomLevel, SpaceSpec, annihilation, atom_op
from .lindblad import CollapseOp

__all__ = [
    "HBAR_SI",
    "KB_SI",
    "CZ_ETA",
    "SystemParams",
    "PositionNoise",
    "nbar_th",
    "build_hamiltonian",
    "build_collapse_ops",
    "cz_condition",
]

HBAR_SI = 1.054571817e-34   # J s
KB_SI = 1.380649e-23        # J/K
CZ_ETA = np.sqrt(6.0) / 2.0  # coupling ratio the one-step gate requires


@dataclass(frozen=True)
class SystemParams:
    """All experiment-level inputs of the gate simulation.

    Defaults are the reference working point: Omega = 2pi x 1 MHz,
    g = sqrt(3)/2 x 2pi MHz (so 2g/sqrt(3) = Omega), a 5.037 GHz cavity with
    Q = 2e5 at 50 mK, Rydberg lifetimes (0.82, 1.97) ms, Fock cutoff 5.
    """

    omega_laser: float = 2.0 * np.pi          # laser Rabi frequency (rad/us)
    g: float = np.sqrt(3.0) * np.pi           # atom-photon coupling (rad/us)
    omega_c: float = 2.0 * np.pi * 5037.0     # cavity angular frequency (rad/us)
    q_factor: float = 2.0e5
    temperature: float = 0.050                # K
    tau1: float = 820.0                       # lifetime of R1 (us)
    tau2: float = 1970.0                      # lifetime of R2 (us)
    n_max: int = 5

    def __post_init__(self):
        for name in ("omega_laser", "omega_c", "tau1", "tau2"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.g < 0:
            raise ValueError("g must be >= 0")
        if self.q_factor < 1:
            raise ValueError("q_factor must be >= 1")
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")
        if self.n_max < 1:
            raise ValueError("n_max must be >= 1")

    @property
    def eta(self) -> float:
        """Dimensionless coupling ratio sqrt(2) g / Omega."""
        return np.sqrt(2.0) * self.g / self.omega_laser

    @property
    def kappa(self) -> float:
        """Cavity energy decay rate omega_c / Q (rad/us)."""
        return self.omega_c / self.q_factor

    @property
    def nbar(self) -> float:
        return nbar_th(self.omega_c, self.temperature)

    @property
    def space(self) -> SpaceSpec:
        return SpaceSpec(self.n_max)

    @property
    def gate_duration(self) -> float:
        """One-step gate time 2pi/Omega (us)."""
        return 2.0 * np.pi / self.omega_laser


@dataclass(frozen=True)
class PositionNoise:
    """Vertical position spread of the trapped atom and the resulting
    coupling slope: g -> g + slope * z with z ~ N(0, sigma^2)."""

    slope: float = 2.0 * np.pi * 0.12   # rad/us per um
    sigma: float = 0.27                 # um, r.m.s. spread

    def __post_init__(self):
        if self.sigma < 0:
            raise ValueError("sigma must be >= 0")


def nbar_th(omega_c: float, temperature: float) -> float:
    """Mean thermal photon number 1/(exp(hbar w / kB T) - 1).

    ``omega_c`` in rad/us, ``temperature`` in K; returns exactly 0 at T = 0.
    """
    if omega_c <= 0:
        raise ValueError("omega_c must be positive")
    if temperature < 0:
        raise ValueError("temperature must be >= 0")
    if temperature == 0.0:
        return 0.0
    x = HBAR_SI * (omega_c * 1e6) / (KB_SI * temperature)
    return float(1.0 / np.expm1(x))


def build_hamiltonian(
    params: SystemParams, laser_on: bool = True, microwave_on: bool = True
) -> np.ndarray:
    """Rotating-frame Hamiltonian on the composite space (rad/us, hbar = 1).

    The microwave term couples the two Rydberg levels through photon
    exchange, g |r2><r1| a + h.c.; the laser term drives the qubit-Rydberg
    transition at Omega/2. Either term can be switched off to model pulse
    stages. Hermitian by construction.
    """
    space = params.space
    d = space.total_dim
    h = np.zeros((d, d), dtype=complex)
    if microwave_on:
        a_full = qmath.kron(np.eye(5, dtype=complex), annihilation(params.n_max))
        term = params.g * atom_op(AtomLevel.R2, AtomLevel.R1, space) @ a_full
        h += term + term.conj().T
    if laser_on:
        term = 0.5 * params.omega_laser * atom_op(AtomLevel.R1, AtomLevel.A1, space)
        h += term + term.conj().T
    return h


def build_collapse_ops(params: SystemParams) -> list[CollapseOp]:
    """The four dissipation channels, rates folded into the operators:
    Rydberg decay of r1 and r2 into the reservoir level, cavity photon loss,
    and thermal photon gain."""
    space = params.space
    a_full = qmath.kron(np.eye(5, dtype=complex), annihilation(params.n_max))
    nb = params.nbar
    c0 = atom_op(AtomLevel.G, AtomLevel.R1, space) / np.sqrt(params.tau1)
    c1 = atom_op(AtomLevel.G, AtomLevel.R2, space) / np.sqrt(params.tau2)
    c2 = a_full * np.sqrt((nb + 1.0) * params.kappa)
    c3 = a_full.conj().T * np.sqrt(nb * params.kappa)
    return [CollapseOp(c) for c in (c0, c1, c2, c3)]


def cz_condition(params: SystemParams) -> float:
    """Relative deviation |eta| / (sqrt(6)/2) - 1 from the one-step gate
    condition; zero means the gate closes exactly."""
    return abs(params.eta) / CZ_ETA - 1.0
