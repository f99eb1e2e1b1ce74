"""Shared helpers for the test suite: phase wrapping, random Hermitian and
density matrices, and the independent brute-force oracles."""

from __future__ import annotations

import warnings
from dataclasses import replace

import numpy as np

from scwgate.experiments import bell_fidelity
from scwgate.protocols import GateConditionWarning


def wrap_phase(delta: float) -> float:
    """Map an angle difference into (-pi, pi]."""
    return float((delta + np.pi) % (2.0 * np.pi) - np.pi)


def phase_close(actual: float, target: float, tol: float) -> bool:
    return abs(wrap_phase(actual - target)) < tol


def random_hermitian(n: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    m = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return scale * 0.5 * (m + m.conj().T)


def random_density(n: int, rng: np.random.Generator) -> np.ndarray:
    """Random full-rank density matrix (Wishart-style, exactly unit trace)."""
    m = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    rho = m @ m.conj().T
    return rho / np.trace(rho).real


def trapezoid_position_average(params, noise, cfg, n_points: int, half_width: float = 5.0):
    """Brute-force oracle for the Gaussian position average: trapezoid rule
    over z in [-w sigma, +w sigma] against the normal density. Kept free of
    the Gauss-Hermite code path on purpose."""
    z = np.linspace(-half_width * noise.sigma, half_width * noise.sigma, n_points)
    pdf = np.exp(-(z**2) / (2.0 * noise.sigma**2)) / (np.sqrt(2.0 * np.pi) * noise.sigma)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", GateConditionWarning)
        fids = np.array(
            [
                bell_fidelity(
                    replace(params, g=max(abs(params.g + noise.slope * zz), 1e-12)), cfg
                ).fidelity
                for zz in z
            ]
        )
    return float(np.trapezoid(pdf * fids, z))
