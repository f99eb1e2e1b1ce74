"""Master-equation integrator: fixed-step RK4 on the density matrix for a
piecewise-constant Hamiltonian, with named-column observable recording.

The right-hand side follows the convention

    drho/dt = i (rho H - H rho) + sum_i [2 c_i rho c_i^+ - c_i^+ c_i rho - rho c_i^+ c_i] / 2

with hbar = 1 and rates already folded into the collapse operators (each
c_i carries units of sqrt(rad/us)).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import qmath
from .hilbert import DensityMatrix

__all__ = [
    "CollapseOp",
    "EvolutionConfig",
    "TimeSeries",
    "DimensionMismatchError",
    "PositivityWarning",
    "StepTooCoarseError",
    "lindblad_rhs",
    "evolve",
]

TRACE_TOL = 1e-7
HERM_TOL = 1e-8
POSITIVITY_FLOOR = -1e-6


class DimensionMismatchError(ValueError):
    """Hamiltonian, collapse operators and state have inconsistent shapes."""


class PositivityWarning(UserWarning):
    """Monitored density matrix developed an eigenvalue below the floor."""


class StepTooCoarseError(RuntimeError):
    """Step-doubling self-test moved the final state by more than 1e-6."""


@dataclass(frozen=True)
class CollapseOp:
    """Jump operator with its rate folded in (entries in sqrt(rad/us))."""

    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatchError(f"collapse operator must be square, got {m.shape}")
        object.__setattr__(self, "matrix", m)


@dataclass(frozen=True)
class EvolutionConfig:
    """Integrator controls.

    ``steps_per_us`` is calibrated so the nominal 1 us gate is resolved by
    20,000 RK4 steps; ``record_every`` thins the sampled time series;
    ``self_test`` repeats the run at doubled step count and fails loudly if
    the final state moves by more than 1e-6.
    """

    steps_per_us: int = 20000
    record_every: int = 200
    positivity_check: bool = True
    self_test: bool = False

    def __post_init__(self):
        if self.steps_per_us < 1:
            raise ValueError("steps_per_us must be >= 1")
        if self.record_every < 1:
            raise ValueError("record_every must be >= 1")


@dataclass(frozen=True)
class TimeSeries:
    """Sampled observables: strictly increasing times (us) plus equal-length
    named real columns."""

    times: np.ndarray
    columns: dict[str, np.ndarray]

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        object.__setattr__(self, "times", t)
        if t.size > 1 and not np.all(np.diff(t) > 0):
            raise ValueError("times must be strictly increasing")
        cols = {k: np.asarray(v, dtype=float) for k, v in self.columns.items()}
        for name, col in cols.items():
            if col.shape != t.shape:
                raise ValueError(f"column {name!r} length {col.shape} != times {t.shape}")
        object.__setattr__(self, "columns", cols)


def _matrix_of(rho) -> np.ndarray:
    if isinstance(rho, DensityMatrix):
        return rho.matrix
    return np.asarray(rho, dtype=complex)


def lindblad_rhs(rho, h, cs: list[CollapseOp]) -> np.ndarray:
    """drho/dt for the master equation above; trace-free and Hermitian."""
    r = _matrix_of(rho)
    h = np.asarray(h, dtype=complex)
    d = r.shape[0]
    if h.shape != (d, d):
        raise DimensionMismatchError(f"H shape {h.shape} vs state dim {d}")
    out = 1j * (r @ h - h @ r)
    for c in cs:
        cm = c.matrix
        if cm.shape != (d, d):
            raise DimensionMismatchError(f"collapse op shape {cm.shape} vs state dim {d}")
        cd = cm.conj().T
        cdc = cd @ cm
        out += cm @ r @ cd - 0.5 * (cdc @ r + r @ cdc)
    return out


def _integrate(r0: np.ndarray, h: np.ndarray, cs: list[CollapseOp], duration: float,
               steps: int, record_every: int, observables: dict[str, np.ndarray]):
    """Plain RK4 loop; returns (final rho, times, sample columns)."""
    # Fold the commutator and anticommutator into one matrix each:
    # rhs(rho) = M rho + rho M^+ + sum_i c_i rho c_i^+ with M = -iH - A/2.
    a_sum = np.zeros_like(h)
    pairs = []
    for c in cs:
        cm = c.matrix
        a_sum += cm.conj().T @ cm
        pairs.append((cm, np.ascontiguousarray(cm.conj().T)))
    m = -1j * h - 0.5 * a_sum
    mh = np.ascontiguousarray(m.conj().T)

    def rhs(r):
        out = m @ r
        out += r @ mh
        for cm, cd in pairs:
            out += cm @ r @ cd
        return out

    names = list(observables)
    obs = [observables[k] for k in names]

    def sample(r):
        row = [float(np.trace(r).real)]
        for o in obs:
            row.append(float(np.trace(o @ r).real))
        return row

    r = r0.copy()
    times = [0.0]
    rows = [sample(r)]
    dt = duration / steps
    for step in range(1, steps + 1):
        k1 = rhs(r)
        k2 = rhs(r + (0.5 * dt) * k1)
        k3 = rhs(r + (0.5 * dt) * k2)
        k4 = rhs(r + dt * k3)
        r = r + (dt / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
        if step % record_every == 0 or step == steps:
            times.append(step * dt)
            rows.append(sample(r))
    return r, np.array(times), rows, names


def evolve(
    rho0,
    h,
    cs: list[CollapseOp],
    duration: float,
    cfg: EvolutionConfig = EvolutionConfig(),
    observables: dict[str, np.ndarray] | None = None,
):
    """Integrate the master equation for ``duration`` (us).

    ``rho0`` may be a DensityMatrix (returned type matches) or a plain
    Hermitian unit-trace matrix. Returns the final state and a TimeSeries
    carrying the trace plus the real expectation value of each entry of
    ``observables``, sampled every ``record_every`` steps. The final state is
    checked for trace and Hermiticity drift; positivity is monitored
    (warning, not fatal).
    """
    if duration < 0:
        raise ValueError("duration must be >= 0")
    is_dm = isinstance(rho0, DensityMatrix)
    r0 = rho0.matrix if is_dm else np.asarray(rho0, dtype=complex)
    if r0.ndim != 2 or r0.shape[0] != r0.shape[1]:
        raise DimensionMismatchError(f"state must be a square matrix, got {r0.shape}")
    h = np.asarray(h, dtype=complex)
    d = r0.shape[0]
    if h.shape != (d, d):
        raise DimensionMismatchError(f"H shape {h.shape} vs state dim {d}")
    for c in cs:
        if c.matrix.shape != (d, d):
            raise DimensionMismatchError(f"collapse op shape {c.matrix.shape} vs state dim {d}")
    observables = observables or {}

    if duration == 0.0:
        ts = TimeSeries(np.array([0.0]), _columns_for(r0, observables))
        return rho0, ts

    steps = max(1, round(duration * cfg.steps_per_us))
    r, times, rows, names = _integrate(
        r0, h, cs, duration, steps, cfg.record_every, observables
    )
    if cfg.self_test:
        r2, *_ = _integrate(r0, h, cs, duration, 2 * steps, cfg.record_every, {})
        drift = float(np.max(np.abs(r - r2)))
        if drift > 1e-6:
            raise StepTooCoarseError(
                f"doubling {steps} steps moved the final state by {drift:.3e}"
            )

    tr_err = abs(float(np.trace(r).real) - 1.0)
    herm_err = float(np.max(np.abs(r - r.conj().T)))
    if tr_err > TRACE_TOL or herm_err > HERM_TOL:
        raise RuntimeError(
            f"integrator drift: |tr-1|={tr_err:.3e}, hermiticity={herm_err:.3e}"
        )
    if cfg.positivity_check:
        w, _ = qmath.hermitian_eigs(0.5 * (r + r.conj().T))
        if w[0] < POSITIVITY_FLOOR:
            warnings.warn(
                f"minimum eigenvalue {w[0]:.3e} below {POSITIVITY_FLOOR:.0e}",
                PositivityWarning,
            )

    cols = {"trace": np.array([row[0] for row in rows])}
    for j, name in enumerate(names, start=1):
        cols[name] = np.array([row[j] for row in rows])
    ts = TimeSeries(times, cols)
    final = DensityMatrix(rho0.space, r, validate=False) if is_dm else r
    return final, ts


def _columns_for(r: np.ndarray, observables: dict[str, np.ndarray]) -> dict[str, np.ndarray]:
    cols = {"trace": np.array([float(np.trace(r).real)])}
    for name, o in observables.items():
        cols[name] = np.array([float(np.trace(o @ r).real)])
    return cols
