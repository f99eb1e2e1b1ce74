import warnings

import numpy as np
import pytest

from scwgate import qmath
from scwgate.hilbert import AtomLevel, DensityMatrix, SpaceSpec, basis_state
from scwgate.lindblad import (
    CollapseOp,
    DimensionMismatchError,
    EvolutionConfig,
    PositivityWarning,
    StepTooCoarseError,
    TimeSeries,
    evolve,
    lindblad_rhs,
)
from scwgate.model import SystemParams, build_collapse_ops, build_hamiltonian
from util_phys import random_density, random_hermitian

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)


def decay_op(tau: float) -> CollapseOp:
    # |g><e| / sqrt(tau) on a two-level {|g>, |e>} system
    m = np.zeros((2, 2), dtype=complex)
    m[0, 1] = 1.0 / np.sqrt(tau)
    return CollapseOp(m)


def test_rhs_no_dynamics():
    rho = np.diag([0.25, 0.75]).astype(complex)
    out = lindblad_rhs(rho, np.zeros((2, 2)), [])
    assert np.count_nonzero(out) == 0


def test_rhs_pure_decay_rate():
    # rate-folded jump |g><e|/sqrt(tau) must drain the excited population at 1/tau
    tau = 3.0
    rho = np.diag([0.0, 1.0]).astype(complex)
    out = lindblad_rhs(rho, np.zeros((2, 2)), [decay_op(tau)])
    assert out[1, 1].real == pytest.approx(-1.0 / tau, rel=1e-14)
    assert out[0, 0].real == pytest.approx(+1.0 / tau, rel=1e-14)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_rhs_trace_free_and_hermitian(seed):
    rng = np.random.default_rng(seed)
    dim = 6
    rho = random_density(dim, rng)
    h = random_hermitian(dim, rng, scale=2.0)
    cs = [CollapseOp(rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim)))
          for _ in range(3)]
    out = lindblad_rhs(rho, h, cs)
    scale = max(np.max(np.abs(out)), 1.0)
    assert abs(np.trace(out)) < 1e-10 * scale
    assert np.max(np.abs(out - out.conj().T)) < 1e-10 * scale


def test_rhs_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        lindblad_rhs(np.eye(2, dtype=complex) / 2, np.zeros((3, 3)), [])
    with pytest.raises(DimensionMismatchError):
        lindblad_rhs(np.eye(2, dtype=complex) / 2, np.zeros((2, 2)), [CollapseOp(np.zeros((3, 3)))])


def test_evolve_matches_spectral_propagator_without_dissipation():
    params = SystemParams(n_max=1)
    space = params.space
    h = build_hamiltonian(params, True, True)
    psi0 = basis_state(AtomLevel.A1, 1, space)
    rho0 = DensityMatrix.from_pure(psi0)
    cfg = EvolutionConfig(steps_per_us=4000, positivity_check=False)
    rho, _ = evolve(rho0, h, [], 0.7, cfg)
    psi = qmath.matexp_action(h, 0.7, psi0.amplitudes)
    fid = float(np.real(psi.conj() @ rho.matrix @ psi))
    assert abs(fid - 1.0) < 1e-8


def test_evolve_exponential_decay():
    rho0 = np.diag([0.0, 1.0]).astype(complex)
    cfg = EvolutionConfig(steps_per_us=1000, positivity_check=False)
    rho, _ = evolve(rho0, np.zeros((2, 2)), [decay_op(1.0)], 1.0, cfg)
    assert rho[1, 1].real == pytest.approx(np.exp(-1.0), abs=1e-6)


def test_evolve_thermal_cavity_reaches_occupancy():
    # empty cavity: only the photon loss/gain pair acts; detailed balance of
    # the truncated birth-death chain gives the stationary occupation.
    params = SystemParams()
    space = params.space
    h = build_hamiltonian(params, laser_on=False, microwave_on=False)
    cs = build_collapse_ops(params)[2:]
    rho0 = DensityMatrix.from_pure(basis_state(AtomLevel.A0, 0, space))
    from scwgate.hilbert import annihilation

    a = annihilation(params.n_max)
    n_full = qmath.kron(np.eye(5, dtype=complex), a.conj().T @ a)
    cfg = EvolutionConfig(steps_per_us=200, record_every=2000, positivity_check=False)
    rho, ts = evolve(rho0, h, cs, 50.0, cfg, observables={"n": n_full})
    n_final = ts.columns["n"][-1]

    # independent oracle: stationary distribution of the 6-level rate chain
    nb = params.nbar
    p = (nb / (nb + 1.0)) ** np.arange(space.photon_dim)
    p /= p.sum()
    n_truncated = float(np.sum(np.arange(space.photon_dim) * p))
    assert abs(n_final - n_truncated) < 1e-5
    assert abs(n_final - nb) < 1e-4


def test_evolve_preserves_trace_and_hermiticity_along_trajectory():
    params = SystemParams()
    h = build_hamiltonian(params, True, True)
    cs = build_collapse_ops(params)
    rho0 = DensityMatrix.from_pure(basis_state(AtomLevel.A1, 1, params.space))
    cfg = EvolutionConfig(steps_per_us=2000, record_every=100)
    rho, ts = evolve(rho0, h, cs, 1.0, cfg)
    assert np.max(np.abs(ts.columns["trace"] - 1.0)) < 1e-7
    m = rho.matrix
    assert np.max(np.abs(m - m.conj().T)) < 1e-8
    assert rho.min_eigenvalue() >= -1e-6


def test_rk4_order_factor():
    # driven lossy two-level reference problem; halving h must shrink the
    # final-state error by roughly 2^4
    h = np.pi * SIGMA_X
    cs = [decay_op(1.0)]
    rho0 = np.diag([1.0, 0.0]).astype(complex)

    def final(steps_per_us):
        cfg = EvolutionConfig(steps_per_us=steps_per_us, positivity_check=False)
        rho, _ = evolve(rho0, h, cs, 1.0, cfg)
        return rho

    ref = final(640)
    e1 = np.max(np.abs(final(40) - ref))
    e2 = np.max(np.abs(final(80) - ref))
    assert 12.0 < e1 / e2 < 20.0


def test_self_test_flags_coarse_steps():
    h = 40.0 * SIGMA_X  # fast oscillation
    rho0 = np.diag([1.0, 0.0]).astype(complex)
    with pytest.raises(StepTooCoarseError):
        evolve(rho0, h, [], 1.0, EvolutionConfig(steps_per_us=25, self_test=True,
                                                 positivity_check=False))
    # fine stepping passes the same check
    evolve(rho0, h, [], 1.0, EvolutionConfig(steps_per_us=4000, self_test=True,
                                             positivity_check=False))


def test_positivity_warning_on_negative_state():
    space = SpaceSpec(1)
    m = np.zeros((10, 10), dtype=complex)
    m[0, 0] = 1.0 + 2e-6
    m[9, 9] = -2e-6  # genuinely negative eigenvalue, trace still one
    rho0 = DensityMatrix(space, m, validate=False)
    with pytest.warns(PositivityWarning):
        evolve(rho0, np.zeros((10, 10)), [], 0.001, EvolutionConfig(steps_per_us=10))


def test_no_positivity_warning_on_normal_run():
    params = SystemParams()
    h = build_hamiltonian(params, True, True)
    cs = build_collapse_ops(params)
    rho0 = DensityMatrix.from_pure(basis_state(AtomLevel.A1, 1, params.space))
    with warnings.catch_warnings():
        warnings.simplefilter("error", PositivityWarning)
        evolve(rho0, h, cs, 1.0, EvolutionConfig(steps_per_us=1000))


def test_evolve_zero_duration_and_validation():
    rho0 = np.eye(2, dtype=complex) / 2.0
    out, ts = evolve(rho0, np.zeros((2, 2)), [], 0.0)
    np.testing.assert_array_equal(out, rho0)
    assert ts.times.shape == (1,)
    with pytest.raises(ValueError):
        evolve(rho0, np.zeros((2, 2)), [], -1.0)
    with pytest.raises(DimensionMismatchError):
        evolve(rho0, np.zeros((3, 3)), [], 1.0)


def test_config_and_timeseries_validation():
    with pytest.raises(ValueError):
        EvolutionConfig(steps_per_us=0)
    with pytest.raises(ValueError):
        EvolutionConfig(record_every=0)
    with pytest.raises(ValueError):
        TimeSeries(np.array([0.0, 0.0]), {"x": np.array([1.0, 2.0])})
    with pytest.raises(ValueError):
        TimeSeries(np.array([0.0, 1.0]), {"x": np.array([1.0])})
