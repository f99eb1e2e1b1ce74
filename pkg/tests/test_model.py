from dataclasses import replace

import numpy as np
import pytest

from scwgate.hilbert import AtomLevel, SpaceSpec, basis_state
from scwgate.model import (
    HBAR_SI,
    KB_SI,
    PositionNoise,
    SystemParams,
    build_collapse_ops,
    build_hamiltonian,
    cz_condition,
    nbar_th,
)

PARAMS = SystemParams()
OMEGA_C = 2.0 * np.pi * 5037.0  # rad/us

# frozen from direct evaluation with the SI constants above
NBAR_50MK = 8.012302591378534e-3
X_50MK = 4.8347574691467825


def test_nbar_zero_temperature():
    assert nbar_th(OMEGA_C, 0.0) == 0.0


def test_nbar_at_reference_point():
    x = HBAR_SI * OMEGA_C * 1e6 / (KB_SI * 0.050)
    assert x == pytest.approx(X_50MK, rel=1e-12)
    assert x == pytest.approx(4.834, abs=1e-3)
    assert nbar_th(OMEGA_C, 0.050) == pytest.approx(NBAR_50MK, rel=1e-12)
    assert nbar_th(OMEGA_C, 0.050) == pytest.approx(8.0e-3, abs=2e-5)


def test_nbar_log2_fixed_point():
    # hbar w / kB T = ln 2 makes the occupation exactly one
    t_star = HBAR_SI * OMEGA_C * 1e6 / (KB_SI * np.log(2.0))
    assert nbar_th(OMEGA_C, t_star) == pytest.approx(1.0, abs=1e-12)


def test_derived_quantities():
    assert PARAMS.eta == pytest.approx(np.sqrt(6.0) / 2.0, rel=1e-14)
    assert PARAMS.kappa == pytest.approx(OMEGA_C / 2.0e5, rel=1e-14)
    assert PARAMS.nbar == pytest.approx(NBAR_50MK, rel=1e-12)
    assert PARAMS.gate_duration == pytest.approx(1.0, rel=1e-14)


def test_params_validation():
    with pytest.raises(ValueError):
        SystemParams(omega_laser=0.0)
    with pytest.raises(ValueError):
        SystemParams(q_factor=0.5)
    with pytest.raises(ValueError):
        SystemParams(temperature=-1e-3)
    with pytest.raises(ValueError):
        SystemParams(n_max=0)
    with pytest.raises(ValueError):
        SystemParams(g=-1.0)
    with pytest.raises(ValueError):
        PositionNoise(sigma=-0.1)


def test_hamiltonian_both_off_is_zero():
    h = build_hamiltonian(PARAMS, laser_on=False, microwave_on=False)
    assert np.count_nonzero(h) == 0


def test_hamiltonian_hermitian_by_construction():
    h = build_hamiltonian(PARAMS, True, True)
    assert np.max(np.abs(h - h.conj().T)) <= 1e-12


def test_laser_only_rabi_block():
    space = PARAMS.space
    h = build_hamiltonian(PARAMS, laser_on=True, microwave_on=False)
    i = space.index(AtomLevel.A1, 0)   # |0m 1a>
    j = space.index(AtomLevel.R1, 0)   # |0m r1>
    block = h[np.ix_([i, j], [i, j])]
    expected = 0.5 * PARAMS.omega_laser * np.array([[0.0, 1.0], [1.0, 0.0]])
    np.testing.assert_allclose(block, expected, atol=1e-14)


def test_full_hamiltonian_matches_dressed_three_level_block():
    # change of basis to (|+>, |->, |1m 1a>) must reproduce
    # (Omega / 2 sqrt 2) [[2 eta, 0, 1], [0, -2 eta, 1], [1, 1, 0]]
    space = PARAMS.space
    h = build_hamiltonian(PARAMS, True, True)
    v_11 = basis_state(AtomLevel.A1, 1, space).amplitudes
    v_1r1 = basis_state(AtomLevel.R1, 1, space).amplitudes
    v_0r2 = basis_state(AtomLevel.R2, 0, space).amplitudes
    plus = (v_1r1 + v_0r2) / np.sqrt(2.0)
    minus = (v_1r1 - v_0r2) / np.sqrt(2.0)
    basis = np.column_stack([plus, minus, v_11])
    block = basis.conj().T @ h @ basis
    eta = PARAMS.eta
    expected = (PARAMS.omega_laser / (2.0 * np.sqrt(2.0))) * np.array(
        [[2 * eta, 0, 1], [0, -2 * eta, 1], [1, 1, 0]]
    )
    np.testing.assert_allclose(block, expected, atol=1e-12)


def test_microwave_single_photon_block_is_g_sigma_x():
    space = PARAMS.space
    h = build_hamiltonian(PARAMS, laser_on=False, microwave_on=True)
    i = space.index(AtomLevel.R1, 1)   # |1m r1>
    j = space.index(AtomLevel.R2, 0)   # |0m r2>
    block = h[np.ix_([i, j], [i, j])]
    np.testing.assert_allclose(
        block, PARAMS.g * np.array([[0.0, 1.0], [1.0, 0.0]]), atol=1e-14
    )
    # and the pair is an invariant subspace: rows couple nowhere else
    mask = np.ones(space.total_dim, dtype=bool)
    mask[[i, j]] = False
    assert np.max(np.abs(h[np.ix_([i, j], np.where(mask)[0])])) == 0.0


def test_microwave_annihilates_zero_photon_r1():
    space = PARAMS.space
    h = build_hamiltonian(PARAMS, laser_on=False, microwave_on=True)
    psi = basis_state(AtomLevel.R1, 0, space).amplitudes
    assert np.max(np.abs(h @ psi)) == 0.0


def test_collapse_ops_structure():
    cs = build_collapse_ops(PARAMS)
    assert len(cs) == 4
    space = PARAMS.space
    # c0: R1 -> G at rate 1/tau1; operator norm squared = 1/tau1
    c0 = cs[0].matrix
    sv = np.linalg.svd(c0, compute_uv=False)
    assert sv[0] ** 2 == pytest.approx(1.0 / 820.0, rel=1e-12)
    i = space.index(AtomLevel.G, 3)
    j = space.index(AtomLevel.R1, 3)
    assert c0[i, j] == pytest.approx(1.0 / np.sqrt(820.0), rel=1e-12)
    # c2 prefactor: omega_c / Q = 2pi x 25.185 kHz in rad/us
    c2 = cs[2].matrix
    k = space.index(AtomLevel.A0, 0)
    kk = space.index(AtomLevel.A0, 1)
    rate = abs(c2[k, kk]) ** 2  # sqrt(1) ladder element squared
    assert rate == pytest.approx((PARAMS.nbar + 1.0) * 2.0 * np.pi * 5037.0 / 2.0e5, rel=1e-12)


def test_collapse_thermal_pump_vanishes_at_zero_temperature():
    cs = build_collapse_ops(replace(PARAMS, temperature=0.0))
    assert np.count_nonzero(cs[3].matrix) == 0


@pytest.mark.parametrize(
    "g_factor,expected",
    [(1.0, 0.0), (2.0, 1.0)],
)
def test_cz_condition_values(g_factor, expected):
    params = replace(PARAMS, g=PARAMS.g * g_factor)
    assert cz_condition(params) == pytest.approx(expected, abs=1e-12)


def test_cz_condition_no_coupling():
    assert cz_condition(replace(PARAMS, g=0.0)) == pytest.approx(-1.0, abs=1e-15)
