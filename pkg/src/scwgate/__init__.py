"""Simulator for a one-step controlled-Z gate between a Rydberg atom and a
microwave mode of a superconducting coplanar waveguide."""

from .hilbert import (
    AtomLevel,
    DensityMatrix,
    PureState,
    SpaceSpec,
    annihilation,
    atom_op,
    basis_state,
    fidelity_with_pure,
    partial_trace_photon,
)
from .lindblad import CollapseOp, EvolutionConfig, TimeSeries, evolve, lindblad_rhs
from .model import (
    PositionNoise,
    SystemParams,
    build_collapse_ops,
    build_hamiltonian,
    cz_condition,
    nbar_th,
)
from .protocols import (
    GateSchedule,
    ProtocolKind,
    PulseStage,
    coherent_demo,
    cz_truth_table,
    eigensystem_h11,
    h11_matrix,
    one_step_schedule,
    population_11_analytic,
    robustness_error,
    three_step_schedule,
)
from .experiments import (
    BellResult,
    QuadratureRule,
    SweepSpec,
    averaged_fidelity_position,
    bell_fidelity,
    hadamard_atom,
    sweep,
)

__version__ = "0.1.0"
