"""Steady-state transmission and photon statistics of driven dissipative
Kerr mode networks with synthetic flux."""

from kerrflux._core import (
    AmplitudeSolution,
    ConfigError,
    CouplingSpec,
    DriveSpec,
    EffectiveModel,
    ModeSpec,
    NetworkModel,
    ObservableSet,
    PairObservables,
    PortPair,
    SolverError,
    SweepResult,
    SweepSpec,
    SweepVariable,
    TruncationPolicy,
    UsageError,
    adiabatic_eliminate,
    amplitude_oracle,
    basis_states,
    build_hamiltonian,
    effective_observables,
    evolve,
    gauge_canonicalize,
    kerr_from_material,
    parse_config,
    preset,
    preset_names,
    preset_sweep,
    run_sweep,
    serialize_config,
    solve_observables,
    steady_state,
    validate_timescales,
)

__all__ = [
    "AmplitudeSolution",
    "ConfigError",
    "CouplingSpec",
    "DriveSpec",
    "EffectiveModel",
    "ModeSpec",
    "NetworkModel",
    "ObservableSet",
    "PairObservables",
    "PortPair",
    "SolverError",
    "SweepResult",
    "SweepSpec",
    "SweepVariable",
    "TruncationPolicy",
    "UsageError",
    "adiabatic_eliminate",
    "amplitude_oracle",
    "basis_states",
    "build_hamiltonian",
    "effective_observables",
    "evolve",
    "gauge_canonicalize",
    "kerr_from_material",
    "parse_config",
    "preset",
    "preset_names",
    "preset_sweep",
    "run_sweep",
    "serialize_config",
    "solve_observables",
    "steady_state",
    "validate_timescales",
]

__version__ = "0.1.0"
