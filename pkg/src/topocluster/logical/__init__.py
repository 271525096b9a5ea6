"""Logical qubits on defect pairs: geometries, correlation surfaces, frames and verification."""

from .frame import (
    ByproductFrame,
    Injection,
    MeasurementPattern,
    PatternError,
    inject_state,
    logical_failure,
    make_plus_init,
    make_readout,
    make_zero_init,
    measure_logical,
)
from .geometry import (
    LogicalQubit,
    Scenario,
    cnot_scenario,
    identity_scenario,
    init_scenario,
    injection_scenario,
    readout_scenario,
    round_trip_scenario,
)
from .surfaces import CorrelationSolver, Surface

__all__ = [
    "ByproductFrame",
    "CorrelationSolver",
    "Injection",
    "LogicalQubit",
    "MeasurementPattern",
    "PatternError",
    "Scenario",
    "Surface",
    "cnot_scenario",
    "identity_scenario",
    "init_scenario",
    "inject_state",
    "injection_scenario",
    "logical_failure",
    "make_plus_init",
    "make_readout",
    "make_zero_init",
    "measure_logical",
    "readout_scenario",
    "round_trip_scenario",
]
