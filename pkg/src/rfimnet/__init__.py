"""Distributed zero-temperature RFIM hysteresis simulations over XML-RPC.

The package has two halves:

* a deterministic, seeded simulation core (`params`, `lattice`, `relax`,
  `hysteresis`, `ensemble`) that produces one hysteresis loop per run, and
* the orchestration layer (`xmlrpc`, `coordinator`, `scheduler`, `simcli`)
  that fans runs out to worker processes and aggregates their results on a
  central server.
"""

from .params import SimulationParams, derive_run_seed
from .lattice import SpinLattice, DisorderRealization, generate_disorder, local_field, magnetization
from .relax import RelaxationError, relax
from .hysteresis import (
    HysteresisCurve,
    LoopMetrics,
    NoCrossingError,
    extract_metrics,
    field_schedule,
    read_curve_csv,
    run_hysteresis,
    run_sweep,
    write_curve_csv,
)
from .ensemble import EnsembleResult, run_ensemble

__version__ = "0.1.0"

__all__ = [
    "SimulationParams",
    "derive_run_seed",
    "SpinLattice",
    "DisorderRealization",
    "generate_disorder",
    "local_field",
    "magnetization",
    "RelaxationError",
    "relax",
    "HysteresisCurve",
    "LoopMetrics",
    "NoCrossingError",
    "extract_metrics",
    "field_schedule",
    "read_curve_csv",
    "run_hysteresis",
    "run_sweep",
    "write_curve_csv",
    "EnsembleResult",
    "run_ensemble",
]
