"""Transmit-power comparison of NOMA, FDMA and TDMA in an IRS-assisted
two-user downlink with discrete phase shifts.

Layers: `channel` (fading + path loss + effective gains), `schemes`
(closed-form minimum powers), `solvers` (brute force / LA+AO / RPS+AO over
the phase lattice, backed by `kernels`), `experiments` (Monte Carlo sweeps
and theory validation), `cli` (the `irsma` command).
"""

from .channel import (
    ChannelRealization,
    Geometry,
    IrsConfig,
    PathLossModel,
    PhaseShiftVector,
    best_continuous_phases,
    channel_gain,
    generate_realization,
)
from .kernels import get_backend
from .schemes import (
    InfeasibleGainError,
    NoisePower,
    SchemeKind,
    TargetRates,
    WeightedInverseObjective,
    fdma_power,
    generic_objective,
    noma_power,
    noma_power_order1,
    noma_power_order2,
    tdma_power_terms,
)
from .solvers import (
    Method,
    SolverConfig,
    SolverResult,
    alternating_optimize,
    brute_force,
    la_initialize,
    quantize_to_lattice,
    rps_initialize,
    solve_scheme,
    solve_tdma,
)

__version__ = "0.1.0"

__all__ = [
    "ChannelRealization",
    "Geometry",
    "InfeasibleGainError",
    "IrsConfig",
    "Method",
    "NoisePower",
    "PathLossModel",
    "PhaseShiftVector",
    "SchemeKind",
    "SolverConfig",
    "SolverResult",
    "TargetRates",
    "WeightedInverseObjective",
    "alternating_optimize",
    "best_continuous_phases",
    "brute_force",
    "channel_gain",
    "fdma_power",
    "generate_realization",
    "generic_objective",
    "get_backend",
    "la_initialize",
    "noma_power",
    "noma_power_order1",
    "noma_power_order2",
    "quantize_to_lattice",
    "rps_initialize",
    "solve_scheme",
    "solve_tdma",
    "tdma_power_terms",
]
