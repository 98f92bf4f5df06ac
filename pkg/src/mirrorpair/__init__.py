"""Retarded-time simulation of a photon crossing a rigid, moving mirror pair."""

from .constants import C, CONSTANTS, G, G0, HBAR, Constants
from .errors import (
    DegenerateBaseline,
    GeometryError,
    NoConvergence,
    NotHarmonic,
    SubluminalError,
)
from .formulary import (
    GravityShifts,
    LedgerResult,
    Massive,
    Photon,
    absorption_recoil_time,
    closed_form_phase,
    delay_displacement,
    gravity_shifts,
    photon_stream_ledger,
    planck_length,
    sagnac_phase,
    single_photon_rate,
    sql_displacement,
)
from .model import (
    FreeFall,
    Harmonic,
    Mode,
    Scenario,
    Static,
    Uniform,
    make_scenario,
    platform_position,
    platform_velocity,
)
from .solver import (
    PhaseTrace,
    TraversalResult,
    frequency_shift,
    phase_trace,
    received_frequency,
    retro_traverse,
    solve_transit,
    traverse,
)
from .sweep import (
    Extremum,
    SignalRatioPoint,
    locate_extrema,
    max_phase_variation,
    signal_ratio,
    sweep_signal_ratio,
)

__version__ = "0.1.0"

__all__ = [
    "C",
    "CONSTANTS",
    "G",
    "G0",
    "HBAR",
    "Constants",
    "DegenerateBaseline",
    "GeometryError",
    "NoConvergence",
    "NotHarmonic",
    "SubluminalError",
    "GravityShifts",
    "LedgerResult",
    "Massive",
    "Photon",
    "absorption_recoil_time",
    "closed_form_phase",
    "delay_displacement",
    "gravity_shifts",
    "photon_stream_ledger",
    "planck_length",
    "sagnac_phase",
    "single_photon_rate",
    "sql_displacement",
    "FreeFall",
    "Harmonic",
    "Mode",
    "Scenario",
    "Static",
    "Uniform",
    "make_scenario",
    "platform_position",
    "platform_velocity",
    "PhaseTrace",
    "TraversalResult",
    "frequency_shift",
    "phase_trace",
    "received_frequency",
    "retro_traverse",
    "solve_transit",
    "traverse",
    "Extremum",
    "SignalRatioPoint",
    "locate_extrema",
    "max_phase_variation",
    "signal_ratio",
    "sweep_signal_ratio",
]
