"""Signal Ratio of the oscillating mirror pair against a single retro-reflecting mirror."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from .constants import C
from .errors import DegenerateBaseline, MirrorPairError, NotHarmonic, TooFewPoints
from .model import Harmonic, Scenario
from .solver import retro_traverse, sagnac_difference, traverse

DEFAULT_SAMPLES = 256
ORACLE_SAMPLES = 8192
BASELINE_FLOOR = 1e-18  # rad


@dataclass(frozen=True)
class SignalRatioPoint:
    Omega: float
    tau_over_T: float
    pair_amp: float
    single_amp: float
    ratio: float
    error: Optional[str] = None

    @property
    def valid(self) -> bool:
        return self.error is None


class ExtremumKind(str, Enum):
    PEAK = "peak"
    TROUGH = "trough"


@dataclass(frozen=True)
class Extremum:
    Omega: float
    ratio: float
    kind: ExtremumKind
    tau_over_T: float = math.nan


def tau_over_T(D: float, Omega: float) -> float:
    """Mirror-to-mirror transit time over the oscillation period."""
    return D * Omega / (2 * math.pi * C)


def omega_for_tau_over_T(D: float, ratio: float) -> float:
    return 2 * math.pi * C * ratio / D


def _parabola_vertex(y0, y1, y2):
    """Offset (in samples, |p| <= 1/2) and value of the parabola vertex through 3 points."""
    den = y0 - 2 * y1 + y2
    if den == 0:
        return 0.0, y1
    p = min(max(0.5 * (y0 - y2) / den, -0.5), 0.5)
    return p, y1 + 0.5 * (y2 - y0) * p + 0.5 * den * p * p


def refined_half_range(y, periodic: bool = True) -> float:
    """Half peak-to-peak of samples, each extremum refined by a 3-point parabola.

    With ``periodic`` the samples are taken as one full period without the
    repeated endpoint, so neighbours wrap around.
    """
    y = np.asarray(y, dtype=float)
    n = y.size
    if n < 3:
        return 0.5 * float(np.ptp(y)) if n else 0.0

    def refine(i):
        if periodic:
            return _parabola_vertex(y[(i - 1) % n], y[i], y[(i + 1) % n])[1]
        if 0 < i < n - 1:
            return _parabola_vertex(y[i - 1], y[i], y[i + 1])[1]
        return y[i]

    hi = refine(int(np.argmax(y)))
    lo = refine(int(np.argmin(y)))
    return 0.5 * max(hi - lo, 0.0)


def _period_grid(traj: Harmonic, samples: int, t0: float = 0.0):
    return t0 + traj.period * np.arange(samples) / samples


def _require_harmonic(s: Scenario) -> Harmonic:
    if not isinstance(s.trajectory, Harmonic):
        raise NotHarmonic(f"need a harmonic trajectory, got {s.trajectory.kind}")
    return s.trajectory


def max_phase_variation(s: Scenario, samples_per_period: int = DEFAULT_SAMPLES, t0: float = 0.0) -> float:
    """Half peak-to-peak of the pair's phase perturbation over one period (rad)."""
    traj = _require_harmonic(s)
    if samples_per_period < 64:
        raise ValueError("samples_per_period must be >= 64")
    if traj.x0 == 0:
        return 0.0
    t = _period_grid(traj, samples_per_period, t0)
    return refined_half_range(traverse(s, t).phase_perturbation)


def single_mirror_variation(s: Scenario, samples_per_period: int = DEFAULT_SAMPLES, t0: float = 0.0) -> float:
    """Same estimator for retro-reflection from one mirror at ``d0``."""
    traj = _require_harmonic(s)
    if traj.x0 == 0:
        return 0.0
    t = _period_grid(traj, samples_per_period, t0)
    return refined_half_range(retro_traverse(s.d0, traj, t, s.omega0).phase_perturbation)


def signal_ratio(s: Scenario, Omega: Optional[float] = None, samples_per_period: int = DEFAULT_SAMPLES) -> SignalRatioPoint:
    traj = _require_harmonic(s)
    if Omega is not None:
        s = s.with_trajectory(replace(traj, Omega=Omega))
        traj = s.trajectory
    single = single_mirror_variation(s, samples_per_period)
    if single < BASELINE_FLOOR:
        raise DegenerateBaseline(f"single-mirror amplitude {single:g} rad is below {BASELINE_FLOOR:g}")
    pair = max_phase_variation(s, samples_per_period)
    return SignalRatioPoint(
        Omega=traj.Omega,
        tau_over_T=tau_over_T(s.D, traj.Omega),
        pair_amp=float(pair),
        single_amp=float(single),
        ratio=float(pair / single),
    )


def _safe_point(s, Omega, samples_per_period):
    try:
        return signal_ratio(s, Omega, samples_per_period)
    except (MirrorPairError, ValueError) as exc:
        nan = math.nan
        return SignalRatioPoint(Omega, tau_over_T(s.D, Omega), nan, nan, nan, error=f"{type(exc).__name__}: {exc}")


def sweep_signal_ratio(
    s: Scenario,
    Omega_grid: Sequence[float],
    samples_per_period: int = DEFAULT_SAMPLES,
    threads: int = 1,
) -> list[SignalRatioPoint]:
    """Signal Ratio at each grid frequency, in grid order.

    A point whose scenario is invalid at that frequency is returned with
    NaN values and ``error`` set; the sweep carries on.
    """
    grid = [float(w) for w in Omega_grid]
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("Omega_grid must be strictly increasing")
    _require_harmonic(s)
    if threads <= 1 or len(grid) < 2:
        return [_safe_point(s, w, samples_per_period) for w in grid]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda w: _safe_point(s, w, samples_per_period), grid))


def locate_extrema(points: Sequence[SignalRatioPoint]) -> list[Extremum]:
    """Interior local maxima and minima of ``ratio``, parabola-refined.

    A run of equal values counts once and is reported at its first point.
    Invalid points are skipped.
    """
    if len(points) < 3:
        raise TooFewPoints(f"need at least 3 points, got {len(points)}")
    pts = [p for p in points if p.valid]
    # collapse plateaus to their first point
    starts = [i for i in range(len(pts)) if i == 0 or pts[i].ratio != pts[i - 1].ratio]
    out = []
    for r in range(1, len(starts) - 1):
        j = starts[r]
        a, b, c = pts[j - 1], pts[j], pts[starts[r + 1]]
        if b.ratio > a.ratio and b.ratio > c.ratio:
            kind = ExtremumKind.PEAK
        elif b.ratio < a.ratio and b.ratio < c.ratio:
            kind = ExtremumKind.TROUGH
        else:
            continue
        if starts[r + 1] != j + 1:
            out.append(Extremum(b.Omega, b.ratio, kind, b.tau_over_T))
            continue
        p, value = _parabola_vertex(a.ratio, b.ratio, c.ratio)
        nb = c if p > 0 else a
        frac = abs(p)
        out.append(
            Extremum(
                Omega=b.Omega + frac * (nb.Omega - b.Omega),
                ratio=value,
                kind=kind,
                tau_over_T=b.tau_over_T + frac * (nb.tau_over_T - b.tau_over_T),
            )
        )
    return out


def sagnac_amplitude(s: Scenario, samples_per_period: int = DEFAULT_SAMPLES) -> float:
    """Half peak-to-peak of the forward-minus-counter-propagating phase."""
    traj = _require_harmonic(s)
    t = _period_grid(traj, samples_per_period)
    return refined_half_range(sagnac_difference(s, t))
