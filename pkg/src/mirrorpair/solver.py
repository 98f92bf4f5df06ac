"""Retarded-time transit solver for a wavecrest crossing the mirror pair.

Each leg is solved for its perturbation ``delta = t_leg - rest/c`` rather
than for ``t_leg`` itself. A 3e-7 m excursion on a 1e4 m leg would otherwise
vanish in the rounding of a ~3e-5 s transit time.

Orientation: the platform coordinate ``x`` points from the mirrors back
toward the source, the direction of positive ``V``. A positive ``x``
therefore shortens the first leg, and a uniformly moving pair adds
``+2 D k V / c`` to the transmitted phase. In terms of the mirror offset
``u = -x`` measured along the first leg, the three legs are

    c t1 = d0 + u(t + t1)
    c t2 = D + u(t + t1) - u(t + t1 + t2)        (geometric)
    c t2 = d0 - D + u(t + t1 + t2)               (literal)
    c t3 = L - (d0 - D + u(t + t1 + t2))
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .constants import C
from .errors import GeometryError, NoConvergence, NotHarmonic
from .model import Harmonic, Mode, Scenario, Trajectory

MAX_ITER = 200
DELTA_ATOL = 1e-30  # seconds; the 4-ulp relative test usually decides
_EPS = float(np.finfo(float).eps)


def _scalar_or_array(value, like):
    return float(value) if np.ndim(like) == 0 else value


def _fixed_point(update, delta, max_iter):
    if np.ndim(delta) == 0:
        delta = float(delta)
        for _ in range(max_iter):
            new = update(delta)
            step = abs(new - delta)
            delta = new
            if step <= max(DELTA_ATOL, 4 * _EPS * abs(delta)):
                return delta, True
        return delta, False
    for _ in range(max_iter):
        new = update(delta)
        step = np.abs(new - delta)
        delta = new
        if np.all(step <= np.maximum(DELTA_ATOL, 4 * _EPS * np.abs(delta))):
            return delta, True
    return delta, False


def _bisect(update, center, half, max_iter):
    """Root of ``delta - update(delta)``, which is increasing for a contracting map."""
    def f(d):
        return d - update(d)

    if np.ndim(center) == 0 and np.ndim(half) == 0:
        return _bisect_scalar(f, float(center), float(half), max_iter)
    center = np.asarray(center, dtype=float)
    half = np.broadcast_to(np.asarray(half, dtype=float), center.shape)

    lo, hi = center - half, center + half
    for _ in range(max_iter):
        bad = (f(lo) > 0) | (f(hi) < 0)
        if not np.any(bad):
            break
        half = np.where(bad, 2 * half, half)
        lo, hi = center - half, center + half
    else:
        raise NoConvergence("bisection could not bracket the transit time")

    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        done = (mid == lo) | (mid == hi)
        if np.all(done):
            break
        below = f(mid) <= 0
        lo = np.where(below & ~done, mid, lo)
        hi = np.where(~below & ~done, mid, hi)
    return 0.5 * (lo + hi)


def _bisect_scalar(f, center, half, max_iter):
    # plain floats: 0-d numpy arithmetic is several times slower
    lo, hi = center - half, center + half
    for _ in range(max_iter):
        if f(lo) <= 0 <= f(hi):
            break
        half *= 2
        lo, hi = center - half, center + half
    else:
        raise NoConvergence("bisection could not bracket the transit time")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if f(mid) <= 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _solve(update, bound, like, method, max_iter, fallback):
    """Fixed point of ``delta = update(delta)``; ``bound`` caps |delta - update(0)|."""
    if method not in ("fixed_point", "bisection"):
        raise ValueError(f"unknown method {method!r}")
    start = update(0.0 * np.asarray(like, dtype=float))
    half = 2.0 * bound if math.isfinite(bound) else np.maximum(np.abs(start), 1e-30)
    half = np.maximum(half, 1e-30)
    if method == "bisection":
        return _scalar_or_array(_bisect(update, start, half, MAX_ITER), like)
    delta, ok = _fixed_point(update, start, max_iter)
    if not ok:
        if not fallback:
            raise NoConvergence(f"fixed-point iteration hit the {max_iter}-step cap")
        delta = _bisect(update, start, half, MAX_ITER)
    return _scalar_or_array(delta, like)


def transit_perturbation(
    rest_distance,
    sign: int,
    traj: Trajectory,
    t_start,
    offset=0.0,
    *,
    method: str = "fixed_point",
    max_iter: int = MAX_ITER,
    fallback: bool = True,
):
    """Solve ``c*delta = offset + sign*x(t_start + rest/c + delta)`` for delta.

    ``method="fixed_point"`` iterates the map directly; the contraction factor
    is the mirror speed over c. Elements that stall are retried by bisection
    unless ``fallback`` is False, in which case :class:`NoConvergence` is
    raised. ``method="bisection"`` skips the iteration entirely.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if not rest_distance > 0:
        raise ValueError(f"rest_distance must be > 0, got {rest_distance!r}")
    base = t_start + rest_distance / C

    def update(d):
        return (offset + sign * traj.position(base + d)) / C

    return _solve(update, traj.max_excursion / C, t_start, method, max_iter, fallback)


def _gap_perturbation(rest_distance, sign, traj, t_start, *, method="fixed_point", max_iter=MAX_ITER, fallback=True):
    """Solve ``c*delta = sign*(x(t_start + rest/c + delta) - x(t_start))``.

    Same leg as :func:`transit_perturbation` with ``offset = -sign*x(t_start)``,
    but the position difference is formed without cancellation.
    """
    h0 = rest_distance / C

    def update(d):
        return sign * traj.displacement(t_start, h0 + d) / C

    return _solve(update, 2 * traj.max_excursion / C, t_start, method, max_iter, fallback)


def solve_transit(rest_distance, sign: int, traj: Trajectory, t_start, offset=0.0, **kw):
    """Leg time ``t`` with ``c*t = rest_distance + offset + sign*x(t_start + t)``."""
    return rest_distance / C + transit_perturbation(rest_distance, sign, traj, t_start, offset, **kw)


def leg_residual(t_leg, rest_distance, sign, traj, t_start, offset=0.0):
    """Path mismatch in metres of a solved leg; zero at the exact solution."""
    return C * t_leg - (rest_distance + offset + sign * traj.position(t_start + t_leg))


@dataclass(frozen=True)
class TraversalResult:
    t1: float
    t2: float
    t3: float
    dt1: float
    dt2: float
    dt3: float
    phase: float
    phase_perturbation: float
    delay_perturbation: float


def traverse(s: Scenario, t_emit, *, direction: int = 1, method: str = "fixed_point") -> TraversalResult:
    """Follow the crest emitted at ``t_emit`` from source to receiver.

    ``t_emit`` may be an array; the result fields then are arrays too.
    ``direction=-1`` runs the counter-propagating beam of a Sagnac loop:
    it enters through the receiver end, so the first rest distance is
    ``L - d0 + D`` and the mirror offset flips sign.
    """
    traj = s.trajectory
    t = np.asarray(t_emit, dtype=float) if np.ndim(t_emit) else float(t_emit)
    if direction == 1:
        d_first = s.d0
    elif direction == -1:
        d_first = s.L - s.d0 + s.D
    else:
        raise ValueError("direction must be +1 or -1")
    # x sign seen by the first leg: u = xs * x
    xs = -direction

    dt1 = transit_perturbation(d_first, xs, traj, t, method=method)
    t1 = d_first / C + dt1
    ta = t + t1

    if s.mode is Mode.GEOMETRIC:
        rest2 = s.D
        dt2 = _gap_perturbation(rest2, -xs, traj, ta, method=method)
    else:
        rest2 = d_first - s.D
        dt2 = transit_perturbation(rest2, xs, traj, ta, method=method)
    t2 = rest2 / C + dt2
    tb = ta + t2

    rest3 = s.L - d_first + s.D
    dt3 = -xs * traj.position(tb) / C
    t3 = rest3 / C + dt3
    if not (np.all(t1 > 0) and np.all(t2 > 0) and np.all(t3 > 0)):
        # unbounded motion has carried a mirror past the source or receiver
        raise GeometryError("non-positive leg time: mirror pair outside the source-receiver span")

    if s.mode is Mode.GEOMETRIC:
        # dt1 + dt3 = (u(ta) - u(tb))/c; differencing the two absolute offsets
        # would lose everything when the platform has moved far (free fall).
        delay = dt2 - xs * traj.displacement(ta, t2) / C
    else:
        delay = dt1 + dt2 + dt3

    w = s.omega0
    return TraversalResult(
        t1=t1,
        t2=t2,
        t3=t3,
        dt1=dt1,
        dt2=dt2,
        dt3=dt3,
        phase=w * (t1 + t2 + t3),
        phase_perturbation=w * delay,
        delay_perturbation=delay,
    )


def traversal_residuals(s: Scenario, t_emit, r: TraversalResult, *, direction: int = 1):
    """Residuals (m) of the three solved leg equations for a traversal result."""
    traj = s.trajectory
    xs = -direction
    d_first = s.d0 if direction == 1 else s.L - s.d0 + s.D
    ta = t_emit + r.t1
    r1 = leg_residual(r.t1, d_first, xs, traj, t_emit)
    if s.mode is Mode.GEOMETRIC:
        r2 = leg_residual(r.t2, s.D, -xs, traj, ta, offset=xs * traj.position(ta))
    else:
        r2 = leg_residual(r.t2, d_first - s.D, xs, traj, ta)
    tb = ta + r.t2
    r3 = C * r.t3 - (s.L - d_first + s.D - xs * traj.position(tb))
    return r1, r2, r3


@dataclass(frozen=True)
class PhaseTrace:
    t_emit: np.ndarray
    phase_perturbation: np.ndarray
    scenario: Optional[Scenario] = None

    def __post_init__(self):
        t = np.asarray(self.t_emit, dtype=float)
        p = np.asarray(self.phase_perturbation, dtype=float)
        if t.ndim != 1 or t.shape != p.shape:
            raise ValueError("t_emit and phase_perturbation must be 1-D arrays of equal length")
        if t.size < 2:
            raise ValueError("a phase trace needs at least 2 samples")
        if np.any(np.diff(t) <= 0):
            raise ValueError("t_emit must be strictly increasing")
        object.__setattr__(self, "t_emit", t)
        object.__setattr__(self, "phase_perturbation", p)

    @property
    def Omega(self) -> float:
        traj = getattr(self.scenario, "trajectory", None)
        if not isinstance(traj, Harmonic):
            raise NotHarmonic("trace scenario has no harmonic trajectory")
        return traj.Omega


def phase_trace(s: Scenario, t_emit) -> PhaseTrace:
    t = np.asarray(t_emit, dtype=float)
    if t.ndim != 1 or t.size < 2 or np.any(np.diff(t) <= 0):
        raise ValueError("t_emit must be a strictly increasing 1-D grid of >= 2 times")
    r = traverse(s, t)
    return PhaseTrace(t, np.asarray(r.phase_perturbation), s)


def _default_step(s: Scenario) -> float:
    traj = s.trajectory
    if isinstance(traj, Harmonic):
        return min(1e-3 / traj.Omega, 1e-3)
    return 1e-3


def delay_rate(s: Scenario, t_emit, h: Optional[float] = None) -> float:
    """d(total delay)/d(emission time), central difference on the perturbation."""
    h = _default_step(s) if h is None else float(h)
    if not h > 0:
        raise ValueError("step h must be > 0")
    hi = traverse(s, t_emit + h).delay_perturbation
    lo = traverse(s, t_emit - h).delay_perturbation
    return (hi - lo) / (2 * h)


def frequency_shift(s: Scenario, t_emit, h: Optional[float] = None) -> float:
    """Received minus emitted angular frequency (rad/s).

    Use this rather than differencing :func:`received_frequency` against
    omega0: shifts of order 1e-19*omega0 are below double resolution.
    """
    return -s.omega0 * delay_rate(s, t_emit, h)


def received_frequency(s: Scenario, t_emit, h: Optional[float] = None) -> float:
    return s.omega0 * (1.0 - delay_rate(s, t_emit, h))


@dataclass(frozen=True)
class RetroResult:
    tA: float
    tB: float
    dtA: float
    dtB: float
    phase: float
    phase_perturbation: float


def retro_traverse(d0: float, traj: Trajectory, t_emit, omega0: float) -> RetroResult:
    """Single-mirror round trip with a co-located source and receiver.

    The lone mirror has the same orientation as the first mirror of the pair.
    """
    if not d0 > (traj.max_excursion if math.isfinite(traj.max_excursion) else 0.0):
        raise GeometryError("retro mirror can reach the source: need d0 > x0")
    t = np.asarray(t_emit, dtype=float) if np.ndim(t_emit) else float(t_emit)
    dtA = transit_perturbation(d0, -1, traj, t)
    tA = d0 / C + dtA
    dtB = -traj.position(t + tA) / C
    tB = d0 / C + dtB
    if not (np.all(tA > 0) and np.all(tB > 0)):
        raise GeometryError("non-positive leg time: mirror has passed the source")
    return RetroResult(tA, tB, dtA, dtB, omega0 * (tA + tB), omega0 * (dtA + dtB))


def sagnac_difference(s: Scenario, t_emit):
    """Phase of the forward beam minus the counter-propagating one (rad)."""
    if not s.L - s.d0 - s.x0_max > 0:
        raise GeometryError("counter-propagating beam needs L - d0 - x0 > 0")
    fwd = traverse(s, t_emit).phase_perturbation
    back = traverse(s, t_emit, direction=-1).phase_perturbation
    return fwd - back
