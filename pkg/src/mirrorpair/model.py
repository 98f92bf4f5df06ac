"""Platform trajectories and validated simulation scenarios.

The platform coordinate ``x(t)`` is a one-dimensional displacement of the
rigid mirror pair. Both mirrors share it. All functions accept scalar or
numpy-array times.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields, replace
from enum import Enum
from typing import Any, Mapping, Union

import numpy as np

from .constants import C
from .errors import GeometryError, SubluminalError

# x0*Omega/c must stay below this for the transit solver to contract.
MAX_MIRROR_BETA = 0.5
FREE_FALL_G_BOUND = 1e3


def _is_scalar(x) -> bool:
    # isinstance first: np.ndim dominates the cost of scalar solver steps
    return isinstance(x, (float, int)) or np.ndim(x) == 0


def _finite(name, value):
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class Static:
    kind = "static"

    def position(self, t):
        return np.zeros_like(np.asarray(t, dtype=float)) if np.ndim(t) else 0.0

    def velocity(self, t):
        return self.position(t)

    def displacement(self, t, h):
        return self.position(np.add(t, h)) if np.ndim(t) or np.ndim(h) else 0.0

    @property
    def max_excursion(self) -> float:
        return 0.0


@dataclass(frozen=True)
class Uniform:
    V: float
    kind = "uniform"

    def __post_init__(self):
        V = _finite("V", self.V)
        if abs(V) >= MAX_MIRROR_BETA * C:
            raise SubluminalError(f"|V|/c = {abs(V) / C:g} must be < {MAX_MIRROR_BETA}")
        object.__setattr__(self, "V", V)

    def position(self, t):
        return self.V * np.asarray(t, dtype=float) if np.ndim(t) else self.V * float(t)

    def velocity(self, t):
        return np.full_like(np.asarray(t, dtype=float), self.V) if np.ndim(t) else self.V

    def displacement(self, t, h):
        if np.ndim(t) or np.ndim(h):
            return self.V * np.broadcast_to(np.asarray(h, dtype=float), np.broadcast(t, h).shape)
        return self.V * float(h)

    @property
    def max_excursion(self) -> float:
        return math.inf if self.V else 0.0


@dataclass(frozen=True)
class Harmonic:
    x0: float
    Omega: float
    phi0: float = 0.0
    kind = "harmonic"

    def __post_init__(self):
        x0 = _finite("x0", self.x0)
        Omega = _finite("Omega", self.Omega)
        phi0 = _finite("phi0", self.phi0)
        if x0 < 0:
            raise ValueError(f"x0 must be >= 0, got {x0!r}")
        if Omega <= 0:
            raise ValueError(f"Omega must be > 0, got {Omega!r}")
        if x0 * Omega / C >= MAX_MIRROR_BETA:
            raise SubluminalError(
                f"x0*Omega/c = {x0 * Omega / C:g} must be < {MAX_MIRROR_BETA}"
            )
        object.__setattr__(self, "x0", x0)
        object.__setattr__(self, "Omega", Omega)
        object.__setattr__(self, "phi0", phi0)

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.Omega

    def position(self, t):
        if _is_scalar(t):
            return self.x0 * math.cos(self.Omega * float(t) + self.phi0)
        return self.x0 * np.cos(self.Omega * np.asarray(t, dtype=float) + self.phi0)

    def velocity(self, t):
        if _is_scalar(t):
            return -self.x0 * self.Omega * math.sin(self.Omega * float(t) + self.phi0)
        return -self.x0 * self.Omega * np.sin(self.Omega * np.asarray(t, dtype=float) + self.phi0)

    def displacement(self, t, h):
        # product form avoids differencing two nearly equal cosines
        if _is_scalar(t) and _is_scalar(h):
            half = 0.5 * self.Omega * float(h)
            return -2.0 * self.x0 * math.sin(self.Omega * float(t) + self.phi0 + half) * math.sin(half)
        half = 0.5 * self.Omega * np.asarray(h, dtype=float)
        mid = self.Omega * np.asarray(t, dtype=float) + self.phi0 + half
        out = -2.0 * self.x0 * np.sin(mid) * np.sin(half)
        return out if np.ndim(out) else float(out)

    @property
    def max_excursion(self) -> float:
        return self.x0


@dataclass(frozen=True)
class FreeFall:
    g: float
    V0: float = 0.0
    kind = "freefall"

    def __post_init__(self):
        g = _finite("g", self.g)
        V0 = _finite("V0", self.V0)
        if abs(g) >= FREE_FALL_G_BOUND:
            raise ValueError(f"|g| must be < {FREE_FALL_G_BOUND:g}, got {g!r}")
        if abs(V0) >= MAX_MIRROR_BETA * C:
            raise SubluminalError(f"|V0|/c = {abs(V0) / C:g} must be < {MAX_MIRROR_BETA}")
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "V0", V0)

    def position(self, t):
        t = np.asarray(t, dtype=float) if np.ndim(t) else float(t)
        return self.V0 * t + 0.5 * self.g * t * t

    def velocity(self, t):
        t = np.asarray(t, dtype=float) if np.ndim(t) else float(t)
        return self.V0 + self.g * t

    def displacement(self, t, h):
        t = np.asarray(t, dtype=float) if np.ndim(t) else float(t)
        h = np.asarray(h, dtype=float) if np.ndim(h) else float(h)
        return h * (self.V0 + self.g * (t + 0.5 * h))

    @property
    def max_excursion(self) -> float:
        return math.inf if (self.g or self.V0) else 0.0


Trajectory = Union[Static, Uniform, Harmonic, FreeFall]

_TRAJECTORY_KINDS = {cls.kind: cls for cls in (Static, Uniform, Harmonic, FreeFall)}


def platform_position(traj: Trajectory, t):
    """Platform displacement x(t) in metres."""
    return traj.position(t)


def platform_velocity(traj: Trajectory, t):
    """Analytic time derivative of :func:`platform_position`."""
    return traj.velocity(t)


def platform_displacement(traj: Trajectory, t, h):
    """``x(t + h) - x(t)`` without cancellation when ``h`` is small."""
    return traj.displacement(t, h)


def make_trajectory(spec: Trajectory | Mapping[str, Any]) -> Trajectory:
    if isinstance(spec, tuple(_TRAJECTORY_KINDS.values())):
        return spec
    spec = dict(spec)
    kind = str(spec.pop("kind", "static")).lower()
    try:
        cls = _TRAJECTORY_KINDS[kind]
    except KeyError:
        raise ValueError(f"unknown trajectory kind {kind!r}") from None
    allowed = {f.name for f in fields(cls)}
    unknown = set(spec) - allowed
    if unknown:
        raise ValueError(f"unknown {kind} trajectory keys: {sorted(unknown)}")
    return cls(**spec)


class Mode(str, Enum):
    """Second-leg equation variant.

    GEOMETRIC: the crest covers the mirror-to-mirror distance
    ``D + x(t+t1) - x(t+t1+t2)``. LITERAL: ``d0 - D + x(t+t1+t2)``, kept
    for comparison; it does not track the mirror gap.
    """

    GEOMETRIC = "geometric"
    LITERAL = "literal"


@dataclass(frozen=True)
class Scenario:
    L: float
    d0: float
    D: float
    omega0: float
    M: float
    trajectory: Trajectory = field(default_factory=Static)
    mode: Mode = Mode.GEOMETRIC

    def __post_init__(self):
        for name in ("L", "d0", "D", "omega0", "M"):
            object.__setattr__(self, name, _finite(name, getattr(self, name)))
        object.__setattr__(self, "trajectory", make_trajectory(self.trajectory))
        object.__setattr__(self, "mode", Mode(self.mode))

        if self.omega0 <= 0:
            raise ValueError(f"omega0 must be > 0, got {self.omega0!r}")
        if self.M <= 0:
            raise ValueError(f"M must be > 0, got {self.M!r}")
        if self.D <= 0:
            raise GeometryError(f"D must be > 0, got {self.D!r}")
        if not self.L > self.d0 > self.D:
            raise GeometryError(
                f"need L > d0 > D, got L={self.L!r}, d0={self.d0!r}, D={self.D!r}"
            )
        xmax = self.x0_max
        if math.isfinite(xmax):
            if not self.d0 - self.D - xmax > 0:
                raise GeometryError("second mirror can reach the source: need d0 - D - x0 > 0")
            if not self.L - self.d0 + self.D - xmax > 0:
                raise GeometryError("receiver not beyond second mirror: need L - d0 + D - x0 > 0")

    @property
    def k(self) -> float:
        return self.omega0 / C

    @property
    def x0_max(self) -> float:
        # Bound on |x(t)|; the static-geometry checks only apply to bounded motion.
        return self.trajectory.max_excursion

    def with_trajectory(self, trajectory: Trajectory) -> "Scenario":
        return replace(self, trajectory=trajectory)

    def to_dict(self) -> dict:
        traj = {"kind": self.trajectory.kind}
        traj.update({f.name: getattr(self.trajectory, f.name) for f in fields(self.trajectory)})
        return {
            "L": self.L,
            "d0": self.d0,
            "D": self.D,
            "omega0": self.omega0,
            "M": self.M,
            "mode": self.mode.value,
            "trajectory": traj,
        }


_SCENARIO_KEYS = {"L", "d0", "D", "omega0", "M", "mode", "trajectory"}
_FLAT_TRAJECTORY_KEYS = {"x0", "Omega", "phi0", "V", "g", "V0"}


def make_scenario(config: Scenario | Mapping[str, Any]) -> Scenario:
    """Build a validated :class:`Scenario` from a plain mapping.

    The trajectory may be given as a nested ``trajectory`` mapping with a
    ``kind`` key, or flat (``x0``/``Omega``/``phi0`` imply harmonic motion,
    ``V`` uniform, ``g``/``V0`` free fall). Passing a Scenario re-validates
    it and returns an equal copy.
    """
    if isinstance(config, Scenario):
        return Scenario(**{f.name: getattr(config, f.name) for f in fields(Scenario)})

    cfg = dict(config)
    unknown = set(cfg) - _SCENARIO_KEYS - _FLAT_TRAJECTORY_KEYS
    if unknown:
        raise ValueError(f"unknown scenario keys: {sorted(unknown)}")
    flat = {k: cfg.pop(k) for k in list(cfg) if k in _FLAT_TRAJECTORY_KEYS}
    if flat and "trajectory" in cfg:
        raise ValueError("give the trajectory either nested or flat, not both")
    if flat:
        if "x0" in flat or "Omega" in flat:
            flat["kind"] = "harmonic"
        elif "g" in flat:
            flat["kind"] = "freefall"
        elif "V" in flat:
            flat["kind"] = "uniform"
        else:
            flat["kind"] = "freefall"
        cfg["trajectory"] = flat

    missing = {"L", "d0", "D", "omega0", "M"} - set(cfg)
    if missing:
        raise ValueError(f"missing scenario keys: {sorted(missing)}")
    cfg.setdefault("trajectory", Static())
    return Scenario(**cfg)
