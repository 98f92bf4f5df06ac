"""Closed-form phases, displacements and gravitational frequency shifts.

All quantities are SI doubles. There is no unit system; the homogeneity
property tests pin each formula's scaling instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from .constants import C, G, HBAR

# Inferred He-Ne displacement quoted for the falling-pair experiment (m).
# Kept only for comparison; the delay formula gives a smaller value.
REPORTED_HENE_DISPLACEMENT = 3.6e-36
HENE_WAVELENGTH = 633e-9


def _positive(**kw):
    for name, value in kw.items():
        if not value > 0 or not math.isfinite(value):
            raise ValueError(f"{name} must be positive and finite, got {value!r}")


def omega_from_wavelength(wavelength: float) -> float:
    _positive(wavelength=wavelength)
    return 2 * math.pi * C / wavelength


@dataclass(frozen=True)
class Massive:
    m: float
    v: float

    def __post_init__(self):
        _positive(m=self.m, v=self.v)
        if self.v >= C:
            raise ValueError(f"massive particle needs v < c, got {self.v!r}")

    @property
    def speed(self) -> float:
        return self.v


@dataclass(frozen=True)
class Photon:
    omega0: float

    def __post_init__(self):
        _positive(omega0=self.omega0)

    @property
    def speed(self) -> float:
        return C

    @property
    def k(self) -> float:
        return self.omega0 / C


ParticleParams = Union[Massive, Photon]


def _check_slow_platform(p: ParticleParams, V: float):
    if abs(V) >= 0.01 * p.speed:
        raise ValueError(f"|V| must be << particle speed; got V={V!r}, speed={p.speed!r}")


def velocity_phase(p: ParticleParams, D: float, V: float) -> float:
    """Phase gained from the platform speed on one pass through the pair."""
    _check_slow_platform(p, V)
    if isinstance(p, Massive):
        return 2 * D * p.m * V / HBAR
    return 2 * D * p.k * V / C


def closed_form_phase(p: ParticleParams, L: float, D: float, V: float) -> float:
    """Source-to-receiver phase through a pair moving at ``V`` (first order in V)."""
    _positive(L=L, D=D)
    if isinstance(p, Massive):
        static = p.m * p.v * (L + 2 * D) / HBAR
    else:
        static = p.k * (L + 2 * D)
    return static + velocity_phase(p, D, V)


def sagnac_phase(p: ParticleParams, D: float, V: float) -> float:
    """Counter-propagating phase difference: twice the one-way velocity term."""
    _positive(D=D)
    return 2 * velocity_phase(p, D, V)


def delay_displacement(D: float, omega0: float, M: float) -> float:
    """Platform shift caused by one photon's 2D/c traversal delay: 2 D hbar w / (M c^2)."""
    _positive(D=D, omega0=omega0, M=M)
    return 2 * D * HBAR * omega0 / (M * C * C)


def planck_length() -> float:
    return math.sqrt(HBAR * G / C**3)


def sql_displacement(Theta: float, M: float) -> float:
    """Standard-quantum-limit displacement sqrt(hbar*Theta/M) for pulse interval Theta."""
    _positive(Theta=Theta, M=M)
    return math.sqrt(HBAR * Theta / M)


def absorption_recoil_time(D: float, epsilon: float) -> float:
    """Time for absorption recoil to move the platform as far as the delay shift does.

    ``epsilon == 0`` (lossless mirrors) returns ``inf``.
    """
    _positive(D=D)
    if not 0 <= epsilon < 1:
        raise ValueError(f"epsilon must be in [0, 1), got {epsilon!r}")
    if epsilon == 0:
        return math.inf
    return D / (epsilon * C)


@dataclass(frozen=True)
class GravityShifts:
    d_omega_EP: float
    d_omega_displaced: float
    d_omega_L: float
    residual: float
    # d_omega_displaced again, via M*g*delay_displacement/hbar
    d_omega_displaced_energy: float


def gravity_shifts(omega0: float, g: float, D: float, L: float, M: float) -> GravityShifts:
    """Equivalence-principle shift and its split into displacement and height terms.

    The displacement term is computed twice: directly as 2 g D w/c^2 and as
    the platform's potential-energy loss M g dX / hbar, where M cancels.
    """
    _positive(omega0=omega0, D=D, L=L, M=M)
    if not math.isfinite(g) or g < 0:
        raise ValueError(f"g must be >= 0, got {g!r}")
    ep = omega0 * g * (2 * D + L) / C**2
    displaced = omega0 * 2 * g * D / C**2
    height = omega0 * g * L / C**2
    via_energy = M * g * delay_displacement(D, omega0, M) / HBAR
    return GravityShifts(ep, displaced, height, ep - displaced - height, via_energy)


@dataclass(frozen=True)
class LedgerResult:
    n_photons: int
    platform_disp: float
    frame_disp: float
    cm_residual: float
    absorbed_recoil_equiv_time: float
    transported_mass: float
    classical_platform_disp: float = 0.0

    @property
    def quantum_classical_gap(self) -> float:
        return self.platform_disp - self.classical_platform_disp


def photon_stream_ledger(
    n: int,
    omega0: float,
    D: float,
    M_platform: float,
    M_frame: float,
    epsilon: float = 0.0,
) -> LedgerResult:
    """Centre-of-mass bookkeeping for ``n`` photons crossing a free platform.

    Each photon carries mass hbar*w/c^2 from source to receiver, both on the
    frame. The platform creeps forward by ``n`` delay displacements and the
    frame recoils so the total centre of mass stays put. ``cm_residual`` is
    the resulting centre-of-mass shift, zero up to rounding. A classical
    field predicts no platform motion at all.
    """
    if int(n) != n or n < 0:
        raise ValueError(f"n must be a non-negative integer, got {n!r}")
    _positive(M_platform=M_platform, M_frame=M_frame)
    platform = n * delay_displacement(D, omega0, M_platform)
    frame = -platform * M_platform / M_frame
    cm = (M_platform * platform + M_frame * frame) / (M_platform + M_frame)
    return LedgerResult(
        n_photons=int(n),
        platform_disp=platform,
        frame_disp=frame,
        cm_residual=cm,
        absorbed_recoil_equiv_time=absorption_recoil_time(D, epsilon),
        transported_mass=n * HBAR * omega0 / C**2,
    )


def single_photon_rate(D: float) -> float:
    """Photon rate c/D that keeps on average one photon between the mirrors."""
    _positive(D=D)
    return C / D
