"""Sideband spectrum of the phase-modulated transmitted photon.

The optical carrier is removed analytically: a field sample is just
``exp(i*phi(t))`` with ``phi`` the solver's phase perturbation. Records span
a whole number of modulation periods, so every sideband lands exactly on a
DFT bin and no window is needed.
"""

from __future__ import annotations

import decimal
import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import IndexMismatch, NotPowerOfTwo, TooShort
from .solver import PhaseTrace
from .sweep import refined_half_range

BESSEL_BETA_MAX = 20.0


@dataclass(frozen=True)
class SpectrumLine:
    n: int
    freq_offset: float
    power: float


@dataclass(frozen=True)
class BasebandField:
    samples: np.ndarray
    dt: float
    Omega: float

    def __post_init__(self):
        x = np.asarray(self.samples, dtype=complex)
        if not _is_power_of_two(x.size):
            raise NotPowerOfTwo(f"sample count {x.size} is not a power of two")
        if not np.allclose(np.abs(x), 1.0, rtol=0, atol=1e-12):
            raise ValueError("baseband samples must have unit magnitude")
        periods = x.size * self.dt * self.Omega / (2 * math.pi)
        if abs(periods - round(periods)) > 1e-9 * max(periods, 1.0) or round(periods) < 1:
            raise ValueError(f"record spans {periods!r} periods; must be a whole number")
        object.__setattr__(self, "samples", x)

    @property
    def n_periods(self) -> int:
        return int(round(self.samples.size * self.dt * self.Omega / (2 * math.pi)))


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and n & (n - 1) == 0


def fft_radix2(x) -> np.ndarray:
    """Iterative decimation-in-time FFT, natural-order output, e^{-i...} convention."""
    a = np.asarray(x, dtype=complex).copy()
    n = a.size
    if not _is_power_of_two(n):
        raise NotPowerOfTwo(f"length {n} is not a power of two")
    bits = n.bit_length() - 1
    if bits:
        idx = np.arange(n)
        rev = np.zeros(n, dtype=np.int64)
        for b in range(bits):
            rev |= ((idx >> b) & 1) << (bits - 1 - b)
        a = a[rev]
    size = 2
    while size <= n:
        half = size // 2
        tw = np.exp(-2j * math.pi * np.arange(half) / size)
        blocks = a.reshape(-1, size)
        even = blocks[:, :half].copy()
        odd = blocks[:, half:] * tw
        blocks[:, :half] = even + odd
        blocks[:, half:] = even - odd
        a = blocks.reshape(n)
        size *= 2
    return a


def _trace_period(trace: PhaseTrace) -> tuple[float, bool]:
    """Modulation period, and whether the trace is exactly one uniform period."""
    T = 2 * math.pi / trace.Omega
    t = trace.t_emit
    dt = np.diff(t)
    uniform = np.allclose(dt, dt[0], rtol=1e-9, atol=0)
    exact_period = uniform and math.isclose(t.size * dt[0], T, rel_tol=1e-9)
    if not exact_period and t[-1] - t[0] < T * (1 - 1e-9):
        raise TooShort(f"trace spans {t[-1] - t[0]:g} s, less than one period {T:g} s")
    return T, exact_period


def modulation_index(trace: PhaseTrace) -> float:
    """Amplitude of the sinusoidal phase oscillation (half peak-to-peak)."""
    _, periodic = _trace_period(trace)
    p = trace.phase_perturbation
    return refined_half_range(p - p.mean(), periodic=periodic)


def synthesize_baseband(trace: PhaseTrace, n_samples: int, n_periods: int = 1) -> BasebandField:
    """Carrier-free field ``exp(i*phi)`` on a uniform grid of whole periods."""
    if not _is_power_of_two(n_samples):
        raise NotPowerOfTwo(f"n_samples={n_samples} is not a power of two")
    if n_samples % n_periods:
        raise ValueError("n_samples must be a multiple of n_periods")
    T, periodic = _trace_period(trace)
    t, phi = trace.t_emit, trace.phase_perturbation
    t0 = t[0]
    if periodic:
        spline = CubicSpline(np.append(t, t0 + T), np.append(phi, phi[0]), bc_type="periodic")
    else:
        spline = CubicSpline(t, phi)
    per = n_samples // n_periods
    one = spline(t0 + T * np.arange(per) / per)
    samples = np.exp(1j * np.tile(one, n_periods))
    return BasebandField(samples, T / per, trace.Omega)


def line_spectrum(field: BasebandField, n_max: int) -> list[SpectrumLine]:
    """Fractional power in lines ``n*Omega`` for ``|n| <= n_max``; all bins sum to 1."""
    N = field.samples.size
    P = field.n_periods
    if n_max < 0 or n_max * P >= N // 2:
        raise ValueError(f"n_max={n_max} exceeds the Nyquist limit {N // (2 * P) - 1}")
    power = np.abs(fft_radix2(field.samples)) ** 2 / N**2
    return [
        SpectrumLine(n, n * field.Omega, float(power[(n * P) % N]))
        for n in range(-n_max, n_max + 1)
    ]


def total_power(field: BasebandField) -> float:
    N = field.samples.size
    return float(np.sum(np.abs(fft_radix2(field.samples)) ** 2) / N**2)


def bessel_j(n: int, beta: float) -> float:
    """J_n(beta) from the ascending power series, for integer n and 0 <= beta <= 20.

    Terms reach ~1e7 at beta = 20 while the sum is O(1), so the series is
    summed in 60-digit decimal arithmetic and rounded once.
    """
    sign = 1
    if n < 0:
        n = -n
        sign = -1 if n % 2 else 1
    if beta == 0:
        return float(sign) if n == 0 else 0.0
    with decimal.localcontext() as ctx:
        ctx.prec = 60
        x = decimal.Decimal(beta) / 2
        x2 = x * x
        term = x**n / math.factorial(n)
        total = term
        k = 0
        while True:
            k += 1
            term *= -x2 / (k * (k + n))
            total += term
            if k > x and abs(term) <= abs(total) * decimal.Decimal("1e-40"):
                break
        return sign * float(total)


def bessel_line_weights(beta: float, n_max: int) -> np.ndarray:
    """``J_n(beta)**2`` for n = -n_max..n_max: sideband powers of pure sinusoidal PM."""
    if not 0 <= beta <= BESSEL_BETA_MAX:
        raise ValueError(f"beta must be in [0, {BESSEL_BETA_MAX:g}], got {beta!r}")
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    pos = [bessel_j(n, beta) ** 2 for n in range(n_max + 1)]
    return np.array(pos[:0:-1] + pos)


def compare_spectra(lines, weights) -> float:
    """Largest absolute power deviation between measured lines and oracle weights."""
    weights = np.asarray(weights, dtype=float)
    if len(lines) != weights.size or len(lines) % 2 == 0:
        raise IndexMismatch(f"{len(lines)} lines vs {weights.size} weights")
    n_max = weights.size // 2
    if [ln.n for ln in lines] != list(range(-n_max, n_max + 1)):
        raise IndexMismatch("lines must cover -n_max..n_max in order")
    return float(max(abs(ln.power - w) for ln, w in zip(lines, weights)))


def line_spacing_over_resolution(Omega: float, resolution_bandwidth: float) -> float:
    """Sideband spacing in units of the spectrometer resolution; > 1 means resolved."""
    if not resolution_bandwidth > 0:
        raise ValueError("resolution_bandwidth must be > 0")
    return Omega / resolution_bandwidth
