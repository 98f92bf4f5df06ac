"""Independent reference computations. Nothing here calls the code under test."""

import numpy as np

C = 299792458.0


def bisect_root(f, lo, hi, iters=400):
    """Plain scalar bisection for an increasing f with f(lo) <= 0 <= f(hi)."""
    flo = f(lo)
    assert flo <= 0 <= f(hi)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if f(mid) <= 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def bessel_j_downward(n, x, start=None):
    """J_n(x) via Miller's downward recurrence, normalised with J0 + 2*sum(J_2k) = 1."""
    if n < 0:
        return (-1) ** n * bessel_j_downward(-n, x, start)
    if x == 0:
        return 1.0 if n == 0 else 0.0
    m = start or 2 * (int(max(n, x)) + 30)
    m += m % 2
    j_next, j = 0.0, 1e-300
    values = {}
    norm = 0.0
    for k in range(m, 0, -1):
        j_prev = 2 * k / x * j - j_next
        j_next, j = j, j_prev
        if abs(j) > 1e250:
            j *= 1e-250
            j_next *= 1e-250
            values = {kk: v * 1e-250 for kk, v in values.items()}
            norm *= 1e-250
        if (k - 1) % 2 == 0 and k - 1 > 0:
            norm += 2 * j
        values[k - 1] = j
    norm += values[0]
    return values[n] / norm


def direct_dft(x):
    x = np.asarray(x, dtype=complex)
    n = x.size
    k = np.arange(n)
    return np.exp(-2j * np.pi * np.outer(k, k) / n) @ x


def dense_half_range(y):
    """Unrefined half peak-to-peak; with 8192+ samples per period this is the oracle."""
    return 0.5 * float(np.max(y) - np.min(y))


def uniform_pair_delay(d0, D, L, V, t):
    """Closed-form total delay perturbation for uniform motion toward the source.

    Mirror offset along the first leg is u(t) = -V t:
    c t1 = d0 - V(t+t1), c t2 = D + V t2, c t3 = L - d0 + D + V(t+t1+t2).
    """
    import mpmath

    with mpmath.workdps(50):
        c, d0, D, L, V, t = (mpmath.mpf(v) for v in (C, d0, D, L, V, t))
        t1 = (d0 - V * t) / (c + V)
        t2 = D / (c - V)
        t3 = (L - d0 + D + V * (t + t1 + t2)) / c
        return float(t1 + t2 + t3 - (L + 2 * D) / c)


def exact_uniform_velocity_phase(omega0, D, V):
    """Exact time-independent phase offset 2 D V omega0 / (c (c - V))."""
    return 2 * D * V * omega0 / (C * (C - V))
