"""Bernstein-basis pulse waveforms.

A shaped laser is parameterized by four coefficients ``beta`` (in MHz, i.e.
contribution to Omega/2pi) on a symmetrized Bernstein basis of order ``n``:

    Omega(t)/2pi = sum_{v=1..4} beta_v * [b_{v,n}(t/T) + b_{n-v,n}(t/T)]

The waveform vanishes exactly at t=0 and t=T and is symmetric about T/2.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from math import comb

import numpy as np

from .model import TWO_PI


@dataclass(frozen=True)
class PulseSpec:
    """One shaped laser: coefficients (MHz), truncation order and duration (us)."""

    beta: tuple
    order_n: int = 8
    duration_t: float = 1.0

    def __post_init__(self):
        if len(self.beta) != 4:
            raise ValueError("beta must have exactly four coefficients")
        if not np.all(np.isfinite(self.beta)):
            raise ValueError("beta coefficients must be finite")
        if self.order_n < 8 or self.order_n % 2:
            raise ValueError("order_n must be even and >= 8")
        if not self.duration_t > 0:
            raise ValueError("duration_t must be positive")


def bernstein(v, n, x):
    """Bernstein basis polynomial C(n,v) * x^v * (1-x)^(n-v) on [0, 1]."""
    if not 0 <= v <= n:
        raise ValueError(f"v must be in [0, {n}], got {v}")
    x = np.asarray(x, dtype=float)
    if np.any(x < 0) or np.any(x > 1):
        raise ValueError("x must lie in [0, 1]")
    return comb(n, v) * x**v * (1.0 - x) ** (n - v)


def envelope_normalized(spec, x):
    """Waveform in rad/us at normalized time x = t/T; zero outside [0, 1]."""
    x = np.asarray(x, dtype=float)
    inside = (x >= 0.0) & (x <= 1.0)
    xc = np.clip(x, 0.0, 1.0)
    value = np.zeros_like(xc)
    for v, b in enumerate(spec.beta, start=1):
        value += b * (bernstein(v, spec.order_n, xc) + bernstein(spec.order_n - v, spec.order_n, xc))
    out = TWO_PI * value * inside
    return out if out.ndim else float(out)


def pulse_value(spec, t):
    """Waveform in rad/us at time t (us); zero outside the [0, T] window."""
    return envelope_normalized(spec, np.asarray(t, dtype=float) / spec.duration_t)


def pulse_peak(spec, grid_points=2001):
    """Max of the waveform (rad/us) over a uniform grid."""
    if grid_points < 1:
        raise ValueError("grid_points must be >= 1")
    x = np.linspace(0.0, 1.0, grid_points)
    return float(np.max(envelope_normalized(spec, x)))


def rescale_duration(spec, new_t):
    """Same waveform shape, compressed/stretched to a new duration."""
    if not new_t > 0:
        raise ValueError("new_t must be positive")
    return replace(spec, duration_t=float(new_t))


def scale_amplitude(spec, factor):
    """Waveform scaled by a constant factor (used for amplitude-deviation sweeps)."""
    return replace(spec, beta=tuple(factor * b for b in spec.beta))


def waveform_table(spec, points=2001):
    """(t_us, omega_over_2pi_MHz) columns for CSV export."""
    t = np.linspace(0.0, spec.duration_t, points)
    return t, pulse_value(spec, t) / TWO_PI
