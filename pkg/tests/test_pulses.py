"""Bernstein-basis waveform behavior."""

import numpy as np
import pytest

from rydcz.model import TWO_PI
from rydcz.pulses import (
    PulseSpec,
    bernstein,
    envelope_normalized,
    pulse_peak,
    pulse_value,
    rescale_duration,
    scale_amplitude,
    waveform_table,
)


@pytest.fixture
def spec():
    return PulseSpec(beta=(32.58, 49.19, 52.10, 61.16), duration_t=1.0)


def test_spec_validation():
    with pytest.raises(ValueError):
        PulseSpec(beta=(1.0, 2.0, 3.0))
    with pytest.raises(ValueError):
        PulseSpec(beta=(1.0, 2.0, 3.0, np.inf))
    with pytest.raises(ValueError):
        PulseSpec(beta=(1.0, 2.0, 3.0, 4.0), order_n=7)
    with pytest.raises(ValueError):
        PulseSpec(beta=(1.0, 2.0, 3.0, 4.0), duration_t=0.0)


def test_bernstein_partition_of_unity():
    x = np.linspace(0.0, 1.0, 101)
    total = sum(bernstein(v, 8, x) for v in range(9))
    assert np.allclose(total, 1.0, atol=1e-12)
    with pytest.raises(ValueError):
        bernstein(9, 8, 0.5)
    with pytest.raises(ValueError):
        bernstein(1, 8, 1.5)


def test_envelope_vanishes_at_endpoints(spec):
    assert envelope_normalized(spec, 0.0) == 0.0
    assert envelope_normalized(spec, 1.0) == 0.0
    assert pulse_value(spec, 0.0) == 0.0
    assert pulse_value(spec, spec.duration_t) == 0.0


def test_envelope_symmetry(spec):
    x = np.linspace(0.0, 1.0, 201)
    vals = envelope_normalized(spec, x)
    assert np.allclose(vals, vals[::-1], atol=1e-9)


def test_envelope_zero_outside_window(spec):
    assert pulse_value(spec, -0.1) == 0.0
    assert pulse_value(spec, spec.duration_t + 0.1) == 0.0


def test_single_coefficient_midpoint_value():
    # beta = (0, 0, 0, 1): Omega(T/2)/2pi = [b_{4,8} + b_{4,8}](1/2) = 2*C(8,4)/256
    spec = PulseSpec(beta=(0.0, 0.0, 0.0, 1.0))
    expected = TWO_PI * 2.0 * 70.0 / 256.0
    assert pulse_value(spec, 0.5) == pytest.approx(expected)


def test_peak_formula_at_midpoint(spec):
    # symmetric sums peak at x = 1/2: peak/2pi = (2/256) * sum_v beta_v C(8,v)
    from math import comb

    expected = TWO_PI * 2.0 / 256.0 * sum(
        b * comb(8, v) for v, b in enumerate(spec.beta, start=1))
    assert pulse_peak(spec) == pytest.approx(expected, rel=1e-6)


def test_rescale_duration_preserves_shape(spec):
    fast = rescale_duration(spec, 0.25)
    assert fast.duration_t == 0.25
    assert pulse_value(fast, 0.125) == pytest.approx(pulse_value(spec, 0.5))
    with pytest.raises(ValueError):
        rescale_duration(spec, -1.0)


def test_scale_amplitude_linearity(spec):
    scaled = scale_amplitude(spec, 1.02)
    t = 0.3
    assert pulse_value(scaled, t) == pytest.approx(1.02 * pulse_value(spec, t))


def test_waveform_table_units(spec):
    t, omega_mhz = waveform_table(spec, points=101)
    assert t[0] == 0.0 and t[-1] == spec.duration_t
    k = np.argmax(omega_mhz)
    assert omega_mhz[k] == pytest.approx(pulse_peak(spec) / TWO_PI, rel=1e-3)
