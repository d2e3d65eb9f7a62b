import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from beamcontact import fft_amplitude, find_peaks
from beamcontact.dynamics import TimeSeries
from beamcontact.spectrum import amplitude_spectrum


def sine(freq, amp=1.0, dt=1e-5, duration=1.0, phase=0.0):
    t = np.arange(int(round(duration / dt)) + 1) * dt
    return t, amp * np.sin(2 * np.pi * freq * t + phase)


def test_unit_sinusoid():
    _, x = sine(500.0)
    spec = amplitude_spectrum(x, 1e-5)
    assert spec.n_samples == 65536
    assert spec.df_bin * spec.n_samples * 1e-5 == pytest.approx(1.0)
    k = int(np.argmax(spec.amplitude))
    assert abs(spec.frequencies[k] - 500.0) <= spec.df_bin
    # 500 Hz sits off the 2**16-sample bin grid: rectangular-window scalloping
    offset = 500.0 / spec.df_bin - k
    assert spec.amplitude[k] == pytest.approx(abs(np.sinc(offset)), rel=0.01)
    peaks = find_peaks(spec, 0.1)
    assert len(peaks) == 1
    assert abs(peaks[0].frequency - 500.0) < spec.df_bin / 2


def test_on_bin_sinusoid_amplitude_is_exact():
    dt = 2.0**-16
    t = np.arange(65536) * dt
    spec = amplitude_spectrum(0.7 * np.cos(2 * np.pi * 500.0 * t) + 0.2, dt)
    assert spec.df_bin == 1.0
    assert spec.amplitude[500] == pytest.approx(0.7, rel=1e-12)
    assert spec.amplitude[0] == pytest.approx(0.2, rel=1e-12)


def test_zero_signal():
    spec = amplitude_spectrum(np.zeros(1000), 1e-3)
    assert not np.any(spec.amplitude)
    assert find_peaks(spec, 0.1) == []


def test_power_of_two_truncation():
    spec = amplitude_spectrum(np.ones(1000), 1e-3)
    assert spec.n_samples == 512 and spec.n_bins == 256


def test_rejects_short_or_bad_input():
    with pytest.raises(ValueError):
        amplitude_spectrum([1.0], 1e-3)
    with pytest.raises(ValueError):
        amplitude_spectrum([1.0, 2.0], 0.0)
    spec = amplitude_spectrum(np.ones(8), 1.0)
    for thr in (0.0, 1.5):
        with pytest.raises(ValueError):
            find_peaks(spec, thr)


def test_fft_amplitude_selects_dof():
    t, x = sine(300.0, dt=2.0**-14, duration=1.0)
    q = np.column_stack([np.zeros_like(x), x])
    ts = TimeSeries(dt=2.0**-14, t=t, q=q, v=q, acc=q)
    assert not np.any(fft_amplitude(ts, 0).amplitude)
    peaks = find_peaks(fft_amplitude(ts, 1), 0.5)
    assert [round(p.frequency) for p in peaks] == [300]


@settings(max_examples=30, deadline=None)
@given(arrays(np.float64, st.integers(2, 3000), elements=st.floats(-1e3, 1e3)))
def test_parseval(x):
    spec = amplitude_spectrum(x, 1e-3)
    xs = x[: spec.n_samples]
    e = float(np.sum(xs**2))
    assert spec.signal_energy() == pytest.approx(e, rel=1e-9, abs=1e-9)


@settings(max_examples=30, deadline=None)
@given(arrays(np.float64, st.integers(2, 3000), elements=st.floats(-1e3, 1e3)), st.floats(-50, 50))
def test_linearity(x, alpha):
    a = amplitude_spectrum(x, 1e-3).amplitude
    b = amplitude_spectrum(alpha * x, 1e-3).amplitude
    np.testing.assert_allclose(b, abs(alpha) * a, rtol=1e-9, atol=1e-9 * max(1.0, abs(alpha) * a.max()))


@settings(max_examples=40, deadline=None)
@given(st.floats(20.0, 4000.0), st.floats(0.0, 2 * np.pi))
def test_parabolic_refinement_within_half_bin(freq, phase):
    _, x = sine(freq, dt=1e-4, duration=1.0, phase=phase)
    spec = amplitude_spectrum(x, 1e-4)
    top = find_peaks(spec, 0.5)[0]
    assert abs(top.frequency - freq) <= spec.df_bin / 2


def test_peaks_sorted_by_amplitude():
    dt = 2.0**-14
    t = np.arange(2**14) * dt
    x = 0.3 * np.sin(2 * np.pi * 100 * t) + np.sin(2 * np.pi * 250 * t) + 0.5 * np.sin(2 * np.pi * 400 * t)
    peaks = find_peaks(amplitude_spectrum(x, dt), 0.2)
    assert [round(p.frequency) for p in peaks] == [250, 400, 100]
    assert find_peaks(amplitude_spectrum(x, dt), 0.4)[-1].frequency == pytest.approx(400)
