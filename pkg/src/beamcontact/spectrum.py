"""One-sided FFT amplitude spectra and peak picking."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class Spectrum:
    """Amplitude per frequency bin, scaled so a unit sinusoid reads 1.

    ``coefficients`` keeps the unscaled real-FFT output (including the
    Nyquist bin) so energy checks can be made against the time samples.
    """

    df_bin: float
    amplitude: np.ndarray
    n_samples: int
    coefficients: np.ndarray = field(repr=False)

    @property
    def n_bins(self) -> int:
        return len(self.amplitude)

    @property
    def frequencies(self) -> np.ndarray:
        return self.df_bin * np.arange(self.n_bins)

    def signal_energy(self) -> float:
        """sum(x**2) of the transformed samples, recovered from the FFT (Parseval)."""
        X2 = np.abs(self.coefficients) ** 2
        N = self.n_samples
        # interior bins stand for a +/- frequency pair
        weights = np.full(len(X2), 2.0)
        weights[0] = 1.0
        if N % 2 == 0:
            weights[-1] = 1.0
        return float(np.sum(weights * X2) / N)


@dataclass(frozen=True)
class Peak:
    frequency: float
    amplitude: float
    bin: int


def amplitude_spectrum(signal, dt: float) -> Spectrum:
    """Rectangular-window spectrum of the first 2**k samples of ``signal``."""
    x = np.asarray(signal, dtype=float)
    if x.ndim != 1 or len(x) < 2:
        raise ValueError("need at least 2 samples for a spectrum")
    if not dt > 0:
        raise ValueError("dt must be positive")
    N = 1 << (len(x).bit_length() - 1)
    x = x[:N]
    X = np.fft.rfft(x)
    amp = np.abs(X[: N // 2]) * (2.0 / N)
    amp[0] *= 0.5
    return Spectrum(df_bin=1.0 / (N * dt), amplitude=amp, n_samples=N, coefficients=X)


def fft_amplitude(series, dof: int) -> Spectrum:
    """Spectrum of one DOF of a TimeSeries."""
    if series.n_samples < 2:
        raise ValueError("need at least 2 samples for a spectrum")
    return amplitude_spectrum(series.q[:, dof], series.dt)


def find_peaks(spec: Spectrum, threshold_rel: float = 0.05) -> list[Peak]:
    """Strict local maxima above ``threshold_rel * max(amplitude)``.

    Frequencies are refined with a parabola through the peak bin and its
    two neighbours. Peaks come back sorted by amplitude, largest first.
    """
    if not 0 < threshold_rel <= 1:
        raise ValueError("threshold_rel must be in (0, 1]")
    A = spec.amplitude
    if len(A) == 0:
        raise ValueError("empty spectrum")
    if len(A) < 3:
        return []
    top = A.max()
    if top <= 0:
        return []
    mid = A[1:-1]
    is_peak = (mid > A[:-2]) & (mid > A[2:]) & (mid >= threshold_rel * top)
    peaks = []
    for k in np.flatnonzero(is_peak) + 1:
        a, b, c = A[k - 1], A[k], A[k + 1]
        denom = a - 2 * b + c
        offset = 0.5 * (a - c) / denom if denom != 0 else 0.0
        peaks.append(Peak(frequency=(k + offset) * spec.df_bin, amplitude=float(b), bin=int(k)))
    peaks.sort(key=lambda p: (-p.amplitude, p.frequency))
    return peaks
