import numpy as np
import pytest

from meaningscore import spectrogram_frames

from conftest import SR, make_waveform, tone


def dft_magnitudes_oracle(window: np.ndarray) -> np.ndarray:
    """Direct O(n^2) one-sided DFT magnitudes."""
    n = len(window)
    out = []
    for k in range(n // 2 + 1):
        re = sum(window[t] * np.cos(-2 * np.pi * k * t / n) for t in range(n))
        im = sum(window[t] * np.sin(-2 * np.pi * k * t / n) for t in range(n))
        out.append(np.hypot(re, im))
    return np.array(out)


def test_frame_count_and_dim():
    w = make_waveform(np.random.default_rng(0).standard_normal(SR))
    f = spectrogram_frames(w)
    assert f.frames.shape == (1633, 16)
    assert f.level == 1


def test_zero_waveform_zero_frames():
    f = spectrogram_frames(make_waveform(np.zeros(1000)))
    assert np.all(f.frames == 0)


def test_too_short_errors():
    with pytest.raises(ValueError):
        spectrogram_frames(make_waveform(np.zeros(29)))


def test_matches_direct_dft_oracle():
    rng = np.random.default_rng(3)
    x = rng.standard_normal(30 + 27 * 4)
    f = spectrogram_frames(make_waveform(x))
    for i in range(f.n):
        expected = dft_magnitudes_oracle(x[i * 27 : i * 27 + 30])
        np.testing.assert_allclose(f.frames[i], expected, atol=1e-9)


def test_bin_aligned_sinusoid_constant_frames():
    # bin 3 of the 30-point transform
    w = make_waveform(tone(3 * SR / 30, SR))
    f = spectrogram_frames(w)
    interior = f.frames[1:-1]
    energy = (interior**2).sum(axis=1)
    assert np.var(energy) < 1e-6 * np.mean(energy) ** 2
    assert np.allclose(interior, interior[0], atol=1e-6)


def test_parseval_per_frame():
    rng = np.random.default_rng(4)
    x = rng.standard_normal(30 * 20)
    f = spectrogram_frames(make_waveform(x))
    for i in range(f.n):
        mags = f.frames[i]
        # interior bins appear twice in the two-sided spectrum (n=30 even:
        # bins 0 and 15 are unique)
        spec_energy = mags[0] ** 2 + mags[15] ** 2 + 2 * (mags[1:15] ** 2).sum()
        slice_energy = 30 * (x[i * 27 : i * 27 + 30] ** 2).sum()
        assert abs(spec_energy - slice_energy) < 1e-6 * slice_energy


def test_hop_shift_property():
    rng = np.random.default_rng(5)
    x = rng.standard_normal(2000)
    a = spectrogram_frames(make_waveform(x))
    b = spectrogram_frames(make_waveform(x[27:]))
    np.testing.assert_allclose(b.frames, a.frames[1 : 1 + b.n], atol=1e-9)


def test_log_magnitude_switch():
    rng = np.random.default_rng(6)
    x = rng.standard_normal(500)
    lin = spectrogram_frames(make_waveform(x))
    log = spectrogram_frames(make_waveform(x), log_magnitude=True)
    np.testing.assert_allclose(log.frames, np.log1p(lin.frames), atol=1e-12)
