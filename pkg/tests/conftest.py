import numpy as np
import pytest
from scipy.signal import lfilter


def ar_process(coeffs, n, seed, burn_in=2000, scale=1.0):
    """Realization of the AR process whose prediction-error filter is `coeffs`."""
    rng = np.random.default_rng(seed)
    e = rng.standard_normal(n + burn_in) * scale
    return lfilter([1.0], coeffs, e)[burn_in:]


def resonant_ar4(fs=16000, seed=0, seconds=5.0):
    """AR(4) process with two sharp resonances, peak-normalized to 0.5."""
    poles = []
    for radius, freq in [(0.998, 440.0), (0.99, 1800.0)]:
        w = 2 * np.pi * freq / fs
        poles += [radius * np.exp(1j * w), radius * np.exp(-1j * w)]
    a = np.real(np.poly(poles))
    x = ar_process(a, int(seconds * fs), seed, burn_in=20000)
    return 0.5 * x / np.max(np.abs(x)), a


def dense_stft_matrix(n_pad, win_len, hop, n_channels, offset=0):
    """Complex analysis matrix built entry by entry from the frame definition.

    Rows are ordered (column t, bin k) flattened as k * T + t to match a
    (n_bins, T) coefficient array raveled in C order.
    """
    n = np.arange(win_len)
    w = 0.5 * (1 - np.cos(2 * np.pi * n / win_len))
    c = sum(w[j] ** 2 for j in range(0, win_len, hop))
    w = w / np.sqrt(c)
    n_frames = n_pad // hop
    n_bins = n_channels // 2 + 1
    G = np.zeros((n_bins, n_frames, n_pad), dtype=complex)
    for t in range(n_frames):
        for k in range(n_bins):
            weight = 1.0 if k in (0, n_channels // 2) else np.sqrt(2.0)
            for j in range(win_len):
                idx = (t * hop - offset + j) % n_pad
                G[k, t, idx] += weight * w[j] * np.exp(-2j * np.pi * k * j / n_channels) / np.sqrt(n_channels)
    return G.reshape(n_bins * n_frames, n_pad)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


_CRITERIA = pytest.StashKey()


@pytest.fixture
def criterion(request):
    """Record one acceptance criterion as a PASS/FAIL line.

    Usage: ``criterion(number, description, passed, detail)``; the line is
    printed immediately and repeated in the terminal summary.
    """
    lines = request.config.stash.setdefault(_CRITERIA, [])

    def report(number, description, passed, detail=""):
        line = f"criterion {number}: {'PASS' if passed else 'FAIL'} - {description}"
        if detail:
            line += f" ({detail})"
        print(line)
        lines.append((number, line))
        return passed

    return report


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_CRITERIA, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)


def tonal_signal(kind, fs=16000, seconds=5.0, seed=0):
    """Deterministic music-like test signal.

    ``"melody"``: a sequence of harmonic notes with attack/decay envelopes
    and slight vibrato. ``"bells"``: struck inharmonic partials with
    exponential decays. Both carry a faint noise floor and peak at 0.5.
    """
    rng = np.random.default_rng(seed)
    n = int(seconds * fs)
    t = np.arange(n) / fs
    x = np.zeros(n)
    if kind == "melody":
        note_len = 0.5
        for i, start in enumerate(np.arange(0.0, seconds, note_len)):
            f0 = 220.0 * 2 ** (rng.integers(0, 12) / 12)
            seg = (t >= start) & (t < start + note_len)
            tau = t[seg] - start
            env = np.minimum(tau / 0.02, 1.0) * np.exp(-tau / 0.4)
            phase = 2 * np.pi * f0 * tau + 0.3 * np.sin(2 * np.pi * 5.0 * tau)
            for h in range(1, 6):
                x[seg] += env * np.sin(h * phase + rng.uniform(0, 2 * np.pi)) / h
    elif kind == "bells":
        for start in np.arange(0.0, seconds, 1.25):
            seg = t >= start
            tau = t[seg] - start
            base = rng.uniform(300.0, 600.0)
            for ratio, decay in [(1.0, 1.2), (2.76, 0.6), (5.40, 0.35), (8.93, 0.2)]:
                x[seg] += np.exp(-tau / decay) * np.sin(2 * np.pi * base * ratio * tau + rng.uniform(0, 2 * np.pi))
    else:
        raise ValueError(kind)
    x += 1e-3 * np.std(x) * rng.standard_normal(n)
    return 0.5 * x / np.max(np.abs(x))


def mini_corpus(directory, seed=0):
    """Two synthetic AR(4) recordings plus two tonal ones, 5 s at 16 kHz."""
    from tfinpaint.experiment import synthesize_ar_corpus
    from tfinpaint.fileio import save_wav

    paths = synthesize_ar_corpus(directory, 2, seconds=5.0, sample_rate=16000, seed=seed)
    for i, kind in enumerate(("melody", "bells")):
        path = directory / f"tonal_{kind}.wav"
        save_wav(path, tonal_signal(kind, seed=seed + i), 16000)
        paths.append(path)
    return paths
