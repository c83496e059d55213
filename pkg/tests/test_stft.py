import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import dense_stft_matrix
from tfinpaint.exceptions import (
    InconsistentMaskError,
    InvalidParameterError,
    NonTileableWindowError,
)
from tfinpaint.stft import (
    Spectrogram,
    StftParams,
    TFMask,
    affected_samples,
    istft,
    make_window,
    normalize_tight,
    padded_length,
    stft,
)

SMALL = StftParams(win_len=16, hop=4, n_channels=16)


def test_hann_window_values():
    np.testing.assert_allclose(make_window("hann", 4), [0.0, 0.5, 1.0, 0.5], atol=1e-15)
    np.testing.assert_allclose(make_window("hann", 2), [0.0, 1.0], atol=1e-15)


@pytest.mark.parametrize("length", [1, 0, -3])
def test_window_length_too_short(length):
    with pytest.raises(InvalidParameterError):
        make_window("hann", length)


def test_unknown_window_kind():
    with pytest.raises(InvalidParameterError):
        make_window("blackman", 8)


def test_normalize_hann_hop_one():
    w = make_window("hann", 4)
    # overlap-add of w^2 = 0 + 0.25 + 1 + 0.25
    np.testing.assert_allclose(normalize_tight(w, 1), w / np.sqrt(1.5))


def test_normalize_rectangular_no_overlap():
    np.testing.assert_array_equal(normalize_tight(np.ones(4), 4), np.ones(4))


def test_normalize_default_geometry_constant():
    w = make_window("hann", 2048)
    ola = (w**2).reshape(-1, 512).sum(axis=0)
    np.testing.assert_allclose(ola, 1.5, rtol=1e-13)
    np.testing.assert_allclose(normalize_tight(w, 512), w / np.sqrt(1.5))


def test_normalize_rejects_non_tileable():
    with pytest.raises(NonTileableWindowError):
        normalize_tight(make_window("hann", 8), 8)


def test_params_validation():
    with pytest.raises(InvalidParameterError):
        StftParams(win_len=2048, hop=500)
    with pytest.raises(InvalidParameterError):
        StftParams(win_len=2048, hop=512, n_channels=1024)


def test_default_geometry():
    p = StftParams()
    assert (p.win_len, p.hop, p.n_channels, p.n_bins) == (2048, 512, 2048, 1025)


def test_matches_dense_definition(rng):
    x = rng.standard_normal(40)
    n_pad = padded_length(40, SMALL.hop)
    G = dense_stft_matrix(n_pad, 16, 4, 16)
    spec = stft(x, SMALL)
    expected = (G @ np.concatenate([x, np.zeros(n_pad - 40)])).reshape(SMALL.n_bins, -1)
    np.testing.assert_allclose(spec.coeffs, expected, atol=1e-12)


def test_istft_is_dense_adjoint(rng):
    n_pad = 40
    G = dense_stft_matrix(n_pad, 16, 4, 16, offset=3)
    params = StftParams(win_len=16, hop=4, n_channels=16, frame_offset=3)
    C = rng.standard_normal((params.n_bins, 10)) + 1j * rng.standard_normal((params.n_bins, 10))
    # adjoint for the real inner product Re<., .>
    expected = (G.conj().T @ C.ravel()).real
    np.testing.assert_allclose(istft(Spectrogram(C, params)), expected, atol=1e-12)


def test_zero_padding_to_hop_multiple():
    spec = stft(np.ones(5000))
    assert spec.n_columns == padded_length(5000, 512) // 512 == 10
    assert spec.coeffs.shape == (1025, 10)
    assert spec.length == 5000


def test_zero_signal():
    spec = stft(np.zeros(3000))
    assert not np.any(spec.coeffs)
    np.testing.assert_array_equal(istft(spec), np.zeros(3072))


def test_impulse_has_unit_energy():
    x = np.zeros(8192)
    x[0] = 1.0
    assert stft(x).energy() == pytest.approx(1.0, abs=1e-12)


def test_parseval_long_signal(rng):
    x = rng.standard_normal(80000)
    assert abs(stft(x).energy() - x @ x) <= 1e-9 * (x @ x)


@pytest.mark.parametrize("n", [512, 5000, 80000])
def test_perfect_reconstruction(rng, n):
    x = rng.standard_normal(n)
    y = istft(stft(x))
    assert np.max(np.abs(y[:n] - x)) <= 1e-9
    assert np.all(np.abs(y[n:]) <= 1e-9)
    np.testing.assert_allclose(istft(stft(x), n), x, atol=1e-9)


def test_linearity(rng):
    x, y = rng.standard_normal((2, 3000))
    lhs = stft(2.5 * x - 0.75 * y).coeffs
    rhs = 2.5 * stft(x).coeffs - 0.75 * stft(y).coeffs
    assert np.linalg.norm(lhs - rhs) <= 1e-12 * np.linalg.norm(rhs)


def test_single_column_support(rng):
    params = StftParams()
    C = np.zeros((params.n_bins, 20), dtype=complex)
    C[:, 7] = rng.standard_normal(params.n_bins) + 1j * rng.standard_normal(params.n_bins)
    x = istft(Spectrogram(C, params))
    outside = np.ones(x.size, dtype=bool)
    outside[7 * 512 : 7 * 512 + 2048] = False
    assert not np.any(x[outside])
    assert np.any(x[~outside])


@settings(max_examples=30, deadline=None)
@given(
    n=st.integers(min_value=1, max_value=300),
    seed=st.integers(min_value=0, max_value=2**31),
    offset=st.integers(min_value=0, max_value=15),
)
def test_tight_frame_property(n, seed, offset):
    params = StftParams(win_len=16, hop=4, n_channels=32, frame_offset=offset)
    x = np.random.default_rng(seed).standard_normal(n)
    spec = stft(x, params)
    assert spec.energy() == pytest.approx(x @ x, rel=1e-12, abs=1e-12)
    np.testing.assert_allclose(istft(spec, n), x, atol=1e-12)


def test_mask_validation():
    with pytest.raises(InconsistentMaskError):
        TFMask((3, 3), 10)
    with pytest.raises(InconsistentMaskError):
        TFMask((10,), 10)
    m = TFMask((5, 1, 2), 10)
    assert m.missing_columns == (1, 2, 5)
    assert m.runs() == [(1, 2), (5, 1)]
    assert m.as_matrix(3).shape == (3, 10)


def test_affected_samples_empty():
    assert affected_samples(TFMask.empty(20), StftParams(), 10000).all()


def test_affected_samples_one_column():
    reliable = affected_samples(TFMask((6,), 20), StftParams(), 10240)
    missing = np.flatnonzero(~reliable)
    np.testing.assert_array_equal(missing, np.arange(6 * 512, 6 * 512 + 2048))


@pytest.mark.parametrize("g", [1, 2, 3, 6])
def test_affected_samples_consecutive(g):
    reliable = affected_samples(TFMask(tuple(range(8, 8 + g)), 40), StftParams(), 40 * 512)
    assert np.count_nonzero(~reliable) == (g - 1) * 512 + 2048


def test_affected_samples_truncates_padding():
    reliable = affected_samples(TFMask((0,), 20), StftParams(), 10000)
    assert reliable.shape == (10000,)


def test_affected_samples_rejects_mismatch():
    with pytest.raises(InconsistentMaskError):
        affected_samples(TFMask((0,), 19), StftParams(), 10240)
