"""Transform-domain features against definition oracles.

Each transform is checked three ways: against a direct O(N^2) evaluation of
its defining sum, by exact round trips through its inverse, and by energy
conservation where the transform is orthogonal (up to its scaling).
"""

from __future__ import annotations

import numpy as np
import pytest

from strokekit.errors import DimensionError
from strokekit.features.base import span_features
from strokekit.features.temporal import (ComplexSequence, dct2, dct_features, dft,
                                         dft_features, dwt_features, haar_dwt,
                                         haar_idwt, idct2, idft, st_features)
from strokekit.ink import character_matrix
from strokekit.pipeline import preprocess_for
from strokekit.features.base import FeatureKind

from conftest import random_character


# ---------------------------------------------------------------------------
# oracles: direct evaluation of the defining sums

def dft_oracle(z: np.ndarray) -> np.ndarray:
    n = len(z)
    k = np.arange(n)
    out = np.empty(n, dtype=np.complex128)
    for f in range(n):
        out[f] = np.sum(z * np.exp(-2j * np.pi * f * k / n))
    return out


def dct2_oracle(x: np.ndarray) -> np.ndarray:
    n = len(x)
    out = np.empty(n)
    for k in range(n):
        c = np.sqrt(1.0 / n) if k == 0 else np.sqrt(2.0 / n)
        out[k] = c * np.sum(x * np.cos(np.pi * k * (2 * np.arange(n) + 1) / (2 * n)))
    return out


def haar_level_oracle(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    approx = (x[0::2] + x[1::2]) / np.sqrt(2.0)
    detail = (x[0::2] - x[1::2]) / np.sqrt(2.0)
    return approx, detail


# ---------------------------------------------------------------------------
# DFT

def test_dft_matches_definition(rng):
    for _ in range(10):
        n = int(rng.choice([4, 8, 16, 32]))
        z = rng.normal(size=n) + 1j * rng.normal(size=n)
        got = dft(ComplexSequence.from_complex(z)).to_complex()
        assert np.allclose(got, dft_oracle(z), atol=1e-9)


def test_dft_is_unnormalized():
    # constant signal: bin 0 holds the plain sum, not the mean
    z = np.full(8, 2.0 + 0j)
    got = dft(ComplexSequence.from_complex(z)).to_complex()
    assert got[0] == pytest.approx(16.0)
    assert np.allclose(got[1:], 0.0, atol=1e-12)


def test_dft_round_trip(rng):
    for _ in range(20):
        z = rng.normal(size=128) + 1j * rng.normal(size=128)
        back = idft(dft(ComplexSequence.from_complex(z))).to_complex()
        assert np.max(np.abs(back - z)) < 1e-9


def test_dft_parseval(rng):
    for _ in range(20):
        z = rng.normal(size=128) + 1j * rng.normal(size=128)
        spec = dft(ComplexSequence.from_complex(z)).to_complex()
        time_e = np.sum(np.abs(z) ** 2)
        freq_e = np.sum(np.abs(spec) ** 2) / len(z)
        assert abs(time_e - freq_e) / time_e < 1e-9


def test_complex_sequence_validation():
    with pytest.raises(DimensionError):
        ComplexSequence(np.zeros(3), np.zeros(4))
    with pytest.raises(DimensionError):
        ComplexSequence(np.zeros((2, 2)), np.zeros((2, 2)))


# ---------------------------------------------------------------------------
# DCT

def test_dct_matches_definition(rng):
    for _ in range(10):
        n = int(rng.choice([4, 8, 16]))
        x = rng.normal(size=n)
        assert np.allclose(dct2(x), dct2_oracle(x), atol=1e-9)


def test_dct_round_trip(rng):
    for _ in range(20):
        x = rng.normal(size=128)
        assert np.max(np.abs(idct2(dct2(x)) - x)) < 1e-9


def test_dct_orthonormal_energy(rng):
    for _ in range(10):
        x = rng.normal(size=64)
        assert np.sum(dct2(x) ** 2) == pytest.approx(np.sum(x ** 2), rel=1e-12)


def test_dct_constant_concentrates_in_dc():
    x = np.full(16, 3.0)
    c = dct2(x)
    assert c[0] == pytest.approx(3.0 * np.sqrt(16.0))
    assert np.allclose(c[1:], 0.0, atol=1e-12)


# ---------------------------------------------------------------------------
# Haar

def test_haar_single_level_by_hand():
    x = np.array([1.0, 2.0, 3.0, 4.0])
    got = haar_dwt(x, 1)
    r2 = np.sqrt(2.0)
    assert np.allclose(got, [3.0 / r2, 7.0 / r2, -1.0 / r2, -1.0 / r2], atol=1e-12)


def test_haar_two_level_layout():
    x = np.array([1.0, 2.0, 3.0, 4.0])
    got = haar_dwt(x, 2)
    # level 1 approx (3/r2, 7/r2) -> level 2 approx 10/2 = 5, detail -2
    assert got[0] == pytest.approx(5.0)
    assert got[1] == pytest.approx(-2.0)
    # coarsest detail precedes the finest
    r2 = np.sqrt(2.0)
    assert np.allclose(got[2:], [-1.0 / r2, -1.0 / r2], atol=1e-12)


def test_haar_matches_level_oracle(rng):
    for _ in range(10):
        x = rng.normal(size=32)
        approx, detail = haar_level_oracle(x)
        got = haar_dwt(x, 1)
        assert np.allclose(got[:16], approx, atol=1e-12)
        assert np.allclose(got[16:], detail, atol=1e-12)


def test_haar_full_depth_round_trip(rng):
    for levels in (1, 3, 7):
        for _ in range(10):
            x = rng.normal(size=128)
            back = haar_idwt(haar_dwt(x, levels), levels)
            assert np.max(np.abs(back - x)) < 1e-9


def test_haar_energy_preserved(rng):
    for _ in range(10):
        x = rng.normal(size=128)
        w = haar_dwt(x, 7)
        assert np.sum(w ** 2) == pytest.approx(np.sum(x ** 2), rel=1e-12)


def test_haar_zero_levels_is_identity(rng):
    x = rng.normal(size=10)
    assert np.array_equal(haar_dwt(x, 0), x)


def test_haar_rejects_indivisible_length():
    with pytest.raises(DimensionError):
        haar_dwt(np.zeros(12), 3)  # 12 not divisible by 8
    with pytest.raises(DimensionError):
        haar_idwt(np.zeros(12), 3)
    haar_dwt(np.zeros(12), 2)  # divisible by 4: fine


# ---------------------------------------------------------------------------
# feature assembly

def _trace(rng):
    c = random_character(rng, min_points=3)
    pre = preprocess_for(c, FeatureKind.ST)
    return pre, character_matrix(pre)


def test_st_layout(rng):
    pre, cm = _trace(rng)
    fv = st_features(cm, span_features(pre))
    assert fv.dim == 258
    assert np.array_equal(fv.values[:128], cm.rows[:, 0])
    assert np.array_equal(fv.values[128:256], cm.rows[:, 1])
    assert np.array_equal(fv.values[256:], span_features(pre))


def test_dft_feature_recovers_trace(rng):
    pre, cm = _trace(rng)
    fv = dft_features(cm, span_features(pre))
    spec = ComplexSequence(fv.values[:128], fv.values[128:256])
    back = idft(spec).to_complex()
    assert np.max(np.abs(back.real - cm.rows[:, 0])) < 1e-9
    assert np.max(np.abs(back.imag - cm.rows[:, 1])) < 1e-9


def test_dct_feature_recovers_trace(rng):
    pre, cm = _trace(rng)
    fv = dct_features(cm, span_features(pre))
    assert np.max(np.abs(idct2(fv.values[:128]) - cm.rows[:, 0])) < 1e-9
    assert np.max(np.abs(idct2(fv.values[128:256]) - cm.rows[:, 1])) < 1e-9


def test_dwt_feature_recovers_trace(rng):
    pre, cm = _trace(rng)
    fv = dwt_features(cm, span_features(pre))
    assert np.max(np.abs(haar_idwt(fv.values[:128], 7) - cm.rows[:, 0])) < 1e-9
    assert np.max(np.abs(haar_idwt(fv.values[128:256], 7) - cm.rows[:, 1])) < 1e-9


def test_transforms_reject_wrong_trace_length():
    from strokekit.ink import CharacterMatrix
    cm = CharacterMatrix(np.zeros((64, 2)), (0,))
    for fn in (st_features, dft_features, dct_features, dwt_features):
        with pytest.raises(DimensionError):
            fn(cm, (0.5, 1.0))


def test_transform_features_are_order_sensitive(rng):
    # reversing the trace must change every transform representation
    pre, cm = _trace(rng)
    from strokekit.ink import CharacterMatrix
    rev = CharacterMatrix(cm.rows[::-1], cm.stroke_boundaries)
    spans = span_features(pre)
    for fn in (st_features, dft_features, dct_features, dwt_features):
        a, b = fn(cm, spans), fn(rev, spans)
        assert np.linalg.norm(a.values - b.values) > 1e-6
