"""Point-order-dependent features: raw coordinate traces and their DFT, DCT,
and Haar wavelet transforms.

These representations keep every sample in writing order, so reversing a
stroke or permuting strokes changes the vector. Each transform here has an
exact inverse, which the tests use to confirm the character trace is fully
recoverable from the features.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.fft

from ..errors import DimensionError
from ..ink import CharacterMatrix
from .base import FeatureKind, FeatureVector

# Transform features expect this many resampled points per character.
TRACE_POINTS = 128

# Full Haar decomposition depth for a 128-sample trace.
DEFAULT_DWT_LEVELS = 7


@dataclass(frozen=True)
class ComplexSequence:
    re: np.ndarray
    im: np.ndarray

    def __post_init__(self):
        re = np.asarray(self.re, dtype=np.float64).copy()
        im = np.asarray(self.im, dtype=np.float64).copy()
        if re.ndim != 1 or im.ndim != 1 or re.shape != im.shape:
            raise DimensionError("re and im must be 1-D arrays of equal length")
        re.setflags(write=False)
        im.setflags(write=False)
        object.__setattr__(self, "re", re)
        object.__setattr__(self, "im", im)

    def __len__(self) -> int:
        return self.re.shape[0]

    def to_complex(self) -> np.ndarray:
        return self.re + 1j * self.im

    @classmethod
    def from_complex(cls, z: np.ndarray) -> "ComplexSequence":
        z = np.asarray(z, dtype=np.complex128)
        return cls(z.real, z.imag)


def _trace_columns(cm: CharacterMatrix) -> tuple[np.ndarray, np.ndarray]:
    if cm.n_points != TRACE_POINTS:
        raise DimensionError(
            f"expected a {TRACE_POINTS}-point character matrix, got {cm.n_points}")
    return cm.rows[:, 0], cm.rows[:, 1]


def st_features(cm: CharacterMatrix, spans: tuple[float, float]) -> FeatureVector:
    """x-coordinates, then y-coordinates, then the two span features."""
    x, y = _trace_columns(cm)
    return FeatureVector(FeatureKind.ST, np.concatenate([x, y, spans]))


def dft(seq: ComplexSequence) -> ComplexSequence:
    """Unnormalized forward discrete Fourier transform."""
    return ComplexSequence.from_complex(np.fft.fft(seq.to_complex()))


def idft(seq: ComplexSequence) -> ComplexSequence:
    """Inverse DFT with the 1/N factor, so idft(dft(s)) = s."""
    return ComplexSequence.from_complex(np.fft.ifft(seq.to_complex()))


def dft_features(cm: CharacterMatrix, spans: tuple[float, float]) -> FeatureVector:
    """DFT of the trace read as the complex signal x + jy.

    Layout: real parts, imaginary parts, spans. The trace is recoverable by
    reassembling the spectrum and applying idft.
    """
    x, y = _trace_columns(cm)
    spectrum = dft(ComplexSequence(x, y))
    return FeatureVector(FeatureKind.DFT,
                         np.concatenate([spectrum.re, spectrum.im, spans]))


def dct2(seq: np.ndarray) -> np.ndarray:
    """Orthonormal type-II discrete cosine transform."""
    return scipy.fft.dct(np.asarray(seq, dtype=np.float64), type=2, norm="ortho")


def idct2(seq: np.ndarray) -> np.ndarray:
    return scipy.fft.idct(np.asarray(seq, dtype=np.float64), type=2, norm="ortho")


def dct_features(cm: CharacterMatrix, spans: tuple[float, float]) -> FeatureVector:
    """Per-axis DCT of the trace: transformed x, transformed y, spans."""
    x, y = _trace_columns(cm)
    return FeatureVector(FeatureKind.DCT, np.concatenate([dct2(x), dct2(y), spans]))


_SQRT2 = np.sqrt(2.0)


def haar_dwt(seq: np.ndarray, levels: int) -> np.ndarray:
    """Multi-level orthonormal Haar analysis.

    Each level splits the current approximation into pairwise sums and
    differences scaled by 1/sqrt(2). Output layout: the final approximation
    band first, then detail bands from coarsest to finest.
    """
    a = np.asarray(seq, dtype=np.float64)
    if a.ndim != 1:
        raise DimensionError("input must be 1-D")
    if levels < 0:
        raise DimensionError("levels must be non-negative")
    if levels and len(a) % (1 << levels) != 0:
        raise DimensionError(
            f"length {len(a)} is not divisible by 2^{levels}; resample first")
    details = []
    for _ in range(levels):
        even, odd = a[0::2], a[1::2]
        details.append((even - odd) / _SQRT2)
        a = (even + odd) / _SQRT2
    return np.concatenate([a] + details[::-1]) if details else a.copy()


def haar_idwt(seq: np.ndarray, levels: int) -> np.ndarray:
    """Exact inverse of haar_dwt for the same level count."""
    v = np.asarray(seq, dtype=np.float64)
    if v.ndim != 1:
        raise DimensionError("input must be 1-D")
    if levels < 0:
        raise DimensionError("levels must be non-negative")
    if levels and len(v) % (1 << levels) != 0:
        raise DimensionError(f"length {len(v)} is not divisible by 2^{levels}")
    n = len(v)
    approx_len = n >> levels
    a = v[:approx_len].copy()
    pos = approx_len
    for _ in range(levels):
        d = v[pos:pos + len(a)]
        pos += len(a)
        out = np.empty(2 * len(a))
        out[0::2] = (a + d) / _SQRT2
        out[1::2] = (a - d) / _SQRT2
        a = out
    return a


def dwt_features(cm: CharacterMatrix, spans: tuple[float, float],
                 levels: int = DEFAULT_DWT_LEVELS) -> FeatureVector:
    """Per-axis multi-level Haar transform: x bands, y bands, spans."""
    x, y = _trace_columns(cm)
    return FeatureVector(FeatureKind.DWT,
                         np.concatenate([haar_dwt(x, levels), haar_dwt(y, levels), spans]))
