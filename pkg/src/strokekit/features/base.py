"""Feature vector container, kind registry, and the shared span features."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from ..errors import DimensionError, StructureError
from ..ink import InkCharacter


class FeatureKind(str, Enum):
    ST = "st"
    DFT = "dft"
    DCT = "dct"
    DWT = "dwt"
    SP = "sp"
    HOG = "hog"
    HPOD = "hpod"


# Fixed output dimension per kind, span features included.
FEATURE_DIMS: dict[FeatureKind, int] = {
    FeatureKind.ST: 258,
    FeatureKind.DFT: 258,
    FeatureKind.DCT: 258,
    FeatureKind.DWT: 258,
    FeatureKind.SP: 786,
    FeatureKind.HOG: 326,
    FeatureKind.HPOD: 722,
}

TEMPORAL_KINDS = (FeatureKind.ST, FeatureKind.DFT, FeatureKind.DCT, FeatureKind.DWT)
SPATIAL_KINDS = (FeatureKind.SP, FeatureKind.HOG, FeatureKind.HPOD)


@dataclass(frozen=True)
class FeatureVector:
    kind: FeatureKind
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 1:
            raise DimensionError(f"feature values must be 1-D, got shape {v.shape}")
        expected = FEATURE_DIMS[self.kind]
        if v.shape[0] != expected:
            raise DimensionError(
                f"{self.kind.value} feature must have {expected} values, got {v.shape[0]}")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def dim(self) -> int:
        return self.values.shape[0]


def span_features(c: InkCharacter) -> tuple[float, float]:
    """Aspect descriptor of the pre-normalization bounding box.

    Both extents are divided by the larger one, so the result lies in
    [0, 1]^2 with at least one component equal to 1 (a point character, with
    both extents 0, yields (0, 0)).
    """
    if c.raw_width is None or c.raw_height is None:
        raise StructureError("character has no recorded extents; normalize it first")
    m = max(c.raw_width, c.raw_height)
    if m == 0:
        return (0.0, 0.0)
    return (c.raw_width / m, c.raw_height / m)


def append_spans(values: np.ndarray, c: InkCharacter) -> np.ndarray:
    w, h = span_features(c)
    return np.concatenate([np.asarray(values, dtype=np.float64), [w, h]])
