"""Per-kind preprocessing defaults, the extraction dispatcher, and the
stroke-variation analysis shared by the CLI and the test suite."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import UsageError
from .features import spatial, temporal
from .features.base import FeatureKind, FeatureVector, span_features
from .ink import InkCharacter, character_matrix
from .preprocess import PreprocessConfig, Spacing, TotalPoints, preprocess

# Resampling matched to each representation: transform features need a fixed
# trace length, grid features need inter-point spacing near their grid step.
PREPROCESS_BY_KIND: dict[FeatureKind, PreprocessConfig] = {
    FeatureKind.ST: PreprocessConfig(TotalPoints(temporal.TRACE_POINTS)),
    FeatureKind.DFT: PreprocessConfig(TotalPoints(temporal.TRACE_POINTS)),
    FeatureKind.DCT: PreprocessConfig(TotalPoints(temporal.TRACE_POINTS)),
    FeatureKind.DWT: PreprocessConfig(TotalPoints(temporal.TRACE_POINTS)),
    FeatureKind.SP: PreprocessConfig(Spacing(spatial.SP_GRID_STEP)),
    FeatureKind.HOG: PreprocessConfig(Spacing(spatial.HISTOGRAM_GRID_STEP)),
    FeatureKind.HPOD: PreprocessConfig(Spacing(spatial.HISTOGRAM_GRID_STEP)),
}

_GRID_BY_KIND = {
    FeatureKind.SP: spatial.SpatialGridConfig(spatial.SP_GRID_STEP),
    FeatureKind.HOG: spatial.SpatialGridConfig(spatial.HISTOGRAM_GRID_STEP),
    FeatureKind.HPOD: spatial.SpatialGridConfig(spatial.HISTOGRAM_GRID_STEP),
}


@dataclass(frozen=True)
class PipelineConfig:
    """End-to-end knobs for one feature kind; defaults follow the reference
    parameterization for that kind."""

    kind: FeatureKind
    preprocess: PreprocessConfig
    smoothing_passes: int = 1

    @classmethod
    def for_kind(cls, kind: FeatureKind, smoothing_passes: int = 1) -> "PipelineConfig":
        base = PREPROCESS_BY_KIND[kind]
        return cls(kind=kind,
                   preprocess=replace(base, smoothing_passes=smoothing_passes),
                   smoothing_passes=smoothing_passes)


def preprocess_for(c: InkCharacter, kind: FeatureKind,
                   smoothing_passes: int = 1) -> InkCharacter:
    cfg = PipelineConfig.for_kind(kind, smoothing_passes).preprocess
    return preprocess(c, cfg)


def extract_preprocessed(c: InkCharacter, kind: FeatureKind) -> FeatureVector:
    """Extract from an already-preprocessed character.

    Split out from extract() so stroke order and direction perturbations can
    be applied to the exact preprocessed geometry, keeping point sets
    coincident between the variants being compared.
    """
    spans = span_features(c)
    if kind in (FeatureKind.ST, FeatureKind.DFT, FeatureKind.DCT, FeatureKind.DWT):
        cm = character_matrix(c)
        fn = {FeatureKind.ST: temporal.st_features,
              FeatureKind.DFT: temporal.dft_features,
              FeatureKind.DCT: temporal.dct_features,
              FeatureKind.DWT: temporal.dwt_features}[kind]
        return fn(cm, spans)
    if kind == FeatureKind.SP:
        return spatial.sp_features(character_matrix(c), _GRID_BY_KIND[kind], spans)
    if kind == FeatureKind.HOG:
        return spatial.hog_features(character_matrix(c), _GRID_BY_KIND[kind], spans)
    if kind == FeatureKind.HPOD:
        return spatial.hpod_features(c, _GRID_BY_KIND[kind], spans)
    raise UsageError(f"unknown feature kind: {kind!r}")


def extract(c: InkCharacter, kind: FeatureKind,
            smoothing_passes: int = 1) -> FeatureVector:
    return extract_preprocessed(preprocess_for(c, kind, smoothing_passes), kind)


def extract_matrix(chars: list[InkCharacter], kind: FeatureKind,
                   smoothing_passes: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """Feature rows plus the label vector (-1 where a character is unlabeled)."""
    rows = [extract(c, kind, smoothing_passes).values for c in chars]
    labels = np.array([-1 if c.label is None else c.label for c in chars],
                      dtype=np.int64)
    return labels, np.array(rows, dtype=np.float64)


# ---------------------------------------------------------------------------
# stroke order / direction variation analysis

def _rotate(strokes: tuple, k: int = 1) -> tuple:
    return strokes[k:] + strokes[:k]


def variation_cases(pre: InkCharacter) -> list[tuple[str, InkCharacter]]:
    """Same-geometry variants of a preprocessed character.

    Point coordinates are untouched; only stroke direction and stroke order
    change, so any representation claimed order/direction-invariant must map
    every variant to the same vector.
    """
    cases = []
    for si, s in enumerate(pre.strokes):
        if len(s) >= 2:
            strokes = list(pre.strokes)
            strokes[si] = s.reversed()
            cases.append((f"reverse_stroke_{si}", pre.with_strokes(strokes)))
    if len(pre.strokes) >= 2:
        cases.append(("permute_strokes", pre.with_strokes(_rotate(pre.strokes))))
        both = tuple(s.reversed() for s in _rotate(pre.strokes))
        cases.append(("reverse_and_permute", pre.with_strokes(both)))
    return cases


@dataclass(frozen=True)
class VariationResult:
    case: str
    linf: float
    l2: float
    reorders_matrix: bool


def variation_results(c: InkCharacter, kind: FeatureKind) -> list[VariationResult]:
    """Feature deviation of every same-geometry variant from the original."""
    pre = preprocess_for(c, kind)
    base = extract_preprocessed(pre, kind).values
    base_rows = character_matrix(pre).rows
    out = []
    for name, variant in variation_cases(pre):
        values = extract_preprocessed(variant, kind).values
        diff = values - base
        rows = character_matrix(variant).rows
        out.append(VariationResult(
            case=name,
            linf=float(np.max(np.abs(diff))) if diff.size else 0.0,
            l2=float(np.linalg.norm(diff)),
            reorders_matrix=not np.array_equal(rows, base_rows)))
    return out


def reresampled_deviation(c: InkCharacter, kind: FeatureKind, seed: int = 0) -> float:
    """L-inf feature drift when the perturbed raw character is preprocessed
    independently instead of sharing geometry. Reported for information; the
    exact invariance claim applies only to coincident point sets."""
    from .dataset import PerturbationSpec, perturb
    base = extract(c, kind).values
    variant = perturb(c, PerturbationSpec(reverse_stroke_prob=1.0,
                                          permute_strokes=True), seed)
    values = extract(variant, kind).values
    return float(np.max(np.abs(values - base)))
