"""End-to-end extraction and the shared-geometry variation analysis."""

from __future__ import annotations

import numpy as np
import pytest

from strokekit.features.base import FEATURE_DIMS, FeatureKind
from strokekit.ink import InkCharacter
from strokekit.pipeline import (PREPROCESS_BY_KIND, PipelineConfig, extract,
                                extract_matrix, extract_preprocessed,
                                preprocess_for, reresampled_deviation,
                                variation_cases, variation_results)
from strokekit.preprocess import Spacing, TotalPoints

from conftest import random_character


def test_every_kind_has_its_documented_dimension(rng):
    c = random_character(rng, min_points=4)
    for kind in FeatureKind:
        fv = extract(c, kind)
        assert fv.kind is kind
        assert fv.dim == FEATURE_DIMS[kind]
    assert FEATURE_DIMS[FeatureKind.ST] == 258
    assert FEATURE_DIMS[FeatureKind.DFT] == 258
    assert FEATURE_DIMS[FeatureKind.DCT] == 258
    assert FEATURE_DIMS[FeatureKind.DWT] == 258
    assert FEATURE_DIMS[FeatureKind.SP] == 786
    assert FEATURE_DIMS[FeatureKind.HOG] == 326
    assert FEATURE_DIMS[FeatureKind.HPOD] == 722


def test_preprocess_defaults_per_kind():
    for kind in (FeatureKind.ST, FeatureKind.DFT, FeatureKind.DCT, FeatureKind.DWT):
        assert PREPROCESS_BY_KIND[kind].resample == TotalPoints(128)
    assert PREPROCESS_BY_KIND[FeatureKind.SP].resample == Spacing(0.0357)
    assert PREPROCESS_BY_KIND[FeatureKind.HOG].resample == Spacing(0.0278)
    assert PREPROCESS_BY_KIND[FeatureKind.HPOD].resample == Spacing(0.0278)


def test_pipeline_config_smoothing_override():
    cfg = PipelineConfig.for_kind(FeatureKind.ST, smoothing_passes=3)
    assert cfg.preprocess.smoothing_passes == 3
    assert cfg.smoothing_passes == 3


def test_trace_kinds_yield_128_points(rng):
    for _ in range(5):
        c = random_character(rng, min_points=2)
        assert preprocess_for(c, FeatureKind.DFT).n_points == 128


def test_extract_matrix_shapes_and_missing_labels(rng):
    chars = [random_character(rng, label=2), random_character(rng),
             random_character(rng, label=5)]
    labels, matrix = extract_matrix(chars, FeatureKind.DCT)
    assert matrix.shape == (3, 258)
    assert labels.tolist() == [2, -1, 5]


def test_variation_cases_cover_strokes(rng):
    pre = preprocess_for(random_character(rng, n_strokes=3, min_points=4),
                         FeatureKind.HPOD)
    names = [n for n, _ in variation_cases(pre)]
    assert names == ["reverse_stroke_0", "reverse_stroke_1", "reverse_stroke_2",
                     "permute_strokes", "reverse_and_permute"]


def test_variation_cases_single_stroke(rng):
    pre = preprocess_for(random_character(rng, n_strokes=1, min_points=4),
                         FeatureKind.ST)
    names = [n for n, _ in variation_cases(pre)]
    assert names == ["reverse_stroke_0"]


def test_variation_cases_single_point_character():
    pre = InkCharacter.from_point_lists([[[0.5, 0.5]]])
    assert variation_cases(pre) == []


def test_variation_preserves_geometry(rng):
    pre = preprocess_for(random_character(rng, n_strokes=2, min_points=5),
                         FeatureKind.HPOD)
    base = sorted(map(tuple, pre.all_points().tolist()))
    for _, variant in variation_cases(pre):
        assert sorted(map(tuple, variant.all_points().tolist())) == base


def test_variation_results_split_by_family(rng):
    for _ in range(10):
        c = random_character(rng, n_strokes=2, min_points=5)
        for kind in (FeatureKind.SP, FeatureKind.HOG, FeatureKind.HPOD):
            for r in variation_results(c, kind):
                assert r.linf < 1e-9, (kind, r.case, r.linf)
        for kind in (FeatureKind.ST, FeatureKind.DFT, FeatureKind.DCT,
                     FeatureKind.DWT):
            for r in variation_results(c, kind):
                if r.reorders_matrix:
                    assert r.l2 > 1e-6, (kind, r.case, r.l2)


def test_variation_flags_non_reordering_cases():
    # two identical strokes: any permutation leaves the row matrix unchanged
    c = InkCharacter.from_point_lists(
        [[[0, 0], [1, 1], [2, 0]], [[0, 0], [1, 1], [2, 0]]])
    results = variation_results(c, FeatureKind.ST)
    by_name = {r.case: r for r in results}
    assert not by_name["permute_strokes"].reorders_matrix
    assert by_name["permute_strokes"].l2 == 0.0


def test_reresampled_deviation_is_finite(rng):
    c = random_character(rng, min_points=5)
    for kind in (FeatureKind.ST, FeatureKind.HPOD):
        d = reresampled_deviation(c, kind, seed=0)
        assert np.isfinite(d) and d >= 0.0


def test_extract_preprocessed_requires_extents(rng):
    from strokekit.errors import StructureError
    c = random_character(rng, min_points=4)  # never normalized
    with pytest.raises(StructureError):
        extract_preprocessed(c, FeatureKind.ST)
