"""Feature extraction: temporal transforms of resampled traces and
spatial grid representations."""

from .base import (FEATURE_DIMS, SPATIAL_KINDS, TEMPORAL_KINDS, FeatureKind,
                   FeatureVector, append_spans, span_features)
from .spatial import (AngleQuantizer, CellGrid, SpatialGridConfig, SpatialMaps,
                      build_spatial_maps, hog_features, hpod_features, sp_features,
                      sp_map, spatial_index)
from .temporal import (ComplexSequence, dct2, dct_features, dft, dft_features,
                       dwt_features, haar_dwt, haar_idwt, idct2, idft, st_features)

__all__ = [
    "FEATURE_DIMS", "SPATIAL_KINDS", "TEMPORAL_KINDS", "FeatureKind",
    "FeatureVector", "append_spans", "span_features",
    "AngleQuantizer", "CellGrid", "SpatialGridConfig", "SpatialMaps",
    "build_spatial_maps", "hog_features", "hpod_features", "sp_features",
    "sp_map", "spatial_index",
    "ComplexSequence", "dct2", "dct_features", "dft", "dft_features",
    "dwt_features", "haar_dwt", "haar_idwt", "idct2", "idft", "st_features",
]
