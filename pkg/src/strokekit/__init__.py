"""Online handwritten character features and classification.

The package turns pen trajectories into fixed-length feature vectors,
either from the time-ordered trace (transform domain) or from spatial
grid maps that forget stroke order, and classifies them with pairwise
margin classifiers arranged in a decision graph.
"""

from .dataset import (SplitSpec, generate_synthetic, load_features, load_ink,
                      load_model, save_features, save_ink, save_model, split)
from .errors import (DataFormatError, DimensionError, DomainError, IntegrityError,
                     ModelIntegrityError, StrokekitError, StructureError,
                     TrainingError, UsageError, VersionError)
from .features import FEATURE_DIMS, FeatureKind, FeatureVector
from .ink import CharacterMatrix, InkCharacter, InkPoint, Stroke, character_matrix
from .pipeline import PipelineConfig, extract, extract_matrix, preprocess_for
from .preprocess import (PreprocessConfig, ResampleMode, Spacing, TotalPoints,
                         preprocess)
from .svm import (KernelConfig, SvmModel, ddag_predict, default_kernel,
                  evaluate_accuracy, train_multiclass, vote_ranking)

__version__ = "0.1.0"

__all__ = [
    "SplitSpec", "generate_synthetic", "split",
    "save_ink", "load_ink", "save_features", "load_features",
    "save_model", "load_model",
    "StrokekitError", "StructureError", "DimensionError", "DomainError",
    "DataFormatError", "VersionError", "IntegrityError", "UsageError",
    "TrainingError", "ModelIntegrityError",
    "FEATURE_DIMS", "FeatureKind", "FeatureVector",
    "CharacterMatrix", "InkCharacter", "InkPoint", "Stroke", "character_matrix",
    "PipelineConfig", "extract", "extract_matrix", "preprocess_for",
    "PreprocessConfig", "ResampleMode", "Spacing", "TotalPoints", "preprocess",
    "KernelConfig", "SvmModel", "ddag_predict", "default_kernel",
    "evaluate_accuracy", "train_multiclass", "vote_ranking",
    "__version__",
]
