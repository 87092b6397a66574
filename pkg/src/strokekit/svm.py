"""RBF-kernel binary SVMs trained by SMO, combined one-vs-one with a
pairwise elimination walk for multiclass decisions.

Binary models store dual coefficients and indices into a shared sample
bank rather than copies of their support vectors; with thousands of class
pairs over one training set this keeps memory linear in the dataset size.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, DomainError, ModelIntegrityError, TrainingError
from .features.base import FeatureKind

DEFAULT_TOL = 1e-3
DEFAULT_MAX_SWEEPS = 200

# Kernel width per feature kind, box constraint shared by all kinds.
DEFAULT_BOX = 1024.0
DEFAULT_KERNEL_SCALE = {
    FeatureKind.ST: 10.0,
    FeatureKind.DFT: 28.0,
    FeatureKind.DCT: 28.0,
    FeatureKind.DWT: 20.0,
    FeatureKind.SP: 10.0,
    FeatureKind.HOG: 10.0,
    FeatureKind.HPOD: 10.0,
}


@dataclass(frozen=True)
class KernelConfig:
    """k(x, y) = exp(-||x - y||^2 / scale^2); box bounds the dual weights."""

    scale: float
    box: float = DEFAULT_BOX

    def __post_init__(self):
        if not (self.scale > 0) or not (self.box > 0):
            raise DomainError("kernel scale and box must be positive")


def default_kernel(kind: FeatureKind) -> KernelConfig:
    return KernelConfig(scale=DEFAULT_KERNEL_SCALE[kind], box=DEFAULT_BOX)


def rbf_kernel(x: np.ndarray, y: np.ndarray, k: KernelConfig) -> float:
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise DimensionError(f"kernel arguments must be equal-length vectors, "
                             f"got {x.shape} and {y.shape}")
    d = x - y
    return float(np.exp(-(d @ d) / (k.scale * k.scale)))


def kernel_row(bank: np.ndarray, x: np.ndarray, k: KernelConfig) -> np.ndarray:
    """Kernel values of one probe against every bank row."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or bank.shape[1] != x.shape[0]:
        raise DimensionError(
            f"probe of dim {x.shape} does not match bank of dim {bank.shape[1]}")
    d = bank - x
    return np.exp(-np.einsum("ij,ij->i", d, d) / (k.scale * k.scale))


@dataclass(frozen=True)
class BinarySvm:
    """One trained two-class decision function in dual form.

    ``sv_indices`` point into ``bank``; ``alphas_signed`` holds alpha_i*y_i
    for those rows. A positive decision value votes for the lower class of
    ``class_pair``.
    """

    class_pair: tuple[int, int]
    bank: np.ndarray
    sv_indices: np.ndarray
    alphas_signed: np.ndarray
    bias: float
    kernel: KernelConfig
    converged: bool = True

    def __post_init__(self):
        i, j = self.class_pair
        if not i < j:
            raise DomainError(f"class pair must be ordered, got {self.class_pair}")
        sv = np.asarray(self.sv_indices, dtype=np.int64).copy()
        al = np.asarray(self.alphas_signed, dtype=np.float64).copy()
        if sv.shape != al.shape or sv.ndim != 1:
            raise DimensionError("sv_indices and alphas_signed must be equal-length")
        sv.setflags(write=False)
        al.setflags(write=False)
        object.__setattr__(self, "sv_indices", sv)
        object.__setattr__(self, "alphas_signed", al)

    @property
    def support_vectors(self) -> np.ndarray:
        return self.bank[self.sv_indices]


def binary_decision(m: BinarySvm, x: np.ndarray) -> float:
    row = kernel_row(m.bank[m.sv_indices], np.asarray(x, dtype=np.float64), m.kernel)
    return float(m.alphas_signed @ row + m.bias)


def _decision_from_row(m: BinarySvm, krow: np.ndarray) -> float:
    return float(m.alphas_signed @ krow[m.sv_indices] + m.bias)


def _smo(K: np.ndarray, y: np.ndarray, box: float, tol: float,
         max_sweeps: int, rng: np.random.Generator) -> tuple[np.ndarray, float, bool]:
    """Core SMO loop on a precomputed kernel matrix.

    Returns (alphas, bias, converged). The decision-value cache f is updated
    incrementally after every accepted step, so each step costs O(n).
    """
    n = len(y)
    alphas = np.zeros(n)
    b = 0.0
    f = np.zeros(n)  # current decision values including the bias

    def take_step(i1: int, i2: int) -> bool:
        nonlocal b
        if i1 == i2:
            return False
        a1, a2 = alphas[i1], alphas[i2]
        y1, y2 = y[i1], y[i2]
        e1, e2 = f[i1] - y1, f[i2] - y2
        s = y1 * y2
        if s < 0:
            lo, hi = max(0.0, a2 - a1), min(box, box + a2 - a1)
        else:
            lo, hi = max(0.0, a1 + a2 - box), min(box, a1 + a2)
        if lo >= hi:
            return False
        eta = K[i1, i1] + K[i2, i2] - 2.0 * K[i1, i2]
        if eta <= 0:
            # duplicate-point degeneracy; no curvature to move along
            return False
        a2_new = a2 + y2 * (e1 - e2) / eta
        a2_new = min(max(a2_new, lo), hi)
        if abs(a2_new - a2) < 1e-8 * (a2_new + a2 + 1e-8):
            return False
        a1_new = a1 + s * (a2 - a2_new)
        a1_new = min(max(a1_new, 0.0), box)
        d1 = y1 * (a1_new - a1)
        d2 = y2 * (a2_new - a2)
        b1 = b - e1 - d1 * K[i1, i1] - d2 * K[i1, i2]
        b2 = b - e2 - d1 * K[i1, i2] - d2 * K[i2, i2]
        if 0.0 < a1_new < box:
            b_new = b1
        elif 0.0 < a2_new < box:
            b_new = b2
        else:
            b_new = 0.5 * (b1 + b2)
        f[:] = f + d1 * K[:, i1] + d2 * K[:, i2] + (b_new - b)
        alphas[i1], alphas[i2] = a1_new, a2_new
        b = b_new
        return True

    def examine(i2: int) -> bool:
        y2, a2 = y[i2], alphas[i2]
        r2 = (f[i2] - y2) * y2
        if not ((r2 < -tol and a2 < box) or (r2 > tol and a2 > 0)):
            return False
        non_bound = np.flatnonzero((alphas > 0) & (alphas < box))
        if len(non_bound) > 1:
            errors = f[non_bound] - y[non_bound]
            i1 = int(non_bound[np.argmax(np.abs(errors - (f[i2] - y2)))])
            if take_step(i1, i2):
                return True
        for pool in (non_bound, np.arange(n)):
            if len(pool) == 0:
                continue
            start = int(rng.integers(len(pool)))
            for k in range(len(pool)):
                if take_step(int(pool[(start + k) % len(pool)]), i2):
                    return True
        return False

    examine_all = True
    converged = False
    for _ in range(max_sweeps):
        if examine_all:
            changed = sum(examine(i) for i in range(n))
        else:
            changed = sum(examine(i) for i in
                          np.flatnonzero((alphas > 0) & (alphas < box)))
        if examine_all:
            if changed == 0:
                converged = True
                break
            examine_all = False
        elif changed == 0:
            examine_all = True
    return alphas, b, converged


def _fit_pair(bank: np.ndarray, pos_idx: np.ndarray, neg_idx: np.ndarray,
              K_sub: np.ndarray, kernel: KernelConfig, class_pair: tuple[int, int],
              tol: float, max_sweeps: int,
              rng: np.random.Generator) -> BinarySvm:
    idx = np.concatenate([pos_idx, neg_idx])
    y = np.concatenate([np.ones(len(pos_idx)), -np.ones(len(neg_idx))])
    alphas, bias, converged = _smo(K_sub, y, kernel.box, tol, max_sweeps, rng)
    sv = np.flatnonzero(alphas > 0)
    return BinarySvm(class_pair=class_pair, bank=bank, sv_indices=idx[sv],
                     alphas_signed=alphas[sv] * y[sv], bias=bias,
                     kernel=kernel, converged=converged)


def smo_train(pos: np.ndarray, neg: np.ndarray, kernel: KernelConfig,
              tol: float = DEFAULT_TOL, max_sweeps: int = DEFAULT_MAX_SWEEPS,
              seed: int = 0, class_pair: tuple[int, int] = (1, 2)) -> BinarySvm:
    """Train one binary SVM; ``pos`` maps to +1 (the lower class)."""
    pos = np.atleast_2d(np.asarray(pos, dtype=np.float64))
    neg = np.atleast_2d(np.asarray(neg, dtype=np.float64))
    if len(pos) == 0 or len(neg) == 0:
        raise TrainingError("both classes need at least one sample")
    if pos.shape[1] != neg.shape[1]:
        raise DimensionError("class samples have different dimensions")
    bank = np.vstack([pos, neg])
    d = bank[:, None, :] - bank[None, :, :]
    K = np.exp(-np.einsum("ijk,ijk->ij", d, d) / (kernel.scale * kernel.scale))
    rng = np.random.default_rng(seed)
    return _fit_pair(bank, np.arange(len(pos)), np.arange(len(pos), len(bank)),
                     K, kernel, class_pair, tol, max_sweeps, rng)


@dataclass(frozen=True)
class SvmModel:
    """All pairwise binaries over one training bank, plus label metadata."""

    feature_kind: FeatureKind
    kernel: KernelConfig
    n_classes: int
    class_labels: dict[int, str]
    bank: np.ndarray
    binaries: dict[tuple[int, int], BinarySvm] = field(repr=False)

    def binary(self, i: int, j: int) -> BinarySvm:
        m = self.binaries.get((i, j))
        if m is None:
            raise ModelIntegrityError(f"model is missing the ({i}, {j}) classifier")
        return m


def train_multiclass(samples: np.ndarray, labels: np.ndarray,
                     kernel: KernelConfig, feature_kind: FeatureKind,
                     class_labels: dict[int, str] | None = None,
                     tol: float = DEFAULT_TOL,
                     max_sweeps: int = DEFAULT_MAX_SWEEPS,
                     seed: int = 0) -> SvmModel:
    """One binary per unordered class pair, each trained only on that pair.

    Per-pair RNG streams are derived from (seed, i, j), so results do not
    depend on the order pairs are trained in.
    """
    samples = np.asarray(samples, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    if samples.ndim != 2 or len(samples) != len(labels):
        raise DimensionError("need one label per sample row")
    if len(labels) == 0:
        raise TrainingError("empty training set")
    n_classes = int(labels.max())
    if n_classes < 2:
        raise TrainingError("need at least 2 classes")
    by_class = {c: np.flatnonzero(labels == c) for c in range(1, n_classes + 1)}
    empty = [c for c, idx in by_class.items() if len(idx) == 0]
    if empty:
        raise TrainingError(f"classes without samples: {empty}")

    scale_sq = kernel.scale * kernel.scale
    sq_norms = np.einsum("ij,ij->i", samples, samples)
    binaries = {}
    for i in range(1, n_classes + 1):
        for j in range(i + 1, n_classes + 1):
            pos_idx, neg_idx = by_class[i], by_class[j]
            idx = np.concatenate([pos_idx, neg_idx])
            sub = samples[idx]
            g = sub @ sub.T
            sq = sq_norms[idx]
            d2 = np.maximum(sq[:, None] + sq[None, :] - 2.0 * g, 0.0)
            K_sub = np.exp(-d2 / scale_sq)
            rng = np.random.default_rng([seed, i, j])
            binaries[(i, j)] = _fit_pair(samples, pos_idx, neg_idx, K_sub,
                                         kernel, (i, j), tol, max_sweeps, rng)
    if class_labels is None:
        class_labels = {c: str(c) for c in range(1, n_classes + 1)}
    return SvmModel(feature_kind=feature_kind, kernel=kernel, n_classes=n_classes,
                    class_labels=dict(class_labels), bank=samples, binaries=binaries)


def ddag_predict_with_trace(model: SvmModel, x: np.ndarray
                            ) -> tuple[int, list[tuple[tuple[int, int], float]]]:
    """Elimination walk: keep the lower class while its pairwise decision is
    positive, otherwise adopt the challenger; always N_ct - 1 decisions.

    The trace lists each consulted pair with its decision value, in order.
    """
    x = np.asarray(x, dtype=np.float64)
    krow = kernel_row(model.bank, x, model.kernel)
    trace = []
    k, j = 1, 2
    while j <= model.n_classes:
        f = _decision_from_row(model.binary(k, j), krow)
        trace.append(((k, j), f))
        if f <= 0:
            k = j
        j = max(k, j) + 1
    return k, trace


def ddag_predict(model: SvmModel, x: np.ndarray) -> int:
    return ddag_predict_with_trace(model, x)[0]


def vote_ranking(model: SvmModel, x: np.ndarray) -> list[tuple[int, int]]:
    """Classes ranked by pairwise wins, the elimination winner always first.

    Returns (class_id, votes) pairs. Votes come from evaluating all
    N_ct(N_ct-1)/2 binaries; ties break toward the smaller class id.
    """
    x = np.asarray(x, dtype=np.float64)
    krow = kernel_row(model.bank, x, model.kernel)
    votes = {c: 0 for c in range(1, model.n_classes + 1)}
    for (i, j), m in model.binaries.items():
        won = i if _decision_from_row(m, krow) > 0 else j
        votes[won] += 1
    winner, _ = ddag_predict_with_trace(model, x)
    rest = sorted((c for c in votes if c != winner),
                  key=lambda c: (-votes[c], c))
    return [(winner, votes[winner])] + [(c, votes[c]) for c in rest]


def evaluate_accuracy(model: SvmModel, samples: np.ndarray,
                      labels: np.ndarray) -> tuple[float, np.ndarray]:
    """Accuracy plus a confusion matrix with rows indexed by true class."""
    samples = np.asarray(samples, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    if len(samples) == 0:
        raise TrainingError("empty evaluation set")
    n = model.n_classes
    confusion = np.zeros((n, n), dtype=np.int64)
    correct = 0
    for x, truth in zip(samples, labels):
        pred = ddag_predict(model, x)
        confusion[truth - 1, pred - 1] += 1
        correct += int(pred == truth)
    return correct / len(samples), confusion
