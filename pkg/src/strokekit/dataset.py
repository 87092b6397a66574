"""Ink and model files, synthetic data generation, and train/test splits.

File formats are JSON containers. Coordinates and model weights round-trip
exactly: scalars rely on shortest-repr float serialization, bulk arrays are
base64-encoded little-endian float64. Model and feature files carry a
SHA-256 checksum over their canonical payload encoding.
"""

from __future__ import annotations

import base64
import hashlib
import json
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import directed_hausdorff

from .errors import (DataFormatError, DomainError, IntegrityError, StructureError,
                     TrainingError, VersionError)
from .features.base import FeatureKind
from .ink import InkCharacter, Stroke
from .svm import BinarySvm, KernelConfig, SvmModel

SCHEMA_VERSION = 1


# ---------------------------------------------------------------------------
# ink documents

def _character_to_record(c: InkCharacter) -> dict:
    return {
        "label": None if c.label is None else str(c.label),
        "strokes": [[[float(x), float(y)] for x, y in s.points] for s in c.strokes],
    }


def _character_from_record(rec, where: str) -> InkCharacter:
    if not isinstance(rec, dict) or "strokes" not in rec:
        raise DataFormatError(f"{where}: expected an object with a 'strokes' field")
    label = rec.get("label")
    if label is not None:
        try:
            label = int(label)
        except (TypeError, ValueError):
            raise DataFormatError(f"{where}: label {label!r} is not an integer") from None
    strokes = rec["strokes"]
    if not isinstance(strokes, list) or not strokes:
        raise DataFormatError(f"{where}: strokes must be a non-empty list")
    built = []
    for si, stroke in enumerate(strokes):
        if not isinstance(stroke, list) or not stroke:
            raise DataFormatError(f"{where}, stroke {si}: must be a non-empty point list")
        try:
            built.append(Stroke(np.array(stroke, dtype=np.float64)))
        except (StructureError, ValueError) as e:
            raise DataFormatError(f"{where}, stroke {si}: {e}") from None
    return InkCharacter(tuple(built), label=label)


def save_ink(chars: list[InkCharacter], path, metadata: dict[str, str] | None = None):
    doc = {
        "schema_version": SCHEMA_VERSION,
        "metadata": dict(metadata or {}),
        "characters": [_character_to_record(c) for c in chars],
    }
    with open(path, "w") as fh:
        json.dump(doc, fh)


def load_ink(path) -> list[InkCharacter]:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as e:
        raise DataFormatError(f"{path}: not valid JSON (line {e.lineno}: {e.msg})") from None
    if not isinstance(doc, dict):
        raise DataFormatError(f"{path}: top level must be an object")
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise VersionError(f"{path}: unsupported schema_version {version!r}")
    chars_field = doc.get("characters")
    if not isinstance(chars_field, list):
        raise DataFormatError(f"{path}: 'characters' must be a list")
    return [_character_from_record(rec, f"{path}, character {i}")
            for i, rec in enumerate(chars_field)]


# ---------------------------------------------------------------------------
# checksummed binary-payload containers

def _b64_array(a: np.ndarray, dtype: str) -> str:
    return base64.b64encode(np.ascontiguousarray(a, dtype=dtype).tobytes()).decode("ascii")

def _unb64_array(s: str, dtype: str, where: str) -> np.ndarray:
    try:
        return np.frombuffer(base64.b64decode(s, validate=True), dtype=dtype)
    except (ValueError, TypeError):
        raise DataFormatError(f"{where}: undecodable array data") from None


def _payload_digest(payload: dict) -> str:
    canon = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()


def _write_container(path, payload: dict):
    doc = {"schema_version": SCHEMA_VERSION,
           "payload_sha256": _payload_digest(payload),
           "payload": payload}
    with open(path, "w") as fh:
        json.dump(doc, fh)


def _read_container(path) -> dict:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as e:
        raise DataFormatError(f"{path}: not valid JSON (line {e.lineno}: {e.msg})") from None
    if not isinstance(doc, dict) or "payload" not in doc:
        raise DataFormatError(f"{path}: missing payload")
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise VersionError(f"{path}: unsupported schema_version "
                           f"{doc.get('schema_version')!r}")
    if _payload_digest(doc["payload"]) != doc.get("payload_sha256"):
        raise IntegrityError(f"{path}: payload checksum mismatch")
    return doc["payload"]


# ---------------------------------------------------------------------------
# feature matrices

def save_features(path, kind: FeatureKind, labels: np.ndarray, matrix: np.ndarray):
    matrix = np.asarray(matrix, dtype=np.float64)
    payload = {
        "kind": "features",
        "feature_kind": kind.value,
        "labels": [int(v) for v in labels],
        "shape": list(matrix.shape),
        "data": _b64_array(matrix, "<f8"),
    }
    _write_container(path, payload)


def load_features(path) -> tuple[FeatureKind, np.ndarray, np.ndarray]:
    p = _read_container(path)
    try:
        kind = FeatureKind(p["feature_kind"])
        labels = np.array(p["labels"], dtype=np.int64)
        shape = tuple(p["shape"])
        matrix = _unb64_array(p["data"], "<f8", str(path)).reshape(shape)
    except (KeyError, ValueError, TypeError) as e:
        raise DataFormatError(f"{path}: malformed feature payload ({e})") from None
    if len(labels) != shape[0]:
        raise DataFormatError(f"{path}: {len(labels)} labels for {shape[0]} rows")
    return kind, labels, matrix


# ---------------------------------------------------------------------------
# model files

def save_model(model: SvmModel, path):
    payload = {
        "kind": "svm-model",
        "feature_kind": model.feature_kind.value,
        "n_classes": model.n_classes,
        "kernel": {"scale": model.kernel.scale, "box": model.kernel.box},
        "labels": {str(c): name for c, name in model.class_labels.items()},
        "samples": {"shape": list(model.bank.shape),
                    "data": _b64_array(model.bank, "<f8")},
        "binaries": [
            {"pair": list(pair),
             "sv_idx": _b64_array(b.sv_indices, "<i8"),
             "alphas": _b64_array(b.alphas_signed, "<f8"),
             "bias": b.bias,
             "converged": b.converged}
            for pair, b in sorted(model.binaries.items())
        ],
    }
    _write_container(path, payload)


def load_model(path) -> SvmModel:
    p = _read_container(path)
    try:
        kind = FeatureKind(p["feature_kind"])
        kernel = KernelConfig(scale=float(p["kernel"]["scale"]),
                              box=float(p["kernel"]["box"]))
        n_classes = int(p["n_classes"])
        labels = {int(c): str(name) for c, name in p["labels"].items()}
        shape = tuple(p["samples"]["shape"])
        bank = _unb64_array(p["samples"]["data"], "<f8", str(path)).reshape(shape).copy()
        bank.setflags(write=False)
        binaries = {}
        for rec in p["binaries"]:
            pair = (int(rec["pair"][0]), int(rec["pair"][1]))
            binaries[pair] = BinarySvm(
                class_pair=pair, bank=bank,
                sv_indices=_unb64_array(rec["sv_idx"], "<i8", str(path)),
                alphas_signed=_unb64_array(rec["alphas"], "<f8", str(path)),
                bias=float(rec["bias"]), kernel=kernel,
                converged=bool(rec["converged"]))
    except (KeyError, ValueError, TypeError, IndexError) as e:
        raise DataFormatError(f"{path}: malformed model payload ({e})") from None
    return SvmModel(feature_kind=kind, kernel=kernel, n_classes=n_classes,
                    class_labels=labels, bank=bank, binaries=binaries)


# ---------------------------------------------------------------------------
# synthetic characters

@dataclass(frozen=True)
class PerturbationSpec:
    reverse_stroke_prob: float = 0.0
    permute_strokes: bool = False
    jitter_sigma: float = 0.0

    def __post_init__(self):
        if not (0.0 <= self.reverse_stroke_prob <= 1.0):
            raise DomainError("reverse_stroke_prob must be in [0, 1]")
        if self.jitter_sigma < 0:
            raise DomainError("jitter_sigma must be non-negative")


def perturb(c: InkCharacter, spec: PerturbationSpec, seed: int) -> InkCharacter:
    """Reverse strokes with the given probability, optionally shuffle stroke
    order, then add coordinate noise. With zero noise the point multiset is
    untouched, only ordering changes."""
    rng = np.random.default_rng(seed)
    strokes = [s.reversed() if rng.random() < spec.reverse_stroke_prob else s
               for s in c.strokes]
    if spec.permute_strokes:
        order = rng.permutation(len(strokes))
        strokes = [strokes[i] for i in order]
    if spec.jitter_sigma > 0:
        strokes = [Stroke(s.points + rng.normal(0.0, spec.jitter_sigma,
                                                s.points.shape))
                   for s in strokes]
    return InkCharacter(tuple(strokes), label=c.label,
                        raw_width=c.raw_width, raw_height=c.raw_height)


def _chaikin(pts: np.ndarray, iterations: int = 3) -> np.ndarray:
    """Corner-cutting subdivision; keeps endpoints, smooths the interior."""
    p = pts
    for _ in range(iterations):
        q = [p[0]]
        for a, b in zip(p[:-1], p[1:]):
            q.append(0.75 * a + 0.25 * b)
            q.append(0.25 * a + 0.75 * b)
        q.append(p[-1])
        p = np.array(q)
    return p


def _normalize_template(strokes: list[np.ndarray]) -> list[np.ndarray]:
    allp = np.vstack(strokes)
    lo, hi = allp.min(axis=0), allp.max(axis=0)
    span = np.where(hi - lo > 0, hi - lo, 1.0)
    return [(s - lo) / span for s in strokes]


def _template_distance(a: list[np.ndarray], b: list[np.ndarray]) -> float:
    u, v = np.vstack(a), np.vstack(b)
    return max(directed_hausdorff(u, v)[0], directed_hausdorff(v, u)[0])


def _make_template(rng: np.random.Generator) -> list[np.ndarray]:
    strokes = []
    for _ in range(int(rng.integers(1, 5))):
        n_ctrl = int(rng.integers(3, 7))
        ctrl = [rng.uniform(0.0, 1.0, 2)]
        while len(ctrl) < n_ctrl:
            cand = rng.uniform(0.0, 1.0, 2)
            if np.linalg.norm(cand - ctrl[-1]) >= 0.25:
                ctrl.append(cand)
        strokes.append(_chaikin(np.array(ctrl)))
    return _normalize_template(strokes)


MIN_TEMPLATE_SEPARATION = 0.1


def make_templates(class_count: int, seed: int) -> list[list[np.ndarray]]:
    """Distinct per-class stroke templates in the unit square.

    Candidates are rejected until each new template is at least
    MIN_TEMPLATE_SEPARATION away (symmetric Hausdorff distance) from all
    accepted ones.
    """
    if class_count < 2:
        raise DomainError("need at least 2 classes")
    rng = np.random.default_rng([seed, 7919])
    templates: list[list[np.ndarray]] = []
    attempts = 0
    while len(templates) < class_count:
        cand = _make_template(rng)
        attempts += 1
        if attempts > 500 * class_count:
            raise TrainingError("could not place pairwise-distinct templates")
        if all(_template_distance(cand, t) >= MIN_TEMPLATE_SEPARATION
               for t in templates):
            templates.append(cand)
    return templates


def _warp_sample(strokes: list[np.ndarray], rng: np.random.Generator,
                 warp_sigma: float, jitter_sigma: float) -> list[np.ndarray]:
    """One handwriting-style variation: a smooth low-frequency displacement
    field, a small affine wobble, and per-point noise."""
    amp = rng.normal(0.0, warp_sigma, (2, 2))
    freq = rng.uniform(0.5, 1.5, (2, 2, 2))
    phase = rng.uniform(0.0, 2 * np.pi, (2, 2))
    angle = np.radians(rng.normal(0.0, 4.0))
    scale = rng.normal(1.0, 0.06, 2)
    rot = np.array([[np.cos(angle), -np.sin(angle)],
                    [np.sin(angle), np.cos(angle)]])
    out = []
    for s in strokes:
        disp = np.zeros_like(s)
        for axis in range(2):
            for m in range(2):
                disp[:, axis] += amp[axis, m] * np.sin(
                    2 * np.pi * (s @ freq[axis, m]) + phase[axis, m])
        p = (s + disp - 0.5) @ (rot * scale).T + 0.5
        p = p + rng.normal(0.0, jitter_sigma, p.shape)
        out.append(p)
    return out


def generate_synthetic(class_count: int, per_class: int, seed: int,
                       warp_sigma: float = 0.06,
                       jitter_sigma: float = 0.004) -> list[InkCharacter]:
    """Deterministic labeled characters for desk-scale experiments.

    Every sample of a class derives from the same template but with its own
    deformation, noise, stroke order, and stroke directions, so order- and
    direction-sensitive representations see maximal variation while the
    geometry stays class-consistent.
    """
    templates = make_templates(class_count, seed)
    chars = []
    for cls in range(1, class_count + 1):
        for k in range(per_class):
            rng = np.random.default_rng([seed, cls, k])
            strokes = _warp_sample(templates[cls - 1], rng, warp_sigma, jitter_sigma)
            order = rng.permutation(len(strokes))
            built = []
            for i in order:
                pts = strokes[i]
                built.append(Stroke(pts[::-1] if rng.random() < 0.5 else pts))
            chars.append(InkCharacter(tuple(built), label=cls))
    return chars


# ---------------------------------------------------------------------------
# splitting

@dataclass(frozen=True)
class SplitSpec:
    train_fraction: float = 0.8
    seed: int = 0
    stratified: bool = True

    def __post_init__(self):
        if not (0.0 < self.train_fraction < 1.0):
            raise DomainError("train_fraction must be in (0, 1)")


def split(chars: list[InkCharacter], spec: SplitSpec
          ) -> tuple[list[InkCharacter], list[InkCharacter]]:
    """Deterministic disjoint train/test split, stratified by label when
    asked. A stratified class with a single sample goes to train with a
    warning rather than starving either side."""
    rng = np.random.default_rng(spec.seed)
    if not spec.stratified:
        order = rng.permutation(len(chars))
        n_train = min(max(round(spec.train_fraction * len(chars)), 1),
                      max(len(chars) - 1, 1))
        train_idx = set(order[:n_train].tolist())
        train = [c for i, c in enumerate(chars) if i in train_idx]
        test = [c for i, c in enumerate(chars) if i not in train_idx]
        return train, test
    by_label: dict[int | None, list[int]] = {}
    for i, c in enumerate(chars):
        by_label.setdefault(c.label, []).append(i)
    train_idx = set()
    for label in sorted(by_label, key=lambda v: (v is None, v)):
        idx = np.array(by_label[label])
        if len(idx) == 1:
            warnings.warn(f"class {label} has a single sample; assigning to train")
            train_idx.add(int(idx[0]))
            continue
        order = rng.permutation(len(idx))
        n_train = min(max(round(spec.train_fraction * len(idx)), 1), len(idx) - 1)
        train_idx.update(idx[order[:n_train]].tolist())
    train = [c for i, c in enumerate(chars) if i in train_idx]
    test = [c for i, c in enumerate(chars) if i not in train_idx]
    return train, test
