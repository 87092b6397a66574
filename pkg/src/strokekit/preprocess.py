"""Ink preprocessing: dedup, normalization, resampling, smoothing.

The pipeline order is fixed: repeated points are dropped first, coordinates
are min-max normalized to the unit square, strokes are resampled (either to
a fixed point budget or to a fixed inter-point distance), and finally a
small low-pass kernel is applied. Each step is also usable on its own.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, StructureError
from .ink import InkCharacter, Stroke


@dataclass(frozen=True)
class TotalPoints:
    """Resample so the whole character has exactly ``n`` points, split across
    strokes proportionally to arc length."""

    n: int

    def __post_init__(self):
        if self.n < 2:
            raise DomainError(f"total point budget must be >= 2, got {self.n}")


@dataclass(frozen=True)
class Spacing:
    """Resample so consecutive points within a stroke are exactly ``delta``
    apart in Euclidean distance."""

    delta: float

    def __post_init__(self):
        if not (self.delta > 0):
            raise DomainError(f"spacing must be positive, got {self.delta}")


ResampleMode = TotalPoints | Spacing


@dataclass(frozen=True)
class PreprocessConfig:
    resample: ResampleMode
    smoothing_passes: int = 1

    def __post_init__(self):
        if self.smoothing_passes < 0:
            raise DomainError("smoothing_passes must be non-negative")


def remove_repeated_points(c: InkCharacter) -> InkCharacter:
    """Drop points identical to their predecessor within each stroke.

    Comparison is exact; the first point of a stroke is always kept, so no
    stroke ever becomes empty.
    """
    out = []
    for stroke in c.strokes:
        pts = stroke.points
        if len(pts) == 1:
            out.append(stroke)
            continue
        keep = np.empty(len(pts), dtype=bool)
        keep[0] = True
        keep[1:] = np.any(pts[1:] != pts[:-1], axis=1)
        out.append(Stroke(pts[keep]) if not keep.all() else stroke)
    return c.with_strokes(out)


def normalize_coordinates(c: InkCharacter) -> InkCharacter:
    """Min-max normalize each axis to [0, 1] over the whole character.

    The pre-normalization extents are recorded on the character so later
    features can recover the original aspect ratio. An axis with zero extent
    maps every coordinate to 0.5 and records extent 0. Extents already
    present are kept, which makes repeated normalization a no-op.
    """
    pts = c.all_points()
    lo = pts.min(axis=0)
    hi = pts.max(axis=0)
    span = hi - lo
    out = []
    for stroke in c.strokes:
        p = stroke.points.copy()
        for axis in range(2):
            if span[axis] > 0:
                p[:, axis] = (p[:, axis] - lo[axis]) / span[axis]
            else:
                p[:, axis] = 0.5
        out.append(Stroke(p))
    width = c.raw_width if c.raw_width is not None else float(span[0])
    height = c.raw_height if c.raw_height is not None else float(span[1])
    norm = c.with_strokes(out)
    return InkCharacter(norm.strokes, label=c.label, raw_width=width, raw_height=height)


def _arc_lengths(pts: np.ndarray) -> np.ndarray:
    seg = np.linalg.norm(np.diff(pts, axis=0), axis=1)
    return np.concatenate([[0.0], np.cumsum(seg)])


def _resample_uniform(pts: np.ndarray, m: int) -> np.ndarray:
    """Place ``m`` points at equal arc-length steps along the polyline."""
    cum = _arc_lengths(pts)
    total = cum[-1]
    if total == 0.0:
        return np.repeat(pts[:1], m, axis=0)
    targets = np.linspace(0.0, total, m)
    idx = np.searchsorted(cum, targets, side="right") - 1
    idx = np.clip(idx, 0, len(pts) - 2)
    seg_len = cum[idx + 1] - cum[idx]
    u = np.where(seg_len > 0, (targets - cum[idx]) / np.where(seg_len > 0, seg_len, 1.0), 0.0)
    out = pts[idx] + u[:, None] * (pts[idx + 1] - pts[idx])
    out[0] = pts[0]
    out[-1] = pts[-1]
    return out


def _allocate_points(lengths: list[float], budget: int) -> list[int]:
    """Split ``budget`` points over strokes proportionally to length.

    Every stroke gets at least 2 points and the allocations sum to exactly
    ``budget``. Rounding error is settled by nudging the allocation that is
    furthest from its exact quota, lowest index first on ties.
    """
    k = len(lengths)
    total = sum(lengths)
    if total > 0:
        quotas = [budget * length / total for length in lengths]
    else:
        quotas = [budget / k] * k
    alloc = [max(2, math.floor(q + 0.5)) for q in quotas]
    excess = sum(alloc) - budget
    while excess > 0:
        cand = max((alloc[i] - quotas[i], -i) for i in range(k) if alloc[i] > 2)
        alloc[-cand[1]] -= 1
        excess -= 1
    while excess < 0:
        cand = min((alloc[i] - quotas[i], i) for i in range(k))
        alloc[cand[1]] += 1
        excess += 1
    return alloc


def _resample_spacing(pts: np.ndarray, delta: float) -> np.ndarray:
    """March along the polyline collecting points exactly ``delta`` apart.

    Each new point is the first position on the remaining polyline whose
    Euclidean distance from the previous sample equals ``delta`` (found by
    intersecting a circle with each segment). The stroke's first point is
    always kept; the original endpoint is appended afterwards when it sits
    more than ``delta / 2`` away from the last sample, so the tail is never
    silently cut off by more than half a step.
    """
    samples = [pts[0]]
    centre = pts[0]
    seg = 0
    t = 0.0
    n_seg = len(pts) - 1
    while seg < n_seg:
        a = pts[seg]
        d = pts[seg + 1] - a
        dd = float(d @ d)
        if dd == 0.0:
            seg += 1
            t = 0.0
            continue
        f = a - centre
        b = 2.0 * float(f @ d)
        cc = float(f @ f) - delta * delta
        disc = b * b - 4.0 * dd * cc
        hit = None
        if disc >= 0.0:
            # larger root: where the path leaves the circle moving forward
            u = (-b + math.sqrt(disc)) / (2.0 * dd)
            if t < u <= 1.0:
                hit = u
        if hit is None:
            seg += 1
            t = 0.0
            continue
        centre = a + hit * d
        samples.append(centre)
        t = hit
    tail = pts[-1]
    if float(np.linalg.norm(tail - centre)) > delta / 2.0:
        samples.append(tail)
    return np.array(samples, dtype=np.float64)


def resample(c: InkCharacter, mode: ResampleMode) -> InkCharacter:
    """Resample every stroke of a character.

    Single-point strokes pass through untouched in both modes. In
    ``TotalPoints`` mode they still count toward the total, so the budget
    left for multi-point strokes shrinks accordingly; the mode guarantees an
    exact total only when at least one multi-point stroke exists.
    """
    if isinstance(mode, TotalPoints):
        multi = [i for i, s in enumerate(c.strokes) if len(s) > 1]
        n_single = len(c.strokes) - len(multi)
        if not multi:
            return c
        budget = mode.n - n_single
        if budget < 2 * len(multi):
            raise DomainError(
                f"budget {mode.n} cannot cover {len(multi)} multi-point "
                f"strokes and {n_single} single-point strokes")
        lengths = [float(_arc_lengths(c.strokes[i].points)[-1]) for i in multi]
        alloc = _allocate_points(lengths, budget)
        out = list(c.strokes)
        for i, m in zip(multi, alloc):
            out[i] = Stroke(_resample_uniform(c.strokes[i].points, m))
        return c.with_strokes(out)
    if isinstance(mode, Spacing):
        out = []
        for stroke in c.strokes:
            if len(stroke) == 1:
                out.append(stroke)
            else:
                out.append(Stroke(_resample_spacing(stroke.points, mode.delta)))
        return c.with_strokes(out)
    raise StructureError(f"unknown resample mode: {mode!r}")


def smooth(c: InkCharacter, passes: int = 1) -> InkCharacter:
    """Apply a (1/4, 1/2, 1/4) kernel to each stroke ``passes`` times.

    Endpoints are left in place; strokes with fewer than three points are
    returned unchanged.
    """
    if passes < 0:
        raise DomainError("passes must be non-negative")
    out = []
    for stroke in c.strokes:
        pts = stroke.points
        if len(pts) < 3 or passes == 0:
            out.append(stroke)
            continue
        p = pts.copy()
        for _ in range(passes):
            q = p.copy()
            q[1:-1] = 0.25 * p[:-2] + 0.5 * p[1:-1] + 0.25 * p[2:]
            p = q
        out.append(Stroke(p))
    return c.with_strokes(out)


def preprocess(c: InkCharacter, config: PreprocessConfig) -> InkCharacter:
    """Run the full pipeline in its fixed order."""
    c = remove_repeated_points(c)
    c = normalize_coordinates(c)
    c = resample(c, config.resample)
    c = smooth(c, config.smoothing_passes)
    # interpolation is convex, but rounding can leak a coordinate past the
    # unit square by an ulp; grid mapping needs [0, 1] exactly
    return c.with_strokes(Stroke(np.clip(s.points, 0.0, 1.0)) for s in c.strokes)
