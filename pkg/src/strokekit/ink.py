"""Core ink data types and the row-stacked character matrix.

A character is an ordered sequence of strokes; a stroke is an ordered
sequence of 2-D points in writing order. All types are immutable value
objects: stroke arrays are frozen copies, safe to share between threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np

from .errors import StructureError


def _frozen_points(points) -> np.ndarray:
    arr = np.asarray(points, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise StructureError(f"stroke points must be an (N, 2) array, got shape {arr.shape}")
    if arr.shape[0] < 1:
        raise StructureError("stroke must contain at least one point")
    if not np.all(np.isfinite(arr)):
        raise StructureError("stroke contains non-finite coordinates")
    arr = arr.copy()
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class InkPoint:
    """A single pen position. Coordinates are unitless; after preprocessing
    both lie in [0, 1]."""

    x: float
    y: float


@dataclass(frozen=True)
class Stroke:
    """Pen trajectory between pen-down and pen-up, in writing order."""

    points: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "points", _frozen_points(self.points))

    @classmethod
    def from_points(cls, points: Iterable[InkPoint | Sequence[float]]) -> "Stroke":
        rows = [(p.x, p.y) if isinstance(p, InkPoint) else tuple(p) for p in points]
        return cls(np.array(rows, dtype=np.float64))

    def __len__(self) -> int:
        return self.points.shape[0]

    def reversed(self) -> "Stroke":
        return Stroke(self.points[::-1])


@dataclass(frozen=True)
class InkCharacter:
    """One handwritten character: strokes in writing order plus an optional
    class label and, once normalized, the pre-normalization extents."""

    strokes: tuple[Stroke, ...]
    label: int | None = None
    raw_width: float | None = None
    raw_height: float | None = None

    def __post_init__(self):
        strokes = tuple(self.strokes)
        if not strokes:
            raise StructureError("character must contain at least one stroke")
        object.__setattr__(self, "strokes", strokes)
        for extent in (self.raw_width, self.raw_height):
            if extent is not None and extent < 0:
                raise StructureError("raw extents must be non-negative")

    @classmethod
    def from_point_lists(cls, strokes: Iterable[Iterable[Sequence[float]]],
                         label: int | None = None) -> "InkCharacter":
        return cls(tuple(Stroke(np.array(list(s), dtype=np.float64)) for s in strokes),
                   label=label)

    @property
    def n_strokes(self) -> int:
        return len(self.strokes)

    @property
    def n_points(self) -> int:
        return sum(len(s) for s in self.strokes)

    def with_strokes(self, strokes: Iterable[Stroke]) -> "InkCharacter":
        return replace(self, strokes=tuple(strokes))

    def all_points(self) -> np.ndarray:
        return np.vstack([s.points for s in self.strokes])


@dataclass(frozen=True)
class CharacterMatrix:
    """All strokes' points row-stacked in writing order.

    ``stroke_boundaries[i]`` is the row where stroke i begins; it exists so
    per-stroke structure can be recovered from the flat matrix.
    """

    rows: np.ndarray
    stroke_boundaries: tuple[int, ...] = field(default=())

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=np.float64)
        rows = rows.copy()
        rows.setflags(write=False)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "stroke_boundaries", tuple(self.stroke_boundaries))

    @property
    def n_points(self) -> int:
        return self.rows.shape[0]


def character_matrix(c: InkCharacter) -> CharacterMatrix:
    """Stack every stroke's points, stroke order then within-stroke order.

    The result depends on both stroke order and stroke direction: reversing or
    permuting strokes reorders rows even though the point set is unchanged.
    """
    if not c.strokes:
        raise StructureError("cannot build a character matrix from an empty character")
    boundaries = []
    offset = 0
    for stroke in c.strokes:
        boundaries.append(offset)
        offset += len(stroke)
    return CharacterMatrix(np.vstack([s.points for s in c.strokes]), tuple(boundaries))
