"""Shared helpers for building random ink characters."""

from __future__ import annotations

import numpy as np
import pytest

from strokekit.ink import InkCharacter, Stroke


def random_character(rng: np.random.Generator, n_strokes: int | None = None,
                     min_points: int = 4, max_points: int = 60,
                     label: int | None = None) -> InkCharacter:
    """A character with smooth-ish random strokes on an arbitrary scale."""
    if n_strokes is None:
        n_strokes = int(rng.integers(1, 4))
    strokes = []
    for _ in range(n_strokes):
        n = int(rng.integers(min_points, max_points + 1))
        start = rng.uniform(-5.0, 5.0, 2)
        steps = rng.normal(0.0, 0.3, (n - 1, 2)) if n > 1 else np.empty((0, 2))
        pts = np.vstack([start, start + np.cumsum(steps, axis=0)]) if n > 1 \
            else start[None, :]
        strokes.append(Stroke(pts))
    return InkCharacter(tuple(strokes), label=label)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
