"""Order- and direction-invariant features built on spatial maps.

Everything here works on a regular grid over the unit square: the occupancy
map alone yields the SP feature and, via gradient histograms, the HOG
feature; adding per-point stroke orientation and turning-angle maps (with
stroke thickening) yields the pooled-histogram feature.

Angles are unsigned degrees in [0, 180). A chord and its reverse get the
same angle, which is what makes every feature in this module independent of
stroke direction and stroke order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import DimensionError, DomainError
from ..ink import CharacterMatrix, InkCharacter
from .base import FeatureKind, FeatureVector

# Grid steps matched to the per-feature resampling distances.
SP_GRID_STEP = 0.0357        # 28 x 28 occupancy grid
HISTOGRAM_GRID_STEP = 0.0278  # 36 x 36 grid for gradient / pooled histograms

ORIENTATION_OFFSET = 1   # chord half-width for orientation angles
DYNAMICS_OFFSET = 3      # chord length for turning angles
HISTOGRAM_EPS = 1e-6


@dataclass(frozen=True)
class SpatialGridConfig:
    """Square grid over [0,1]^2 with step ``delta_sp`` per axis."""

    delta_sp: float
    n_i: int = field(init=False)

    def __post_init__(self):
        if not (self.delta_sp > 0):
            raise DomainError(f"grid step must be positive, got {self.delta_sp}")
        n = round(1.0 / self.delta_sp)
        if n < 2:
            raise DomainError(f"grid step {self.delta_sp} gives fewer than 2 cells")
        object.__setattr__(self, "n_i", n)


@dataclass(frozen=True)
class AngleQuantizer:
    """Uniform partition of [0, 180] into ``bins`` intervals.

    All bins are half-open except the last, which is closed at 180 so a
    perfectly antiparallel turning angle still lands in a bin.
    """

    step: float
    bins: int = field(init=False)

    def __post_init__(self):
        if not (self.step > 0):
            raise DomainError("quantizer step must be positive")
        bins = round(180.0 / self.step)
        if bins < 1 or abs(bins * self.step - 180.0) > 1e-9:
            raise DomainError(f"step {self.step} does not divide 180 degrees")
        object.__setattr__(self, "bins", bins)

    def bin_of(self, theta: float) -> int:
        """0-based bin index for an angle in [0, 180]."""
        if not (0.0 <= theta <= 180.0):
            raise DomainError(f"angle {theta} outside [0, 180]")
        return min(int(theta // self.step), self.bins - 1)

    def bins_of(self, thetas: np.ndarray) -> np.ndarray:
        t = np.asarray(thetas, dtype=np.float64)
        if t.size and (t.min() < 0.0 or t.max() > 180.0):
            raise DomainError("angle outside [0, 180]")
        return np.minimum((t // self.step).astype(np.int64), self.bins - 1)


@dataclass(frozen=True)
class CellGrid:
    """Division of an n_i-wide map into ``n_cells`` windows per axis, each
    ``cell_size`` map cells wide and extended by ``overlap`` into its
    neighbors (edge windows extend inward only)."""

    n_cells: int
    cell_size: int
    overlap: int = 0

    def __post_init__(self):
        if self.n_cells < 1 or self.cell_size < 1 or self.overlap < 0:
            raise DomainError("cell grid parameters must be positive (overlap >= 0)")


DEG20 = AngleQuantizer(step=20.0)
HOG_CELLS = CellGrid(n_cells=6, cell_size=6, overlap=0)
POOLING_CELLS = CellGrid(n_cells=6, cell_size=6, overlap=3)


@dataclass(frozen=True)
class SpatialMaps:
    """Per-cell occupancy, orientation, and turning-angle values.

    Angle values are meaningful only where the matching mask is set; masked
    cells are always occupied.
    """

    occupancy: np.ndarray
    orientation: np.ndarray
    dynamics: np.ndarray
    orientation_valid: np.ndarray
    dynamics_valid: np.ndarray

    def __post_init__(self):
        for name in ("occupancy", "orientation", "dynamics",
                     "orientation_valid", "dynamics_valid"):
            arr = getattr(self, name)
            arr = arr.copy()
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def n_i(self) -> int:
        return self.occupancy.shape[0]


def spatial_index(coord: float, cfg: SpatialGridConfig) -> int:
    """1-based grid index of a coordinate in [0, 1].

    Cells are half-open below the top; the last cell is closed so 1.0 maps
    to n_i instead of falling off the grid.
    """
    if not (0.0 <= coord <= 1.0):
        raise DomainError(f"coordinate {coord} outside [0, 1]")
    return min(int(coord // cfg.delta_sp) + 1, cfg.n_i)


def _spatial_indices(coords: np.ndarray, cfg: SpatialGridConfig) -> np.ndarray:
    c = np.asarray(coords, dtype=np.float64)
    if c.size and (c.min() < 0.0 or c.max() > 1.0):
        raise DomainError("coordinate outside [0, 1]")
    return np.minimum((c // cfg.delta_sp).astype(np.int64) + 1, cfg.n_i)


def sp_map(cm: CharacterMatrix, cfg: SpatialGridConfig) -> np.ndarray:
    """Binary occupancy grid: cell (i1, i2) is 1 iff some point maps there.

    First axis indexes x, second indexes y. Membership is a pure OR over
    points, so the map cannot depend on point order.
    """
    i1 = _spatial_indices(cm.rows[:, 0], cfg)
    i2 = _spatial_indices(cm.rows[:, 1], cfg)
    m = np.zeros((cfg.n_i, cfg.n_i), dtype=np.float64)
    m[i1 - 1, i2 - 1] = 1.0
    return m


def sp_features(cm: CharacterMatrix, cfg: SpatialGridConfig,
                spans: tuple[float, float]) -> FeatureVector:
    """Occupancy map flattened column by column (x index fastest), + spans."""
    if cfg.n_i != 28:
        raise DimensionError(f"sp features need a 28-cell grid, got {cfg.n_i}")
    m = sp_map(cm, cfg)
    return FeatureVector(FeatureKind.SP,
                         np.concatenate([m.reshape(-1, order="F"), spans]))


def hog_features(cm: CharacterMatrix, cfg: SpatialGridConfig,
                 spans: tuple[float, float], cells: CellGrid = HOG_CELLS,
                 quant: AngleQuantizer = DEG20,
                 eps: float = HISTOGRAM_EPS) -> FeatureVector:
    """Gradient-orientation histograms of the occupancy map.

    Gradients come from centered (-1, 0, 1) differences with zero padding;
    each pixel with nonzero magnitude votes its magnitude into the unsigned
    angle histogram of its cell. Cells do not overlap here and each is
    L2-normalized on its own. Pixels are accumulated in row-major order,
    which fixes the floating-point sum exactly.
    """
    if cfg.n_i != cells.n_cells * cells.cell_size:
        raise DimensionError(
            f"grid of {cfg.n_i} cells does not split into "
            f"{cells.n_cells} windows of {cells.cell_size}")
    m = sp_map(cm, cfg)
    padded = np.pad(m, 1)
    gx = padded[2:, 1:-1] - padded[:-2, 1:-1]
    gy = padded[1:-1, 2:] - padded[1:-1, :-2]
    mag = np.sqrt(gx * gx + gy * gy)
    ang = np.degrees(np.arctan2(gy, gx)) % 180.0
    hist = np.zeros((cells.n_cells, cells.n_cells, quant.bins), dtype=np.float64)
    for i1, i2 in zip(*np.nonzero(mag)):
        hist[i1 // cells.cell_size, i2 // cells.cell_size,
             quant.bin_of(ang[i1, i2])] += mag[i1, i2]
    norms = np.linalg.norm(hist, axis=2, keepdims=True)
    hist = hist / (norms + eps)
    return FeatureVector(FeatureKind.HOG, np.concatenate([hist.reshape(-1), spans]))


def _chord_angles(pts: np.ndarray, offset: int, rotate: bool) -> np.ndarray:
    """Unsigned angle of the chord p[n+offset] - p[n-offset] at each point.

    With ``rotate`` the chord is turned 90 degrees first, giving the angle
    of the direction orthogonal to the stroke. Points too close to the ends
    copy the nearest interior value; a stroke too short for any interior
    chord uses its endpoint chord everywhere, and a single point gets 0.
    """
    n = len(pts)
    out = np.zeros(n, dtype=np.float64)
    if n == 1:
        return out

    def angles(d: np.ndarray) -> np.ndarray:
        dx, dy = d[:, 0], d[:, 1]
        if rotate:
            dx, dy = -dy, dx
        # canonical upper-half-plane representative: a chord and its reverse
        # reduce to the same bits (negation is exact), so stroke direction
        # cannot perturb an angle even at the last ulp
        flip = (dy < 0) | ((dy == 0) & (dx < 0))
        a = np.degrees(np.arctan2(np.where(flip, -dy, dy), np.where(flip, -dx, dx)))
        return np.where(a == 180.0, 0.0, a)

    if n < 2 * offset + 1:
        out[:] = angles((pts[-1] - pts[0])[None, :])[0]
        return out
    interior = angles(pts[2 * offset:] - pts[:-2 * offset])
    out[offset:n - offset] = interior
    out[:offset] = interior[0]
    out[n - offset:] = interior[-1]
    return out


def orientation_at_points(c: InkCharacter,
                          n_o: int = ORIENTATION_OFFSET) -> list[np.ndarray]:
    """Per-stroke local stroke direction, as unsigned degrees in [0, 180)."""
    if n_o < 1:
        raise DomainError("orientation offset must be >= 1")
    return [_chord_angles(s.points, n_o, rotate=False) for s in c.strokes]


def orthogonal_orientation_at_points(c: InkCharacter,
                                     n_o: int = ORIENTATION_OFFSET) -> list[np.ndarray]:
    """Direction orthogonal to the stroke at each point, in [0, 180)."""
    if n_o < 1:
        raise DomainError("orientation offset must be >= 1")
    return [_chord_angles(s.points, n_o, rotate=True) for s in c.strokes]


def dynamics_at_points(c: InkCharacter,
                       n_d: int = DYNAMICS_OFFSET) -> list[np.ndarray]:
    """Turning angle between incoming and outgoing chords at each point.

    The angle is arccos of the unit chords' dot product, in [0, 180]. The
    chord length shrinks on strokes too short for the requested offset; a
    zero-length chord contributes a turning angle of 0.
    """
    if n_d < 1:
        raise DomainError("dynamics offset must be >= 1")
    out = []
    for s in c.strokes:
        pts = s.points
        n = len(pts)
        eff = min(n_d, (n - 1) // 2)
        theta = np.zeros(n, dtype=np.float64)
        if eff >= 1:
            v_in = pts[eff:n - eff] - pts[:n - 2 * eff]
            v_out = pts[2 * eff:] - pts[eff:n - eff]
            ni = np.linalg.norm(v_in, axis=1)
            no = np.linalg.norm(v_out, axis=1)
            ok = (ni > 0) & (no > 0)
            dot = v_in[:, 0] * v_out[:, 0] + v_in[:, 1] * v_out[:, 1]
            cosv = np.where(ok, dot / np.where(ok, ni * no, 1.0), 1.0)
            ang = np.degrees(np.arccos(np.clip(cosv, -1.0, 1.0)))
            theta[eff:n - eff] = ang
            theta[:eff] = ang[0]
            theta[n - eff:] = ang[-1]
        out.append(theta)
    return out


# Neighbor cell offsets per orthogonal-direction sector, each sector 45
# degrees wide centered on the four grid directions.
def thicken_offsets(theta_perp: float) -> tuple[tuple[int, int], tuple[int, int]]:
    """The two neighbor-cell offsets a point writes into when thickened."""
    if not (0.0 <= theta_perp <= 180.0):
        raise DomainError(f"angle {theta_perp} outside [0, 180]")
    if theta_perp < 22.5 or theta_perp >= 157.5:
        return ((-1, 0), (1, 0))
    if theta_perp < 67.5:
        return ((-1, -1), (1, 1))
    if theta_perp < 112.5:
        return ((0, -1), (0, 1))
    return ((-1, 1), (1, -1))


def build_spatial_maps(c: InkCharacter, cfg: SpatialGridConfig,
                       n_o: int = ORIENTATION_OFFSET,
                       n_d: int = DYNAMICS_OFFSET,
                       thickening: bool = True) -> SpatialMaps:
    """Map every point's occupancy, orientation, and turning angle to its
    grid cell, then thicken the stroke one cell to each orthogonal side.

    Cell collisions are resolved by the lexicographically largest
    (x, y, orientation, dynamics) tuple among the colliding points, never by
    write order, so the maps cannot depend on stroke order or direction.
    Thickening writes only into cells that hold no original point, with the
    same order-free resolution among competing sources; neighbors outside
    the grid are skipped.
    """
    orient = orientation_at_points(c, n_o)
    dyn = dynamics_at_points(c, n_d)
    perp = orthogonal_orientation_at_points(c, n_o)

    original: dict[tuple[int, int], tuple[float, float, float, float]] = {}
    points = []
    for si, stroke in enumerate(c.strokes):
        i1s = _spatial_indices(stroke.points[:, 0], cfg)
        i2s = _spatial_indices(stroke.points[:, 1], cfg)
        for pi in range(len(stroke)):
            key = (stroke.points[pi, 0], stroke.points[pi, 1],
                   orient[si][pi], dyn[si][pi])
            cell = (int(i1s[pi]), int(i2s[pi]))
            prev = original.get(cell)
            if prev is None or key > prev:
                original[cell] = key
            points.append((cell, key, perp[si][pi]))

    grown: dict[tuple[int, int], tuple[float, float, float, float]] = {}
    if thickening:
        for (i1, i2), key, theta_perp in points:
            for di1, di2 in thicken_offsets(theta_perp):
                cell = (i1 + di1, i2 + di2)
                if not (1 <= cell[0] <= cfg.n_i and 1 <= cell[1] <= cfg.n_i):
                    continue
                if cell in original:
                    continue
                prev = grown.get(cell)
                if prev is None or key > prev:
                    grown[cell] = key

    n = cfg.n_i
    occupancy = np.zeros((n, n), dtype=np.float64)
    orientation = np.zeros((n, n), dtype=np.float64)
    dynamics = np.zeros((n, n), dtype=np.float64)
    valid = np.zeros((n, n), dtype=bool)
    for source in (original, grown):
        for (i1, i2), key in source.items():
            occupancy[i1 - 1, i2 - 1] = 1.0
            orientation[i1 - 1, i2 - 1] = key[2]
            dynamics[i1 - 1, i2 - 1] = key[3]
            valid[i1 - 1, i2 - 1] = True
    return SpatialMaps(occupancy, orientation, dynamics, valid, valid.copy())


def cell_window(i: int, grid: CellGrid) -> tuple[int, int]:
    """1-based inclusive map-index range covered by window ``i``."""
    if not (1 <= i <= grid.n_cells):
        raise DomainError(f"window index {i} outside 1..{grid.n_cells}")
    lo = (i - 1) * grid.cell_size - (grid.overlap if i > 1 else 0) + 1
    hi = i * grid.cell_size + (grid.overlap if i < grid.n_cells else 0)
    return lo, hi


def _window_slices(grid: CellGrid) -> list[slice]:
    return [slice(lo - 1, hi) for lo, hi in
            (cell_window(i, grid) for i in range(1, grid.n_cells + 1))]


def occupancy_window_counts(occupancy: np.ndarray, grid: CellGrid) -> np.ndarray:
    """(n_cells, n_cells, 2) integer counts of (occupied, empty) per window;
    first axis follows x."""
    slices = _window_slices(grid)
    counts = np.zeros((grid.n_cells, grid.n_cells, 2), dtype=np.int64)
    for a, sa in enumerate(slices):
        for b, sb in enumerate(slices):
            w = occupancy[sa, sb]
            occ = int(np.count_nonzero(w == 1.0))
            counts[a, b, 0] = occ
            counts[a, b, 1] = w.size - occ
    return counts


def angle_window_counts(values: np.ndarray, valid: np.ndarray, grid: CellGrid,
                        quant: AngleQuantizer) -> np.ndarray:
    """(n_cells, n_cells, bins) integer histogram of masked angle values."""
    slices = _window_slices(grid)
    counts = np.zeros((grid.n_cells, grid.n_cells, quant.bins), dtype=np.int64)
    for a, sa in enumerate(slices):
        for b, sb in enumerate(slices):
            vals = values[sa, sb][valid[sa, sb]]
            if vals.size:
                counts[a, b] = np.bincount(quant.bins_of(vals), minlength=quant.bins)
    return counts


def _first_index_fastest(cells: np.ndarray) -> np.ndarray:
    """Flatten (i3, i4, bins) cell vectors listing i3 fastest, i4 slowest."""
    return cells.transpose(1, 0, 2).reshape(-1)


def point_histograms(maps: SpatialMaps, grid: CellGrid = POOLING_CELLS) -> np.ndarray:
    """Per-window (occupied, empty) counts divided by the base cell area."""
    counts = occupancy_window_counts(maps.occupancy, grid)
    return _first_index_fastest(counts / float(grid.cell_size ** 2))


def orientation_histograms(maps: SpatialMaps, grid: CellGrid = POOLING_CELLS,
                           quant: AngleQuantizer = DEG20,
                           eps: float = HISTOGRAM_EPS) -> np.ndarray:
    """Per-window angle histograms over valid cells, each L2-normalized."""
    counts = angle_window_counts(maps.orientation, maps.orientation_valid,
                                 grid, quant).astype(np.float64)
    norms = np.linalg.norm(counts, axis=2, keepdims=True)
    return _first_index_fastest(counts / (norms + eps))


def dynamics_histograms(maps: SpatialMaps, grid: CellGrid = POOLING_CELLS,
                        quant: AngleQuantizer = DEG20,
                        eps: float = HISTOGRAM_EPS) -> np.ndarray:
    counts = angle_window_counts(maps.dynamics, maps.dynamics_valid,
                                 grid, quant).astype(np.float64)
    norms = np.linalg.norm(counts, axis=2, keepdims=True)
    return _first_index_fastest(counts / (norms + eps))


def hpod_features(c: InkCharacter, cfg: SpatialGridConfig,
                  spans: tuple[float, float],
                  n_o: int = ORIENTATION_OFFSET, n_d: int = DYNAMICS_OFFSET,
                  cells: CellGrid = POOLING_CELLS,
                  quant: AngleQuantizer = DEG20,
                  eps: float = HISTOGRAM_EPS) -> FeatureVector:
    """Pooled point/orientation/dynamics histograms over the thickened maps,
    concatenated in that order, plus spans."""
    if cfg.n_i != cells.n_cells * cells.cell_size:
        raise DimensionError(
            f"grid of {cfg.n_i} cells does not split into "
            f"{cells.n_cells} windows of {cells.cell_size}")
    maps = build_spatial_maps(c, cfg, n_o=n_o, n_d=n_d)
    parts = [point_histograms(maps, cells),
             orientation_histograms(maps, cells, quant, eps),
             dynamics_histograms(maps, cells, quant, eps),
             np.asarray(spans, dtype=np.float64)]
    return FeatureVector(FeatureKind.HPOD, np.concatenate(parts))
