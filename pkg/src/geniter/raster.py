"""Grid rasterization: attraction basins of real families and
escape-time grids of complex maps (generalized Julia / Mandelbrot
F- and V-sets).

Cells are sampled at their centers, rows run top-down (row 0 holds the
highest y / imaginary part), and workers write disjoint index-addressed
slots, so the output is byte-identical for any thread count.
"""

from __future__ import annotations

from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .analysis import ClassifyConfig, classify_attractor, diagonal_fixed_points
from .engine import MapSpec
from .families import make_family
from .scan import default_threads

__all__ = [
    "GridSpec", "BasinRaster", "EscapeRaster",
    "basin_map", "escape_raster", "label_report", "diagonal_ray_labels",
    "LABEL_ZERO", "LABEL_R1", "LABEL_R2", "LABEL_PERIODIC",
    "LABEL_UNBOUNDED", "LABEL_UNDECIDED", "BASIN_CONFIG",
]

LABEL_ZERO = 0
LABEL_R1 = 1
LABEL_R2 = 2
LABEL_PERIODIC = 3
LABEL_UNBOUNDED = 4
LABEL_UNDECIDED = 5

_LABEL_NAMES = {
    LABEL_ZERO: "zero-fixed",
    LABEL_R1: "r1-fixed",
    LABEL_R2: "r2-fixed",
    LABEL_PERIODIC: "periodic",
    LABEL_UNBOUNDED: "unbounded",
    LABEL_UNDECIDED: "undecided",
}

# classification budget per raster cell; boundary cells legitimately
# come out undecided at this resolution
BASIN_CONFIG = ClassifyConfig(transient=1000, max_period=48, budget=30_000,
                              escalation=1.0)

FP_MATCH_TOL = 1e-6


@dataclass(frozen=True)
class GridSpec:
    """A W x H cell grid over an axis-aligned rectangle.

    ``axes`` names the two map coordinates swept by the cell x and y;
    ``fixed`` holds values for the remaining coordinates in ascending
    coordinate order (used by 3-D slices).  Cell centers are sampled;
    row 0 is the top of the rectangle (largest y).
    """

    width: int
    height: int
    x_min: float = 0.0
    x_max: float = 1.0
    y_min: float = 0.0
    y_max: float = 1.0
    axes: tuple[int, int] = (0, 1)
    fixed: tuple[float, ...] = ()

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("grid must be at least 1x1")
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise ValueError("grid rectangle must have positive area")
        if self.axes[0] == self.axes[1]:
            raise ValueError("axes must name two distinct coordinates")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.width

    @property
    def dy(self) -> float:
        return (self.y_max - self.y_min) / self.height

    def cell_center(self, col: int, row: int) -> tuple[float, float]:
        return (self.x_min + (col + 0.5) * self.dx,
                self.y_max - (row + 0.5) * self.dy)

    def cell_seeds(self, col: int, row: int, n: int) -> np.ndarray:
        """The n seed scalars sampled at this cell (real basin slices)."""
        cx, cy = self.cell_center(col, row)
        seeds = np.empty(n)
        rest = iter(self.fixed)
        for i in range(n):
            if i == self.axes[0]:
                seeds[i] = cx
            elif i == self.axes[1]:
                seeds[i] = cy
            else:
                seeds[i] = next(rest)
        return seeds


def _row_bands(height: int, threads: int) -> list[tuple[int, int]]:
    threads = max(1, min(threads, height))
    bounds = np.linspace(0, height, threads + 1).astype(int)
    return [(int(bounds[i]), int(bounds[i + 1])) for i in range(threads)
            if bounds[i] < bounds[i + 1]]


def _write_pgm(path, gray: np.ndarray) -> None:
    h, w = gray.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        fh.write(gray.astype(np.uint8).tobytes())


# ---------------------------------------------------------------------------
# Basin rasters


def label_report(kind: str, period: int | None, value: float | None,
                 fixed_points: Sequence[float],
                 tol: float = FP_MATCH_TOL) -> tuple[int, int]:
    """Map one classification to a (label, period) raster cell.

    Fixed points match the nearest diagonal fixed point within ``tol``
    (their ascending order reads zero, r1, r2); an unmatched fixed value
    falls back to periodic with period 1.
    """
    if kind == "Unbounded":
        return LABEL_UNBOUNDED, 0
    if kind == "Undecided":
        return LABEL_UNDECIDED, 0
    if kind == "FixedPoint":
        for idx, fp in enumerate(fixed_points[:3]):
            if value is not None and abs(value - fp) < tol:
                return (LABEL_ZERO, LABEL_R1, LABEL_R2)[idx], 1
        return LABEL_PERIODIC, 1
    return LABEL_PERIODIC, int(period or 0)


_GRAY = {LABEL_ZERO: 0, LABEL_R1: 64, LABEL_R2: 128,
         LABEL_UNBOUNDED: 255, LABEL_UNDECIDED: 32}


def _gray_for(labels: np.ndarray, periods: np.ndarray) -> np.ndarray:
    gray = np.empty(labels.shape, dtype=np.uint8)
    for lab, g in _GRAY.items():
        gray[labels == lab] = g
    per = labels == LABEL_PERIODIC
    gray[per] = (160 + np.minimum(periods[per], 15) * 4).astype(np.uint8)
    return gray


@dataclass(frozen=True)
class BasinRaster:
    grid: GridSpec
    labels: np.ndarray      # int8  H x W
    periods: np.ndarray     # int32 H x W
    values: np.ndarray      # float64 H x W, fixed-point value where applicable
    iterations: np.ndarray  # int64 H x W
    fixed_points: tuple[float, ...]
    config: ClassifyConfig

    def to_pgm(self, path) -> None:
        _write_pgm(path, _gray_for(self.labels, self.periods))

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            fh.write("x,y,label,period\n")
            for row in range(self.grid.height):
                for col in range(self.grid.width):
                    x, y = self.grid.cell_center(col, row)
                    fh.write(f"{x!r},{y!r},{_LABEL_NAMES[int(self.labels[row, col])]},"
                             f"{int(self.periods[row, col])}\n")


def basin_map(family, scheme: str, a: float | None = None,
              grid: GridSpec = GridSpec(512, 512),
              config: ClassifyConfig = BASIN_CONFIG,
              threads: int | None = None,
              params: dict | None = None) -> BasinRaster:
    """Classify every cell of the grid and label it by attractor.

    Fixed-point cells are named after the nearest diagonal fixed point
    (zero, r1, r2); everything else keeps its period or the unbounded /
    undecided verdict.
    """
    if isinstance(family, MapSpec):
        spec = family
    else:
        kwargs = dict(params or {})
        if a is not None:
            kwargs["a"] = a
        spec = make_family(family, **kwargs)
    if spec.m != 1 or spec.complex_scalars:
        raise ValueError("basin maps need a real family with m = 1")
    n = spec.n
    if len(grid.fixed) != n - 2:
        raise ValueError(f"grid.fixed must bind {n - 2} coordinates for n={n}")
    fps = [fp.value for fp in diagonal_fixed_points(spec)]

    H, W = grid.height, grid.width
    kinds = np.empty((H, W), dtype=np.int8)
    periods = np.empty((H, W), dtype=np.int32)
    values = np.empty((H, W), dtype=np.float64)
    iters = np.empty((H, W), dtype=np.int64)

    base_seed = np.zeros(n)
    rest = iter(grid.fixed)
    for i in range(n):
        if i not in grid.axes:
            base_seed[i] = next(rest)
    is_v = str(scheme).upper() == "V"
    if str(scheme).upper() not in ("F", "V"):
        raise ValueError(f"scheme must be 'F' or 'V', got {scheme!r}")

    def work(band):
        r0, r1 = band
        _kernels.basin_rows_f64(
            spec._codes, spec._fargs, spec._iargs, spec._starts,
            n, spec.m, is_v, spec.param_array(),
            W, grid.x_min, grid.dx, grid.y_max, grid.dy,
            grid.axes[0], grid.axes[1], base_seed,
            config.transient, config.window, config.tol, config.max_period,
            config.budget, config.escalation, config.near_miss_factor,
            config.magnitude_cap, spec._stack_need, r0, r1,
            kinds, periods, values, iters)

    bands = _row_bands(H, threads or default_threads())
    if len(bands) > 1:
        with ThreadPoolExecutor(max_workers=len(bands)) as pool:
            list(pool.map(work, bands))
    else:
        work(bands[0])

    labels = np.empty((H, W), dtype=np.int8)
    out_periods = np.zeros((H, W), dtype=np.int32)
    kind_names = {0: "FixedPoint", 1: "Periodic", 2: "Unbounded", 3: "Undecided"}
    for row in range(H):
        for col in range(W):
            lab, per = label_report(kind_names[int(kinds[row, col])],
                                    int(periods[row, col]),
                                    float(values[row, col]), fps)
            labels[row, col] = lab
            out_periods[row, col] = per
    return BasinRaster(grid=grid, labels=labels, periods=out_periods,
                       values=values, iterations=iters,
                       fixed_points=tuple(fps), config=config)


def diagonal_ray_labels(spec: MapSpec, scheme: str, center: float,
                        offsets: Sequence[float],
                        fixed_points: Sequence[float],
                        config: ClassifyConfig = BASIN_CONFIG) -> list[int]:
    """Labels of diagonal seeds (center+t, ..., center+t) for each offset."""
    labels = []
    for t in offsets:
        seeds = np.full(spec.n, center + t)
        rep = classify_attractor(spec, scheme, seeds, config)
        value = rep.values[0] if rep.kind == "FixedPoint" else None
        lab, _ = label_report(rep.kind, rep.period, value, fixed_points)
        labels.append(lab)
    return labels


# ---------------------------------------------------------------------------
# Escape-time rasters


@dataclass(frozen=True)
class EscapeRaster:
    grid: GridSpec
    counts: np.ndarray      # int32 H x W; max_iter means never escaped
    escape_radius: float
    max_iter: int

    def bounded_mask(self) -> np.ndarray:
        return self.counts >= self.max_iter

    def to_pgm(self, path) -> None:
        gray = (self.counts.astype(np.int64) * 255 // self.max_iter).astype(np.uint8)
        _write_pgm(path, gray)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            for row in range(self.grid.height):
                fh.write(",".join(str(int(c)) for c in self.counts[row]) + "\n")


def escape_raster(spec: MapSpec, scheme: str, mode: str,
                  grid: GridSpec = GridSpec(512, 512, -2.0, 2.0, -2.0, 2.0),
                  seed_binding: Sequence | None = None,
                  escape_radius: float = 1e6, max_iter: int = 1000,
                  vary_param: str = "c",
                  threads: int | None = None) -> EscapeRaster:
    """Escape-time raster of a complex map.

    julia mode: the grid point is the seed; binding entries are "cell"
    (take the grid point; the default binds every coordinate, the z = w
    diagonal) or complex constants.  mandelbrot mode: the grid point is
    the ``vary_param`` parameter value and the binding must give the
    fixed numeric seeds.  A cell's count is the number of emitted
    scalars that stayed inside the escape radius, capped at max_iter.
    """
    if spec.m != 1 or not spec.complex_scalars:
        raise ValueError("escape rasters need a complex map with m = 1")
    mode = mode.lower()
    if mode not in ("julia", "mandelbrot"):
        raise ValueError("mode must be 'julia' or 'mandelbrot'")
    n = spec.n
    if seed_binding is None:
        if mode == "julia":
            seed_binding = ["cell"] * n
        else:
            raise ValueError("mandelbrot mode needs a numeric seed binding")
    if len(seed_binding) != n:
        raise ValueError(f"seed binding must have length {n}")
    template = np.zeros(n, dtype=np.complex128)
    mask = np.zeros(n, dtype=np.bool_)
    for i, entry in enumerate(seed_binding):
        if isinstance(entry, str):
            if entry.lower() != "cell":
                raise ValueError(f"bad seed binding entry {entry!r}")
            if mode == "mandelbrot":
                raise ValueError("mandelbrot mode requires fixed numeric seeds")
            mask[i] = True
        else:
            template[i] = complex(entry)
    c_index = -1
    if mode == "mandelbrot":
        if vary_param not in spec.param_names:
            raise ValueError(f"map has no parameter {vary_param!r} to vary")
        c_index = spec.param_names.index(vary_param)
    is_v = str(scheme).upper() == "V"
    if str(scheme).upper() not in ("F", "V"):
        raise ValueError(f"scheme must be 'F' or 'V', got {scheme!r}")

    H, W = grid.height, grid.width
    counts = np.empty((H, W), dtype=np.int32)

    def work(band):
        r0, r1 = band
        _kernels.escape_rows_c128(
            spec._codes, spec._fargs, spec._iargs, spec._starts,
            n, spec.m, is_v, spec.param_array(), template, mask, c_index,
            W, grid.x_min, grid.dx, grid.y_max, grid.dy,
            float(escape_radius), int(max_iter), spec._stack_need,
            r0, r1, counts)

    bands = _row_bands(H, threads or default_threads())
    if len(bands) > 1:
        with ThreadPoolExecutor(max_workers=len(bands)) as pool:
            list(pool.map(work, bands))
    else:
        work(bands[0])
    return EscapeRaster(grid=grid, counts=counts,
                        escape_radius=float(escape_radius),
                        max_iter=int(max_iter))
