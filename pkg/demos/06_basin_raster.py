"""Attraction basins of the product-logistic family at a = 13.

Each cell of a grid over the unit square is classified by the attractor
its trajectory reaches: the origin (the border region), the
semi-instable fixed point r1 (a one-dimensional set, invisible at cell
resolution), the semi-stable fixed point r2, the period-3 orbit, or
undecided (cells straddling the catastrophic boundary, where
convergence becomes arbitrarily slow).

Walking toward (r1, r1) along the diagonal, the attractor flips between
r2 and the period-3 orbit over and over: the catastrophic boundary is
crossed infinitely many times.
"""

import collections
import os

from geniter import (BASIN_CONFIG, GridSpec, basin_map, diagonal_fixed_points,
                     diagonal_ray_labels, make_family)
from geniter.raster import (LABEL_PERIODIC, LABEL_R2, LABEL_UNDECIDED,
                            LABEL_ZERO)

OUT = os.path.join(os.path.dirname(__file__), "out")
os.makedirs(OUT, exist_ok=True)

spec = make_family("logistic2", a=13.0)
grid = GridSpec(256, 256)  # bump to 512x512 for the poster version
bas = basin_map(spec, "F", grid=grid)

names = {LABEL_ZERO: "origin", 1: "r1", LABEL_R2: "r2",
         LABEL_PERIODIC: "period-3 orbit", 4: "unbounded",
         LABEL_UNDECIDED: "undecided"}
hist = collections.Counter(bas.labels.ravel().tolist())
total = grid.width * grid.height
print(f"Basin composition at a = 13 ({grid.width}x{grid.height} cells):")
for lab, count in sorted(hist.items()):
    print(f"  {names.get(lab, lab):<16} {count:>7} cells ({100 * count / total:.1f}%)")

pgm = os.path.join(OUT, "basin_a13.pgm")
bas.to_pgm(pgm)
print(f"\nwrote {pgm} (gray levels: origin 0, undecided 32, r1 64, r2 128,")
print("period-p 160+4*min(p,15), unbounded 255)")

fps = [fp.value for fp in diagonal_fixed_points(spec)]
print(f"\nDiagonal fixed points: {[round(v, 6) for v in fps]}")
print("Walking the diagonal toward r1, label per step (2 = r2, 3 = orbit):")
offsets = [0.2 * 0.7 ** k for k in range(40)]
labels = diagonal_ray_labels(spec, "F", fps[1], offsets, fps, BASIN_CONFIG)
print(" ", "".join(str(l) for l in labels))
flips = sum(1 for x, y in zip(labels, labels[1:])
            if {x, y} == {LABEL_R2, LABEL_PERIODIC})
print(f"  -> the attractor changed {flips} times on the way in")
