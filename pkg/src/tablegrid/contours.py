"""Border following with topological hierarchy, and contour bounding boxes.

Foreground is 8-connected and background 4-connected. Every foreground
component yields one outer border; every background region enclosed by a
component yields one hole border whose parent is that component's outer
border. Borders come out in raster-scan discovery order.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np

__all__ = ["CellBox", "Contour", "find_contours", "to_cell_boxes"]

Kind = Literal["outer", "hole"]

# Neighbour offsets (drow, dcol); increasing index is counter-clockwise on screen.
_DI = (0, -1, -1, -1, 0, 1, 1, 1)
_DJ = (1, 1, 0, -1, -1, -1, 0, 1)
_DIR = {(di, dj): k for k, (di, dj) in enumerate(zip(_DI, _DJ))}


@dataclass(frozen=True)
class Contour:
    points: tuple[tuple[int, int], ...]  # (x, y)
    kind: Kind
    parent: int | None = None


@dataclass(frozen=True)
class CellBox:
    x_min: int
    y_min: int
    x_max: int
    y_max: int
    kind: Kind | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.x_min > self.x_max or self.y_min > self.y_max:
            raise ValueError(f"degenerate box {self}")

    @property
    def x_mean(self) -> float:
        return (self.x_min + self.x_max) / 2

    @property
    def y_mean(self) -> float:
        return (self.y_min + self.y_max) / 2

    @property
    def width(self) -> int:
        return self.x_max - self.x_min + 1

    @property
    def height(self) -> int:
        return self.y_max - self.y_min + 1

    @property
    def area(self) -> int:
        return self.width * self.height

    def as_list(self) -> list[int]:
        return [self.x_min, self.y_min, self.x_max, self.y_max]

    @classmethod
    def from_points(cls, points, kind: Kind | None = None) -> "CellBox":
        xs = [p[0] for p in points]
        ys = [p[1] for p in points]
        return cls(min(xs), min(ys), max(xs), max(ys), kind)


def find_contours(skeleton: np.ndarray) -> list[Contour]:
    img = np.asarray(skeleton, dtype=bool)
    if not img.any():
        return []
    padded = np.zeros((img.shape[0] + 2, img.shape[1] + 2), dtype=np.int32)
    padded[1:-1, 1:-1] = img
    row_cols = [np.flatnonzero(row).tolist() for row in padded]
    f = padded.tolist()

    # border number -> (kind, parent border number); 1 is the frame
    borders: dict[int, tuple[str, int | None]] = {1: ("hole", None)}
    traced: list[tuple[list[tuple[int, int]], str, int | None]] = []
    nbd = 1

    for i, cols in enumerate(row_cols):
        lnbd = 1
        for j in cols:
            v = f[i][j]
            if v == 1 and f[i][j - 1] == 0:
                kind = "outer"
                nbd += 1
                i2, j2 = i, j - 1
            elif v >= 1 and f[i][j + 1] == 0:
                kind = "hole"
                nbd += 1
                i2, j2 = i, j + 1
                if v > 1:
                    lnbd = v
            else:
                if v != 1:
                    lnbd = abs(v)
                continue

            prev_kind, prev_parent = borders[lnbd]
            parent = prev_parent if prev_kind == kind else lnbd
            borders[nbd] = (kind, parent)
            points = _follow(f, i, j, i2, j2, nbd)
            traced.append((points, kind, parent))

            if f[i][j] != 1:
                lnbd = abs(f[i][j])

    return [
        Contour(
            points=tuple((c - 1, r - 1) for r, c in pts),
            kind=kind,
            parent=None if parent in (None, 1) else parent - 2,
        )
        for pts, kind, parent in traced
    ]


def _follow(f: list[list[int]], i: int, j: int, i2: int, j2: int, nbd: int) -> list[tuple[int, int]]:
    """Trace one border starting at (i, j); marks ``f`` in place, returns (row, col) points."""
    start = _DIR[(i2 - i, j2 - j)]
    for step in range(8):
        k = (start - step) % 8
        if f[i + _DI[k]][j + _DJ[k]] != 0:
            i1, j1 = i + _DI[k], j + _DJ[k]
            break
    else:
        f[i][j] = -nbd
        return [(i, j)]

    points = []
    i2, j2 = i1, j1
    i3, j3 = i, j
    while True:
        points.append((i3, j3))
        d = _DIR[(i2 - i3, j2 - j3)]
        east_zero = False
        for step in range(1, 9):
            k = (d + step) % 8
            ni, nj = i3 + _DI[k], j3 + _DJ[k]
            if f[ni][nj] != 0:
                i4, j4 = ni, nj
                break
            if k == 0:
                east_zero = True
        if east_zero:
            f[i3][j3] = -nbd
        elif f[i3][j3] == 1:
            f[i3][j3] = nbd
        if (i4, j4) == (i, j) and (i3, j3) == (i1, j1):
            return points
        i2, j2, i3, j3 = i3, j3, i4, j4


def to_cell_boxes(contours: list[Contour], min_area: int = 64) -> list[CellBox]:
    """Bounding box of every contour whose box area is at least ``min_area``."""
    boxes = []
    for c in contours:
        box = CellBox.from_points(c.points, c.kind)
        if box.area >= min_area:
            boxes.append(box)
    return boxes
