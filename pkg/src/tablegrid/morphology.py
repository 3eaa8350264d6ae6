"""Binary erosion, dilation and opening, and table-skeleton extraction.

Pixels outside the image are background for both erosion and dilation.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

__all__ = [
    "Skeleton",
    "SkeletonConfig",
    "StructuringElement",
    "dilate",
    "erode",
    "extract_skeleton",
    "kernel_length",
    "make_kernel",
    "open",
    "reflect",
]


@dataclass(frozen=True, eq=False)
class StructuringElement:
    """Boolean probe with an anchor ``(x, y)``; defaults to the integer centre."""

    bits: np.ndarray
    anchor: tuple[int, int] | None = None

    def __post_init__(self):
        bits = np.asarray(self.bits, dtype=bool)
        if bits.ndim != 2 or not bits.any():
            raise ValueError("structuring element needs a 2-D grid with at least one set bit")
        h, w = bits.shape
        anchor = self.anchor if self.anchor is not None else (w // 2, h // 2)
        if not (0 <= anchor[0] < w and 0 <= anchor[1] < h):
            raise ValueError(f"anchor {anchor} outside {w}x{h} element")
        object.__setattr__(self, "bits", bits)
        object.__setattr__(self, "anchor", tuple(anchor))

    @property
    def width(self) -> int:
        return self.bits.shape[1]

    @property
    def height(self) -> int:
        return self.bits.shape[0]

    def offsets(self) -> list[tuple[int, int]]:
        """``(dx, dy)`` of every set bit relative to the anchor."""
        ax, ay = self.anchor
        ys, xs = np.nonzero(self.bits)
        return [(int(x) - ax, int(y) - ay) for y, x in zip(ys, xs)]


@dataclass(frozen=True)
class SkeletonConfig:
    divisor: int = 80
    open_iterations: int = 3

    def __post_init__(self):
        if self.divisor < 1 or self.open_iterations < 1:
            raise ValueError("divisor and open_iterations must be >= 1")


@dataclass(frozen=True, eq=False)
class Skeleton:
    vertical: np.ndarray
    horizontal: np.ndarray
    combined: np.ndarray
    kernel_length: int

    @property
    def empty(self) -> bool:
        return not self.combined.any()


def kernel_length(image_height: int, divisor: int = 80) -> int:
    if image_height < 1:
        raise ValueError("image_height must be >= 1")
    return max(1, image_height // divisor)


def make_kernel(
    kind: Literal["vertical", "horizontal", "square3"], image_height: int, divisor: int = 80
) -> StructuringElement:
    if kind == "square3":
        return StructuringElement(np.ones((3, 3), dtype=bool))
    length = kernel_length(image_height, divisor)
    if kind == "vertical":
        return StructuringElement(np.ones((length, 1), dtype=bool))
    if kind == "horizontal":
        return StructuringElement(np.ones((1, length), dtype=bool))
    raise ValueError(f"unknown kernel kind {kind!r}")


def reflect(se: StructuringElement) -> StructuringElement:
    """Point reflection of the element about its anchor."""
    ax, ay = se.anchor
    return StructuringElement(se.bits[::-1, ::-1], (se.width - 1 - ax, se.height - 1 - ay))


def _shifted(x: np.ndarray, dx: int, dy: int) -> np.ndarray:
    """View of ``x`` sampled at ``(px + dx, py + dy)``; out of range reads as False."""
    h, w = x.shape
    out = np.zeros_like(x)
    if abs(dx) >= w or abs(dy) >= h:
        return out
    out[max(0, -dy) : h - max(0, dy), max(0, -dx) : w - max(0, dx)] = x[
        max(0, dy) : h - max(0, -dy), max(0, dx) : w - max(0, -dx)
    ]
    return out


def erode(x: np.ndarray, se: StructuringElement) -> np.ndarray:
    """Pixel z survives iff every set bit of ``se`` placed at z covers foreground."""
    x = np.asarray(x, dtype=bool)
    out = np.ones_like(x)
    for dx, dy in se.offsets():
        out &= _shifted(x, dx, dy)
    return out


def dilate(x: np.ndarray, se: StructuringElement) -> np.ndarray:
    """Union of ``x`` translated by every set-bit offset of ``se``."""
    x = np.asarray(x, dtype=bool)
    out = np.zeros_like(x)
    for dx, dy in se.offsets():
        out |= _shifted(x, -dx, -dy)
    return out


def open(x: np.ndarray, se: StructuringElement, iterations: int = 1) -> np.ndarray:  # noqa: A001
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    out = np.asarray(x, dtype=bool)
    for _ in range(iterations):
        out = erode(out, se)
    for _ in range(iterations):
        out = dilate(out, se)
    return out


def extract_skeleton(binary: np.ndarray, cfg: SkeletonConfig = SkeletonConfig()) -> Skeleton:
    """Keep only long vertical and horizontal runs of an ink-foreground image."""
    binary = np.asarray(binary, dtype=bool)
    height = binary.shape[0]
    vertical = open(binary, make_kernel("vertical", height, cfg.divisor), cfg.open_iterations)
    horizontal = open(binary, make_kernel("horizontal", height, cfg.divisor), cfg.open_iterations)
    return Skeleton(
        vertical=vertical,
        horizontal=horizontal,
        combined=vertical | horizontal,
        kernel_length=kernel_length(height, cfg.divisor),
    )
