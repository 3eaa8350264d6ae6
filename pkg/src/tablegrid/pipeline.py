"""The three extraction stages wired together, free of file I/O."""
from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field
from typing import Literal

import numpy as np

from . import binarize, morphology
from .contours import CellBox, Contour, find_contours, to_cell_boxes
from .gridmap import RowMode, TableGrid, map_table
from .ocrwords import OcrWord, filter_confidence
from .raster import Histogram, histogram
from .tablegroup import NoTablesFound, TableGroup, group_tables, orphan_cells

__all__ = ["PipelineConfig", "PipelineResult", "binarize_image", "detect_tables", "extract_tables"]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class PipelineConfig:
    binarize_mode: Literal["adaptive", "otsu"] = "adaptive"
    block_size: int = 199
    offset_c: float = 40.0
    otsu_threshold: int | None = None
    kernel_divisor: int = 80
    open_iterations: int = 3
    line_threshold: float = 10.0
    row_mode: RowMode = "chain"
    conf_threshold: float = 30.0
    min_cell_area: int = 64
    containment_slack: int = 2

    def __post_init__(self):
        if self.binarize_mode not in ("adaptive", "otsu"):
            raise ValueError(f"unknown binarize mode {self.binarize_mode!r}")
        if self.block_size < 3 or self.block_size % 2 == 0:
            raise ValueError("block_size must be odd and >= 3")
        for name in ("kernel_divisor", "open_iterations", "line_threshold", "min_cell_area"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if not 0 <= self.conf_threshold <= 100:
            raise ValueError("conf_threshold must lie in [0, 100]")
        if self.containment_slack < 0:
            raise ValueError("containment_slack must be >= 0")
        if self.otsu_threshold is not None and not 1 <= self.otsu_threshold <= 255:
            raise ValueError("otsu_threshold must lie in [1, 255]")

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(eq=False)
class PipelineResult:
    gray: np.ndarray
    histogram: Histogram
    binary: np.ndarray
    skeleton: morphology.Skeleton
    contours: list[Contour]
    outer_boxes: list[CellBox]
    cell_boxes: list[CellBox]
    groups: list[TableGroup]
    grids: list[TableGrid] = field(default_factory=list)
    threshold: int | None = None
    orphans: list[CellBox] = field(default_factory=list)

    @property
    def found(self) -> bool:
        return bool(self.groups)


def binarize_image(gray: np.ndarray, cfg: PipelineConfig, hist: Histogram | None = None) -> tuple[np.ndarray, int | None]:
    """Ink-as-foreground binary image, plus the global threshold when one was used."""
    if cfg.binarize_mode == "adaptive":
        params = binarize.AdaptiveParams(cfg.block_size, cfg.offset_c)
        return binarize.adaptive_gaussian(gray, params, binarize.Polarity.DARK_FOREGROUND), None
    t = cfg.otsu_threshold
    if t is None:
        try:
            t = binarize.otsu_threshold(hist if hist is not None else histogram(gray)).threshold
        except binarize.NoContrast:
            log.info("uniform image; treating it as blank")
            return np.zeros(gray.shape, dtype=bool), None
    return binarize.apply_threshold(gray, t, binarize.Polarity.DARK_FOREGROUND), t


def detect_tables(gray: np.ndarray, cfg: PipelineConfig = PipelineConfig()) -> PipelineResult:
    """Stage 1: binarize, extract the line skeleton, trace and group cells.

    An image without tables gives a result with no groups rather than raising.
    """
    hist = histogram(gray)
    binary, t = binarize_image(gray, cfg, hist)
    skel = morphology.extract_skeleton(binary, morphology.SkeletonConfig(cfg.kernel_divisor, cfg.open_iterations))
    contours = find_contours(skel.combined)
    boxes = to_cell_boxes(contours, cfg.min_cell_area)
    outer = [b for b in boxes if b.kind == "outer"]
    cells = [b for b in boxes if b.kind == "hole"]
    try:
        groups = group_tables(outer, cells, cfg.containment_slack)
    except NoTablesFound:
        groups = []
    return PipelineResult(
        gray=gray, histogram=hist, binary=binary, skeleton=skel, contours=contours,
        outer_boxes=outer, cell_boxes=cells, groups=groups, threshold=t,
        orphans=orphan_cells(groups, cells),
    )


def extract_tables(
    gray: np.ndarray, words: list[OcrWord] | None, cfg: PipelineConfig = PipelineConfig()
) -> PipelineResult:
    """All three stages; ``words`` may be None to produce grids without text."""
    result = detect_tables(gray, cfg)
    kept = filter_confidence(words, cfg.conf_threshold) if words else []
    result.grids = [map_table(g, kept, cfg.line_threshold, cfg.row_mode) for g in result.groups]
    return result
