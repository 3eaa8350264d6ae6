"""Partition cell boxes into tables by repeated largest-outline containment."""
from __future__ import annotations

import logging
from dataclasses import dataclass

from .contours import CellBox

__all__ = ["NoTablesFound", "TableGroup", "containment", "group_tables", "orphan_cells"]

log = logging.getLogger(__name__)


class NoTablesFound(LookupError):
    def __init__(self, msg: str = "no table"):
        super().__init__(msg)


@dataclass(frozen=True)
class TableGroup:
    id: int
    outline: CellBox
    cells: tuple[CellBox, ...]


def containment(inner: CellBox, outer: CellBox, slack: int = 0) -> bool:
    """True iff ``inner`` lies within ``outer`` grown by ``slack`` on every side."""
    if slack < 0:
        raise ValueError("slack must be >= 0")
    return (
        inner.x_min >= outer.x_min - slack
        and inner.y_min >= outer.y_min - slack
        and inner.x_max <= outer.x_max + slack
        and inner.y_max <= outer.y_max + slack
    )


def _box_key(b: CellBox):
    return (b.y_min, b.x_min, b.y_max, b.x_max)


def group_tables(outer_boxes: list[CellBox], cell_boxes: list[CellBox], slack: int = 2) -> list[TableGroup]:
    """Group cells under table outlines.

    The tallest remaining outline (ties: larger area, then topmost, then
    leftmost) claims every cell and every other outline it contains; repeat
    until no outline is left. Outlines that claim no cell are not tables.
    Groups are numbered from 1 in (y_min, x_min) order of their outlines.
    """
    outers = sorted(outer_boxes, key=lambda b: (-b.height, -b.area, b.y_min, b.x_min, b.y_max, b.x_max))
    cells = sorted(cell_boxes, key=_box_key)
    found: list[tuple[CellBox, list[CellBox]]] = []

    while outers:
        outline = outers.pop(0)
        claimed = [c for c in cells if containment(c, outline, slack)]
        if not claimed:
            log.debug("outline %s encloses no cells; skipped", outline.as_list())
            continue
        claimed_ids = {id(c) for c in claimed}
        cells = [c for c in cells if id(c) not in claimed_ids]
        nested = [o for o in outers if containment(o, outline, slack)]
        if nested:
            log.warning(
                "%d outline(s) nested inside table at %s absorbed into it", len(nested), outline.as_list()
            )
            outers = [o for o in outers if not containment(o, outline, slack)]
        found.append((outline, claimed))

    if cells:
        log.warning("%d cell box(es) lie outside every table outline", len(cells))
    if not found:
        raise NoTablesFound()

    found.sort(key=lambda item: _box_key(item[0]))
    return [
        TableGroup(id=k, outline=outline, cells=tuple(sorted(claimed, key=_box_key)))
        for k, (outline, claimed) in enumerate(found, start=1)
    ]


def orphan_cells(groups: list[TableGroup], cell_boxes: list[CellBox]) -> list[CellBox]:
    """Cell boxes not claimed by any group."""
    used = {id(c) for g in groups for c in g.cells}
    return [c for c in cell_boxes if id(c) not in used]
