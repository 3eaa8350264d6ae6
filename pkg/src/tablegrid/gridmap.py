"""Row clustering of cell boxes and word-to-cell assignment."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

from .contours import CellBox
from .ocrwords import OcrWord
from .tablegroup import TableGroup

__all__ = ["TableGrid", "assign_words", "cluster_rows", "grid_dimensions", "map_table"]

RowMode = Literal["chain", "anchor"]


@dataclass(frozen=True)
class TableGrid:
    table_id: int
    cells: tuple[tuple[str, ...], ...]
    cell_boxes: tuple[tuple[CellBox | None, ...], ...]
    outline: CellBox | None = None

    @property
    def n_rows(self) -> int:
        return len(self.cells)

    @property
    def n_cols(self) -> int:
        return len(self.cells[0]) if self.cells else 0

    @property
    def shape(self) -> tuple[int, int]:
        return self.n_rows, self.n_cols

    def rows(self) -> list[list[str]]:
        return [list(r) for r in self.cells]


def cluster_rows(cells: list[CellBox], line_threshold: float = 10, mode: RowMode = "chain") -> list[list[CellBox]]:
    """Split cells into rows by a sweep over their sorted centre heights.

    In ``chain`` mode a row ends when the gap to the previous cell's
    ``y_mean`` reaches ``line_threshold``; in ``anchor`` mode the gap is
    measured from the first cell of the current row. Rows come out top to
    bottom, each ordered left to right.
    """
    if not cells:
        raise ValueError("cluster_rows needs at least one cell")
    if line_threshold <= 0:
        raise ValueError("line_threshold must be positive")
    ordered = sorted(cells, key=lambda c: (c.y_mean, c.x_mean, c.y_min, c.x_min, c.y_max, c.x_max))
    rows = [[ordered[0]]]
    ref = ordered[0].y_mean
    for prev, cur in zip(ordered, ordered[1:]):
        base = prev.y_mean if mode == "chain" else ref
        if cur.y_mean - base >= line_threshold:
            rows.append([cur])
            ref = cur.y_mean
        else:
            rows[-1].append(cur)
    return [sorted(r, key=lambda c: (c.x_mean, c.y_mean, c.x_min, c.y_min)) for r in rows]


def grid_dimensions(rows: list[list[CellBox]]) -> tuple[int, int]:
    if not rows:
        raise ValueError("grid_dimensions needs at least one row")
    return len(rows), max(len(r) for r in rows)


def _word_key(w: OcrWord):
    return (w.y_mean, w.x_mean, w.left, w.top, w.width, w.height, w.text, w.conf)


def _pick_cell(word: OcrWord, boxes: list[CellBox]) -> int | None:
    x, y = word.x_mean, word.y_mean
    strict, edge = [], []
    for k, b in enumerate(boxes):
        if b.x_min < x < b.x_max and b.y_min < y < b.y_max:
            strict.append(k)
        elif b.x_min <= x <= b.x_max and b.y_min <= y <= b.y_max:
            edge.append(k)
    candidates = strict or edge
    if not candidates:
        return None
    # a centre on a shared edge belongs to the downstream cell
    return max(candidates, key=lambda k: (boxes[k].y_min, boxes[k].x_min))


def _join_cell_text(words: list[OcrWord]) -> str:
    lines: list[list[OcrWord]] = []
    for w in sorted(words, key=_word_key):
        if lines and w.y_mean - lines[-1][0].y_mean < lines[-1][0].height / 2:
            lines[-1].append(w)
        else:
            lines.append([w])
    return " ".join(w.text for line in lines for w in sorted(line, key=lambda w: (w.x_mean,) + _word_key(w)))


def assign_words(
    rows: list[list[CellBox]], words: list[OcrWord], table_id: int = 1, outline: CellBox | None = None
) -> TableGrid:
    """Place each word in the cell containing its centre and build the text grid.

    Words outside every cell are ignored. Short rows are padded on the right
    with empty cells.
    """
    n_rows, n_cols = grid_dimensions(rows)
    flat = [c for r in rows for c in r]
    buckets: list[list[OcrWord]] = [[] for _ in flat]
    for w in sorted(words, key=_word_key):
        k = _pick_cell(w, flat)
        if k is not None:
            buckets[k].append(w)

    texts, boxes = [], []
    k = 0
    for r in rows:
        row_text = [_join_cell_text(buckets[k + i]) for i in range(len(r))]
        k += len(r)
        pad = n_cols - len(r)
        texts.append(tuple(row_text + [""] * pad))
        boxes.append(tuple(list(r) + [None] * pad))
    return TableGrid(table_id=table_id, cells=tuple(texts), cell_boxes=tuple(boxes), outline=outline)


def map_table(group: TableGroup, words: list[OcrWord], line_threshold: float = 10, mode: RowMode = "chain") -> TableGrid:
    rows = cluster_rows(list(group.cells), line_threshold, mode)
    return assign_words(rows, words, table_id=group.id, outline=group.outline)
