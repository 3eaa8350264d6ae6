"""Deterministic rendering of ruled tables with ground truth and synthetic OCR.

Text is laid out with fixed-advance metrics: every character is
``CHAR_ADVANCE`` px wide and ``TEXT_HEIGHT`` px tall, words are separated by
one character advance, and a cell's text starts ``TEXT_PAD`` px from the left
edge of the cell interior, vertically centred. With ``strokes`` enabled each
character gets a few short ink strokes inside its box so that the morphology
stage has text to remove; no stroke is longer than 9 px.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .contours import CellBox
from .ocrwords import OcrWord, format_ocr_tsv

__all__ = [
    "CHAR_ADVANCE",
    "GroundTruth",
    "Page",
    "SpecOverflow",
    "TableSpec",
    "TableTruth",
    "TEXT_HEIGHT",
    "TEXT_PAD",
    "WordTruth",
    "emit_ocr_tsv",
    "fixture_from_dict",
    "fixture_to_dict",
    "load_fixture",
    "random_layout",
    "render",
]

CHAR_ADVANCE = 8
TEXT_HEIGHT = 14
TEXT_PAD = 4
SYNTH_CONF = 95.0


class SpecOverflow(ValueError):
    pass


@dataclass(frozen=True)
class TableSpec:
    origin: tuple[int, int]
    col_widths: tuple[int, ...]
    row_heights: tuple[int, ...]
    cell_texts: tuple[tuple[str, ...], ...] = ()
    line_width: int = 2
    seed: int = 0
    jitter: int = 0

    def __post_init__(self):
        if not self.col_widths or not self.row_heights:
            raise ValueError("a table needs at least one row and one column")
        if min(self.col_widths) <= 0 or min(self.row_heights) <= 0 or self.line_width < 1:
            raise ValueError("column widths, row heights and line width must be positive")
        if not self.cell_texts:
            empty = tuple(tuple("" for _ in self.col_widths) for _ in self.row_heights)
            object.__setattr__(self, "cell_texts", empty)
        shape = (len(self.cell_texts), {len(r) for r in self.cell_texts})
        if shape != (len(self.row_heights), {len(self.col_widths)}):
            raise ValueError("cell_texts shape does not match rows x cols")

    @property
    def width(self) -> int:
        return sum(self.col_widths)

    @property
    def height(self) -> int:
        return sum(self.row_heights)

    @property
    def outline(self) -> CellBox:
        x0, y0 = self.origin
        return CellBox(x0, y0, x0 + self.width - 1, y0 + self.height - 1)


@dataclass(frozen=True)
class Page:
    width: int = 1000
    height: int = 800
    ink: int = 0
    paper: int = 255
    strokes: bool = True
    # (top gain, bottom gain) multiplied into intensities, linear in y
    gradient: tuple[float, float] | None = None


@dataclass(frozen=True)
class WordTruth:
    word: OcrWord
    table: int
    row: int
    col: int


@dataclass(frozen=True)
class TableTruth:
    outline: CellBox
    cells: tuple[tuple[CellBox, ...], ...]  # cell interiors, [row][col]
    texts: tuple[tuple[str, ...], ...]

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.cells), len(self.cells[0])


@dataclass(eq=False)
class GroundTruth:
    tables: list[TableTruth]
    words: list[WordTruth]
    line_mask: np.ndarray
    stroke_mask: np.ndarray = field(repr=False)


def _line_starts(origin: int, sizes: tuple[int, ...], lw: int) -> list[int]:
    bounds = np.concatenate([[0], np.cumsum(sizes)]) + origin
    total = int(bounds[-1] - origin)
    starts = [int(b) - lw // 2 for b in bounds]
    starts[0] = origin
    starts[-1] = origin + total - lw
    return starts


def _glyph(mask: np.ndarray, x: int, y: int, ch: str) -> None:
    # Character box is CHAR_ADVANCE x TEXT_HEIGHT at (x, y).
    kind = ord(ch) % 4
    vx = x + 1 if kind in (0, 2) else x + 5
    mask[y + 2 : y + 11, vx : vx + 2] = True
    hy = (y + 2, y + 6, y + 10, y + 6)[kind]
    mask[hy : hy + 2, x + 1 : x + 7] = True


def render(specs: list[TableSpec], page: Page = Page()) -> tuple[np.ndarray, GroundTruth]:
    """Draw the tables on a blank page and return the image with its ground truth."""
    line_mask = np.zeros((page.height, page.width), dtype=bool)
    stroke_mask = np.zeros_like(line_mask)
    tables: list[TableTruth] = []
    words: list[WordTruth] = []

    for t_idx, spec in enumerate(specs):
        box = spec.outline
        if box.x_min < 0 or box.y_min < 0 or box.x_max >= page.width or box.y_max >= page.height:
            raise SpecOverflow(f"table {t_idx} at {box.as_list()} exceeds the {page.width}x{page.height} page")
        for prev in tables:
            o = prev.outline
            if not (box.x_max < o.x_min or o.x_max < box.x_min or box.y_max < o.y_min or o.y_max < box.y_min):
                raise ValueError(f"table {t_idx} overlaps an earlier table")

        lw = spec.line_width
        xs = _line_starts(spec.origin[0], spec.col_widths, lw)
        ys = _line_starts(spec.origin[1], spec.row_heights, lw)
        for x in xs:
            line_mask[box.y_min : box.y_max + 1, x : x + lw] = True
        for y in ys:
            line_mask[y : y + lw, box.x_min : box.x_max + 1] = True

        rng = np.random.default_rng(spec.seed)
        cells = []
        for r in range(len(spec.row_heights)):
            row = []
            for c in range(len(spec.col_widths)):
                x_lo, x_hi = xs[c] + lw, xs[c + 1] - 1
                y_lo, y_hi = ys[r] + lw, ys[r + 1] - 1
                if x_lo > x_hi or y_lo > y_hi:
                    raise ValueError(f"table {t_idx} cell ({r}, {c}) has no interior")
                interior = CellBox(x_lo, y_lo, x_hi, y_hi)
                row.append(interior)
                words.extend(_layout_words(spec.cell_texts[r][c], interior, t_idx, r, c, spec, rng))
            cells.append(tuple(row))
        tables.append(TableTruth(outline=box, cells=tuple(cells), texts=spec.cell_texts))

    if page.strokes:
        for wt in words:
            w = wt.word
            for k, ch in enumerate(w.text):
                _glyph(stroke_mask, w.left + k * CHAR_ADVANCE, w.top, ch)

    img = np.full((page.height, page.width), page.paper, dtype=np.float64)
    img[line_mask | stroke_mask] = page.ink
    if page.gradient is not None:
        top, bottom = page.gradient
        gain = np.linspace(top, bottom, page.height)[:, None]
        img = np.floor(img * gain + 0.5)
    img = np.clip(img, 0, 255).astype(np.uint8)
    return img, GroundTruth(tables=tables, words=words, line_mask=line_mask, stroke_mask=stroke_mask)


def _layout_words(text, interior, t_idx, r, c, spec, rng) -> list[WordTruth]:
    tokens = text.split()
    if not tokens:
        return []
    span = sum(len(t) for t in tokens) * CHAR_ADVANCE + (len(tokens) - 1) * CHAR_ADVANCE
    top = interior.y_min + (interior.height - TEXT_HEIGHT) // 2
    slack = interior.width - TEXT_PAD - span
    if slack < 0 or top < interior.y_min:
        raise SpecOverflow(f"text {text!r} does not fit cell ({r}, {c}) of table {t_idx}")
    x = interior.x_min + TEXT_PAD + (int(rng.integers(0, min(spec.jitter, slack) + 1)) if spec.jitter else 0)
    out = []
    for k, tok in enumerate(tokens):
        w = len(tok) * CHAR_ADVANCE
        word = OcrWord(
            left=x, top=top, width=w, height=TEXT_HEIGHT, conf=SYNTH_CONF, text=tok,
            page_num=1, block_num=t_idx + 1, par_num=r * len(spec.col_widths) + c + 1,
            line_num=1, word_num=k + 1,
        )
        out.append(WordTruth(word, t_idx, r, c))
        x += w + CHAR_ADVANCE
    return out


def emit_ocr_tsv(gt: GroundTruth) -> str:
    return format_ocr_tsv([wt.word for wt in gt.words])


def fixture_from_dict(doc: dict[str, Any]) -> tuple[list[TableSpec], Page]:
    p = dict(doc.get("page", {}))
    if p.get("gradient") is not None:
        p["gradient"] = tuple(p["gradient"])
    page = Page(**p)
    specs = [
        TableSpec(
            origin=tuple(t["origin"]),
            col_widths=tuple(t["col_widths"]),
            row_heights=tuple(t["row_heights"]),
            cell_texts=tuple(tuple(row) for row in t.get("cell_texts", ())),
            line_width=t.get("line_width", 2),
            seed=t.get("seed", 0),
            jitter=t.get("jitter", 0),
        )
        for t in doc["tables"]
    ]
    return specs, page


def fixture_to_dict(specs: list[TableSpec], page: Page) -> dict[str, Any]:
    return {
        "page": {
            "width": page.width, "height": page.height, "ink": page.ink, "paper": page.paper,
            "strokes": page.strokes, "gradient": list(page.gradient) if page.gradient else None,
        },
        "tables": [
            {
                "origin": list(s.origin), "col_widths": list(s.col_widths), "row_heights": list(s.row_heights),
                "line_width": s.line_width, "seed": s.seed, "jitter": s.jitter,
                "cell_texts": [list(r) for r in s.cell_texts],
            }
            for s in specs
        ],
    }


def load_fixture(path: str | Path) -> tuple[list[TableSpec], Page]:
    return fixture_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


_VOCAB = ("id", "qty", "total", "north", "south", "7.5", "$12", "item", "note", "ok", "x", "2024", "a b", "net")


def random_layout(seed: int, max_tables: int = 4) -> tuple[list[TableSpec], Page]:
    """1..max_tables disjoint ruled tables, one per quadrant of a 1200x1000 page."""
    rng = np.random.default_rng(seed)
    page = Page(width=1200, height=1000, strokes=bool(rng.integers(0, 2)))
    n = int(rng.integers(1, max_tables + 1))
    slots = rng.permutation(4)[:n]
    specs = []
    for k, slot in enumerate(sorted(slots)):
        sx, sy = (slot % 2) * 600, (slot // 2) * 500
        n_cols = int(rng.integers(1, 6))
        n_rows = int(rng.integers(1, 6))
        cols = [int(v) for v in rng.integers(50, 100, size=n_cols)]
        rows = [int(v) for v in rng.integers(40, 80, size=n_rows)]
        ox = sx + int(rng.integers(20, 600 - sum(cols) - 20 + 1))
        oy = sy + int(rng.integers(20, 500 - sum(rows) - 20 + 1))
        texts = tuple(
            tuple(str(_VOCAB[int(rng.integers(0, len(_VOCAB)))]) if rng.random() < 0.8 else "" for _ in cols)
            for _ in rows
        )
        specs.append(TableSpec(
            origin=(ox, oy), col_widths=tuple(cols), row_heights=tuple(rows), cell_texts=texts,
            line_width=int(rng.integers(1, 4)), seed=seed * 10 + k,
        ))
    return specs, page
