"""Word-level OCR data in the 12-column tab-separated layout of ``image_to_data``."""
from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "HEADER",
    "MalformedRow",
    "OcrWord",
    "filter_confidence",
    "format_ocr_tsv",
    "parse_ocr_tsv",
]

HEADER = (
    "level", "page_num", "block_num", "par_num", "line_num", "word_num",
    "left", "top", "width", "height", "conf", "text",
)
WORD_LEVEL = 5


class MalformedRow(ValueError):
    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason


@dataclass(frozen=True)
class OcrWord:
    left: int
    top: int
    width: int
    height: int
    conf: float
    text: str
    page_num: int = 1
    block_num: int = 1
    par_num: int = 1
    line_num: int = 1
    word_num: int = 1

    @property
    def x_mean(self) -> float:
        return self.left + self.width / 2

    @property
    def y_mean(self) -> float:
        return self.top + self.height / 2


def _int(value: str, name: str, line_no: int) -> int:
    try:
        return int(value)
    except ValueError:
        raise MalformedRow(line_no, f"{name} is not an integer: {value!r}") from None


def parse_ocr_tsv(content: str) -> list[OcrWord]:
    """Parse word rows (level 5) from OCR TSV output.

    Rows of other levels and rows with confidence -1 are skipped. A missing
    or unexpected header, a wrong column count, or non-numeric geometry
    raises :class:`MalformedRow`.
    """
    # str.splitlines would also break on separators that may occur inside word text
    lines = [ln[:-1] if ln.endswith("\r") else ln for ln in content.split("\n")]
    if not lines or tuple(lines[0].split("\t")) != HEADER:
        raise MalformedRow(1, "missing or unexpected header row")

    words = []
    for line_no, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        cols = line.split("\t")
        if len(cols) != len(HEADER):
            raise MalformedRow(line_no, f"expected {len(HEADER)} columns, got {len(cols)}")
        level = _int(cols[0], "level", line_no)
        if level != WORD_LEVEL:
            continue
        page, block, par, ln, wn, left, top, width, height = (
            _int(v, name, line_no) for v, name in zip(cols[1:10], HEADER[1:10])
        )
        if width <= 0 or height <= 0:
            raise MalformedRow(line_no, "word width and height must be positive")
        try:
            conf = float(cols[10])
        except ValueError:
            raise MalformedRow(line_no, f"conf is not a number: {cols[10]!r}") from None
        if not math.isfinite(conf):
            raise MalformedRow(line_no, f"conf is not finite: {cols[10]!r}")
        if conf == -1:
            continue
        words.append(OcrWord(left, top, width, height, conf, cols[11], page, block, par, ln, wn))
    return words


def _format_conf(conf: float) -> str:
    conf = float(conf)
    return str(int(conf)) if conf.is_integer() else repr(conf)


def format_ocr_tsv(words: list[OcrWord]) -> str:
    rows = ["\t".join(HEADER)]
    for w in words:
        rows.append("\t".join([
            str(WORD_LEVEL), str(w.page_num), str(w.block_num), str(w.par_num), str(w.line_num),
            str(w.word_num), str(w.left), str(w.top), str(w.width), str(w.height),
            _format_conf(w.conf), w.text,
        ]))
    return "\n".join(rows) + "\n"


def filter_confidence(words: list[OcrWord], threshold: float = 30.0) -> list[OcrWord]:
    if not 0 <= threshold <= 100:
        raise ValueError(f"confidence threshold must lie in [0, 100], got {threshold}")
    return [w for w in words if w.conf >= threshold and w.text.strip()]
