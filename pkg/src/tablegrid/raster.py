"""Raster types, netpbm I/O and small pixel utilities.

Images are plain numpy arrays indexed ``[y, x]`` with the origin at the
top-left corner:

* gray images are ``uint8`` arrays of shape ``(height, width)``;
* binary images are ``bool`` arrays, ``True`` marking foreground.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "Histogram",
    "MalformedHeader",
    "RasterError",
    "TruncatedPixelData",
    "UnsupportedMaxval",
    "binary_to_gray",
    "encode_pgm",
    "histogram",
    "invert",
    "load_image",
    "pad",
    "read_image",
    "rgb_to_gray",
    "translate",
    "write_pgm",
]


class RasterError(ValueError):
    pass


class MalformedHeader(RasterError):
    def __init__(self, field: str, detail: str):
        super().__init__(f"malformed header field {field!r}: {detail}")
        self.field = field


class TruncatedPixelData(RasterError):
    def __init__(self, expected: int, got: int):
        super().__init__(f"truncated pixel data: expected {expected} bytes, got {got}")
        self.expected = expected
        self.got = got


class UnsupportedMaxval(RasterError):
    def __init__(self, maxval: int):
        super().__init__(f"unsupported maxval {maxval} (only 255 is supported)")
        self.field = "maxval"
        self.maxval = maxval


@dataclass(frozen=True)
class Histogram:
    """Intensity counts over the 256 levels of an 8-bit image."""

    bins: np.ndarray
    total: int

    @property
    def probabilities(self) -> np.ndarray:
        return self.bins / self.total


def _header_tokens(data: bytes, count: int) -> tuple[list[bytes], int]:
    # Netpbm header: whitespace separated tokens, '#' comments run to end of line,
    # exactly one whitespace byte after the last token.
    tokens: list[bytes] = []
    pos = 0
    n = len(data)
    while len(tokens) < count:
        while pos < n and (data[pos : pos + 1].isspace() or data[pos] == ord("#")):
            if data[pos] == ord("#"):
                while pos < n and data[pos] not in b"\r\n":
                    pos += 1
            else:
                pos += 1
        start = pos
        while pos < n and not data[pos : pos + 1].isspace() and data[pos] != ord("#"):
            pos += 1
        if start == pos:
            break
        tokens.append(data[start:pos])
    if len(tokens) == count:
        if pos >= n or not data[pos : pos + 1].isspace():
            raise MalformedHeader("maxval", "missing whitespace before pixel data")
        pos += 1
    return tokens, pos


def _parse_dim(token: bytes | None, field: str) -> int:
    if token is None:
        raise MalformedHeader(field, "missing")
    if not token.isdigit():
        raise MalformedHeader(field, f"not a positive integer: {token!r}")
    value = int(token)
    if value < 1:
        raise MalformedHeader(field, "must be >= 1")
    return value


def load_image(content: bytes) -> np.ndarray:
    """Decode a binary PGM (P5) or PPM (P6) with maxval 255 into a gray image.

    PPM pixels are converted with :func:`rgb_to_gray`.
    """
    tokens, offset = _header_tokens(content, 4)
    tokens = tokens + [None] * (4 - len(tokens))  # type: ignore[list-item]
    magic = tokens[0]
    if magic not in (b"P5", b"P6"):
        raise MalformedHeader("magic", f"expected P5 or P6, got {magic!r}")
    width = _parse_dim(tokens[1], "width")
    height = _parse_dim(tokens[2], "height")
    maxval_tok = tokens[3]
    if maxval_tok is None or not maxval_tok.isdigit():
        raise MalformedHeader("maxval", f"not an integer: {maxval_tok!r}")
    maxval = int(maxval_tok)
    if maxval != 255:
        raise UnsupportedMaxval(maxval)

    channels = 1 if magic == b"P5" else 3
    expected = width * height * channels
    payload = content[offset : offset + expected]
    if len(payload) < expected:
        raise TruncatedPixelData(expected, len(payload))
    pixels = np.frombuffer(payload, dtype=np.uint8)
    if channels == 1:
        return pixels.reshape(height, width).copy()
    return rgb_to_gray(pixels.reshape(height, width, 3))


def read_image(path: str | Path) -> np.ndarray:
    return load_image(Path(path).read_bytes())


def rgb_to_gray(rgb: np.ndarray) -> np.ndarray:
    """BT.601 luma, rounded half up, computed in exact integer arithmetic."""
    rgb = np.asarray(rgb, dtype=np.int64)
    r, g, b = rgb[..., 0], rgb[..., 1], rgb[..., 2]
    return ((299 * r + 587 * g + 114 * b + 500) // 1000).astype(np.uint8)


def encode_pgm(img: np.ndarray) -> bytes:
    img = np.asarray(img)
    if img.dtype == bool:
        img = binary_to_gray(img)
    if img.ndim != 2 or img.dtype != np.uint8:
        raise ValueError("encode_pgm expects a 2-D uint8 or bool array")
    h, w = img.shape
    return b"P5\n%d %d\n255\n" % (w, h) + np.ascontiguousarray(img).tobytes()


def write_pgm(path: str | Path, img: np.ndarray) -> None:
    Path(path).write_bytes(encode_pgm(img))


def binary_to_gray(img: np.ndarray) -> np.ndarray:
    return np.where(img, np.uint8(255), np.uint8(0))


def histogram(img: np.ndarray) -> Histogram:
    bins = np.bincount(np.asarray(img, dtype=np.uint8).ravel(), minlength=256).astype(np.int64)
    return Histogram(bins=bins, total=int(img.size))


def invert(img: np.ndarray) -> np.ndarray:
    return np.logical_not(img)


def pad(img: np.ndarray, k: int, value=0) -> np.ndarray:
    """Surround ``img`` with ``k`` pixels of ``value`` on every side."""
    return np.pad(img, k, mode="constant", constant_values=value)


def translate(img: np.ndarray, dx: int, dy: int, fill=0) -> np.ndarray:
    """Shift content by ``(dx, dy)``; pixels moved in from outside take ``fill``."""
    out = np.full_like(img, fill)
    h, w = img.shape
    if abs(dx) >= w or abs(dy) >= h:
        return out
    src_y = slice(max(0, -dy), h - max(0, dy))
    src_x = slice(max(0, -dx), w - max(0, dx))
    dst_y = slice(max(0, dy), h - max(0, -dy))
    dst_x = slice(max(0, dx), w - max(0, -dx))
    out[dst_y, dst_x] = img[src_y, src_x]
    return out
