"""Global (Otsu) and locally adaptive Gaussian thresholding."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.ndimage import correlate1d

from .raster import Histogram

__all__ = [
    "AdaptiveParams",
    "BinarizeError",
    "BlockTooLarge",
    "NoContrast",
    "OtsuResult",
    "Polarity",
    "WEIGHT_SCALE",
    "adaptive_gaussian",
    "apply_threshold",
    "gaussian_sigma",
    "gaussian_weights",
    "otsu_threshold",
]

# Fixed-point scale of the 1-D Gaussian weights. Every windowed sum is then an
# integer below 2**53, so float64 filtering is exact and the comparison against
# the pixel value never depends on summation order.
WEIGHT_SCALE = 1 << 20


class BinarizeError(ValueError):
    pass


class NoContrast(BinarizeError):
    """The histogram has a single populated intensity; no split exists."""


class BlockTooLarge(BinarizeError):
    pass


class Polarity(str, enum.Enum):
    DARK_FOREGROUND = "dark"
    LIGHT_FOREGROUND = "light"


@dataclass(frozen=True)
class OtsuResult:
    threshold: int
    within_class_variance: float
    between_class_variance: float


@dataclass(frozen=True)
class AdaptiveParams:
    block_size: int = 199
    offset_c: float = 40.0

    def __post_init__(self):
        if self.block_size < 3 or self.block_size % 2 == 0:
            raise ValueError(f"block_size must be odd and >= 3, got {self.block_size}")

    @property
    def gaussian_sigma(self) -> float:
        return gaussian_sigma(self.block_size)


def otsu_threshold(hist: Histogram) -> OtsuResult:
    """Pick the split ``t`` maximising the between-class variance.

    Class 1 holds intensities ``< t`` and class 2 intensities ``>= t``.
    Candidates are compared exactly with integer arithmetic, so ties resolve
    to the smallest maximising ``t`` regardless of floating-point noise.
    """
    bins = [int(c) for c in hist.bins]
    n = sum(bins)
    if n <= 0:
        raise NoContrast("histogram is empty")
    if sum(1 for c in bins if c) < 2:
        raise NoContrast("image has a single intensity level; no threshold separates it")

    s_total = sum(i * c for i, c in enumerate(bins))
    best_t = None
    best_num = best_den = 0
    n1 = s1 = 0
    for t in range(1, 256):
        n1 += bins[t - 1]
        s1 += (t - 1) * bins[t - 1]
        n2 = n - n1
        if n1 == 0 or n2 == 0:
            continue
        # sigma_b^2 * n^2 = (s1*n2 - s2*n1)^2 / (n1*n2)
        num = (s1 * n2 - (s_total - s1) * n1) ** 2
        den = n1 * n2
        if best_t is None or num * best_den > best_num * den:
            best_t, best_num, best_den = t, num, den

    return OtsuResult(
        threshold=best_t,
        within_class_variance=_within_class_variance(bins, best_t),
        between_class_variance=best_num / best_den / (n * n),
    )


def _within_class_variance(bins: list[int], t: int) -> float:
    n = sum(bins)
    out = 0.0
    for lo, hi in ((0, t), (t, 256)):
        nc = sum(bins[lo:hi])
        mu = sum(i * bins[i] for i in range(lo, hi)) / nc
        var = sum(bins[i] * (i - mu) ** 2 for i in range(lo, hi)) / nc
        out += nc / n * var
    return out


def apply_threshold(img: np.ndarray, t: int, polarity: Polarity = Polarity.DARK_FOREGROUND) -> np.ndarray:
    if not 1 <= t <= 255:
        raise ValueError(f"threshold must lie in [1, 255], got {t}")
    dark = np.asarray(img) < t
    return dark if Polarity(polarity) is Polarity.DARK_FOREGROUND else ~dark


def gaussian_sigma(block_size: int) -> float:
    return 0.3 * ((block_size - 1) / 2 - 1) + 0.8


@lru_cache(maxsize=32)
def gaussian_weights(block_size: int) -> np.ndarray:
    """Integer 1-D Gaussian weights of length ``block_size`` summing to ``WEIGHT_SCALE``."""
    sigma = gaussian_sigma(block_size)
    r = block_size // 2
    x = np.arange(-r, r + 1, dtype=np.float64)
    g = np.exp(-(x * x) / (2 * sigma * sigma))
    w = np.rint(g / g.sum() * WEIGHT_SCALE).astype(np.int64)
    w[r] += WEIGHT_SCALE - int(w.sum())
    w.setflags(write=False)
    return w


def adaptive_gaussian(
    img: np.ndarray,
    params: AdaptiveParams = AdaptiveParams(),
    polarity: Polarity = Polarity.DARK_FOREGROUND,
) -> np.ndarray:
    """Threshold each pixel against its Gaussian-weighted neighbourhood mean minus C.

    The window is ``block_size`` square, centred on the pixel, with edge
    replication at the image border. With dark foreground a pixel is set when
    ``value < mean - C``; light foreground is the complement.
    """
    img = np.asarray(img)
    h, w = img.shape
    b = params.block_size
    if b > 2 * max(w, h) + 1:
        raise BlockTooLarge(f"block_size {b} exceeds 2*max(width, height)+1 = {2 * max(w, h) + 1}")

    weights = gaussian_weights(b).astype(np.float64)
    acc = correlate1d(img.astype(np.float64), weights, axis=1, mode="nearest")
    acc = correlate1d(acc, weights, axis=0, mode="nearest")
    scale = float(WEIGHT_SCALE) ** 2
    # v < acc/scale - C  <=>  acc - v*scale > C*scale
    dark = acc - img.astype(np.float64) * scale > params.offset_c * scale
    return dark if Polarity(polarity) is Polarity.DARK_FOREGROUND else ~dark
