"""Interferometric quality metrics: interferogram, windowed coherence, coherence loss.

The coherence estimator is the standard windowed maximum-likelihood form

    gamma(m, n) = sum_W x1 * conj(x2) / sqrt(sum_W |x1|^2 * sum_W |x2|^2)

with boxcar windows (default 5 x 5) clipped at the image borders, so the
magnitude stays within [0, 1] everywhere.  Windows whose denominator
vanishes are defined fully incoherent (gamma = 0).  The scalar loss is
``1 - mean(|gamma|)``.
"""

from dataclasses import dataclass

import numpy as np

from .tensorio import as_complex_image

__all__ = [
    "CoherenceMap",
    "interferogram",
    "coherence",
    "coherence_loss",
    "DEFAULT_WINDOW",
]

DEFAULT_WINDOW = 5


def interferogram(x1, x2):
    """Pixelwise product x1 * conj(x2); its phase is the interferometric phase."""
    x1 = as_complex_image(x1)
    x2 = as_complex_image(x2)
    if x1.shape != x2.shape:
        raise ValueError(f"image dimensions differ: {x1.shape} vs {x2.shape}")
    return x1 * np.conj(x2)


def _window_sum(a, w):
    # boxcar w x w sum with border-clipped (shrinking) windows, via an
    # exclusive-prefix integral image
    m, n = a.shape
    r = w // 2
    s = np.zeros((m + 1, n + 1), dtype=a.dtype)
    s[1:, 1:] = np.cumsum(np.cumsum(a, axis=0), axis=1)
    i0 = np.clip(np.arange(m) - r, 0, m)[:, None]
    i1 = np.clip(np.arange(m) + r + 1, 0, m)[:, None]
    j0 = np.clip(np.arange(n) - r, 0, n)[None, :]
    j1 = np.clip(np.arange(n) + r + 1, 0, n)[None, :]
    return s[i1, j1] - s[i0, j1] - s[i1, j0] + s[i0, j0]


@dataclass(frozen=True)
class CoherenceMap:
    """Per-pixel complex coherence estimates from one window size."""

    values: np.ndarray
    window: int

    @property
    def rows(self):
        return self.values.shape[0]

    @property
    def cols(self):
        return self.values.shape[1]

    @property
    def magnitude(self):
        """|gamma| per pixel; in [0, 1] up to ~1e-12 numerical slack."""
        return np.abs(self.values)

    @property
    def phase(self):
        return np.angle(self.values)


def coherence(x1, x2, window=DEFAULT_WINDOW):
    """Windowed coherence estimate of two equally sized complex images.

    Parameters
    ----------
    x1, x2 : array_like
        Complex images of equal shape.
    window : int
        Odd boxcar side length >= 3, no larger than either image dimension.

    Returns
    -------
    CoherenceMap
    """
    x1 = as_complex_image(x1)
    x2 = as_complex_image(x2)
    if x1.shape != x2.shape:
        raise ValueError(f"image dimensions differ: {x1.shape} vs {x2.shape}")
    if window % 2 == 0 or window < 3:
        raise ValueError(f"window must be odd and >= 3, got {window}")
    if window > min(x1.shape):
        raise ValueError(f"window {window} exceeds image dimensions {x1.shape}")
    num = _window_sum(x1 * np.conj(x2), window)
    p1 = _window_sum((x1.real**2 + x1.imag**2), window)
    p2 = _window_sum((x2.real**2 + x2.imag**2), window)
    den = np.sqrt(p1 * p2)
    values = np.divide(num, den, out=np.zeros_like(num), where=den > 0)
    return CoherenceMap(values, window)


def coherence_loss(x1, x2, window=DEFAULT_WINDOW):
    """Scalar incoherence loss: 1 - mean(|gamma|), in [0, 1].

    Zero exactly when the coherence magnitude is 1 everywhere.
    """
    cmap = coherence(x1, x2, window)
    return float(1.0 - cmap.magnitude.mean())
