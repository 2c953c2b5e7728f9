"""Core tensor types, 2-D DFT helpers, and the CTEN on-disk tensor format.

Complex image patches are plain 2-D ``complex128`` arrays, real tensors are
2-D or 3-D ``float64`` arrays with a trailing channel axis.  The DFT
convention is fixed once here and shared by every other module: forward
transform unnormalized, inverse carries the ``1/(M*N)`` factor, and bin ``k``
of an axis of length ``M`` maps to the normalized frequency ``2*pi*k/M``,
with bins ``k >= M/2`` read as negative frequencies ``omega - 2*pi``.
"""

import struct
from dataclasses import dataclass

import numpy as np

__all__ = [
    "CtenError",
    "CtenMagicError",
    "CtenDtypeError",
    "CtenTruncatedError",
    "Spectrum",
    "as_complex_image",
    "as_real_tensor",
    "bin_frequencies",
    "dft2",
    "idft2",
    "save_tensor",
    "load_tensor",
    "export_image",
]

CTEN_MAGIC = b"CTEN\x01"
_DTYPE_REAL = 0x01
_DTYPE_COMPLEX = 0x02

LOG_MAG_EPS = 1e-12
LOG_MAG_FLOOR_DB = -240.0


class CtenError(ValueError):
    """Malformed CTEN file."""


class CtenMagicError(CtenError):
    """File does not start with the CTEN v1 magic bytes."""


class CtenDtypeError(CtenError):
    """Unsupported dtype code in a CTEN header."""


class CtenTruncatedError(CtenError):
    """Payload shorter than the header-declared size."""


def as_complex_image(x):
    """Validate and return a 2-D complex128 image.

    Parameters
    ----------
    x : array_like
        2-D array of complex (or real, promoted) samples.

    Returns
    -------
    np.ndarray
        ``complex128`` array of shape (M, N), M, N >= 1, all samples finite.
    """
    arr = np.asarray(x, dtype=np.complex128)
    if arr.ndim != 2:
        raise ValueError(f"complex image must be 2-D, got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"complex image dimensions must be >= 1, got {arr.shape}")
    if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
        raise ValueError("complex image contains non-finite samples")
    return arr


def as_real_tensor(t, channels=None):
    """Validate and return a 2-D or 3-D float64 tensor (channel-last).

    Parameters
    ----------
    t : array_like
        Real samples, shape (M, N) or (M, N, C).
    channels : int or tuple of int, optional
        Accepted channel counts; a 2-D tensor counts as one channel.

    Returns
    -------
    np.ndarray
        ``float64`` array with the input rank preserved.
    """
    arr = np.asarray(t, dtype=np.float64)
    if arr.ndim not in (2, 3):
        raise ValueError(f"real tensor must be 2-D or 3-D, got shape {arr.shape}")
    if min(arr.shape) < 1:
        raise ValueError(f"real tensor dimensions must be >= 1, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("real tensor contains non-finite samples")
    if channels is not None:
        allowed = (channels,) if isinstance(channels, int) else tuple(channels)
        c = arr.shape[2] if arr.ndim == 3 else 1
        if c not in allowed:
            raise ValueError(f"expected {allowed} channel(s), got {c}")
    return arr


def bin_frequencies(n):
    """Normalized frequency of each DFT bin of an axis of length ``n``.

    Returns ``2*pi*k/n`` for ``k < n/2`` and ``2*pi*k/n - 2*pi`` for the
    upper half, so values lie in ``[-pi, pi)``.
    """
    if n < 1:
        raise ValueError("axis length must be >= 1")
    return 2.0 * np.pi * np.fft.fftfreq(n)


@dataclass(frozen=True)
class Spectrum:
    """Unnormalized 2-D DFT of an image, DC at bin (0, 0).

    ``bins[k, l]`` holds the coefficient at normalized frequencies
    ``(bin_frequencies(rows)[k], bin_frequencies(cols)[l])``.
    """

    bins: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.bins, dtype=np.complex128)
        if arr.ndim != 2 or min(arr.shape) < 1:
            raise ValueError(f"spectrum bins must be 2-D, got shape {arr.shape}")
        object.__setattr__(self, "bins", arr)

    @property
    def rows(self):
        return self.bins.shape[0]

    @property
    def cols(self):
        return self.bins.shape[1]

    def log_magnitude(self, floor_db=LOG_MAG_FLOOR_DB):
        """20*log10(|bins| + eps) clamped below at ``floor_db``; always finite."""
        mag_db = 20.0 * np.log10(np.abs(self.bins) + LOG_MAG_EPS)
        return np.maximum(mag_db, floor_db)

    def row_frequencies(self):
        return bin_frequencies(self.rows)

    def col_frequencies(self):
        return bin_frequencies(self.cols)


def dft2(img):
    """Forward unnormalized 2-D DFT of a complex image.

    ``idft2(dft2(x))`` reproduces ``x`` to within 1e-10 max-abs.
    """
    arr = as_complex_image(img)
    return Spectrum(np.fft.fft2(arr))


def idft2(spec):
    """Inverse 2-D DFT with 1/(M*N) normalization; exact inverse of dft2."""
    if not isinstance(spec, Spectrum):
        spec = Spectrum(spec)
    return np.fft.ifft2(spec.bins)


def save_tensor(t, path):
    """Write a tensor to ``path`` in the CTEN v1 format.

    Complex 2-D arrays are stored with dtype code 0x02 (interleaved re, im),
    real 2-D/3-D arrays with dtype code 0x01. Round trips are bit-exact.
    """
    arr = np.asarray(t)
    if np.iscomplexobj(arr):
        arr = as_complex_image(arr)
        dtype_code = _DTYPE_COMPLEX
        payload = np.ascontiguousarray(arr, dtype="<c16").tobytes()
    else:
        arr = as_real_tensor(arr)
        dtype_code = _DTYPE_REAL
        payload = np.ascontiguousarray(arr, dtype="<f8").tobytes()
    header = CTEN_MAGIC + struct.pack("<BB", dtype_code, arr.ndim)
    header += struct.pack(f"<{arr.ndim}I", *arr.shape)
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(payload)


def load_tensor(path):
    """Read a CTEN v1 file; returns a complex 2-D or real 2-D/3-D array.

    Raises
    ------
    CtenMagicError
        Wrong leading magic bytes.
    CtenDtypeError
        Unknown dtype code.
    CtenTruncatedError
        Payload (or header) shorter than declared.
    CtenError
        Any other structural defect (bad rank, zero dims, trailing bytes).
    """
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < len(CTEN_MAGIC) or blob[: len(CTEN_MAGIC)] != CTEN_MAGIC:
        raise CtenMagicError(f"{path}: not a CTEN v1 file")
    off = len(CTEN_MAGIC)
    if len(blob) < off + 2:
        raise CtenTruncatedError(f"{path}: header truncated")
    dtype_code, rank = struct.unpack_from("<BB", blob, off)
    off += 2
    if dtype_code not in (_DTYPE_REAL, _DTYPE_COMPLEX):
        raise CtenDtypeError(f"{path}: unsupported dtype code 0x{dtype_code:02x}")
    if rank not in (2, 3):
        raise CtenError(f"{path}: unsupported rank {rank}")
    if dtype_code == _DTYPE_COMPLEX and rank != 2:
        raise CtenError(f"{path}: complex tensors must be rank 2, got {rank}")
    if len(blob) < off + 4 * rank:
        raise CtenTruncatedError(f"{path}: header truncated")
    dims = struct.unpack_from(f"<{rank}I", blob, off)
    off += 4 * rank
    if min(dims) < 1:
        raise CtenError(f"{path}: zero-sized dimension in {dims}")
    count = int(np.prod(dims))
    itemsize = 16 if dtype_code == _DTYPE_COMPLEX else 8
    expected = count * itemsize
    if len(blob) - off < expected:
        raise CtenTruncatedError(
            f"{path}: payload has {len(blob) - off} bytes, expected {expected}"
        )
    if len(blob) - off > expected:
        raise CtenError(f"{path}: {len(blob) - off - expected} trailing bytes")
    dt = "<c16" if dtype_code == _DTYPE_COMPLEX else "<f8"
    data = np.frombuffer(blob, dtype=dt, count=count, offset=off)
    return data.reshape(dims).copy()


def _quantize_unit(v):
    # round-half-up to 8 bit; v already clipped to [0, 1]
    return np.minimum(np.floor(255.0 * v + 0.5), 255.0).astype(np.uint8)


def export_image(t, path, normalization="minmax"):
    """Render a 1- or 3-channel real tensor as a PGM (P5) / PPM (P6) raster.

    Parameters
    ----------
    t : array_like
        Real tensor, shape (M, N), (M, N, 1) or (M, N, 3).
    path : str or Path
        Output file.
    normalization : "minmax" or (lo, hi)
        "minmax" rescales by the tensor's own range; a degenerate range
        (max == min) renders constant mid-gray 128.  A (lo, hi) pair maps
        that fixed interval to [0, 1], clipping outside values.
    """
    arr = as_real_tensor(t, channels=(1, 3))
    if arr.ndim == 3 and arr.shape[2] == 1:
        arr = arr[:, :, 0]
    if normalization == "minmax":
        lo, hi = float(arr.min()), float(arr.max())
        if hi == lo:
            pix = np.full(arr.shape, 128, dtype=np.uint8)
        else:
            pix = _quantize_unit((arr - lo) / (hi - lo))
    else:
        lo, hi = float(normalization[0]), float(normalization[1])
        if hi <= lo:
            raise ValueError(f"fixed normalization needs hi > lo, got ({lo}, {hi})")
        pix = _quantize_unit(np.clip((arr - lo) / (hi - lo), 0.0, 1.0))
    h, w = pix.shape[:2]
    if pix.ndim == 2:
        header = f"P5\n{w} {h}\n255\n".encode("ascii")
    else:
        header = f"P6\n{w} {h}\n255\n".encode("ascii")
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(np.ascontiguousarray(pix).tobytes())
