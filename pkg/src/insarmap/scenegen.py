"""Synthetic complex InSAR patches: flat-earth fringes and the striped one-tone set.

The flat-earth model assumes ideal unity-reflectivity scattering and a
slant range that grows linearly across the image columns, so each patch is
a pure phase ramp ``exp(j * 4*pi/lambda * r(n))`` with a single constant
fringe frequency.  The one-tone test set stacks eight horizontal stripes,
each a one-sided tone with its own random frequency and amplitude, plus a
3-channel conditioning image encoding those stripe parameters.

All randomness flows through numpy's PCG64 generator; dataset entries
derive per-patch sub-seeds with ``SeedSequence((seed, index))`` so serial
and parallel generation produce identical files.
"""

import csv
import os
from dataclasses import dataclass, field

import numpy as np

from .tensorio import save_tensor

__all__ = [
    "FlatEarthScene",
    "OnetoneSpec",
    "scene_response",
    "gen_onetone",
    "gen_onetone_dataset",
    "ManifestEntry",
    "STRIPE_COUNT",
    "AMPLITUDE_RANGE",
]

STRIPE_COUNT = 8
AMPLITUDE_RANGE = (0.25, 1.0)


@dataclass(frozen=True)
class FlatEarthScene:
    """Flat-earth acquisition geometry with unity reflectivity.

    The fringe frequency is ``4*pi*slant_range_step / wavelength`` radians
    per column sample.
    """

    wavelength: float
    slant_range_origin: float = 0.0
    slant_range_step: float = 0.0

    def __post_init__(self):
        if not self.wavelength > 0.0:
            raise ValueError(f"wavelength must be > 0, got {self.wavelength}")
        if self.slant_range_origin < 0.0:
            raise ValueError("slant range origin must be >= 0")
        if not np.isfinite(self.fringe_frequency):
            raise ValueError("fringe frequency is not finite")

    @property
    def fringe_frequency(self):
        return 4.0 * np.pi * self.slant_range_step / self.wavelength


def scene_response(scene, rows, cols):
    """Complex response of a flat-earth scene on a rows x cols grid.

    Every sample has unit magnitude; the phase ``4*pi/lambda * (r0 + dr*n)``
    is constant down each column and exactly linear across columns.
    """
    if rows < 1 or cols < 1:
        raise ValueError("patch dimensions must be >= 1")
    n = np.arange(cols)
    r = scene.slant_range_origin + scene.slant_range_step * n
    row = np.exp(1j * 4.0 * np.pi * r / scene.wavelength)
    return np.tile(row, (rows, 1))


@dataclass(frozen=True)
class OnetoneSpec:
    """Parameters of one striped one-tone patch.

    ``stripe_freqs`` holds one normalized frequency in [-pi, pi) per stripe,
    ``stripe_amps`` one positive amplitude.  ``seed`` records the generator
    seed the parameters were drawn from (None for hand-built specs).
    """

    rows: int
    cols: int
    stripe_freqs: tuple
    stripe_amps: tuple
    seed: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "stripe_freqs", tuple(float(w) for w in self.stripe_freqs))
        object.__setattr__(self, "stripe_amps", tuple(float(a) for a in self.stripe_amps))
        if len(self.stripe_freqs) != len(self.stripe_amps):
            raise ValueError("frequency and amplitude counts differ")
        if self.rows < self.stripes:
            raise ValueError(f"{self.rows} rows cannot hold {self.stripes} stripes")
        if self.cols < 1:
            raise ValueError("cols must be >= 1")
        for w in self.stripe_freqs:
            if not (-np.pi <= w < np.pi):
                raise ValueError(f"stripe frequency {w} outside [-pi, pi)")
        for a in self.stripe_amps:
            if not a > 0.0:
                raise ValueError(f"stripe amplitude {a} must be > 0")

    @property
    def stripes(self):
        return len(self.stripe_freqs)

    @classmethod
    def from_seed(cls, rows, cols, seed, stripes=STRIPE_COUNT):
        """Draw i.i.d. stripe parameters: frequencies uniform on [-pi, pi),
        amplitudes uniform on [0.25, 1.0]."""
        rng = np.random.Generator(np.random.PCG64(seed))
        freqs = rng.uniform(-np.pi, np.pi, stripes)
        amps = rng.uniform(*AMPLITUDE_RANGE, stripes)
        return cls(rows, cols, tuple(freqs), tuple(amps), seed=int(seed))

    def stripe_bounds(self):
        """(start, stop) row of each stripe; heights differ by at most one."""
        base, rem = divmod(self.rows, self.stripes)
        bounds = []
        start = 0
        for s in range(self.stripes):
            stop = start + base + (1 if s < rem else 0)
            bounds.append((start, stop))
            start = stop
        return bounds


def gen_onetone(spec):
    """Build the (patch, conditioning) pair for a one-tone spec.

    The patch stacks horizontal stripes ``A_s * exp(j*w_s*n)``.  The
    conditioning tensor encodes, constant over each stripe, the frequency
    mapped linearly from [-pi, pi) to [0, 1] on channel 0 and the amplitude
    normalized by the patch maximum on channel 1; channel 2 is the zero
    background channel.
    """
    patch = np.empty((spec.rows, spec.cols), dtype=np.complex128)
    cond = np.zeros((spec.rows, spec.cols, 3), dtype=np.float64)
    n = np.arange(spec.cols)
    amp_max = max(spec.stripe_amps)
    for (start, stop), w, a in zip(spec.stripe_bounds(), spec.stripe_freqs, spec.stripe_amps):
        patch[start:stop, :] = a * np.exp(1j * w * n)
        cond[start:stop, :, 0] = (w + np.pi) / (2.0 * np.pi)
        cond[start:stop, :, 1] = a / amp_max
    return patch, cond


@dataclass(frozen=True)
class ManifestEntry:
    index: int
    sub_seed: int
    spec: OnetoneSpec = field(repr=False)
    patch_file: str = ""
    cond_file: str = ""


def _sub_seed(seed, index):
    # stable per-index stream split; independent of generation order
    return int(np.random.SeedSequence((seed, index)).generate_state(1, np.uint64)[0])


def gen_onetone_dataset(count, rows, cols, seed, out_dir):
    """Write ``count`` (patch, conditioning) CTEN pairs plus a manifest CSV.

    Regenerating with the same (seed, count, rows, cols) reproduces every
    file bit-exactly.  Returns the manifest entries in index order.
    """
    os.makedirs(out_dir, exist_ok=True)
    entries = []
    for i in range(count):
        sub = _sub_seed(seed, i)
        spec = OnetoneSpec.from_seed(rows, cols, sub)
        patch, cond = gen_onetone(spec)
        patch_file = f"onetone_{i:04d}_patch.cten"
        cond_file = f"onetone_{i:04d}_cond.cten"
        save_tensor(patch, os.path.join(out_dir, patch_file))
        save_tensor(cond, os.path.join(out_dir, cond_file))
        entries.append(ManifestEntry(i, sub, spec, patch_file, cond_file))
    write_manifest(entries, os.path.join(out_dir, "manifest.csv"))
    return entries


def write_manifest(entries, path):
    stripes = entries[0].spec.stripes if entries else STRIPE_COUNT
    header = ["index", "sub_seed"]
    for s in range(stripes):
        header += [f"omega_{s}", f"amp_{s}"]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for e in entries:
            row = [e.index, e.sub_seed]
            for w, a in zip(e.spec.stripe_freqs, e.spec.stripe_amps):
                row += [repr(w), repr(a)]
            writer.writerow(row)
