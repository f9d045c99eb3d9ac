"""Robustness experiments on encrypted data: noise, cropping, wrong keys.

:func:`run_bench` encrypts once, applies each attack to a fresh copy of the
cipher (or of the keys), decrypts, and reports one CSV row per attack with
header ``attack,param,psnr_db,seconds``.
"""

from __future__ import annotations

import io
import math
import time
from dataclasses import dataclass, replace

import numpy as np

from .errors import InvalidArgumentError
from .pipeline import CipherBundle, KeyBundle, decrypt, encrypt, psnr
from .recovery import SolverConfig
from .rng import check_seed, substream

__all__ = [
    "AttackSpec",
    "BenchRow",
    "add_noise",
    "crop_pixels",
    "perturb_key",
    "standard_suite",
    "run_bench",
    "format_csv",
    "ORDER_KEY",
    "CSV_HEADER",
]

CSV_HEADER = "attack,param,psnr_db,seconds"

# perturb_key index for the FRFT-order attack (alpha and beta both + 0.1).
ORDER_KEY = 5
ORDER_SHIFT = 0.1

_KINDS = ("noise", "crop", "wrong_key")


@dataclass(frozen=True)
class AttackSpec:
    """One attack.

    ``strength`` is the noise amplitude for ``"noise"``, the cropped
    fraction for ``"crop"`` and the key index (1-4, or 5 for the FRFT
    orders) for ``"wrong_key"``. ``region`` is an optional crop rectangle
    ``(row, col, height, width)``.
    """

    kind: str
    strength: float
    region: tuple | None = None
    seed: int = 0

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise InvalidArgumentError(f"attack kind must be one of {_KINDS}, got {self.kind!r}")
        if self.kind == "noise" and not self.strength >= 0:
            raise InvalidArgumentError(f"noise strength must be non-negative, got {self.strength}")
        if self.kind == "crop" and not 0 < self.strength < 1:
            raise InvalidArgumentError(f"crop fraction must lie in (0, 1), got {self.strength}")
        if self.kind == "wrong_key" and self.strength not in (1, 2, 3, 4, ORDER_KEY):
            raise InvalidArgumentError(f"key index must be 1-4 or {ORDER_KEY}, got {self.strength}")
        check_seed(self.seed)

    @property
    def param(self) -> str:
        if self.kind == "wrong_key":
            return "orders" if self.strength == ORDER_KEY else str(int(self.strength))
        return f"{self.strength:g}"


def add_noise(cipher: CipherBundle, strength: float, seed: int = 0) -> CipherBundle:
    """Add ``strength * U(0, 1)`` noise to the transmitted cipher.

    For a raw field, independent draws go to the real and imaginary parts.
    For a host-embedded raster the noise is added in pixel units and the
    result is clipped to ``[0, 255]``.
    """
    if not strength >= 0:
        raise InvalidArgumentError(f"noise strength must be non-negative, got {strength}")
    if strength == 0:
        return cipher.replace(cipher.hidden.copy())
    rng = substream(seed, "noise")
    h = cipher.hidden
    if cipher.host_embedded:
        noisy = np.clip(h + strength * rng.random(h.shape), 0.0, 255.0)
    else:
        noisy = h + strength * (rng.random(h.shape) + 1j * rng.random(h.shape))
    return cipher.replace(noisy)


def _default_region(shape, area):
    # Smallest near-square top-left block holding `area` pixels, filled row by row.
    rows, cols = shape
    h = min(rows, math.isqrt(area - 1) + 1)
    w = -(-area // h)
    if w > cols:
        w = cols
        h = -(-area // w)
    mask = np.zeros(shape, dtype=bool)
    block = np.zeros(h * w, dtype=bool)
    block[:area] = True
    mask[:h, :w] = block.reshape(h, w)
    return mask


def crop_pixels(cipher: CipherBundle, fraction: float, region: tuple | None = None) -> CipherBundle:
    """Zero ``round(fraction * size)`` values of the cipher array.

    Without ``region`` a top-left near-square block is used. A custom
    ``region = (row, col, height, width)`` must lie inside the array and
    cover exactly that many values.
    """
    if not 0 < fraction < 1:
        raise InvalidArgumentError(f"crop fraction must lie in (0, 1), got {fraction}")
    h = cipher.hidden
    area = int(round(fraction * h.size))
    if area < 1:
        raise InvalidArgumentError(f"crop fraction {fraction} removes no pixels")
    if region is None:
        mask = _default_region(h.shape, area)
    else:
        r0, c0, rh, rw = (int(v) for v in region)
        if r0 < 0 or c0 < 0 or rh < 1 or rw < 1 or r0 + rh > h.shape[0] or c0 + rw > h.shape[1]:
            raise InvalidArgumentError(f"crop region {region} lies outside the {h.shape} cipher")
        if rh * rw != area:
            raise InvalidArgumentError(f"crop region covers {rh * rw} values, fraction {fraction} needs {area}")
        mask = np.zeros(h.shape, dtype=bool)
        mask[r0:r0 + rh, c0:c0 + rw] = True
    out = h.copy()
    out[mask] = 0
    return cipher.replace(out)


def perturb_key(keys: KeyBundle, which: int, bit: int = 0) -> KeyBundle:
    """Return keys with one component changed.

    ``which`` = 1, 3, 4 flip bit ``bit`` of the SRM, theta or omega seed;
    2 adds one Arnold iteration; 5 shifts both FRFT orders by 0.1.
    """
    if not 0 <= bit < 64:
        raise InvalidArgumentError(f"bit must lie in [0, 64), got {bit}")
    flip = 1 << bit
    if which == 1:
        return replace(keys, srm_seed=keys.srm_seed ^ flip)
    if which == 2:
        return replace(keys, arnold_iterations=keys.arnold_iterations + 1)
    if which == 3:
        return replace(keys, theta_seed=keys.theta_seed ^ flip)
    if which == 4:
        return replace(keys, omega_seed=keys.omega_seed ^ flip)
    if which == ORDER_KEY:
        return replace(keys, alpha=keys.alpha + ORDER_SHIFT, beta=keys.beta + ORDER_SHIFT)
    raise InvalidArgumentError(f"key index must be 1-4 or {ORDER_KEY}, got {which!r}")


def standard_suite(noise_seed: int = 0) -> list[AttackSpec]:
    """Noise at strength 1, the four crop fractions, and every wrong key."""
    suite = [AttackSpec("noise", 1.0, seed=noise_seed)]
    suite += [AttackSpec("crop", f) for f in (0.20, 0.25, 0.50, 0.75)]
    suite += [AttackSpec("wrong_key", k) for k in (1, 2, 3, 4, ORDER_KEY)]
    return suite


@dataclass(frozen=True)
class BenchRow:
    attack: str
    param: str
    psnr_db: float
    seconds: float

    def csv(self, timing: bool = True) -> str:
        return f"{self.attack},{self.param},{self.psnr_db:.4f},{self.seconds if timing else 0.0:.4f}"


def run_bench(image, keys: KeyBundle, attacks=(), cfg: SolverConfig = SolverConfig(), host=None) -> list[BenchRow]:
    """Encrypt once, then decrypt after each attack; first row is the baseline."""
    image = np.asarray(image, dtype=float)
    cipher = encrypt(image, keys, host)
    rows = []

    def timed(attack, param, c, k):
        t0 = time.perf_counter()
        rec = decrypt(c, k, host, cfg)
        rows.append(BenchRow(attack, param, psnr(image, rec), time.perf_counter() - t0))

    timed("none", "0", cipher, keys)
    for spec in attacks:
        if spec.kind == "noise":
            timed("noise", spec.param, add_noise(cipher, spec.strength, spec.seed), keys)
        elif spec.kind == "crop":
            timed("crop", spec.param, crop_pixels(cipher, spec.strength, spec.region), keys)
        else:
            timed("wrong_key", spec.param, cipher, perturb_key(keys, int(spec.strength)))
    return rows


def format_csv(rows, timing: bool = True) -> str:
    """CSV text with LF line endings; ``timing=False`` zeroes the seconds column."""
    buf = io.StringIO()
    buf.write(CSV_HEADER + "\n")
    for row in rows:
        buf.write(row.csv(timing) + "\n")
    return buf.getvalue()
