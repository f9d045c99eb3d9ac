"""Double random phase encoding in the fractional Fourier domain.

Encoding multiplies the field by a spatial phase mask, applies a 2-D FRFT of
order ``alpha``, multiplies by a second mask and applies a 2-D FRFT of order
``beta``. Every stage is unitary, so decoding is the exact reverse chain.

The complex cipher can then be hidden in a public host raster: real and
imaginary parts are affinely mapped to ``[0, 255]``, tiled next to each
other and blended with the host.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import InvalidArgumentError
from .rng import check_seed, substream
from .transforms.frft import frft2

__all__ = [
    "PhaseMask",
    "HostEmbedding",
    "drpe_encode",
    "drpe_decode",
    "embed_host",
    "extract_host",
    "DEFAULT_GAMMA",
]

DEFAULT_GAMMA = 0.25


@dataclass(frozen=True)
class PhaseMask:
    """Random phase key; ``values`` are uniform in ``[0, 1)``."""

    seed: int
    side: int

    def __post_init__(self):
        check_seed(self.seed)
        if int(self.side) != self.side or self.side < 1:
            raise InvalidArgumentError(f"mask side must be a positive integer, got {self.side}")

    @cached_property
    def values(self) -> np.ndarray:
        v = substream(self.seed, "phase-mask").random((self.side, self.side))
        v.setflags(write=False)
        return v

    def phasor(self, sign: int = 1) -> np.ndarray:
        return np.exp(sign * 2j * np.pi * self.values)


def _check_sides(field, *masks) -> np.ndarray:
    f = np.asarray(field)
    if f.ndim != 2 or f.shape[0] != f.shape[1]:
        raise InvalidArgumentError(f"DRPE expects a square field, got shape {f.shape}")
    for m in masks:
        if m.side != f.shape[0]:
            raise InvalidArgumentError(f"mask side {m.side} does not match field side {f.shape[0]}")
    return f


def drpe_encode(field, theta: PhaseMask, omega: PhaseMask, alpha: float, beta: float) -> np.ndarray:
    """Encrypt a square complex field with masks ``theta``, ``omega``."""
    f = _check_sides(field, theta, omega)
    stage = frft2(f * theta.phasor(), alpha, alpha)
    return frft2(stage * omega.phasor(), beta, beta)


def drpe_decode(cipher, theta: PhaseMask, omega: PhaseMask, alpha: float, beta: float) -> np.ndarray:
    """Inverse of :func:`drpe_encode` given the same keys and orders."""
    c = _check_sides(cipher, theta, omega)
    stage = frft2(c, -beta, -beta) * omega.phasor(-1)
    return frft2(stage, -alpha, -alpha) * theta.phasor(-1)


@dataclass(frozen=True)
class HostEmbedding:
    """Blend weight and per-plane affine maps used when hiding a cipher."""

    gamma: float
    re_offset: float
    re_scale: float
    im_offset: float
    im_scale: float

    def __post_init__(self):
        if not 0 < self.gamma <= 1:
            raise InvalidArgumentError(f"gamma must lie in (0, 1], got {self.gamma}")
        if not (self.re_scale > 0 and self.im_scale > 0):
            raise InvalidArgumentError("normalization scales must be strictly positive")


def _plane_layout(host_shape, side):
    rows, cols = host_shape
    if rows >= 2 * side and cols >= side:
        return "vertical"
    if rows >= side and cols >= 2 * side:
        return "horizontal"
    raise InvalidArgumentError(
        f"host of shape {host_shape} cannot hold two {side}x{side} planes; need ({2 * side}, {side}) or ({side}, {2 * side})"
    )


def _plane_slices(layout, side):
    if layout == "vertical":
        return (slice(0, side), slice(0, side)), (slice(side, 2 * side), slice(0, side))
    return (slice(0, side), slice(0, side)), (slice(0, side), slice(side, 2 * side))


def _affine(part):
    lo = float(part.min())
    span = float(part.max()) - lo
    scale = span / 255.0 if span > 0 else 1.0
    return lo, scale


def embed_host(cipher, host, gamma: float = DEFAULT_GAMMA):
    """Hide a complex ``S x S`` cipher in a host raster.

    Parameters
    ----------
    cipher : array_like
        Complex square field.
    host : array_like
        Real raster with room for two ``S x S`` planes stacked vertically
        (``2S x S``) or side by side (``S x 2S``). Larger hosts are allowed;
        the planes occupy the top-left corner.
    gamma : float
        Blend weight in ``(0, 1]``; the output is
        ``(1 - gamma) * host + gamma * planes`` inside the plane area.

    Returns
    -------
    hidden : numpy.ndarray
        Float raster with the host's shape.
    meta : HostEmbedding
        Parameters needed by :func:`extract_host`.
    """
    c = np.asarray(cipher)
    if c.ndim != 2 or c.shape[0] != c.shape[1]:
        raise InvalidArgumentError(f"cipher must be square, got shape {c.shape}")
    h = np.asarray(host, dtype=float)
    if h.ndim != 2:
        raise InvalidArgumentError("host must be a 2-D raster")
    side = c.shape[0]
    layout = _plane_layout(h.shape, side)
    re_off, re_sc = _affine(c.real)
    im_off, im_sc = _affine(c.imag)
    meta = HostEmbedding(gamma=float(gamma), re_offset=re_off, re_scale=re_sc, im_offset=im_off, im_scale=im_sc)
    out = h.copy()
    s_re, s_im = _plane_slices(layout, side)
    g = meta.gamma
    out[s_re] = (1 - g) * h[s_re] + g * (c.real - re_off) / re_sc
    out[s_im] = (1 - g) * h[s_im] + g * (c.imag - im_off) / im_sc
    return out, meta


def extract_host(hidden, host, meta: HostEmbedding, side: int | None = None) -> np.ndarray:
    """Recover the complex cipher from a hidden raster and its public host.

    ``side`` defaults to the largest square that fits the host layout.
    """
    hid = np.asarray(hidden, dtype=float)
    h = np.asarray(host, dtype=float)
    if hid.shape != h.shape or hid.ndim != 2:
        raise InvalidArgumentError(f"hidden raster {hid.shape} and host {h.shape} must share a 2-D shape")
    if side is None:
        side = min(max(h.shape) // 2, min(h.shape))
    layout = _plane_layout(h.shape, side)
    s_re, s_im = _plane_slices(layout, side)
    g = meta.gamma
    re = (hid[s_re] - (1 - g) * h[s_re]) / g * meta.re_scale + meta.re_offset
    im = (hid[s_im] - (1 - g) * h[s_im]) / g * meta.im_scale + meta.im_offset
    return re + 1j * im
