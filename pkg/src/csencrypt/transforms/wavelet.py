"""CDF 9/7 biorthogonal wavelet via lifting, with symmetric boundaries.

Coefficients use the nested quadrant layout: after each level the
approximation sits in the top-left block, detail bands fill the rest.
Scaling makes the low-pass DC gain and high-pass Nyquist gain both
``sqrt(2)``, so the transform is close to orthonormal.

Besides the analysis/synthesis pair, :func:`idwt2_adjoint` gives the exact
transpose of :func:`idwt2`; for a biorthogonal wavelet it differs from
:func:`dwt2`, and gradient-based solvers need the transpose.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidArgumentError

__all__ = ["WaveletSpec", "dwt2", "idwt2", "idwt2_adjoint", "approx_slice", "dwt1", "idwt1", "synthesis_matrix"]

# Daubechies-Sweldens lifting factors.
ALPHA = -1.586134342059924
BETA = -0.052980118572961
GAMMA = 0.882911075530934
DELTA = 0.443506852043971
KAPPA = 1.149604398860241


@dataclass(frozen=True)
class WaveletSpec:
    """Decomposition depth and boundary rule for the 9/7 transform."""

    levels: int = 3
    boundary: str = "symmetric"

    def __post_init__(self):
        if int(self.levels) != self.levels or self.levels < 1:
            raise InvalidArgumentError(f"wavelet levels must be a positive integer, got {self.levels}")
        if self.boundary != "symmetric":
            raise InvalidArgumentError(f"unsupported boundary rule {self.boundary!r}")

    def check(self, shape) -> None:
        if len(shape) != 2 or shape[0] != shape[1]:
            raise InvalidArgumentError(f"wavelet input must be square, got shape {tuple(shape)}")
        n = shape[0]
        if n % (1 << self.levels):
            raise InvalidArgumentError(
                f"2**levels = {1 << self.levels} must divide the image side {n}"
            )


# Neighbour sums along the last axis. ``_fwd`` pairs i with i+1 (mirrored
# at the right edge), ``_bwd`` pairs i with i-1 (mirrored at the left).

def _fwd(v):
    out = v.copy()
    out[..., :-1] += v[..., 1:]
    out[..., -1] += v[..., -1]
    return out


def _bwd(v):
    out = v.copy()
    out[..., 1:] += v[..., :-1]
    out[..., 0] += v[..., 0]
    return out


def _fwd_t(v):
    out = v.copy()
    out[..., 1:] += v[..., :-1]
    out[..., -1] += v[..., -1]
    return out


def _bwd_t(v):
    out = v.copy()
    out[..., :-1] += v[..., 1:]
    out[..., 0] += v[..., 0]
    return out


def _analyze(x):
    s = x[..., 0::2].astype(float)
    d = x[..., 1::2].astype(float)
    d = d + ALPHA * _fwd(s)
    s = s + BETA * _bwd(d)
    d = d + GAMMA * _fwd(s)
    s = s + DELTA * _bwd(d)
    return s * KAPPA, d / KAPPA


def _synthesize(s, d):
    s = s / KAPPA
    d = d * KAPPA
    s = s - DELTA * _bwd(d)
    d = d - GAMMA * _fwd(s)
    s = s - BETA * _bwd(d)
    d = d - ALPHA * _fwd(s)
    x = np.empty(s.shape[:-1] + (2 * s.shape[-1],))
    x[..., 0::2] = s
    x[..., 1::2] = d
    return x


def _synthesize_t(x):
    s = x[..., 0::2].astype(float)
    d = x[..., 1::2].astype(float)
    s = s - ALPHA * _fwd_t(d)
    d = d - BETA * _bwd_t(s)
    s = s - GAMMA * _fwd_t(d)
    d = d - DELTA * _bwd_t(s)
    return s / KAPPA, d * KAPPA


def _rows(block, fn):
    s, d = fn(block)
    return np.concatenate([s, d], axis=-1)


def _cols(block, fn):
    return _rows(block.T, fn).T


def _rows_inv(block, fn):
    h = block.shape[-1] // 2
    return fn(block[..., :h], block[..., h:])


def _cols_inv(block, fn):
    return _rows_inv(block.T, fn).T


def dwt2(image, spec: WaveletSpec = WaveletSpec()) -> np.ndarray:
    """Forward 2-D 9/7 transform (rows, then columns, at every level)."""
    out = np.array(image, dtype=float)
    spec.check(out.shape)
    n = out.shape[0]
    for lev in range(spec.levels):
        m = n >> lev
        blk = out[:m, :m]
        blk = _rows(blk, _analyze)
        out[:m, :m] = _cols(blk, _analyze)
    return out


def idwt2(coeffs, spec: WaveletSpec = WaveletSpec()) -> np.ndarray:
    """Inverse of :func:`dwt2`."""
    out = np.array(coeffs, dtype=float)
    spec.check(out.shape)
    n = out.shape[0]
    for lev in reversed(range(spec.levels)):
        m = n >> lev
        blk = _cols_inv(out[:m, :m], _synthesize)
        out[:m, :m] = _rows_inv(blk, _synthesize)
    return out


def idwt2_adjoint(image, spec: WaveletSpec = WaveletSpec()) -> np.ndarray:
    """Transpose of :func:`idwt2` as a linear map on ``N x N`` arrays."""
    out = np.array(image, dtype=float)
    spec.check(out.shape)
    n = out.shape[0]
    for lev in range(spec.levels):
        m = n >> lev
        blk = _rows(out[:m, :m], _synthesize_t)
        out[:m, :m] = _cols(blk, _synthesize_t)
    return out


def approx_slice(n: int, spec: WaveletSpec) -> tuple[slice, slice]:
    """Index of the coarsest approximation band in an ``n x n`` layout."""
    m = n >> spec.levels
    return slice(0, m), slice(0, m)


def _check_1d(n: int, levels: int) -> None:
    if levels < 1 or n % (1 << levels):
        raise InvalidArgumentError(f"2**levels = {1 << levels} must divide the signal length {n}")


def idwt1(coeffs, levels: int = 1) -> np.ndarray:
    """1-D synthesis; ``coeffs`` uses the nested ``[approx | details]`` layout."""
    out = np.array(coeffs, dtype=float)
    n = out.shape[-1]
    _check_1d(n, levels)
    for lev in reversed(range(levels)):
        m = n >> lev
        out[..., :m] = _rows_inv(out[..., :m], _synthesize)
    return out


def dwt1(signal, levels: int = 1) -> np.ndarray:
    """1-D analysis, inverse of :func:`idwt1`."""
    out = np.array(signal, dtype=float)
    n = out.shape[-1]
    _check_1d(n, levels)
    for lev in range(levels):
        m = n >> lev
        out[..., :m] = _rows(out[..., :m], _analyze)
    return out


def synthesis_matrix(n: int, levels: int = 1) -> np.ndarray:
    """Dense ``n x n`` matrix whose columns are the 1-D synthesis atoms."""
    return idwt1(np.eye(n), levels).T
