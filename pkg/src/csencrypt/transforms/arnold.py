"""Arnold cat map scrambling of square arrays.

One step moves the entry at (row x, column y) to
``((x + y) mod N, (x + 2y) mod N)``. The map is a pure permutation of
positions, so it works on any dtype and is exactly invertible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidArgumentError

__all__ = ["ArnoldKey", "ARNOLD_MATRIX", "arnold", "arnold_inverse", "arnold_period"]

ARNOLD_MATRIX = ((1, 1), (1, 2))


@dataclass(frozen=True)
class ArnoldKey:
    iterations: int
    side: int

    def __post_init__(self):
        if int(self.iterations) != self.iterations or self.iterations < 0:
            raise InvalidArgumentError(f"Arnold iterations must be a non-negative integer, got {self.iterations}")
        if int(self.side) != self.side or self.side < 1:
            raise InvalidArgumentError(f"Arnold side must be a positive integer, got {self.side}")


def _matpow_mod(n_iter: int, mod: int):
    result = ((1, 0), (0, 1))
    base = ARNOLD_MATRIX
    k = n_iter

    def mul(p, q):
        return (
            ((p[0][0] * q[0][0] + p[0][1] * q[1][0]) % mod, (p[0][0] * q[0][1] + p[0][1] * q[1][1]) % mod),
            ((p[1][0] * q[0][0] + p[1][1] * q[1][0]) % mod, (p[1][0] * q[0][1] + p[1][1] * q[1][1]) % mod),
        )

    while k:
        if k & 1:
            result = mul(result, base)
        base = mul(base, base)
        k >>= 1
    return result


def _targets(key: ArnoldKey):
    (a, b), (c, d) = _matpow_mod(key.iterations, key.side)
    x, y = np.meshgrid(np.arange(key.side), np.arange(key.side), indexing="ij")
    return (a * x + b * y) % key.side, (c * x + d * y) % key.side


def _check(field, key: ArnoldKey) -> np.ndarray:
    f = np.asarray(field)
    if f.ndim != 2 or f.shape != (key.side, key.side):
        raise InvalidArgumentError(f"field shape {f.shape} does not match Arnold side {key.side}")
    return f


def arnold(field, key: ArnoldKey) -> np.ndarray:
    """Apply the cat map ``key.iterations`` times."""
    f = _check(field, key)
    if key.iterations == 0:
        return f.copy()
    tx, ty = _targets(key)
    out = np.empty_like(f)
    out[tx, ty] = f
    return out


def arnold_inverse(field, key: ArnoldKey) -> np.ndarray:
    """Undo :func:`arnold` with the same key."""
    f = _check(field, key)
    if key.iterations == 0:
        return f.copy()
    tx, ty = _targets(key)
    return f[tx, ty]


def arnold_period(side: int) -> int:
    """Smallest ``p >= 1`` with ``A**p == I (mod side)``, by brute force."""
    if side < 1:
        raise InvalidArgumentError("side must be positive")
    if side == 1:
        return 1
    m = ((1, 0), (0, 1))
    p = 0
    while True:
        p += 1
        m = ((m[0][0] + m[1][0]) % side, (m[0][1] + m[1][1]) % side), \
            ((m[0][0] + 2 * m[1][0]) % side, (m[0][1] + 2 * m[1][1]) % side)
        if m == ((1, 0), (0, 1)):
            return p
