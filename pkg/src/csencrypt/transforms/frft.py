"""Discrete fractional Fourier transform.

The transform of order ``a`` is the matrix power ``F**a`` of the centered
unitary DFT ``F``, built from an orthonormal set of DFT eigenvectors that
approximate Hermite-Gauss functions (the Candan / Pei construction). Because
every order shares one eigenbasis, orders add exactly:
``frft1(frft1(x, a), b) == frft1(x, a + b)`` up to rounding.
"""

from __future__ import annotations

import threading
from functools import lru_cache

import numpy as np

from ..errors import InvalidArgumentError

__all__ = ["frft1", "frft2", "frft_matrix", "centered_dft_matrix", "canonical_order"]

_lock = threading.Lock()
_matrix_cache: dict[tuple[int, float], np.ndarray] = {}
_MAX_CACHED = 64


def canonical_order(order: float) -> float:
    """Reduce an order to the half-open interval ``(-2, 2]``."""
    a = float(order)
    if not np.isfinite(a):
        raise InvalidArgumentError(f"FRFT order must be finite, got {order!r}")
    a = np.fmod(a, 4.0)
    if a > 2.0:
        a -= 4.0
    elif a <= -2.0:
        a += 4.0
    return float(a)


def centered_dft_matrix(n: int) -> np.ndarray:
    """Dense unitary DFT with the zero index at ``n // 2`` on both axes."""
    k = np.arange(n) - n // 2
    return np.exp(-2j * np.pi * np.outer(k, k) / n) / np.sqrt(n)


@lru_cache(maxsize=32)
def _hermite_basis(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Hermite-ordered eigenvectors of the (uncentered) unitary DFT.

    Returns ``(vectors, orders)`` where column ``j`` of ``vectors`` has DFT
    eigenvalue ``(-1j) ** orders[j]``.
    """
    # S commutes with the DFT; its eigenvectors split into even and odd
    # subspaces, handled separately so degeneracies never mix parities.
    idx = np.arange(n)
    s = np.diag(2.0 * np.cos(2.0 * np.pi * idx / n) - 4.0)
    s[idx, (idx + 1) % n] += 1.0
    s[idx, (idx - 1) % n] += 1.0

    h = n // 2
    # P maps the full space onto even (first block) and odd (second) parts.
    p = np.zeros((n, n))
    p[0, 0] = 1.0
    r2 = 1.0 / np.sqrt(2.0)
    for k in range(1, (n - 1) // 2 + 1):
        p[k, k] = r2
        p[k, n - k] = r2
        p[n - k, k] = r2
        p[n - k, n - k] = -r2
    if n % 2 == 0:
        p[h, h] = 1.0
    n_even = n // 2 + 1
    cs = p @ s @ p.T
    ev_vals, ev_vecs = np.linalg.eigh(cs[:n_even, :n_even])
    od_vals, od_vecs = np.linalg.eigh(cs[n_even:, n_even:])
    ev_vecs = ev_vecs[:, ::-1]
    od_vecs = od_vecs[:, ::-1]

    even = p.T @ np.vstack([ev_vecs, np.zeros((n - n_even, n_even))])
    odd = p.T @ np.vstack([np.zeros((n_even, n - n_even)), od_vecs])
    return _interleave(even, odd, n)


def _interleave(even: np.ndarray, odd: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    n_even = even.shape[1]
    vectors = np.empty((n, n))
    orders = np.empty(n, dtype=np.int64)
    if n % 2:
        vectors[:, 0::2] = even
        vectors[:, 1::2] = odd
        orders[:] = np.arange(n)
    else:
        # Even n: orders 0..n-2 plus n; order n-1 does not occur.
        vectors[:, 0:n - 1:2] = even[:, : n_even - 1]
        vectors[:, 1:n - 1:2] = odd
        vectors[:, n - 1] = even[:, n_even - 1]
        orders[: n - 1] = np.arange(n - 1)
        orders[n - 1] = n
    return vectors, orders


def frft_matrix(n: int, order: float) -> np.ndarray:
    """Dense ``n x n`` centered discrete FRFT matrix of the given order.

    Matrices are cached per ``(n, order)`` and returned read-only.
    """
    if n < 1:
        raise InvalidArgumentError(f"FRFT length must be positive, got {n}")
    a = canonical_order(order)
    key = (int(n), a)
    with _lock:
        cached = _matrix_cache.get(key)
    if cached is not None:
        return cached

    if a == 0.0:
        mat = np.eye(n, dtype=complex)
    elif a == 2.0:
        # Parity operator of the centered grid: x[k] -> x[-k].
        mat = np.zeros((n, n), dtype=complex)
        p = np.arange(n)
        mat[p, (2 * (n // 2) - p) % n] = 1.0
    else:
        vectors, orders = _hermite_basis(n)
        phases = np.exp(-0.5j * np.pi * a * orders)
        plain = (vectors * phases) @ vectors.T
        shift = n // 2
        mat = np.roll(plain, (shift, shift), axis=(0, 1))
    mat.setflags(write=False)
    with _lock:
        if len(_matrix_cache) >= _MAX_CACHED:
            _matrix_cache.pop(next(iter(_matrix_cache)))
        _matrix_cache.setdefault(key, mat)
        return _matrix_cache[key]


def frft1(signal, order: float) -> np.ndarray:
    """Discrete fractional Fourier transform of a 1-D signal.

    Parameters
    ----------
    signal : array_like
        Complex or real vector of length ``n >= 1``.
    order : float
        Transform order. ``0`` is the identity, ``1`` the centered unitary
        DFT, ``-a`` the inverse of ``a``; orders are taken modulo 4.

    Returns
    -------
    numpy.ndarray
        Complex vector of length ``n``.
    """
    x = np.asarray(signal)
    if x.ndim != 1 or x.size == 0:
        raise InvalidArgumentError("frft1 expects a non-empty 1-D signal")
    if canonical_order(order) == 0.0:
        return x.astype(complex, copy=True)
    return frft_matrix(x.size, order) @ x


def frft2(field, order_rows: float, order_cols: float) -> np.ndarray:
    """Separable 2-D FRFT of a square field.

    Every row is transformed with ``order_rows``, then every column with
    ``order_cols``.
    """
    f = np.asarray(field)
    if f.ndim != 2 or f.shape[0] != f.shape[1] or f.size == 0:
        raise InvalidArgumentError(f"frft2 expects a square 2-D field, got shape {f.shape}")
    n = f.shape[0]
    out = f.astype(complex, copy=True)
    if canonical_order(order_rows) != 0.0:
        out = out @ frft_matrix(n, order_rows).T
    if canonical_order(order_cols) != 0.0:
        out = frft_matrix(n, order_cols) @ out
    return out
