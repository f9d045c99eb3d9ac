"""Structurally random sensing: permute, unitary FFT, keep a subset of rows.

Each image column ``x_c`` is sensed independently as ``y_c = D F P x_c``,
so an ``N x N`` image yields an ``M x N`` complex measurement matrix.
The permutation ``P`` and row set ``D`` are pure functions of
``(seed, N, rate)`` and together form the first secret key.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import InvalidArgumentError
from .rng import check_seed, substream

__all__ = [
    "SrmOperator",
    "Measurements",
    "srm_new",
    "srm_forward",
    "srm_adjoint",
    "srm_matrix",
    "coherence",
    "measurement_count",
    "feasible_rates",
    "parse_rate",
]


def parse_rate(rate) -> Fraction:
    """Exact rational sampling rate from a ``Fraction``, int, or ``"M/N"``."""
    if isinstance(rate, Fraction):
        r = rate
    elif isinstance(rate, int) and not isinstance(rate, bool):
        r = Fraction(rate)
    elif isinstance(rate, str):
        try:
            r = Fraction(rate.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidArgumentError(f"cannot parse rate {rate!r}; expected 'M/N'") from exc
    elif isinstance(rate, float):
        # Floats are only accepted when they are exactly representable
        # as a short fraction (0.25, 0.5 ...).
        r = Fraction(rate).limit_denominator(1 << 16)
        if float(r) != rate:
            raise InvalidArgumentError(f"rate {rate!r} is not an exact rational; pass 'M/N'")
    else:
        raise InvalidArgumentError(f"unsupported rate type {type(rate).__name__}")
    if not 0 < r <= 1:
        raise InvalidArgumentError(f"rate must lie in (0, 1], got {r}")
    return r


def measurement_count(side: int, rate) -> int:
    """Rows kept per column, ``M = round(rate * side)``."""
    return int(round(parse_rate(rate) * side))


def _is_square(k: int) -> bool:
    r = math.isqrt(k)
    return r * r == k


def feasible_rates(side: int) -> list[Fraction]:
    """All rates ``M/side`` for which ``M * side`` is a perfect square."""
    return [Fraction(m, side) for m in range(1, side + 1) if _is_square(m * side)]


@dataclass(frozen=True, eq=False)
class SrmOperator:
    """Scrambled partial-FFT sensing operator ``D F P`` for one column length.

    Attributes
    ----------
    side : int
        Column length ``N``.
    rate : Fraction
        Sampling rate ``M / N``.
    seed : int
        64-bit seed from which ``permutation`` and ``selected_rows`` derive.
    permutation : numpy.ndarray
        ``(P x)[i] = x[permutation[i]]``.
    selected_rows : numpy.ndarray
        Strictly increasing DFT row indices kept by ``D``.
    """

    side: int
    rate: Fraction
    seed: int
    permutation: np.ndarray = field(repr=False)
    selected_rows: np.ndarray = field(repr=False)
    transform: str = "unitary-dft"

    @property
    def m(self) -> int:
        return int(self.selected_rows.size)

    @property
    def meas_side(self) -> int:
        """Side ``S`` of the square that the ``M x N`` measurements reshape to."""
        return math.isqrt(self.m * self.side)

    @property
    def scrambled(self) -> bool:
        return not np.array_equal(self.permutation, np.arange(self.side))


def srm_new(side: int, rate, seed: int, *, scramble: bool = True, require_square: bool = True) -> SrmOperator:
    """Build the sensing operator for key ``(seed, rate)``.

    Parameters
    ----------
    side : int
        Column length ``N >= 2``.
    rate : Fraction, int or str
        Sampling rate ``M/N`` in ``(0, 1]``.
    seed : int
        Unsigned 64-bit key seed.
    scramble : bool
        ``False`` replaces the random permutation by the identity, giving a
        plain partial FFT (used as the unscrambled baseline and in tests).
    require_square : bool
        Enforce that ``M * N`` is a perfect square, which the pipeline's
        square reshape needs.

    Notes
    -----
    The DC row is always kept; the remaining ``M - 1`` rows are drawn
    uniformly without replacement. Without DC the column means lie in the
    operator's null space and cannot be recovered.
    """
    if int(side) != side or side < 2:
        raise InvalidArgumentError(f"side must be an integer >= 2, got {side!r}")
    side = int(side)
    r = parse_rate(rate)
    seed = check_seed(seed)
    m = int(round(r * side))
    if m < 1:
        raise InvalidArgumentError(f"rate {r} keeps no rows at side {side}")
    if require_square and not _is_square(m * side):
        raise InvalidArgumentError(
            f"M*N = {m}*{side} = {m * side} is not a perfect square; "
            f"feasible rates for side {side}: {', '.join(str(f) for f in feasible_rates(side))}"
        )
    if scramble:
        perm = substream(seed, "perm").permutation(side)
    else:
        perm = np.arange(side)
    others = substream(seed, "rows").choice(np.arange(1, side), size=m - 1, replace=False)
    rows = np.sort(np.concatenate([[0], others])).astype(np.int64)
    perm.setflags(write=False)
    rows.setflags(write=False)
    return SrmOperator(side=side, rate=r, seed=seed, permutation=perm, selected_rows=rows)


@dataclass(frozen=True)
class Measurements:
    """Column-wise measurements ``values`` of shape ``(M, N)``."""

    values: np.ndarray
    side: int
    rate: Fraction

    def __post_init__(self):
        m = int(round(self.rate * self.side))
        if self.values.shape != (m, self.side):
            raise InvalidArgumentError(
                f"measurement shape {self.values.shape} does not match ({m}, {self.side})"
            )


def srm_forward(image, op: SrmOperator) -> Measurements:
    """Sense every column of ``image``: ``y_c = D F P x_c``."""
    x = np.asarray(image)
    if x.ndim != 2 or x.shape[0] != op.side:
        raise InvalidArgumentError(f"image with {x.shape[0] if x.ndim else 0} rows does not match operator side {op.side}")
    y = np.fft.fft(x[op.permutation, :], axis=0, norm="ortho")[op.selected_rows, :]
    return Measurements(values=y, side=op.side, rate=op.rate)


def srm_adjoint(meas: Measurements, op: SrmOperator) -> np.ndarray:
    """Apply ``P^T F^H D^T`` column-wise; returns a complex ``N x ncols`` array."""
    y = meas.values if isinstance(meas, Measurements) else np.asarray(meas)
    if y.ndim != 2 or y.shape[0] != op.m:
        raise InvalidArgumentError(f"measurement shape {y.shape} inconsistent with M = {op.m}")
    full = np.zeros((op.side, y.shape[1]), dtype=complex)
    full[op.selected_rows, :] = y
    w = np.fft.ifft(full, axis=0, norm="ortho")
    out = np.empty_like(w)
    out[op.permutation, :] = w
    return out


def srm_matrix(op: SrmOperator) -> np.ndarray:
    """Dense ``M x N`` matrix of the per-column operator."""
    n = op.side
    f = np.exp(-2j * np.pi * np.outer(op.selected_rows, np.arange(n)) / n) / np.sqrt(n)
    p = np.zeros((n, n))
    p[np.arange(n), op.permutation] = 1.0
    return f @ p


def coherence(phi, psi) -> float:
    """Mutual coherence ``sqrt(N) * max |<phi_k, psi_j>|``.

    ``phi_k`` are the sensing functionals (rows of ``phi``), ``psi_j`` the
    columns of ``psi``; both are normalized to unit length first. For two
    orthonormal bases the result lies in ``[1, sqrt(N)]``.
    """
    phi = np.asarray(phi)
    psi = np.asarray(psi)
    if phi.ndim != 2 or psi.ndim != 2 or phi.shape[1] != psi.shape[0]:
        raise InvalidArgumentError(f"incompatible shapes phi {phi.shape} and psi {psi.shape}")
    rn = np.linalg.norm(phi, axis=1, keepdims=True)
    cn = np.linalg.norm(psi, axis=0, keepdims=True)
    if np.any(rn == 0) or np.any(cn == 0):
        raise InvalidArgumentError("coherence is undefined for zero rows or columns")
    gram = (phi / rn) @ (psi / cn)
    return float(np.sqrt(psi.shape[0]) * np.abs(gram).max())
