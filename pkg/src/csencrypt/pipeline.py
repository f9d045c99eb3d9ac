"""Encrypt/decrypt orchestration, key generation and PSNR.

Encryption runs, in order:

1. scrambled partial-FFT sensing (key 1: ``srm_seed`` and ``rate``),
2. row-major reshape of the ``M x N`` measurements to ``S x S``,
3. Arnold scrambling (key 2: ``arnold_iterations``),
4. fractional-domain DRPE (keys 3 and 4: ``theta_seed``, ``omega_seed``,
   with orders ``alpha`` and ``beta``),
5. optional blending into a public host raster.

Decryption reverses steps 5 to 2 exactly and recovers the image with TwIST.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np

from .drpe import DEFAULT_GAMMA, HostEmbedding, PhaseMask, drpe_decode, drpe_encode, embed_host, extract_host
from .errors import InvalidArgumentError
from .recovery import SolverConfig, twist_run
from .rng import PRNG_ID, check_seed, derive_seed, substream
from .sensing import Measurements, feasible_rates, measurement_count, parse_rate, srm_forward, srm_new
from .transforms.arnold import ArnoldKey, arnold, arnold_inverse
from .transforms.frft import canonical_order
from .transforms.wavelet import WaveletSpec

__all__ = ["KeyBundle", "CipherBundle", "keygen", "encrypt", "decrypt", "decrypt_result", "psnr", "KEY_VERSION"]

KEY_VERSION = "cskeys-v1"

# keygen draws FRFT orders and Arnold iterations from these ranges.
ORDER_RANGE = (0.3, 1.7)
ARNOLD_RANGE = (1, 50)


@dataclass(frozen=True)
class KeyBundle:
    """All secret parameters of one encryption."""

    srm_seed: int
    rate: Fraction
    arnold_iterations: int
    theta_seed: int
    omega_seed: int
    alpha: float
    beta: float
    gamma: float = DEFAULT_GAMMA
    wavelet_levels: int = 3
    version: str = KEY_VERSION
    prng_id: str = PRNG_ID

    def __post_init__(self):
        object.__setattr__(self, "rate", parse_rate(self.rate))
        for name in ("srm_seed", "theta_seed", "omega_seed"):
            check_seed(getattr(self, name))
        ArnoldKey(self.arnold_iterations, 1)
        canonical_order(self.alpha)
        canonical_order(self.beta)
        if not 0 < self.gamma <= 1:
            raise InvalidArgumentError(f"gamma must lie in (0, 1], got {self.gamma}")
        WaveletSpec(self.wavelet_levels)
        if self.version != KEY_VERSION:
            raise InvalidArgumentError(f"unsupported key version {self.version!r}")
        if self.prng_id != PRNG_ID:
            raise InvalidArgumentError(f"key was generated with PRNG {self.prng_id!r}, this build uses {PRNG_ID!r}")

    def check_side(self, side: int) -> int:
        """Validate the key against an image side; returns the reshape side ``S``."""
        spec = WaveletSpec(self.wavelet_levels)
        if side % (1 << spec.levels):
            raise InvalidArgumentError(
                f"image side {side} is not divisible by 2**wavelet_levels = {1 << spec.levels}"
            )
        m = measurement_count(side, self.rate)
        s = math.isqrt(m * side)
        if s * s != m * side:
            raise InvalidArgumentError(
                f"rate {self.rate} at side {side} gives M*N = {m * side}, not a perfect square; "
                f"feasible rates: {', '.join(str(r) for r in feasible_rates(side))}"
            )
        return s


@dataclass
class CipherBundle:
    """Encrypted payload plus the public metadata needed to decrypt it.

    ``hidden`` is the host-blended raster when ``embedding`` is set,
    otherwise the raw complex ``meas_side x meas_side`` field.
    """

    hidden: np.ndarray
    side: int
    meas_side: int
    embedding: HostEmbedding | None = None

    def __post_init__(self):
        if self.embedding is None:
            if self.hidden.shape != (self.meas_side, self.meas_side):
                raise InvalidArgumentError(
                    f"raw cipher field has shape {self.hidden.shape}, expected {(self.meas_side,) * 2}"
                )
        elif self.hidden.ndim != 2:
            raise InvalidArgumentError("host-embedded cipher must be a 2-D raster")

    @property
    def host_embedded(self) -> bool:
        return self.embedding is not None

    def replace(self, hidden) -> "CipherBundle":
        return replace(self, hidden=hidden)


def _keys_for(keys: KeyBundle, side: int):
    s = keys.check_side(side)
    op = srm_new(side, keys.rate, keys.srm_seed)
    return (
        s,
        op,
        ArnoldKey(keys.arnold_iterations, s),
        PhaseMask(keys.theta_seed, s),
        PhaseMask(keys.omega_seed, s),
    )


def keygen(side: int, rate, master_seed: int, *, gamma: float = DEFAULT_GAMMA, wavelet_levels: int = 3) -> KeyBundle:
    """Derive a full key bundle from one master seed.

    Raises :class:`InvalidArgumentError`, listing the feasible rates, when
    ``rate * side**2`` is not a perfect square.
    """
    master_seed = check_seed(master_seed)
    r = parse_rate(rate)
    draws = substream(master_seed, "keygen")
    alpha, beta = draws.uniform(*ORDER_RANGE, size=2)
    iterations = int(draws.integers(ARNOLD_RANGE[0], ARNOLD_RANGE[1], endpoint=True))
    keys = KeyBundle(
        srm_seed=derive_seed(master_seed, "srm"),
        rate=r,
        arnold_iterations=iterations,
        theta_seed=derive_seed(master_seed, "theta"),
        omega_seed=derive_seed(master_seed, "omega"),
        alpha=float(alpha),
        beta=float(beta),
        gamma=gamma,
        wavelet_levels=wavelet_levels,
    )
    keys.check_side(side)
    return keys


def _as_image(image) -> np.ndarray:
    x = np.asarray(image, dtype=float)
    if x.ndim != 2 or x.shape[0] != x.shape[1]:
        raise InvalidArgumentError(f"image must be square, got shape {x.shape}")
    return x


def encrypt(image, keys: KeyBundle, host=None) -> CipherBundle:
    """Encrypt a square grayscale image.

    Parameters
    ----------
    image : array_like
        ``N x N`` real raster in ``[0, 255]``.
    keys : KeyBundle
        Secret keys; ``keys.rate * N**2`` must be a perfect square.
    host : array_like, optional
        Public carrier raster of shape ``(2S, S)`` or ``(S, 2S)``.
    """
    x = _as_image(image)
    n = x.shape[0]
    s, op, akey, theta, omega = _keys_for(keys, n)
    y = srm_forward(x, op).values
    field_ = arnold(y.reshape(s, s), akey)
    cipher = drpe_encode(field_, theta, omega, keys.alpha, keys.beta)
    if host is None:
        return CipherBundle(hidden=cipher, side=n, meas_side=s)
    hidden, meta = embed_host(cipher, host, keys.gamma)
    return CipherBundle(hidden=hidden, side=n, meas_side=s, embedding=meta)


def recover_measurements(cipher: CipherBundle, keys: KeyBundle, host=None) -> tuple[Measurements, object]:
    """Undo host blending, DRPE and Arnold; returns measurements and operator."""
    s, op, akey, theta, omega = _keys_for(keys, cipher.side)
    if s != cipher.meas_side:
        raise InvalidArgumentError(f"keys give reshape side {s} but the cipher records {cipher.meas_side}")
    if cipher.embedding is not None:
        if host is None:
            raise InvalidArgumentError("cipher is host-embedded; the host image is required to decrypt")
        field_ = extract_host(cipher.hidden, host, cipher.embedding, s)
    else:
        field_ = np.asarray(cipher.hidden, dtype=complex)
    scrambled = drpe_decode(field_, theta, omega, keys.alpha, keys.beta)
    y = arnold_inverse(scrambled, akey).reshape(op.m, cipher.side)
    return Measurements(values=y, side=cipher.side, rate=op.rate), op


def decrypt_result(cipher: CipherBundle, keys: KeyBundle, host=None, cfg: SolverConfig = SolverConfig(), **kwargs):
    """Like :func:`decrypt` but returns the solver's full result object."""
    meas, op = recover_measurements(cipher, keys, host)
    return twist_run(meas, op, WaveletSpec(keys.wavelet_levels), cfg, **kwargs)


def decrypt(cipher: CipherBundle, keys: KeyBundle, host=None, cfg: SolverConfig = SolverConfig(), **kwargs) -> np.ndarray:
    """Decrypt to an ``N x N`` image in ``[0, 255]``."""
    return decrypt_result(cipher, keys, host, cfg, **kwargs).image


def psnr(a, b) -> float:
    """Peak signal-to-noise ratio in dB with peak 255; ``inf`` for equal inputs."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise InvalidArgumentError(f"shape mismatch {a.shape} vs {b.shape}")
    mse = float(np.mean((a - b) ** 2))
    if mse == 0:
        return math.inf
    return 10.0 * math.log10(255.0**2 / mse)
