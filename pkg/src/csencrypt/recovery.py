"""Two-step iterative shrinkage/thresholding (TwIST) recovery.

Solves::

    minimize  0.5 * ||y - Phi W a||^2 + lam * ||a||_1

over real wavelet coefficients ``a``, where ``Phi`` is the sensing operator
and ``W`` the 9/7 synthesis. The image is ``W a``.

The shrinkage operator ``Gamma`` is a proximal-gradient step with step size
``1 / L``, ``L`` an upper estimate of ``||Phi W||^2``; the 9/7 synthesis is
not a tight frame, so a unit step would overshoot.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import DivergenceError, InvalidArgumentError
from .sensing import Measurements, SrmOperator, srm_adjoint, srm_forward
from .transforms.wavelet import WaveletSpec, dwt2, idwt2, idwt2_adjoint

log = logging.getLogger(__name__)

_MAX_BACKTRACK = 8

__all__ = [
    "SolverConfig",
    "CoeffField",
    "SolveResult",
    "soft_threshold",
    "objective",
    "smooth_gradient",
    "default_lambda",
    "lipschitz_bound",
    "twist_solve",
    "twist_run",
]


@dataclass(frozen=True)
class SolverConfig:
    """TwIST parameters.

    ``lam`` is the l1 weight; ``None`` picks ``lam_scale * max|W^T Phi^H y|``.
    ``alpha_step`` and ``beta_step`` are the two-step mixing scalars.
    With ``monotone`` set, a step that raises the objective is replaced by
    a plain shrinkage step.
    """

    lam: float | None = None
    lam_scale: float = 0.001
    alpha_step: float = 1.8
    beta_step: float = 1.0
    max_iters: int = 300
    rel_tol: float = 1e-5
    monotone: bool = True

    def __post_init__(self):
        if self.lam is not None and not self.lam > 0:
            raise InvalidArgumentError(f"lam must be positive, got {self.lam}")
        if not self.lam_scale > 0:
            raise InvalidArgumentError(f"lam_scale must be positive, got {self.lam_scale}")
        if int(self.max_iters) != self.max_iters or self.max_iters < 1:
            raise InvalidArgumentError(f"max_iters must be a positive integer, got {self.max_iters}")
        if not self.rel_tol > 0:
            raise InvalidArgumentError(f"rel_tol must be positive, got {self.rel_tol}")
        if not 0 < self.alpha_step < 2:
            raise InvalidArgumentError(f"alpha_step must lie in (0, 2), got {self.alpha_step}")
        if not 0 < self.beta_step <= 2:
            raise InvalidArgumentError(f"beta_step must lie in (0, 2], got {self.beta_step}")


@dataclass(frozen=True)
class CoeffField:
    """Wavelet coefficients of an ``N x N`` image."""

    values: np.ndarray
    spec: WaveletSpec

    def __post_init__(self):
        self.spec.check(self.values.shape)


@dataclass
class SolveResult:
    image: np.ndarray
    coeffs: np.ndarray
    objectives: list
    iterations: int
    lam: float
    lipschitz: float
    fallbacks: int


def soft_threshold(coeffs, tau: float) -> np.ndarray:
    """Elementwise ``sign(v) * max(|v| - tau, 0)``."""
    if tau < 0:
        raise InvalidArgumentError(f"threshold must be non-negative, got {tau}")
    v = np.asarray(coeffs, dtype=float)
    return np.sign(v) * np.maximum(np.abs(v) - tau, 0.0)


def _values(meas) -> np.ndarray:
    return meas.values if isinstance(meas, Measurements) else np.asarray(meas)


def _check(coeffs, meas, op: SrmOperator, spec: WaveletSpec):
    spec.check(np.shape(coeffs))
    if np.shape(coeffs)[0] != op.side:
        raise InvalidArgumentError(f"coefficient side {np.shape(coeffs)[0]} != operator side {op.side}")
    y = _values(meas)
    if y.shape != (op.m, op.side):
        raise InvalidArgumentError(f"measurement shape {y.shape} != ({op.m}, {op.side})")
    return y


def _forward(a, op, spec):
    return srm_forward(idwt2(a, spec), op).values


def _backward(r, op, spec):
    return idwt2_adjoint(srm_adjoint(r, op).real, spec)


def _l1(a):
    return float(np.abs(a).sum())


def objective(alpha, meas, op: SrmOperator, lam: float, spec: WaveletSpec | None = None) -> float:
    """``0.5 * ||y - Phi W alpha||^2 + lam * ||alpha||_1``."""
    if isinstance(alpha, CoeffField):
        spec = alpha.spec
        alpha = alpha.values
    spec = spec or WaveletSpec()
    y = _check(alpha, meas, op, spec)
    r = y - _forward(alpha, op, spec)
    return 0.5 * float(np.vdot(r, r).real) + lam * _l1(alpha)


def smooth_gradient(alpha, meas, op: SrmOperator, spec: WaveletSpec) -> np.ndarray:
    """Gradient ``W^T Re(Phi^H (Phi W alpha - y))`` of the quadratic term."""
    y = _check(alpha, meas, op, spec)
    return _backward(_forward(alpha, op, spec) - y, op, spec)


def default_lambda(meas, op: SrmOperator, spec: WaveletSpec, scale: float) -> float:
    """``scale * max |W^T Re(Phi^H y)|``."""
    y = _values(meas)
    peak = float(np.abs(_backward(y, op, spec)).max())
    return scale * peak if peak > 0 else scale


def lipschitz_bound(op: SrmOperator, spec: WaveletSpec, iters: int = 40, margin: float = 1.05) -> float:
    """Power-iteration estimate of ``||Phi W||^2``, inflated by ``margin``."""
    v = np.random.default_rng(0x5EED).standard_normal((op.side, op.side))
    v /= np.linalg.norm(v)
    est = 1.0
    for _ in range(iters):
        w = _backward(_forward(v, op, spec), op, spec)
        est = float(np.linalg.norm(w))
        if est == 0:
            return 1.0
        v = w / est
    return est * margin


def twist_run(meas, op: SrmOperator, spec: WaveletSpec = WaveletSpec(), cfg: SolverConfig = SolverConfig(),
              *, x0=None, lipschitz: float | None = None, callback=None) -> SolveResult:
    """Run TwIST and return the full :class:`SolveResult`.

    ``callback(iteration, objective, residual_norm)`` is invoked after every
    accepted iterate.
    """
    a0 = dwt2(srm_adjoint(_values(meas), op).real, spec) if x0 is None else np.array(x0, dtype=float)
    y = _check(a0, meas, op, spec)
    lam = cfg.lam if cfg.lam is not None else default_lambda(y, op, spec, cfg.lam_scale)
    big_l = lipschitz if lipschitz is not None else lipschitz_bound(op, spec)

    def evaluate(a):
        fa = _forward(a, op, spec)
        r = y - fa
        rr = float(np.vdot(r, r).real)
        f = 0.5 * rr + lam * _l1(a)
        if not np.isfinite(f):
            raise DivergenceError("TwIST objective became non-finite")
        return f, r, rr

    def gamma(a, r):
        return soft_threshold(a + _backward(r, op, spec) / big_l, lam / big_l)

    x = a0
    f, r, rr = evaluate(x)
    objectives = [f]
    x_prev = x
    fallbacks = 0
    it = 0
    for it in range(1, cfg.max_iters + 1):
        g = gamma(x, r)
        if it == 1:
            cand = g
        else:
            cand = (1 - cfg.alpha_step) * x_prev + (cfg.alpha_step - cfg.beta_step) * x + cfg.beta_step * g
        f_new, r_new, rr_new = evaluate(cand)
        if cfg.monotone and f_new > f:
            fallbacks += 1
            cand = g
            f_new, r_new, rr_new = evaluate(cand)
            for _ in range(_MAX_BACKTRACK):
                if f_new <= f:
                    break
                # Lipschitz estimate too small: halve the step until IST descends.
                big_l *= 2.0
                cand = gamma(x, r)
                f_new, r_new, rr_new = evaluate(cand)
            else:
                if f_new > f:
                    # Only rounding noise is left; stay put and let the tolerance stop us.
                    cand, f_new, r_new, rr_new = x, f, r, rr
            x_prev = cand
        else:
            x_prev = x
        x = cand
        rel = abs(f - f_new) / max(abs(f), np.finfo(float).tiny)
        f, r, rr = f_new, r_new, rr_new
        objectives.append(f)
        if callback is not None:
            callback(it, f, float(np.sqrt(rr)))
        if rel < cfg.rel_tol:
            break
    log.debug("twist: %d iterations, %d fallbacks, objective %.6g", it, fallbacks, f)
    image = np.clip(idwt2(x, spec), 0.0, 255.0)
    return SolveResult(image=image, coeffs=x, objectives=objectives, iterations=it, lam=lam,
                       lipschitz=big_l, fallbacks=fallbacks)


def twist_solve(meas, op: SrmOperator, spec: WaveletSpec = WaveletSpec(), cfg: SolverConfig = SolverConfig(),
                **kwargs) -> np.ndarray:
    """Recover an image in ``[0, 255]`` from measurements ``meas``.

    See :func:`twist_run` for the keyword arguments.
    """
    return twist_run(meas, op, spec, cfg, **kwargs).image
