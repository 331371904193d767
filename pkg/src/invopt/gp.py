"""Exact Gaussian-process regression with half-integer Matern kernels.

Inputs are min-max normalized to [0,1] per dimension and outputs are
standardized before fitting; hyperparameters live in that normalized space.
The posterior mean is exposed as prior + conditioning_scale * correction,
where the correction is the usual k(x,X) (K + noise I)^-1 (y - m(X)) term,
so scaling the correction down interpolates between the prior and the full
posterior.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.linalg import solve_triangular

from .errors import DomainError, NumericalError, ValidationError

__all__ = [
    "KernelConfig",
    "GPModel",
    "matern",
    "fit",
    "predict",
    "predict_many",
    "log_marginal_likelihood",
    "AUTO_LENGTH_GRID",
    "AUTO_NOISE_GRID",
]

_JITTERS = (1e-8, 1e-7, 1e-6, 1e-5, 1e-4)

# Base grid scanned when fit() chooses hyperparameters itself; a coordinate
# refinement around the grid argmax follows.
AUTO_LENGTH_GRID = tuple(np.logspace(-2.0, 1.0, 25))
AUTO_NOISE_GRID = tuple(np.logspace(-8.0, 0.0, 17))
_REFINE_FACTORS = (0.55, 0.75, 0.9, 1.0, 1.12, 1.35, 1.8)


@dataclass(frozen=True)
class KernelConfig:
    nu: float = 2.5
    length_scale: float = 1.0
    signal_variance: float = 1.0
    noise_variance: float = 1e-8

    def __post_init__(self):
        if self.nu not in (0.5, 1.5, 2.5):
            raise DomainError("nu must be one of 0.5, 1.5, 2.5")
        if self.length_scale <= 0:
            raise DomainError("length_scale must be > 0")
        if self.signal_variance <= 0:
            raise DomainError("signal_variance must be > 0")
        if self.noise_variance < 0:
            raise DomainError("noise_variance must be >= 0")


@dataclass(frozen=True, eq=False)
class GPModel:
    train_x: np.ndarray  # normalized, shape (n, d)
    train_y: np.ndarray  # standardized, shape (n,)
    kernel: KernelConfig
    chol_lower: np.ndarray
    alpha_weights: np.ndarray
    prior_mean: float
    conditioning_scale: float
    jitter: float
    x_min: np.ndarray
    x_span: np.ndarray
    y_mean: float
    y_scale: float

    @property
    def n_train(self) -> int:
        return int(self.train_y.size)

    def to_dict(self) -> dict:
        """Plain-type dump for diagnostics; no stability guarantee."""
        return {
            "train_x": self.train_x.tolist(),
            "train_y": self.train_y.tolist(),
            "kernel": {
                "nu": self.kernel.nu,
                "length_scale": self.kernel.length_scale,
                "signal_variance": self.kernel.signal_variance,
                "noise_variance": self.kernel.noise_variance,
            },
            "prior_mean": self.prior_mean,
            "conditioning_scale": self.conditioning_scale,
            "jitter": self.jitter,
        }


def _matern_from_dist(dist: np.ndarray, cfg: KernelConfig) -> np.ndarray:
    r = np.asarray(dist, dtype=float) / cfg.length_scale
    if cfg.nu == 0.5:
        shape = np.exp(-r)
    elif cfg.nu == 1.5:
        s = math.sqrt(3.0) * r
        shape = (1.0 + s) * np.exp(-s)
    else:
        s = math.sqrt(5.0) * r
        shape = (1.0 + s + s * s / 3.0) * np.exp(-s)
    return cfg.signal_variance * shape


def matern(x1, x2, cfg: KernelConfig) -> float:
    """Matern covariance between two points (Euclidean distance)."""
    a = np.atleast_1d(np.asarray(x1, dtype=float))
    b = np.atleast_1d(np.asarray(x2, dtype=float))
    if a.shape != b.shape:
        raise DomainError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return float(_matern_from_dist(np.linalg.norm(a - b), cfg))


def _pairwise_dist(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    diff = a[:, None, :] - b[None, :, :]
    return np.sqrt(np.maximum((diff * diff).sum(axis=2), 0.0))


def _as_matrix(xs) -> np.ndarray:
    arr = np.asarray(xs, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2:
        raise DomainError("inputs must be scalars or fixed-length vectors")
    return arr


def _cholesky_with_jitter(cov: np.ndarray) -> tuple[np.ndarray, float]:
    for jitter in _JITTERS:
        try:
            lower = np.linalg.cholesky(cov + jitter * np.eye(cov.shape[0]))
            return lower, jitter
        except np.linalg.LinAlgError:
            continue
    raise NumericalError(
        f"covariance not positive definite even with jitter {_JITTERS[-1]:g}")


def _prepare(points: Iterable[tuple]) -> tuple[np.ndarray, np.ndarray, np.ndarray,
                                               np.ndarray, float, float]:
    pts = list(points)
    if not pts:
        raise DomainError("fit requires at least one point")
    raw_x = _as_matrix([p[0] for p in pts])
    raw_y = np.asarray([p[1] for p in pts], dtype=float)
    if not (np.isfinite(raw_x).all() and np.isfinite(raw_y).all()):
        raise DomainError("inputs and outputs must be finite")

    x_min = raw_x.min(axis=0)
    x_span = raw_x.max(axis=0) - x_min
    x_span = np.where(x_span > 0, x_span, 1.0)
    train_x = (raw_x - x_min) / x_span

    if len(pts) > 1:
        dist = _pairwise_dist(train_x, train_x)
        closest = dist[~np.eye(len(pts), dtype=bool)].min()
        if closest < 1e-12:
            raise ValidationError("duplicate inputs after normalization")

    y_mean = float(raw_y.mean())
    y_scale = float(raw_y.std())
    if y_scale <= 0:
        y_scale = 1.0
    train_y = (raw_y - y_mean) / y_scale
    return train_x, train_y, x_min, x_span, y_mean, y_scale


def _lml_prepared(train_x: np.ndarray, train_y: np.ndarray, cfg: KernelConfig,
                  prior_mean: float = 0.0) -> float:
    n = train_y.size
    cov = _matern_from_dist(_pairwise_dist(train_x, train_x), cfg)
    cov[np.diag_indices_from(cov)] += cfg.noise_variance
    lower, _ = _cholesky_with_jitter(cov)
    resid = train_y - prior_mean
    half = solve_triangular(lower, resid, lower=True)
    return float(-0.5 * half @ half - np.log(np.diag(lower)).sum()
                 - 0.5 * n * math.log(2.0 * math.pi))


def log_marginal_likelihood(points: Iterable[tuple], cfg: KernelConfig) -> float:
    """LML of the given hyperparameters on the normalized/standardized data,
    exactly as fit() scores candidates."""
    train_x, train_y, *_ = _prepare(points)
    return _lml_prepared(train_x, train_y, cfg)


def _search_hyperparameters(train_x: np.ndarray, train_y: np.ndarray,
                            nu: float) -> KernelConfig:
    def score(length: float, noise: float) -> float:
        cfg = KernelConfig(nu=nu, length_scale=length, signal_variance=1.0,
                           noise_variance=noise)
        try:
            return _lml_prepared(train_x, train_y, cfg)
        except NumericalError:
            return -math.inf

    best = (-math.inf, AUTO_LENGTH_GRID[0], AUTO_NOISE_GRID[0])
    for length in AUTO_LENGTH_GRID:
        for noise in AUTO_NOISE_GRID:
            value = score(length, noise)
            if value > best[0]:
                best = (value, length, noise)

    for _ in range(2):
        _, length0, noise0 = best
        for fl in _REFINE_FACTORS:
            for fn in _REFINE_FACTORS:
                length = min(max(length0 * fl, 1e-4), 1e3)
                noise = min(max(noise0 * fn, 1e-12), 10.0)
                value = score(length, noise)
                if value > best[0]:
                    best = (value, length, noise)

    if not math.isfinite(best[0]):
        raise NumericalError("no usable hyperparameters found")
    return KernelConfig(nu=nu, length_scale=best[1], signal_variance=1.0,
                        noise_variance=best[2])


def fit(points: Iterable[tuple], cfg: KernelConfig | str = "auto",
        conditioning_scale: float = 1.0, prior_mean: float = 0.0,
        nu: float = 2.5) -> GPModel:
    """Fit an exact GP to (input, output) pairs.

    cfg="auto" selects (length_scale, noise_variance) by log marginal
    likelihood over a log-spaced grid plus local refinement, with unit
    signal variance in standardized output space.
    """
    train_x, train_y, x_min, x_span, y_mean, y_scale = _prepare(points)
    if isinstance(cfg, KernelConfig):
        kernel = cfg
    elif cfg == "auto":
        kernel = _search_hyperparameters(train_x, train_y, nu)
    else:
        raise DomainError("cfg must be a KernelConfig or 'auto'")

    cov = _matern_from_dist(_pairwise_dist(train_x, train_x), kernel)
    cov[np.diag_indices_from(cov)] += kernel.noise_variance
    lower, jitter = _cholesky_with_jitter(cov)
    resid = train_y - prior_mean
    alpha = solve_triangular(
        lower.T, solve_triangular(lower, resid, lower=True), lower=False)
    return GPModel(train_x=train_x, train_y=train_y, kernel=kernel,
                   chol_lower=lower, alpha_weights=alpha,
                   prior_mean=prior_mean, conditioning_scale=conditioning_scale,
                   jitter=jitter, x_min=x_min, x_span=x_span,
                   y_mean=y_mean, y_scale=y_scale)


def predict_many(model: GPModel, xs) -> tuple[np.ndarray, np.ndarray]:
    """Posterior (mean, std) at many points, de-standardized."""
    raw = _as_matrix(xs)
    if raw.shape[1] != model.train_x.shape[1]:
        raise DomainError(
            f"query dimension {raw.shape[1]} != training dimension "
            f"{model.train_x.shape[1]}")
    queries = (raw - model.x_min) / model.x_span
    k_star = _matern_from_dist(_pairwise_dist(queries, model.train_x),
                               model.kernel)
    mean_std_space = (model.prior_mean
                      + model.conditioning_scale * (k_star @ model.alpha_weights))
    half = solve_triangular(model.chol_lower, k_star.T, lower=True)
    variance = model.kernel.signal_variance - (half * half).sum(axis=0)
    std_std_space = np.sqrt(np.maximum(variance, 0.0))
    return (model.y_mean + model.y_scale * mean_std_space,
            model.y_scale * std_std_space)


def predict(model: GPModel, x) -> tuple[float, float]:
    """Posterior (mean, std) at one point."""
    means, stds = predict_many(model, np.atleast_1d(np.asarray(x, dtype=float))
                               .reshape(1, -1))
    return float(means[0]), float(stds[0])
