"""t-location-scale distribution: density, maximum likelihood fit, sampling.

The density is the Student's t density of shape ``nu`` moved to location
``mu`` and stretched by scale ``sigma``::

    f(x | mu, sigma, nu) = Gamma((nu+1)/2) / (sigma sqrt(nu pi) Gamma(nu/2))
                           * (1 + ((x - mu) / sigma)**2 / nu) ** (-(nu+1)/2)

Everything is evaluated in log space. Parameters are fitted by minimizing the
negative log-likelihood with the simplex search in :mod:`swdknn.optimizer`
over ``(mu, log sigma, log nu)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .exceptions import (
    DegenerateSample,
    EmptySample,
    InvalidParams,
    NotConverged,
)
from .optimizer import SimplexConfig, nelder_mead

NU_MAX = 1e6
_LOG_NU_MAX = math.log(NU_MAX)
_LOG_PI = math.log(math.pi)

# fits run through the same simplex settings the optimizer exposes
FitConfig = SimplexConfig


@dataclass(frozen=True)
class TlsParams:
    """Location ``mu``, scale ``sigma`` > 0 and shape ``nu`` > 0."""

    mu: float
    sigma: float
    nu: float

    def __post_init__(self):
        for name in ("mu", "sigma", "nu"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidParams(f"{name} must be finite, got {getattr(self, name)!r}")
        if self.sigma <= 0:
            raise InvalidParams(f"scale must be positive, got {self.sigma!r}")
        if self.nu <= 0:
            raise InvalidParams(f"shape must be positive, got {self.nu!r}")

    def as_array(self) -> np.ndarray:
        return np.array([self.mu, self.sigma, self.nu], dtype=float)


@dataclass(frozen=True)
class FitReport:
    params: TlsParams
    neg_log_likelihood: float
    iterations: int
    converged: bool


def _log_gamma_half_ratio(a: float) -> float:
    """log Gamma(a + 1/2) - log Gamma(a).

    The two lgamma terms grow like ``a log a`` and their difference loses
    digits for large ``a``; past ``a = 25`` an asymptotic series is used
    instead (truncation error below 1e-15 there).
    """
    if a < 25:
        return math.lgamma(a + 0.5) - math.lgamma(a)
    r = 1.0 / a
    r2 = r * r
    return 0.5 * math.log(a) + r * (
        -1 / 8 + r2 * (1 / 192 + r2 * (-1 / 640 + r2 * (17 / 14336 - r2 * 31 / 18432)))
    )


def log_norm_const(nu: float) -> float:
    """Log of the standard Student-t normalizing constant for shape ``nu``."""
    return _log_gamma_half_ratio(0.5 * nu) - 0.5 * (math.log(nu) + _LOG_PI)


def _log1p_sq_over(z, nu):
    # log(1 + z**2 / nu) without overflowing z**2 for huge |z|
    u = np.abs(np.asarray(z, dtype=float)) / math.sqrt(nu)
    with np.errstate(over="ignore"):
        out = np.log1p(u * u)
    huge = u > 1e100
    if np.any(huge):
        uh = u[huge] if out.ndim else u
        big = 2.0 * np.log(uh) + np.log1p((1.0 / uh) ** 2)
        if out.ndim:
            out[huge] = big
        else:
            out = big
    return out


def _check(params) -> TlsParams:
    if not isinstance(params, TlsParams):
        params = TlsParams(*params)
    return params


def tls_log_pdf(x, params: TlsParams):
    """Log density at ``x`` (scalar or array)."""
    p = _check(params)
    z = (np.asarray(x, dtype=float) - p.mu) / p.sigma
    out = (log_norm_const(p.nu) - math.log(p.sigma)
           - 0.5 * (p.nu + 1.0) * _log1p_sq_over(z, p.nu))
    return float(out) if out.ndim == 0 else out


def tls_pdf(x, params: TlsParams):
    """Density at ``x`` (scalar or array)."""
    return np.exp(tls_log_pdf(x, params)) if np.ndim(x) else math.exp(tls_log_pdf(x, params))


def _nll(x: np.ndarray, mu: float, sigma: float, nu: float) -> float:
    s = float(np.sum(_log1p_sq_over((x - mu) / sigma, nu)))
    return -x.size * (log_norm_const(nu) - math.log(sigma)) + 0.5 * (nu + 1.0) * s


def neg_log_likelihood(samples, params: TlsParams) -> float:
    samples = np.asarray(samples, dtype=float).ravel()
    if samples.size == 0:
        raise EmptySample("cannot evaluate the likelihood of an empty sample")
    p = _check(params)
    return _nll(samples, p.mu, p.sigma, p.nu)


def initial_guess(samples: np.ndarray) -> TlsParams:
    """Robust starting point: median, normal-consistent MAD and a
    kurtosis-matched shape (3 when the sample shows no excess kurtosis)."""
    med = float(np.median(samples))
    mad = 1.4826 * float(np.median(np.abs(samples - med)))
    if mad <= 0:
        mad = float(np.std(samples))
    nu0 = 3.0
    centered = samples - samples.mean()
    var = float(np.mean(centered ** 2))
    if var > 0:
        kurt = float(np.mean(centered ** 4)) / var ** 2 - 3.0
        if kurt > 0.1:
            nu0 = min(max(4.0 + 6.0 / kurt, 0.6), 100.0)
    return TlsParams(med, mad, nu0)


def _unpack(theta):
    return float(theta[0]), math.exp(theta[1]), math.exp(min(theta[2], _LOG_NU_MAX))


def fit_mle(samples, config: Optional[FitConfig] = None) -> FitReport:
    """Maximum likelihood estimate of ``(mu, sigma, nu)``.

    Parameters
    ----------
    samples : array_like
        At least 8 real values that are not all equal.
    config : FitConfig, optional
        Simplex tolerances and iteration cap.

    Returns
    -------
    FitReport

    Raises
    ------
    DegenerateSample
        If the sample has (numerically) zero spread.
    NotConverged
        If the iteration cap is reached; ``exc.report`` holds the best fit.
    """
    x = np.asarray(samples, dtype=float).ravel()
    if x.size == 0:
        raise EmptySample("cannot fit an empty sample")
    if x.size < 8:
        raise ValueError(f"need at least 8 samples to fit, got {x.size}")
    if not np.all(np.isfinite(x)):
        raise ValueError("samples must be finite")
    med = float(np.median(x))
    if np.std(x, ddof=1) < 1e-12 * max(1.0, abs(med)):
        raise DegenerateSample("all samples are equal; the scale estimate collapses to 0")

    start = initial_guess(x)

    def objective(theta):
        if theta[1] > 700:
            return math.inf
        mu, sigma, nu = _unpack(theta)
        if not (sigma > 0 and math.isfinite(sigma)):
            return math.inf
        return _nll(x, mu, sigma, nu)

    theta0 = np.array([start.mu, math.log(start.sigma), math.log(start.nu)])
    res = nelder_mead(objective, theta0, config)
    mu, sigma, nu = _unpack(res.x_min)
    report = FitReport(TlsParams(mu, sigma, nu), res.f_min, res.iterations, res.converged)
    if not res.converged:
        raise NotConverged(report)
    return report


def make_rng(seed: int) -> np.random.Generator:
    """Seeded Philox (counter-based) generator used for all sampling."""
    return np.random.Generator(np.random.Philox(seed))


def tls_sample(params: TlsParams, count: int, seed: int) -> np.ndarray:
    """Draw ``count`` deviates ``mu + sigma * Z / sqrt(V / nu)``.

    ``Z`` (standard normal, drawn first) and ``V`` (chi-square with ``nu``
    degrees of freedom, drawn second) come from ``make_rng(seed)``, so the
    same arguments always produce the same array.
    """
    p = _check(params)
    if count < 1:
        raise ValueError("count must be at least 1")
    rng = make_rng(seed)
    z = rng.standard_normal(count)
    v = rng.chisquare(p.nu, count)
    return p.mu + p.sigma * z / np.sqrt(v / p.nu)
