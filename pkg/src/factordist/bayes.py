"""Conjugate posterior of the pricing-error (alpha) distribution.

The investor's prior centers alpha at zero with standard deviation
``sigma_alpha`` (scaled by the residual covariance), is non-informative on
factor loadings, and puts an inverted-Wishart prior on the residual
covariance with scale s^2 * I and n + 2 degrees of freedom, where s^2 is
the average diagonal of the sample residual covariance. The posterior of
alpha is then Gaussian for every sigma_alpha in [0, inf]:

* ``sigma_alpha = 0`` -- dogmatic belief, a point mass at zero;
* ``sigma_alpha = inf`` -- complete skepticism, the data-based distribution
  matching the sampling-theory moments;
* interior values interpolate, shrinking the OLS alphas toward zero.

``sigma_alpha`` is quoted in annualized percent everywhere a user supplies
it; annual-to-monthly conversion divides by 12 (an annualized mean scales
linearly with horizon).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dataio import Dataset, ModelSpec
from .errors import NonPDPosteriorError, NotPSDError
from .linalg import PSD_CLAMP_REL, symmetrize
from .regression import RegressionFit, _design, fit_ols, sharpe_sq

MONTHS_PER_YEAR = 12.0


def sigma_annual_to_monthly(sigma_alpha_annual: float) -> float:
    """Convert an annualized prior mispricing std (percent) to monthly."""
    s = float(sigma_alpha_annual)
    if s < 0.0:
        raise ValueError(f"sigma_alpha must be non-negative, got {s}")
    return s / MONTHS_PER_YEAR


@dataclass(frozen=True)
class GaussianDist:
    """Gaussian distribution of pricing errors: mean vector plus covariance.

    The degenerate point mass at zero is represented by a zero mean and a
    zero covariance matrix.
    """

    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=float).reshape(-1)
        cov = symmetrize(self.cov)
        if cov.shape[0] != mean.shape[0]:
            raise ValueError(
                f"mean has {mean.shape[0]} entries but cov is {cov.shape}"
            )
        if not (np.all(np.isfinite(mean)) and np.all(np.isfinite(cov))):
            raise ValueError("distribution moments must be finite")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    @property
    def dim(self) -> int:
        return self.mean.shape[0]


@dataclass(frozen=True)
class PriorSpec:
    """Prior hyperparameters implied by one fit and a mispricing std.

    ``s2`` and ``h0_scale`` are both the average diagonal of the sample
    residual covariance of the model being evaluated; ``nu0`` is n + 2.
    Build instances with :meth:`from_fit`.
    """

    sigma_alpha_annual: float
    s2: float
    nu0: int
    h0_scale: float

    def __post_init__(self):
        if self.sigma_alpha_annual < 0.0:
            raise ValueError("sigma_alpha_annual must be >= 0")
        if not self.s2 > 0.0:
            raise ValueError("s2 must be positive")
        if self.h0_scale != self.s2:
            raise ValueError("h0_scale must equal s2")
        if self.nu0 < 3:
            raise ValueError("nu0 must be n + 2 for some n >= 1")

    @classmethod
    def from_fit(cls, fit: RegressionFit, sigma_alpha_annual: float) -> "PriorSpec":
        s2 = float(np.diag(fit.sigma_mle).mean())
        return cls(
            sigma_alpha_annual=float(sigma_alpha_annual),
            s2=s2,
            nu0=fit.n + 2,
            h0_scale=s2,
        )


class PosteriorFamily:
    """All posteriors of one (dataset, model) pair, indexed by sigma_alpha.

    Fits the regression once, caches the design-matrix cross products, and
    evaluates the posterior at any prior mispricing std without refitting.
    This is the batched engine behind :func:`posterior_alpha` and the
    sweep/equivalence machinery.
    """

    def __init__(self, dataset: Dataset, model: ModelSpec):
        self.fit = fit_ols(dataset, model)
        returns, _, design = _design(dataset, model)
        self._xtx = design.T @ design
        self._xtr = design.T @ returns
        bhat = np.vstack([self.fit.alpha_hat, self.fit.beta_hat.T])
        self._bhat = bhat
        resid = returns - design @ bhat
        self._s_resid = symmetrize(resid.T @ resid)
        self._bhat_quad = symmetrize(bhat.T @ self._xtx @ bhat)
        self.s2 = float(np.diag(self.fit.sigma_mle).mean())
        self._sh2 = sharpe_sq(self.fit)

    def dogmatic(self) -> GaussianDist:
        n = self.fit.n
        return GaussianDist(np.zeros(n), np.zeros((n, n)))

    def skeptic(self) -> GaussianDist:
        """Data-based posterior at sigma_alpha = inf (closed form)."""
        fit = self.fit
        h0 = self.s2 * np.eye(fit.n)
        scale = (1.0 + self._sh2) / fit.T / (fit.T + 1)
        return GaussianDist(fit.alpha_hat.copy(), scale * (h0 + self._s_resid))

    def at(self, sigma_alpha_annual: float) -> GaussianDist:
        """Posterior at any annualized prior mispricing std in [0, inf]."""
        s = float(sigma_alpha_annual)
        if s < 0.0:
            raise ValueError(f"sigma_alpha must be non-negative, got {s}")
        if s == 0.0:
            return self.dogmatic()
        if math.isinf(s):
            return self.skeptic()
        sigma_monthly = sigma_annual_to_monthly(s)
        return self._interior(self.s2 / sigma_monthly**2)

    def coefficients(self, sigma_alpha_annual: float) -> np.ndarray:
        """Posterior coefficient matrix ((k+1) x n); row 0 holds the alphas.

        ``inf`` maps to zero prior precision, reproducing the OLS estimates.
        """
        s = float(sigma_alpha_annual)
        if s <= 0.0:
            raise ValueError("coefficients need sigma_alpha > 0")
        lam = 0.0 if math.isinf(s) else self.s2 / sigma_annual_to_monthly(s) ** 2
        precision = self._xtx.copy()
        precision[0, 0] += lam
        return np.linalg.solve(precision, self._xtr)

    def _interior(self, lam: float) -> GaussianDist:
        fit = self.fit
        precision = self._xtx.copy()
        precision[0, 0] += lam
        vtil = np.linalg.solve(precision, np.eye(fit.k + 1))
        btil = np.linalg.solve(precision, self._xtr)
        h0 = self.s2 * np.eye(fit.n)
        # btil' Vtil^{-1} btil reduces to btil' X'R because Vtil^{-1} btil = X'R.
        h = h0 + self._s_resid + self._bhat_quad - symmetrize(btil.T @ self._xtr)
        try:
            h = _psd_clamp(symmetrize(h))
        except NotPSDError as exc:
            raise NonPDPosteriorError(f"posterior scale matrix not PSD: {exc}") from None
        sigma_til = h / (fit.T + 1)
        cov = vtil[0, 0] * sigma_til
        return GaussianDist(btil[0].copy(), cov)


def _psd_clamp(m: np.ndarray) -> np.ndarray:
    """Clip roundoff-negative eigenvalues; reject anything materially negative."""
    w, v = np.linalg.eigh(m)
    spectral = float(np.abs(w).max()) if w.size else 0.0
    if float(w.min()) < -PSD_CLAMP_REL * spectral:
        raise NotPSDError(f"eigenvalue {w.min():.3e} beyond clamp tolerance")
    if float(w.min()) < 0.0:
        return (v * np.clip(w, 0.0, None)) @ v.T
    return m


def posterior_alpha(dataset: Dataset, model: ModelSpec,
                    prior: PriorSpec) -> GaussianDist:
    """Posterior alpha distribution under the given prior.

    The prior must have been built from the same model's fit (its ``s2``
    must match the sample residual covariance diagonal average). The
    endpoint sentinels ``sigma_alpha_annual = 0`` and ``inf`` map to
    :func:`posterior_alpha_dogmatic` and :func:`posterior_alpha_skeptic`.
    """
    family = PosteriorFamily(dataset, model)
    if not math.isclose(prior.s2, family.s2, rel_tol=1e-10):
        raise ValueError(
            f"prior s2={prior.s2:.6e} does not match this model's sample "
            f"value {family.s2:.6e}; build the prior with PriorSpec.from_fit"
        )
    return family.at(prior.sigma_alpha_annual)


def posterior_alpha_dogmatic(n: int) -> GaussianDist:
    """Point mass at zero: the posterior under a dogmatic (sigma = 0) prior."""
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    return GaussianDist(np.zeros(n), np.zeros((n, n)))


def posterior_alpha_skeptic(fit: RegressionFit) -> GaussianDist:
    """Data-based posterior at sigma = inf, from a fit's sufficient statistics.

    Mean equals the OLS alphas exactly; covariance is
    ``(1 + Sh^2) / T * (s^2 I + S) / (T + 1)`` with S the residual
    cross-product matrix.
    """
    s2 = float(np.diag(fit.sigma_mle).mean())
    s_resid = fit.T * fit.sigma_mle
    scale = (1.0 + sharpe_sq(fit)) / fit.T / (fit.T + 1)
    return GaussianDist(fit.alpha_hat.copy(), scale * (s2 * np.eye(fit.n) + s_resid))
