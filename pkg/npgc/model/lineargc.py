"""
Linear Granger-causality baseline

    RP_{t+tau} = mu + beta RP_t + alpha VRP_t + eps_{t+tau},

tested through H0: alpha = 0 with a Newey-West (Bartlett kernel) HAC
standard error and a standard normal reference distribution.
"""
import dataclasses
import math
from typing import Optional

import numpy as np
import statsmodels.api as sm
from statsmodels.stats import sandwich_covariance as sw

from npgc.errors import DimensionMismatchError, InsufficientDataError, InvalidConfigError, SingularDesignError


@dataclasses.dataclass(frozen=True)
class OlsFit:
    coefficients: np.ndarray
    residuals: np.ndarray
    fitted: np.ndarray


@dataclasses.dataclass(frozen=True)
class HacRegressionResult:
    mu: float
    beta: float
    alpha: float
    se_alpha: float
    t_stat: float
    p_value: float
    lags: int
    n_obs: int
    horizon: int

    @property
    def coefficients(self):
        return np.array([self.mu, self.beta, self.alpha])

    def to_dict(self):
        return dataclasses.asdict(self)


def _check_design(X, y):
    n, k = X.shape
    if y.shape != (n,):
        raise DimensionMismatchError(f"response has shape {y.shape}, design has {n} rows")
    if n <= k:
        raise SingularDesignError(f"need more observations than regressors, got n={n}, k={k}")
    if np.linalg.matrix_rank(X) < k:
        raise SingularDesignError(f"design matrix has rank below its {k} columns")


def _as_design(design):
    X = np.asarray(design, dtype=float)
    return X[:, None] if X.ndim == 1 else X


def ols_fit(design, y) -> OlsFit:
    X = _as_design(design)
    y = np.asarray(y, dtype=float)
    _check_design(X, y)
    res = sm.OLS(y, X).fit()
    return OlsFit(
        coefficients=np.asarray(res.params),
        residuals=np.asarray(res.resid),
        fitted=np.asarray(res.fittedvalues),
    )


def bartlett_weights(m):
    """1 - j/(m+1), j = 0..m."""
    if m < 0:
        raise InvalidConfigError(f"lag truncation must be non-negative, got {m}")
    return sw.weights_bartlett(m)


def default_lag_truncation(n):
    return int(math.floor(4.0 * (n / 100.0) ** (2.0 / 9.0)))


def hac_covariance(design, residuals, m):
    X = _as_design(design)
    e = np.asarray(residuals, dtype=float)
    bartlett_weights(m)
    meat = sw.S_hac_simple(X * e[:, None], nlags=m, weights_func=sw.weights_bartlett)
    bread = np.linalg.inv(X.T @ X)
    cov = bread @ meat @ bread
    return (cov + cov.T) / 2.0


def newey_west_se(design, residuals, m):
    return np.sqrt(np.diag(hac_covariance(design, residuals, m)))


def white_se(design, residuals):
    """Heteroskedasticity-robust (HC0) standard errors."""
    X = _as_design(design)
    e = np.asarray(residuals, dtype=float)
    bread = np.linalg.inv(X.T @ X)
    return np.sqrt(np.diag(bread @ sw.S_white_simple(X * e[:, None]) @ bread))


def granger_design(rp, vrp, tau):
    """Rows t = 0..n-1-tau: y = RP_{t+tau}, X = (1, RP_t, VRP_t)."""
    rp = np.asarray(rp, dtype=float).ravel()
    vrp = np.asarray(vrp, dtype=float).ravel()
    if rp.shape != vrp.shape:
        raise DimensionMismatchError(f"rp has {rp.size} observations, vrp has {vrp.size}")
    if tau < 0:
        raise InvalidConfigError(f"horizon must be non-negative, got {tau}")
    rows = rp.size - tau
    if rows < 4:
        raise InsufficientDataError(f"{rp.size} observations leave {rows} rows at horizon {tau}")
    X = np.column_stack([np.ones(rows), rp[:rows], vrp[:rows]])
    return X, rp[tau:]


def hac_fit(design, y, m):
    """OLS with Newey-West covariance, no small-sample correction, normal reference."""
    X = _as_design(design)
    y = np.asarray(y, dtype=float)
    _check_design(X, y)
    bartlett_weights(m)
    return sm.OLS(y, X).fit(cov_type="HAC", cov_kwds={"maxlags": int(m), "use_correction": False}, use_t=False)


def linear_granger_test(rp, vrp, tau, m: Optional[int] = None) -> HacRegressionResult:
    X, y = granger_design(rp, vrp, tau)
    if m is None:
        m = default_lag_truncation(X.shape[0])
    res = hac_fit(X, y, m)
    se_alpha = float(res.bse[2])
    if not se_alpha > 0:
        raise SingularDesignError("HAC standard error of alpha is zero (perfect fit)")
    mu, beta, alpha = (float(c) for c in res.params)
    return HacRegressionResult(
        mu=mu,
        beta=beta,
        alpha=alpha,
        se_alpha=se_alpha,
        t_stat=float(res.tvalues[2]),
        p_value=float(res.pvalues[2]),
        lags=int(m),
        n_obs=int(X.shape[0]),
        horizon=int(tau),
    )
