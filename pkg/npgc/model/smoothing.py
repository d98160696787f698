"""
Gaussian product kernels, bandwidth rules and leave-one-out
Nadaraya-Watson estimators of f_W, F_{Y|W} and F_{Z|W}.
"""
import dataclasses
from enum import Enum, auto
from typing import Optional

import numpy as np

from npgc.constants import BANDWIDTH_RATE, SILVERMAN_FACTOR
from npgc.errors import (
    DegenerateBandwidthError,
    DegenerateNeighborhoodError,
    DimensionMismatchError,
    InvalidConfigError,
    InvalidSampleError,
)

_TINY = np.finfo(float).tiny


class KernelFamily(Enum):
    GAUSSIAN = auto()

    @classmethod
    def from_str(cls, name):
        if name == "gaussian":
            return cls.GAUSSIAN
        raise InvalidConfigError(f"Invalid kernel family: {name}")


class BandwidthKind(Enum):
    FIXED_C = auto()
    DATA_DRIVEN = auto()

    @classmethod
    def from_str(cls, name):
        if name in ("fixed", "fixed_c"):
            return cls.FIXED_C
        elif name in ("auto", "data_driven"):
            return cls.DATA_DRIVEN
        raise InvalidConfigError(f"Invalid bandwidth rule: {name}")


@dataclasses.dataclass(frozen=True)
class KernelSpec:
    dim: int
    family: KernelFamily = KernelFamily.GAUSSIAN

    def __post_init__(self):
        if self.dim < 1:
            raise InvalidConfigError(f"kernel dimension must be positive, got {self.dim}")

    @property
    def peak(self):
        """K(0)."""
        return (2.0 * np.pi) ** (-self.dim / 2.0)


@dataclasses.dataclass(frozen=True)
class BandwidthRule:
    kind: BandwidthKind = BandwidthKind.FIXED_C
    c: float = 1.0

    def __post_init__(self):
        if self.kind == BandwidthKind.FIXED_C and not self.c > 0:
            raise InvalidConfigError(f"bandwidth constant must be positive, got {self.c}")


@dataclasses.dataclass(frozen=True)
class TimeSeriesSample:
    """Time-aligned (W, Y, Z) rows; each block is an n x d matrix."""
    W: np.ndarray
    Y: np.ndarray
    Z: np.ndarray

    def __post_init__(self):
        blocks = {}
        for name in ("W", "Y", "Z"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.ndim == 1:
                arr = arr[:, None]
            if arr.ndim != 2 or arr.shape[1] < 1:
                raise InvalidSampleError(f"{name} must be an n x d matrix, got shape {arr.shape}")
            if not np.all(np.isfinite(arr)):
                raise InvalidSampleError(f"{name} contains non-finite entries")
            blocks[name] = arr
            object.__setattr__(self, name, arr)
        lengths = {name: arr.shape[0] for name, arr in blocks.items()}
        if len(set(lengths.values())) != 1:
            raise InvalidSampleError(f"W, Y, Z are not time-aligned: row counts {lengths}")
        if self.n < 2:
            raise InvalidSampleError(f"need at least 2 observations, got {self.n}")

    @property
    def n(self):
        return self.W.shape[0]

    @property
    def d_w(self):
        return self.W.shape[1]

    @property
    def d_y(self):
        return self.Y.shape[1]

    @property
    def d_z(self):
        return self.Z.shape[1]

    def take(self, index):
        index = np.asarray(index)
        return TimeSeriesSample(self.W[index], self.Y[index], self.Z[index])


def kernel_eval(spec: KernelSpec, u) -> float:
    u = np.atleast_1d(np.asarray(u, dtype=float))
    if u.shape != (spec.dim,):
        raise DimensionMismatchError(f"kernel argument has shape {u.shape}, expected ({spec.dim},)")
    value = spec.peak * np.exp(-0.5 * float(np.dot(u, u)))
    return value if value >= _TINY else 0.0


def bandwidth(rule: BandwidthRule, sample: TimeSeriesSample) -> float:
    n = sample.n
    if rule.kind == BandwidthKind.FIXED_C:
        h = rule.c * n ** (-1.0 / BANDWIDTH_RATE)
    else:
        # Multivariate W: mean of the per-column standard deviations
        spread = float(np.mean(np.std(sample.W, axis=0, ddof=1)))
        if not spread > 0:
            raise DegenerateBandwidthError("conditioning variable has zero spread; data-driven bandwidth is 0")
        h = SILVERMAN_FACTOR * spread * n ** (-1.0 / BANDWIDTH_RATE)
    if not h > 0:
        raise DegenerateBandwidthError(f"bandwidth must be positive, got {h}")
    return float(h)


def kernel_weight_matrix(W, h: float, spec: Optional[KernelSpec] = None) -> np.ndarray:
    """M[t, s] = K((W_t - W_s) / h). Symmetric, with K(0) on the diagonal."""
    W = np.asarray(W, dtype=float)
    if W.ndim == 1:
        W = W[:, None]
    if spec is None:
        spec = KernelSpec(dim=W.shape[1])
    if W.shape[1] != spec.dim:
        raise DimensionMismatchError(f"W has {W.shape[1]} columns, kernel expects {spec.dim}")
    if not h > 0:
        raise DegenerateBandwidthError(f"bandwidth must be positive, got {h}")
    diff = (W[:, None, :] - W[None, :, :]) / h
    M = spec.peak * np.exp(-0.5 * np.sum(diff * diff, axis=2))
    M[M < _TINY] = 0.0
    return M


def _off_diagonal(weights):
    A = np.array(weights, dtype=float, copy=True)
    np.fill_diagonal(A, 0.0)
    return A


def loo_density(weights, h: float, d_w: int, t: int) -> float:
    weights = np.asarray(weights, dtype=float)
    n = weights.shape[0]
    total = float(np.sum(weights[t])) - float(weights[t, t])
    return total / ((n - 1) * h ** d_w)


def loo_densities(weights, h: float, d_w: int) -> np.ndarray:
    """f_W(W_t) for every t at once."""
    A = _off_diagonal(weights)
    n = A.shape[0]
    return A.sum(axis=1) / ((n - 1) * h ** d_w)


def loo_cond_cdf(weights, indicator_col, t: int) -> float:
    weights = np.asarray(weights, dtype=float)
    indicator_col = np.asarray(indicator_col, dtype=float)
    if indicator_col.shape != (weights.shape[0],):
        raise DimensionMismatchError(
            f"indicator column has shape {indicator_col.shape}, expected ({weights.shape[0]},)")
    row = weights[t].copy()
    row[t] = 0.0
    denom = float(row.sum())
    if not denom > 0:
        raise DegenerateNeighborhoodError(t)
    return float(np.dot(row, indicator_col)) / denom


def indicator_matrix(data, points) -> np.ndarray:
    """I[s, j] = 1(data_s <= points_j), componentwise for vector rows."""
    data = np.asarray(data, dtype=float)
    points = np.asarray(points, dtype=float)
    if data.ndim == 1:
        data = data[:, None]
    if points.ndim == 1:
        points = points[:, None]
    if data.shape[1] != points.shape[1]:
        raise DimensionMismatchError(f"data have {data.shape[1]} columns, points have {points.shape[1]}")
    return np.all(data[:, None, :] <= points[None, :, :], axis=2).astype(float)


def kernel_indicator_sums(weights, data, points, off_diagonal=True) -> np.ndarray:
    """
    S[t, j] = sum_{s != t} w_ts 1(data_s <= points_j).

    One-column data are handled by sorting and a cumulative sum over the
    kernel rows; multivariate data fall back to the direct product.
    """
    A = _off_diagonal(weights) if off_diagonal else np.asarray(weights, dtype=float)
    data = np.asarray(data, dtype=float)
    points = np.asarray(points, dtype=float)
    if data.ndim == 1:
        data = data[:, None]
    if points.ndim == 1:
        points = points[:, None]
    if data.shape[1] != points.shape[1]:
        raise DimensionMismatchError(f"data have {data.shape[1]} columns, points have {points.shape[1]}")

    if data.shape[1] == 1:
        order = np.argsort(data[:, 0], kind="stable")
        sorted_data = data[order, 0]
        cumulative = np.cumsum(A[:, order], axis=1)
        counts = np.searchsorted(sorted_data, points[:, 0], side="right")
        padded = np.concatenate([np.zeros((A.shape[0], 1)), cumulative], axis=1)
        return padded[:, counts]
    return A @ indicator_matrix(data, points)


def loo_cond_cdfs(weights, data, points) -> np.ndarray:
    """F[t, j] = leave-one-out estimate of P(data <= points_j | W_t)."""
    A = _off_diagonal(weights)
    denom = A.sum(axis=1)
    empty = np.flatnonzero(~(denom > 0))
    if empty.size:
        raise DegenerateNeighborhoodError(empty[0])
    return kernel_indicator_sums(A, data, points, off_diagonal=False) / denom[:, None]
