"""
Weight families and the feasible empirical process

    S_n(w, y, z) = [n^{1/2} (n-1) h^{d_w}]^{-1}
        sum_t sum_{s != t} K((W_t - W_s)/h) phi(W_t, w) 1(Y_t <= y) (1(Z_t <= z) - 1(Z_s <= z))

evaluated either point by point (`process_at`) or at every observation
(`process_on_sample`), plus the residual products used by the bootstrap.
No estimated density ever appears in a denominator on the statistic path.
"""
import dataclasses
from enum import Enum, auto
from typing import List, Optional, Sequence

import numpy as np

from npgc.errors import DimensionMismatchError, InvalidConfigError
from npgc.model.smoothing import (
    KernelSpec,
    TimeSeriesSample,
    indicator_matrix,
    kernel_indicator_sums,
    kernel_weight_matrix,
    loo_cond_cdfs,
    loo_densities,
)


class WeightKind(Enum):
    INDICATOR = auto()
    SINE = auto()
    COMPLEX_EXP = auto()

    @classmethod
    def from_str(cls, name):
        if name == "indicator":
            return cls.INDICATOR
        elif name == "sine":
            return cls.SINE
        elif name in ("complex_exp", "exp"):
            return cls.COMPLEX_EXP
        raise InvalidConfigError(f"Invalid weight family: {name}")


@dataclasses.dataclass(frozen=True)
class WeightFamily:
    """
    phi(W_t, w). `lower`/`upper` bound the evaluation hypercube for the
    sine and complex exponential families; None means the sample range of W.
    """
    kind: WeightKind = WeightKind.INDICATOR
    lower: Optional[tuple] = None
    upper: Optional[tuple] = None

    def __post_init__(self):
        if (self.lower is None) != (self.upper is None):
            raise InvalidConfigError("weight family bounds need both lower and upper")
        if self.lower is not None:
            if self.kind == WeightKind.INDICATOR:
                raise InvalidConfigError("the indicator family takes no evaluation bounds")
            lower = tuple(float(v) for v in self.lower)
            upper = tuple(float(v) for v in self.upper)
            if len(lower) != len(upper):
                raise InvalidConfigError("weight family bounds differ in length")
            if any(lo > hi for lo, hi in zip(lower, upper)):
                raise InvalidConfigError("weight family lower bound exceeds upper bound")
            object.__setattr__(self, "lower", lower)
            object.__setattr__(self, "upper", upper)

    @property
    def components(self):
        return 2 if self.kind == WeightKind.COMPLEX_EXP else 1

    def evaluation_w(self, W) -> np.ndarray:
        """w_j for the evaluation points built from the observations W_j."""
        W = np.asarray(W, dtype=float)
        if self.kind == WeightKind.INDICATOR or self.lower is None:
            return W
        lower = np.asarray(self.lower)
        upper = np.asarray(self.upper)
        if lower.shape != (W.shape[1],):
            raise DimensionMismatchError(f"weight family bounds have length {lower.size}, W has {W.shape[1]} columns")
        lo, hi = W.min(axis=0), W.max(axis=0)
        span = hi - lo
        safe = np.where(span > 0, span, 1.0)
        unit = np.where(span > 0, (W - lo) / safe, 0.5)
        return lower + unit * (upper - lower)


@dataclasses.dataclass(frozen=True)
class EvaluationPoint:
    w: np.ndarray
    y: np.ndarray
    z: np.ndarray

    def __post_init__(self):
        for name in ("w", "y", "z"):
            arr = np.atleast_1d(np.asarray(getattr(self, name), dtype=float))
            if not np.all(np.isfinite(arr)):
                raise DimensionMismatchError(f"evaluation point {name} has non-finite entries")
            object.__setattr__(self, name, arr)


@dataclasses.dataclass
class ProcessValues:
    """s[c, j]: component c of S_n at evaluation point j."""
    s: np.ndarray

    def __post_init__(self):
        self.s = np.atleast_2d(np.asarray(self.s, dtype=float))

    @property
    def n_eval(self):
        return self.s.shape[1]

    @property
    def modulus(self):
        if self.s.shape[0] == 1:
            return np.abs(self.s[0])
        return np.sqrt(np.sum(self.s * self.s, axis=0))


@dataclasses.dataclass
class ResidualMatrix:
    """values[c, j, t] = e_t(gamma_j) for weight component c."""
    values: np.ndarray
    eval_points: List[EvaluationPoint]

    @property
    def n(self):
        return self.values.shape[2]

    @property
    def n_eval(self):
        return self.values.shape[1]


def weight_eval(family: WeightFamily, W_t, w):
    W_t = np.atleast_1d(np.asarray(W_t, dtype=float))
    w = np.atleast_1d(np.asarray(w, dtype=float))
    if W_t.shape != w.shape:
        raise DimensionMismatchError(f"W_t has shape {W_t.shape}, w has shape {w.shape}")
    if family.kind == WeightKind.INDICATOR:
        return float(np.all(W_t <= w))
    angle = float(np.dot(w, W_t))
    if family.kind == WeightKind.SINE:
        return float(np.sin(angle))
    return float(np.cos(angle)), float(np.sin(angle))


def weight_components(family: WeightFamily, W, w_eval) -> np.ndarray:
    """Phi[c, j, t] = component c of phi(W_t, w_j)."""
    W = np.asarray(W, dtype=float)
    w_eval = np.asarray(w_eval, dtype=float)
    if W.shape[1] != w_eval.shape[1]:
        raise DimensionMismatchError(f"W has {W.shape[1]} columns, evaluation w has {w_eval.shape[1]}")
    if family.kind == WeightKind.INDICATOR:
        return indicator_matrix(W, w_eval).T[None]
    angle = w_eval @ W.T
    if family.kind == WeightKind.SINE:
        return np.sin(angle)[None]
    return np.stack([np.cos(angle), np.sin(angle)])


def evaluation_points(sample: TimeSeriesSample, family: WeightFamily) -> List[EvaluationPoint]:
    """gamma_j = (w_j, Y_j, Z_j), j = 1..n."""
    w_eval = family.evaluation_w(sample.W)
    return [EvaluationPoint(w_eval[j], sample.Y[j], sample.Z[j]) for j in range(sample.n)]


def _stack_points(points: Sequence[EvaluationPoint], sample: TimeSeriesSample):
    if len(points) < 1:
        raise DimensionMismatchError("need at least one evaluation point")
    w = np.vstack([p.w for p in points])
    y = np.vstack([p.y for p in points])
    z = np.vstack([p.z for p in points])
    dims = (w.shape[1], y.shape[1], z.shape[1])
    if dims != (sample.d_w, sample.d_y, sample.d_z):
        raise DimensionMismatchError(
            f"evaluation points have dimensions {dims}, sample has {(sample.d_w, sample.d_y, sample.d_z)}")
    return w, y, z


def _scale(n, h, d_w):
    return 1.0 / (np.sqrt(n) * (n - 1) * h ** d_w)


def process_at(sample: TimeSeriesSample, h: float, family: WeightFamily, gamma: EvaluationPoint):
    """S_n(gamma) by the plain double sum; a pair (cos, sin) for complex_exp."""
    w, y, z = _stack_points([gamma], sample)
    spec = KernelSpec(dim=sample.d_w)
    n = sample.n
    phi = weight_components(family, sample.W, w)[:, 0, :]
    y_ind = np.all(sample.Y <= y[0], axis=1).astype(float)
    z_ind = np.all(sample.Z <= z[0], axis=1).astype(float)

    total = np.zeros(phi.shape[0])
    for t in range(n):
        if y_ind[t] == 0.0:
            continue
        diff = (sample.W[t] - sample.W) / h
        k = spec.peak * np.exp(-0.5 * np.sum(diff * diff, axis=1))
        k[t] = 0.0
        total += phi[:, t] * float(np.dot(k, z_ind[t] - z_ind))
    value = total * _scale(n, h, sample.d_w)
    if family.components == 1:
        return float(value[0])
    return float(value[0]), float(value[1])


def process_on_sample(sample: TimeSeriesSample, h: float, family: WeightFamily, weights=None) -> ProcessValues:
    """
    S_n at gamma_j = (w_j, Y_j, Z_j) for every observation j.

    With A the kernel matrix without its diagonal and r_t its row sums,
    S(gamma_j) is proportional to
        sum_t phi_tj 1(Y_t <= Y_j) [1(Z_t <= Z_j) r_t - sum_s A_ts 1(Z_s <= Z_j)].
    """
    n = sample.n
    if weights is None:
        weights = kernel_weight_matrix(sample.W, h, KernelSpec(dim=sample.d_w))
    A = np.array(weights, dtype=float, copy=True)
    np.fill_diagonal(A, 0.0)
    row_sums = A.sum(axis=1)

    w_eval = family.evaluation_w(sample.W)
    phi = weight_components(family, sample.W, w_eval)
    y_ind = indicator_matrix(sample.Y, sample.Y)
    z_ind = indicator_matrix(sample.Z, sample.Z)
    z_sums = kernel_indicator_sums(A, sample.Z, sample.Z, off_diagonal=False)

    inner = y_ind * (z_ind * row_sums[:, None] - z_sums)
    s = np.einsum("cjt,tj->cj", phi, inner) * _scale(n, h, sample.d_w)
    return ProcessValues(s)


def residual_matrix(sample: TimeSeriesSample, h: float, family: WeightFamily,
                    eval_points: Optional[Sequence[EvaluationPoint]] = None, weights=None) -> ResidualMatrix:
    """
    e_t(gamma_j) = phi(W_t, w_j) (1(Y_t <= y_j) - F_{Y|W}(y_j|W_t))
                   (1(Z_t <= z_j) - F_{Z|W}(z_j|W_t)) f_W(W_t)
    """
    if eval_points is None:
        eval_points = evaluation_points(sample, family)
    w, y, z = _stack_points(eval_points, sample)
    if weights is None:
        weights = kernel_weight_matrix(sample.W, h, KernelSpec(dim=sample.d_w))

    density = loo_densities(weights, h, sample.d_w)
    y_resid = indicator_matrix(sample.Y, y) - loo_cond_cdfs(weights, sample.Y, y)
    z_resid = indicator_matrix(sample.Z, z) - loo_cond_cdfs(weights, sample.Z, z)
    phi = weight_components(family, sample.W, w)

    values = phi * (y_resid * z_resid * density[:, None]).T[None]
    return ResidualMatrix(values=values, eval_points=list(eval_points))
