"""
Simulators for the eleven designs used in the size/power study and the
constructors that turn raw series into (W, Y, Z) test triplets.

Innovations eps_1, eps_2, eps_3 are i.i.d. N(0, 1), drawn from three
disjoint substreams of the DgpSpec seed. Z_t follows 0.5 Z_{t-1} + eps_2
except in S4 and P7, where it is GARCH(1,1).
"""
import dataclasses
from enum import Enum
from typing import Optional

import numpy as np

from npgc.constants import DEFAULT_BURN_IN
from npgc.errors import DimensionMismatchError, InsufficientDataError, InvalidConfigError
from npgc.model.smoothing import TimeSeriesSample

GARCH_FLOOR = 0.01


class DgpId(str, Enum):
    S1 = "S1"
    S2 = "S2"
    S3 = "S3"
    S4 = "S4"
    P1 = "P1"
    P2 = "P2"
    P3 = "P3"
    P4 = "P4"
    P5 = "P5"
    P6 = "P6"
    P7 = "P7"

    @classmethod
    def from_str(cls, name):
        try:
            return cls(name.upper())
        except ValueError:
            raise InvalidConfigError(f"Invalid DGP: {name}") from None


# Recursion coefficients, keyed by the term they multiply.
COEFFICIENTS = {
    DgpId.S1: {},
    DgpId.S2: {"y_lag": 0.5},
    DgpId.S3: {"y_lag": 0.5, "exp_y_lag_sq": -0.5},
    DgpId.S4: {"omega": 0.01, "h_lag": 0.9, "y_lag_sq": 0.05,
               "z_omega": 0.01, "z_h_lag": 0.9, "z_lag_sq": 0.05},
    DgpId.P1: {"y_lag": 0.5, "z_lag": 0.5},
    DgpId.P2: {"y_lag": 0.5, "z_lag_sq": 0.5},
    DgpId.P3: {"y_lag_z_lag": 0.5},
    DgpId.P4: {"const": 0.3, "log_h": 0.2, "omega": 0.01, "y_lag_sq": 0.5, "z_lag_sq": 0.3},
    DgpId.P5: {"y_lag": 0.5, "z_lag_eps": 0.5},
    DgpId.P6: {"omega": 0.01, "y_lag_sq": 0.5, "z_lag_sq": 0.25},
    DgpId.P7: {"omega": 0.01, "h_lag": 0.1, "y_lag_sq": 0.4, "z_lag_sq": 0.5,
               "z_omega": 0.01, "z_h_lag": 0.9, "z_lag_sq_own": 0.05},
}
Z_AR = 0.5


@dataclasses.dataclass(frozen=True)
class DgpSpec:
    dgp: DgpId
    n: int
    burn_in: int = DEFAULT_BURN_IN
    seed: int = 0

    def __post_init__(self):
        if not isinstance(self.dgp, DgpId):
            object.__setattr__(self, "dgp", DgpId.from_str(str(self.dgp)))
        if self.n < 2:
            raise InvalidConfigError(f"series length must be at least 2, got {self.n}")
        if self.burn_in < 0:
            raise InvalidConfigError(f"burn-in must be non-negative, got {self.burn_in}")


@dataclasses.dataclass
class RawSeries:
    y: np.ndarray
    z: np.ndarray
    x: Optional[np.ndarray] = None
    h_y: Optional[np.ndarray] = None
    h_z: Optional[np.ndarray] = None

    def __len__(self):
        return self.y.shape[0]


def _garch_start(omega, persistence):
    return omega / (1.0 - persistence) if persistence < 1.0 else GARCH_FLOOR


def simulate(spec: DgpSpec) -> RawSeries:
    total = spec.n + spec.burn_in
    streams = [np.random.default_rng(s) for s in np.random.SeedSequence(spec.seed).spawn(3)]
    e1, e2, e3 = (stream.standard_normal(total) for stream in streams)
    coef = COEFFICIENTS[spec.dgp]
    dgp = spec.dgp

    y = np.zeros(total)
    z = np.zeros(total)
    h_y = None
    h_z = None
    x = None

    if dgp == DgpId.S1:
        y, z, x = e1, e2, e3
    elif dgp in (DgpId.S4, DgpId.P7):
        h_y = np.zeros(total)
        h_z = np.zeros(total)
        h_y_prev = _garch_start(coef["omega"], coef["h_lag"] + coef["y_lag_sq"] +
                                (coef["z_lag_sq"] if dgp == DgpId.P7 else 0.0))
        z_own = coef["z_lag_sq"] if dgp == DgpId.S4 else coef["z_lag_sq_own"]
        h_z_prev = _garch_start(coef["z_omega"], coef["z_h_lag"] + z_own)
        y_prev = z_prev = 0.0
        for t in range(total):
            hy = coef["omega"] + coef["h_lag"] * h_y_prev + coef["y_lag_sq"] * y_prev ** 2
            if dgp == DgpId.P7:
                hy += coef["z_lag_sq"] * z_prev ** 2
            hz = coef["z_omega"] + coef["z_h_lag"] * h_z_prev + z_own * z_prev ** 2
            y[t] = np.sqrt(hy) * e1[t]
            z[t] = np.sqrt(hz) * e2[t]
            h_y[t], h_z[t] = hy, hz
            h_y_prev, h_z_prev, y_prev, z_prev = hy, hz, y[t], z[t]
    else:
        if dgp in (DgpId.P4, DgpId.P6):
            h_y = np.zeros(total)
        y_prev = z_prev = 0.0
        for t in range(total):
            if dgp == DgpId.S2:
                y[t] = coef["y_lag"] * y_prev + e1[t]
            elif dgp == DgpId.S3:
                y[t] = coef["y_lag"] * y_prev * np.exp(coef["exp_y_lag_sq"] * y_prev ** 2) + e1[t]
            elif dgp == DgpId.P1:
                y[t] = coef["y_lag"] * y_prev + coef["z_lag"] * z_prev + e1[t]
            elif dgp == DgpId.P2:
                y[t] = coef["y_lag"] * y_prev + coef["z_lag_sq"] * z_prev ** 2 + e1[t]
            elif dgp == DgpId.P3:
                y[t] = coef["y_lag_z_lag"] * y_prev * z_prev + e1[t]
            elif dgp == DgpId.P4:
                h = coef["omega"] + coef["y_lag_sq"] * y_prev ** 2 + coef["z_lag_sq"] * z_prev ** 2
                y[t] = coef["const"] + coef["log_h"] * np.log(h) + np.sqrt(h) * e1[t]
                h_y[t] = h
            elif dgp == DgpId.P5:
                y[t] = coef["y_lag"] * y_prev + coef["z_lag_eps"] * z_prev * e1[t]
            elif dgp == DgpId.P6:
                h = coef["omega"] + coef["y_lag_sq"] * y_prev ** 2 + coef["z_lag_sq"] * z_prev ** 2
                y[t] = np.sqrt(h) * e1[t]
                h_y[t] = h
            z[t] = Z_AR * z_prev + e2[t]
            y_prev, z_prev = y[t], z[t]

    keep = slice(spec.burn_in, total)
    return RawSeries(
        y=y[keep].copy(),
        z=z[keep].copy(),
        x=None if x is None else x[keep].copy(),
        h_y=None if h_y is None else h_y[keep].copy(),
        h_z=None if h_z is None else h_z[keep].copy(),
    )


def make_triplet(raw: RawSeries, spec: DgpSpec) -> TimeSeriesSample:
    """
    S1 tests Y_t _|_ Z_t | X_t (W = X); every other design tests
    Y_t _|_ Z_{t-1} | Y_{t-1} (W = Y_{t-1}), losing one row.
    """
    if spec.dgp == DgpId.S1:
        if len(raw) < 2:
            raise InsufficientDataError(f"need at least 2 observations, got {len(raw)}")
        return TimeSeriesSample(W=raw.x, Y=raw.y, Z=raw.z)
    if len(raw) < 3:
        raise InsufficientDataError(f"need at least 3 observations for a lagged triplet, got {len(raw)}")
    return TimeSeriesSample(W=raw.y[:-1], Y=raw.y[1:], Z=raw.z[:-1])


def simulate_sample(spec: DgpSpec) -> TimeSeriesSample:
    return make_triplet(simulate(spec), spec)


def _columns(series, name):
    arr = np.asarray(series, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2:
        raise DimensionMismatchError(f"{name} must be a vector or an n x d matrix")
    return arr


def embedding_times(n, p, tau):
    """Information times t = p-1, ..., n-1-tau of an embedding (n - p - tau + 1 of them)."""
    if p < 1 or tau < 0:
        raise InvalidConfigError(f"need p >= 1 and tau >= 0, got p={p}, tau={tau}")
    rows = n - p - tau + 1
    if rows < 1:
        raise InsufficientDataError(f"{n} observations are too few for p={p}, tau={tau}")
    return np.arange(p - 1, p - 1 + rows)


def lag_embed(target, predictor, conditioning=None, p=1, tau=1) -> TimeSeriesSample:
    """
    Row r, at information time t = r + p - 1, holds
    W = (cond_t, cond_{t-1}, ..., cond_{t-p+1}), Y = target_{t+tau}, Z = predictor_t,
    giving n - p - tau + 1 rows. `conditioning` defaults to the target itself.
    """
    target = _columns(target, "target")
    predictor = _columns(predictor, "predictor")
    conditioning = target if conditioning is None else _columns(conditioning, "conditioning")
    n = target.shape[0]
    if predictor.shape[0] != n or conditioning.shape[0] != n:
        raise DimensionMismatchError("target, predictor and conditioning series differ in length")
    times = embedding_times(n, p, tau)
    if times.size < 2:
        raise InsufficientDataError(f"{n} observations leave {times.size} row(s) for p={p}, tau={tau}; need 2")

    W = np.hstack([conditioning[times - lag] for lag in range(p)])
    return TimeSeriesSample(W=W, Y=target[times + tau], Z=predictor[times])
