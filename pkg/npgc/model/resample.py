"""
Multiplier and block-multiplier bootstrap for the CvM / KS statistics.

Every replication b draws its weights from its own stream
derive_rng(seed, b), and all replications reuse one precomputed
ResidualMatrix, so results do not depend on how the work is scheduled.
"""
import dataclasses
import math
from enum import Enum, auto
from typing import Dict, Optional

import numpy as np

from npgc.constants import BOOTSTRAP_CHUNK, REPORTED_QUANTILES
from npgc.errors import DimensionMismatchError, InvalidConfigError
from npgc.model.builder import build_components
from npgc.model.ciprocess import ProcessValues, ResidualMatrix, process_on_sample, residual_matrix
from npgc.model.smoothing import KernelSpec, TimeSeriesSample, bandwidth, kernel_weight_matrix
from npgc.model.teststats import StatisticValue, statistics
from npgc.utils import derive_rng

SQRT5 = math.sqrt(5.0)
MAMMEN_LOW = (1.0 - SQRT5) / 2.0
MAMMEN_HIGH = (1.0 + SQRT5) / 2.0
MAMMEN_P_LOW = (1.0 + SQRT5) / (2.0 * SQRT5)
MAMMEN_P_HIGH = (-1.0 + SQRT5) / (2.0 * SQRT5)


class BootstrapScheme(Enum):
    MULTIPLIER = auto()
    BLOCK_MULTIPLIER = auto()

    @classmethod
    def from_str(cls, name):
        if name == "multiplier":
            return cls.MULTIPLIER
        elif name in ("block", "block_multiplier"):
            return cls.BLOCK_MULTIPLIER
        raise InvalidConfigError(f"Invalid bootstrap scheme: {name}")


@dataclasses.dataclass(frozen=True)
class BootstrapConfig:
    scheme: BootstrapScheme = BootstrapScheme.MULTIPLIER
    B: int = 200
    block_a: float = 2.0
    seed: int = 0

    def __post_init__(self):
        if self.B < 1:
            raise InvalidConfigError(f"B must be at least 1, got {self.B}")
        if not self.block_a > 0:
            raise InvalidConfigError(f"block constant a must be positive, got {self.block_a}")
        if not 0 <= self.seed < 2 ** 64:
            raise InvalidConfigError(f"seed must be a non-negative 64-bit integer, got {self.seed}")

    @classmethod
    def from_test_config(cls, test_cfg):
        return cls(
            scheme=BootstrapScheme.from_str(test_cfg.bootstrap),
            B=test_cfg.B,
            block_a=test_cfg.block_a,
            seed=test_cfg.seed,
        )

    def block_length(self, n):
        """L = floor(a n^{1/4}), required to lie in [1, n]."""
        L = int(math.floor(self.block_a * n ** 0.25))
        if not 1 <= L <= n:
            raise InvalidConfigError(f"block length {L} outside [1, {n}] (a={self.block_a}, n={n})")
        return L


@dataclasses.dataclass
class TestResult:
    __test__ = False

    statistic: StatisticValue
    p_cvm: float
    p_ks: float
    bootstrap_quantiles: Dict[str, Dict[str, float]]
    critical_values: Dict[str, float]
    bandwidth: float
    n: int
    B: int
    alpha: float
    seed: int
    scheme: str
    block_length: Optional[int] = None
    config: Optional[dict] = None

    @property
    def reject_cvm(self):
        return self.p_cvm < self.alpha

    @property
    def reject_ks(self):
        return self.p_ks < self.alpha

    def to_dict(self):
        return {
            "statistic": self.statistic.to_dict(),
            "p_cvm": self.p_cvm,
            "p_ks": self.p_ks,
            "reject": {
                "cvm": self.reject_cvm,
                "ks": self.reject_ks,
                "cvm_critical": self.statistic.cvm > self.critical_values["cvm"],
                "ks_critical": self.statistic.ks > self.critical_values["ks"],
            },
            "bootstrap_quantiles": self.bootstrap_quantiles,
            "critical_values": self.critical_values,
            "bandwidth": self.bandwidth,
            "block_length": self.block_length,
            "n": self.n,
            "B": self.B,
            "alpha": self.alpha,
            "seed": self.seed,
            "scheme": self.scheme,
            "config": self.config,
        }


def mammen_weights(n, stream):
    """Two-point weights with mean 0 and variance 1."""
    u = stream.random(n)
    return np.where(u < MAMMEN_P_LOW, MAMMEN_LOW, MAMMEN_HIGH)


def _bootstrap_process(E: ResidualMatrix, V):
    """S*[b, c, j] = n^{-1/2} sum_t e_t(gamma_j) V[b, t]."""
    return np.einsum("cjt,bt->bcj", E.values, V) / math.sqrt(E.n)


def multiplier_replicate(E: ResidualMatrix, v) -> StatisticValue:
    v = np.asarray(v, dtype=float)
    if v.shape != (E.n,):
        raise DimensionMismatchError(f"multiplier vector has shape {v.shape}, expected ({E.n},)")
    s_star = _bootstrap_process(E, v[None])[0]
    return statistics(ProcessValues(s_star))


def block_multiplier_weights(zeta, L):
    """w_s = sum of zeta_t over the blocks {t, ..., t+L-1} that contain s."""
    zeta = np.asarray(zeta, dtype=float)
    return np.convolve(zeta, np.ones(L))


def _check_block_length(L, n):
    if not 1 <= L <= n:
        raise InvalidConfigError(f"block length {L} outside [1, {n}]")


def block_multiplier_replicate(E: ResidualMatrix, L, stream) -> StatisticValue:
    n = E.n
    _check_block_length(L, n)
    zeta = stream.standard_normal(n - L + 1) / math.sqrt(L)
    return multiplier_replicate(E, block_multiplier_weights(zeta, L))


def _draw(boot: BootstrapConfig, n, L, b):
    stream = derive_rng(boot.seed, b)
    if boot.scheme == BootstrapScheme.MULTIPLIER:
        return mammen_weights(n, stream)
    zeta = stream.standard_normal(n - L + 1) / math.sqrt(L)
    return block_multiplier_weights(zeta, L)


def bootstrap_distribution(E: ResidualMatrix, boot: BootstrapConfig):
    """Bootstrap CvM and KS draws, in replication order."""
    n = E.n
    L = None
    if boot.scheme == BootstrapScheme.BLOCK_MULTIPLIER:
        L = boot.block_length(n)
    cvm = np.empty(boot.B)
    ks = np.empty(boot.B)
    for start in range(0, boot.B, BOOTSTRAP_CHUNK):
        stop = min(start + BOOTSTRAP_CHUNK, boot.B)
        V = np.vstack([_draw(boot, n, L, b) for b in range(start, stop)])
        s_star = _bootstrap_process(E, V)
        if s_star.shape[1] == 1:
            modulus = np.abs(s_star[:, 0, :])
        else:
            modulus = np.sqrt(np.sum(s_star * s_star, axis=1))
        cvm[start:stop] = np.mean(modulus * modulus, axis=1)
        ks[start:stop] = np.max(modulus, axis=1)
    return cvm, ks


def bootstrap_pvalue(draws, observed):
    """B^{-1} #{b : stat*_b >= stat}."""
    draws = np.asarray(draws, dtype=float)
    return float(np.count_nonzero(draws >= observed)) / draws.size


def bootstrap_test(sample: TimeSeriesSample, test_cfg) -> TestResult:
    rule, family = build_components(test_cfg)
    boot = BootstrapConfig.from_test_config(test_cfg)

    # Step 1: process at the observations and the observed statistics
    h = bandwidth(rule, sample)
    weights = kernel_weight_matrix(sample.W, h, KernelSpec(dim=sample.d_w))
    observed = statistics(process_on_sample(sample, h, family, weights=weights))

    # Steps 2-3: B weighted draws over one residual matrix
    E = residual_matrix(sample, h, family, weights=weights)
    cvm_draws, ks_draws = bootstrap_distribution(E, boot)

    quantiles = {
        name: {f"{q:.2f}": float(np.quantile(draws, q)) for q in REPORTED_QUANTILES}
        for name, draws in (("cvm", cvm_draws), ("ks", ks_draws))
    }
    critical = {
        "cvm": float(np.quantile(cvm_draws, 1.0 - test_cfg.alpha)),
        "ks": float(np.quantile(ks_draws, 1.0 - test_cfg.alpha)),
    }
    block_length = boot.block_length(sample.n) if boot.scheme == BootstrapScheme.BLOCK_MULTIPLIER else None
    return TestResult(
        statistic=observed,
        p_cvm=bootstrap_pvalue(cvm_draws, observed.cvm),
        p_ks=bootstrap_pvalue(ks_draws, observed.ks),
        bootstrap_quantiles=quantiles,
        critical_values=critical,
        bandwidth=h,
        n=sample.n,
        B=boot.B,
        alpha=test_cfg.alpha,
        seed=boot.seed,
        scheme=test_cfg.bootstrap,
        block_length=block_length,
        config=test_cfg.dict(),
    )
