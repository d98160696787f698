"""
User-facing configuration models. Flags and config files are validated
here; `npgc.model.builder` turns them into numeric components.
"""
import hashlib
import json
from typing import List, Optional

import pydantic
from pydantic import BaseModel, root_validator, validator

from npgc.constants import DEFAULT_ALPHA, DEFAULT_BURN_IN, DESK_BOOTSTRAP, DESK_REPS
from npgc.errors import InvalidConfigError

DGP_IDS = ("S1", "S2", "S3", "S4", "P1", "P2", "P3", "P4", "P5", "P6", "P7")
_SEED_LIMIT = 2 ** 64


def _check_alpha(v):
    if not 0.0 < v < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {v}")
    return v


def _check_seed(v):
    if not 0 <= v < _SEED_LIMIT:
        raise ValueError(f"seed must be a non-negative 64-bit integer, got {v}")
    return v


def _check_format(v):
    if v not in ("json", "csv"):
        raise ValueError(f"format must be 'json' or 'csv', got {v!r}")
    return v


def canonical_json(data):
    return json.dumps(data, sort_keys=True, separators=(",", ":"))


def config_hash(data):
    """sha256 of the canonical JSON encoding of a plain config dict."""
    return hashlib.sha256(canonical_json(data).encode("utf-8")).hexdigest()


class CanonicalModel(BaseModel):

    class Config:
        extra = "forbid"
        validate_assignment = True

    def config_hash(self):
        return config_hash(self.dict())


class TestConfig(CanonicalModel):
    """Everything that determines one test run."""
    __test__ = False

    bandwidth: str = "fixed"
    bandwidth_c: float = 1.0
    weight_family: str = "indicator"
    weight_lower: Optional[List[float]] = None
    weight_upper: Optional[List[float]] = None
    bootstrap: str = "multiplier"
    block_a: float = 2.0
    B: int = DESK_BOOTSTRAP
    alpha: float = DEFAULT_ALPHA
    y_col: Optional[str] = None
    z_col: Optional[str] = None
    w_cols: List[str] = []
    lags: int = 1
    horizon: int = 1
    seed: int = 0
    output_format: str = "json"

    @validator("bandwidth")
    def _bandwidth(cls, v):
        if v not in ("fixed", "auto"):
            raise ValueError(f"bandwidth must be 'fixed' or 'auto', got {v!r}")
        return v

    @validator("bandwidth_c", "block_a")
    def _positive(cls, v):
        if not v > 0:
            raise ValueError(f"must be positive, got {v}")
        return v

    @validator("weight_family")
    def _family(cls, v):
        if v not in ("indicator", "sine", "complex_exp"):
            raise ValueError(f"unknown weight family {v!r}")
        return v

    @validator("bootstrap")
    def _bootstrap(cls, v):
        if v not in ("multiplier", "block"):
            raise ValueError(f"bootstrap must be 'multiplier' or 'block', got {v!r}")
        return v

    @validator("B")
    def _replications(cls, v):
        if v < 1:
            raise ValueError(f"B must be at least 1, got {v}")
        return v

    _alpha = validator("alpha", allow_reuse=True)(_check_alpha)
    _seed = validator("seed", allow_reuse=True)(_check_seed)

    @validator("lags")
    def _lags(cls, v):
        if v < 1:
            raise ValueError(f"lags must be at least 1, got {v}")
        return v

    @validator("horizon")
    def _horizon(cls, v):
        if v < 0:
            raise ValueError(f"horizon must be non-negative, got {v}")
        return v

    _format = validator("output_format", allow_reuse=True)(_check_format)

    @root_validator(skip_on_failure=True)
    def _bounds(cls, values):
        lower, upper = values.get("weight_lower"), values.get("weight_upper")
        if (lower is None) != (upper is None):
            raise ValueError("weight_lower and weight_upper go together")
        if lower is not None and values.get("weight_family") == "indicator":
            raise ValueError("the indicator family takes no evaluation bounds")
        return values


class SimulateConfig(CanonicalModel):
    dgp: str
    n: int
    burn_in: int = DEFAULT_BURN_IN
    seed: int = 0
    output_format: str = "json"

    @validator("dgp")
    def _dgp(cls, v):
        v = v.upper()
        if v not in DGP_IDS:
            raise ValueError(f"unknown DGP {v!r}")
        return v

    @validator("n")
    def _length(cls, v):
        if v < 2:
            raise ValueError(f"series length must be at least 2, got {v}")
        return v

    @validator("burn_in")
    def _burn_in(cls, v):
        if v < 0:
            raise ValueError(f"burn-in must be non-negative, got {v}")
        return v

    _seed = validator("seed", allow_reuse=True)(_check_seed)
    _format = validator("output_format", allow_reuse=True)(_check_format)


class ExperimentGrid(CanonicalModel):
    dgps: List[str] = list(DGP_IDS)
    sizes: List[int] = [100]
    bandwidth_cs: List[float] = [1.0]
    data_driven: bool = False
    weight_family: str = "indicator"
    bootstrap: str = "multiplier"
    block_as: List[float] = [2.0]
    reps: int = DESK_REPS
    B: int = DESK_BOOTSTRAP
    alpha: float = DEFAULT_ALPHA
    burn_in: int = DEFAULT_BURN_IN
    seed: int = 0
    keep_pvalues: bool = False

    @validator("dgps", each_item=True)
    def _dgp(cls, v):
        if v not in DGP_IDS:
            raise ValueError(f"unknown DGP {v!r}")
        return v

    @validator("sizes", each_item=True)
    def _size(cls, v):
        if v < 3:
            raise ValueError(f"sample size must be at least 3, got {v}")
        return v

    @validator("bandwidth_cs", "block_as", each_item=True)
    def _positive(cls, v):
        if not v > 0:
            raise ValueError(f"must be positive, got {v}")
        return v

    @validator("bootstrap")
    def _bootstrap(cls, v):
        if v not in ("multiplier", "block"):
            raise ValueError(f"bootstrap must be 'multiplier' or 'block', got {v!r}")
        return v

    @validator("reps", "B")
    def _count(cls, v):
        if v < 1:
            raise ValueError(f"must be at least 1, got {v}")
        return v

    @validator("burn_in")
    def _burn_in(cls, v):
        if v < 0:
            raise ValueError(f"burn-in must be non-negative, got {v}")
        return v

    _alpha = validator("alpha", allow_reuse=True)(_check_alpha)
    _seed = validator("seed", allow_reuse=True)(_check_seed)

    def test_config(self, c=None, a=None, seed=0):
        return TestConfig(
            bandwidth="auto" if c is None else "fixed",
            bandwidth_c=1.0 if c is None else c,
            weight_family=self.weight_family,
            bootstrap=self.bootstrap,
            block_a=2.0 if a is None else a,
            B=self.B,
            alpha=self.alpha,
            seed=seed,
        )


def parse_config(model, data):
    """Validate `data` into `model`, reporting failures as InvalidConfigError."""
    try:
        return model.parse_obj(data)
    except pydantic.ValidationError as e:
        problems = "; ".join(
            f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in e.errors())
        raise InvalidConfigError(problems) from None
