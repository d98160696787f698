"""
Reports written by the CLI: a result payload, the effective config, the
config file values it was built from, and a provenance block.
"""
import datetime
import json
import sys
from typing import Any, Dict, Optional

import pandas as pd
from pydantic import BaseModel, validator

import npgc
from npgc.config import config_hash
from npgc.errors import InvalidConfigError
from npgc.eval.summarize import rejection_frame

REPORT_KINDS = ("test", "simulate", "mc", "granger")
FORMATS = ("json", "csv")


class Provenance(BaseModel):
    tool_version: str
    config_hash: str
    seed: int
    started_at: Optional[str] = None
    finished_at: Optional[str] = None
    elapsed_seconds: Optional[float] = None


class Report(BaseModel):
    kind: str
    result: Dict[str, Any]
    config: Dict[str, Any]
    config_file: Optional[Dict[str, Any]] = None
    provenance: Provenance

    class Config:
        extra = "forbid"

    @validator("kind")
    def _kind(cls, v):
        if v not in REPORT_KINDS:
            raise ValueError(f"unknown report kind {v!r}")
        return v

    def to_json(self):
        return json.dumps(self.dict(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    @classmethod
    def from_json(cls, text):
        return cls.parse_obj(json.loads(text))


def utc_now():
    return datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")


def make_report(kind, result, config, seed, config_file=None, started_at=None, finished_at=None, elapsed=None):
    return Report(
        kind=kind,
        result=result,
        config=config,
        config_file=config_file,
        provenance=Provenance(
            tool_version=npgc.__version__,
            config_hash=config_hash(config),
            seed=seed,
            started_at=started_at,
            finished_at=finished_at,
            elapsed_seconds=elapsed,
        ),
    )


def _test_frame(result):
    row = {
        "cvm": result["statistic"]["cvm"],
        "ks": result["statistic"]["ks"],
        "p_cvm": result["p_cvm"],
        "p_ks": result["p_ks"],
        "critical_cvm": result["critical_values"]["cvm"],
        "critical_ks": result["critical_values"]["ks"],
        "reject_cvm": result["reject"]["cvm"],
        "reject_ks": result["reject"]["ks"],
        "bandwidth": result["bandwidth"],
        "block_length": result["block_length"],
        "n": result["n"],
        "B": result["B"],
        "alpha": result["alpha"],
        "seed": result["seed"],
        "scheme": result["scheme"],
    }
    return pd.DataFrame([row])


def report_frame(report: Report) -> pd.DataFrame:
    """The CSV view of a report."""
    if report.kind == "test":
        return _test_frame(report.result)
    if report.kind == "mc":
        return rejection_frame(report.result)
    if report.kind == "granger":
        return pd.DataFrame(report.result["rows"])
    return pd.DataFrame(report.result["data"], columns=report.result["columns"])


def emit_report(report: Report, fmt="json", path=None):
    """Write `report` to `path` (stdout when None). OSError propagates."""
    if fmt not in FORMATS:
        raise InvalidConfigError(f"Invalid output format: {fmt}")
    if fmt == "json":
        text = report.to_json()
    else:
        text = report_frame(report).to_csv(index=False)

    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(text)
    return path
