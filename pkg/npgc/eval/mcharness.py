"""
Monte Carlo rejection rates: simulate -> triplet -> bootstrap_test ->
reject iff p < alpha, aggregated per cell (DGP, n, bandwidth, block a).

Replications are the parallel unit. Replication r of (DGP, n) draws its
data and bootstrap weights from streams keyed by (DGP, n, r), so every
bandwidth/block setting of that (DGP, n) sees the same data and the
rates do not depend on the number of workers.
"""
import dataclasses
import math
import multiprocessing
import time
from collections import Counter, defaultdict
from typing import Dict, List, Optional

from tqdm import tqdm

from npgc.config import DGP_IDS, ExperimentGrid
from npgc.errors import InvalidConfigError, NpgcError
from npgc.eval.dgplib import DgpSpec, simulate_sample
from npgc.model.resample import bootstrap_test
from npgc.utils import build_logger, derive_seed, resolve_workers, split_list

logger = build_logger("mcharness", "mcharness.log")

REPS_PER_TASK = 25


def mc_stderr(p, R):
    """sqrt(p (1 - p) / R)."""
    if not 0.0 <= p <= 1.0:
        raise InvalidConfigError(f"rate must lie in [0, 1], got {p}")
    if R < 1:
        raise InvalidConfigError(f"replication count must be positive, got {R}")
    return math.sqrt(p * (1.0 - p) / R)


@dataclasses.dataclass
class CellResult:
    dgp: str
    n: int
    c: Optional[float]
    a: Optional[float]
    reps: int
    completed: int = 0
    rejections_cvm: int = 0
    rejections_ks: int = 0
    errors: Dict[str, int] = dataclasses.field(default_factory=dict)
    seconds: float = 0.0
    pvalues_cvm: Optional[List[float]] = None
    pvalues_ks: Optional[List[float]] = None

    @property
    def rate_cvm(self):
        return self.rejections_cvm / self.completed if self.completed else float("nan")

    @property
    def rate_ks(self):
        return self.rejections_ks / self.completed if self.completed else float("nan")

    def _se(self, rate):
        return mc_stderr(rate, self.completed) if self.completed else None

    def to_dict(self, include_timing=False):
        out = {
            "dgp": self.dgp,
            "n": self.n,
            "c": self.c,
            "a": self.a,
            "reps": self.reps,
            "completed": self.completed,
            "rejections": {"cvm": self.rejections_cvm, "ks": self.rejections_ks},
            "rate": {
                "cvm": self.rate_cvm if self.completed else None,
                "ks": self.rate_ks if self.completed else None,
            },
            "se": {"cvm": self._se(self.rate_cvm), "ks": self._se(self.rate_ks)},
            "errors": dict(sorted(self.errors.items())),
        }
        if self.pvalues_cvm is not None:
            out["pvalues"] = {"cvm": self.pvalues_cvm, "ks": self.pvalues_ks}
        if include_timing:
            out["seconds"] = self.seconds
        return out


@dataclasses.dataclass
class McReport:
    cells: List[CellResult]
    reps: int
    B: int
    alpha: float
    seed: int
    scheme: str
    seconds: float = 0.0

    def cell(self, dgp, n, c=None, a=None):
        for cell in self.cells:
            if (cell.dgp, cell.n, cell.c, cell.a) == (dgp, n, c, a):
                return cell
        raise KeyError((dgp, n, c, a))

    def table(self, statistic="cvm"):
        from npgc.eval.summarize import rejection_table
        return rejection_table(self.to_dict(), statistic)

    def to_dict(self, include_timing=False):
        out = {
            "reps": self.reps,
            "B": self.B,
            "alpha": self.alpha,
            "seed": self.seed,
            "scheme": self.scheme,
            "cells": [cell.to_dict(include_timing) for cell in self.cells],
        }
        if include_timing:
            out["seconds"] = self.seconds
        return out


def _settings(grid: ExperimentGrid):
    """(c, a) pairs; c None means the data-driven bandwidth, a None the multiplier scheme."""
    cs = [None] if grid.data_driven else list(grid.bandwidth_cs)
    as_ = list(grid.block_as) if grid.bootstrap == "block" else [None]
    return [(c, a) for c in cs for a in as_]


def _run_chunk(task):
    """Replications `task['reps']` of one (DGP, n), under every setting of the grid."""
    grid = ExperimentGrid.parse_obj(task["grid"])
    dgp, n = task["dgp"], task["n"]
    dgp_key = DGP_IDS.index(dgp)
    settings = _settings(grid)
    outcomes = []
    for r in task["reps"]:
        spec = DgpSpec(dgp=dgp, n=n, burn_in=grid.burn_in, seed=derive_seed(grid.seed, dgp_key, n, r, 0))
        boot_seed = derive_seed(grid.seed, dgp_key, n, r, 1)
        try:
            sample = simulate_sample(spec)
        except NpgcError as e:
            outcomes.append((r, [(None, None, type(e).__name__, 0.0)] * len(settings)))
            continue
        per_setting = []
        for c, a in settings:
            start = time.perf_counter()
            try:
                result = bootstrap_test(sample, grid.test_config(c=c, a=a, seed=boot_seed))
                per_setting.append((result.p_cvm, result.p_ks, None, time.perf_counter() - start))
            except NpgcError as e:
                per_setting.append((None, None, type(e).__name__, time.perf_counter() - start))
        outcomes.append((r, per_setting))
    return dgp, n, outcomes


def run_experiment(grid: ExperimentGrid, workers=None, progress=True) -> McReport:
    workers = resolve_workers(workers)
    settings = _settings(grid)
    started = time.perf_counter()

    grid_dict = grid.dict()
    tasks = []
    for dgp in grid.dgps:
        for n in grid.sizes:
            for reps in split_list(list(range(grid.reps)), math.ceil(grid.reps / REPS_PER_TASK)):
                tasks.append({"grid": grid_dict, "dgp": dgp, "n": n, "reps": reps})
    logger.info(f"Monte Carlo: {len(grid.dgps)} DGP(s) x {len(grid.sizes)} size(s) x {len(settings)} setting(s), "
                f"R={grid.reps}, B={grid.B}, workers={workers}")

    collected = defaultdict(list)
    if workers == 1:
        results = map(_run_chunk, tasks)
        for dgp, n, outcomes in tqdm(results, total=len(tasks), disable=not progress):
            collected[(dgp, n)].extend(outcomes)
    else:
        with multiprocessing.Pool(processes=workers) as pool:
            results = pool.imap_unordered(_run_chunk, tasks)
            for dgp, n, outcomes in tqdm(results, total=len(tasks), disable=not progress):
                collected[(dgp, n)].extend(outcomes)

    cells = []
    for dgp in grid.dgps:
        for n in grid.sizes:
            outcomes = sorted(collected[(dgp, n)], key=lambda item: item[0])
            for k, (c, a) in enumerate(settings):
                cell = CellResult(dgp=dgp, n=n, c=c, a=a, reps=grid.reps)
                errors = Counter()
                p_cvm, p_ks = [], []
                for _, per_setting in outcomes:
                    pc, pk, error, seconds = per_setting[k]
                    cell.seconds += seconds
                    if error is not None:
                        errors[error] += 1
                        continue
                    p_cvm.append(pc)
                    p_ks.append(pk)
                cell.completed = len(p_cvm)
                cell.rejections_cvm = sum(1 for p in p_cvm if p < grid.alpha)
                cell.rejections_ks = sum(1 for p in p_ks if p < grid.alpha)
                cell.errors = dict(errors)
                if grid.keep_pvalues:
                    cell.pvalues_cvm, cell.pvalues_ks = p_cvm, p_ks
                if errors:
                    logger.warning(f"{dgp} n={n} c={c} a={a}: {sum(errors.values())} failed replication(s) {dict(errors)}")
                logger.info(f"{dgp} n={n} c={c} a={a}: CvM {cell.rate_cvm:.3f}, KS {cell.rate_ks:.3f} "
                            f"over {cell.completed} replications")
                cells.append(cell)

    return McReport(
        cells=cells,
        reps=grid.reps,
        B=grid.B,
        alpha=grid.alpha,
        seed=grid.seed,
        scheme=grid.bootstrap,
        seconds=time.perf_counter() - started,
    )
