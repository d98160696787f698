"""
Return predictability study: does VRP_t help forecast RP_{t+tau}
beyond RP_t? Each horizon gets the linear HAC Granger test and,
optionally, the nonparametric CvM/KS tests on the triplet
(W = RP_t, Y = RP_{t+tau}, Z = VRP_t).
"""
from typing import Optional, Sequence

import pandas as pd

from npgc.config import TestConfig
from npgc.errors import NpgcError
from npgc.eval.dgplib import lag_embed
from npgc.model.lineargc import linear_granger_test
from npgc.model.resample import bootstrap_test
from npgc.utils import build_logger, derive_seed

logger = build_logger("empirical", "empirical.log")

DEFAULT_HORIZONS = (1, 3, 6, 9)


def _nonparametric_columns(rp, vrp, tau, base: TestConfig, bandwidth_cs, block_a, seed):
    sample = lag_embed(rp, vrp, p=1, tau=tau)
    row = {}
    if base.bandwidth == "auto":
        settings = [("auto", base.copy(update={"bootstrap": "multiplier"}))]
    else:
        settings = [(f"c{c:g}", base.copy(update={"bandwidth_c": c, "bootstrap": "multiplier"}))
                    for c in bandwidth_cs]
    if block_a is not None:
        settings.append(("block", base.copy(update={"bootstrap": "block", "block_a": block_a})))
    for k, (label, cfg) in enumerate(settings):
        cfg = cfg.copy(update={"seed": derive_seed(seed, tau, k)})
        try:
            result = bootstrap_test(sample, cfg)
        except NpgcError as e:
            logger.warning(f"horizon {tau}, {label}: {type(e).__name__}: {e}")
            row[f"p_cvm_{label}"] = row[f"p_ks_{label}"] = None
            continue
        row[f"p_cvm_{label}"] = result.p_cvm
        row[f"p_ks_{label}"] = result.p_ks
    return row


def predictability_study(
    rp,
    vrp,
    horizons: Sequence[int] = DEFAULT_HORIZONS,
    bandwidth_cs: Sequence[float] = (1.0,),
    block_a: Optional[float] = None,
    B: Optional[int] = None,
    seed: int = 0,
    hac_lags: Optional[int] = None,
    nonparametric: bool = True,
    base: Optional[TestConfig] = None,
) -> pd.DataFrame:
    """
    One row per horizon. `base` supplies the weight family and alpha of
    the nonparametric tests; `B` overrides its bootstrap count.
    """
    base = base or TestConfig()
    if B is not None:
        base = base.copy(update={"B": B})
    rows = []
    for tau in horizons:
        linear = linear_granger_test(rp, vrp, tau, m=hac_lags)
        row = {
            "horizon": tau,
            "n_obs": linear.n_obs,
            "alpha_hat": linear.alpha,
            "se_alpha": linear.se_alpha,
            "t_stat": linear.t_stat,
            "p_linear": linear.p_value,
            "hac_lags": linear.lags,
        }
        if nonparametric:
            row.update(_nonparametric_columns(rp, vrp, tau, base, bandwidth_cs, block_a, seed))
        logger.info(f"horizon {tau}: linear t={linear.t_stat:.3f} (p={linear.p_value:.4f})")
        rows.append(row)
    return pd.DataFrame(rows)
