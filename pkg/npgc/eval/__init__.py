from .dgplib import DgpId, DgpSpec, RawSeries, simulate, make_triplet, simulate_sample, lag_embed
from .mcharness import CellResult, McReport, mc_stderr, run_experiment
from .empirical import predictability_study
