from .smoothing import TimeSeriesSample, KernelSpec, BandwidthRule, BandwidthKind
from .ciprocess import WeightFamily, WeightKind, EvaluationPoint, ProcessValues, ResidualMatrix
from .teststats import StatisticValue, cvm_stat, ks_stat
from .resample import BootstrapConfig, BootstrapScheme, TestResult, bootstrap_test
from .lineargc import HacRegressionResult, linear_granger_test
