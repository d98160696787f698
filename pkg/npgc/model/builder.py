from npgc.model.ciprocess import WeightFamily, WeightKind
from npgc.model.smoothing import BandwidthKind, BandwidthRule


def build_bandwidth_rule(test_cfg):
    kind = BandwidthKind.from_str(test_cfg.bandwidth)
    return BandwidthRule(kind=kind, c=test_cfg.bandwidth_c)


def build_weight_family(test_cfg):
    kind = WeightKind.from_str(test_cfg.weight_family)
    if test_cfg.weight_lower is None:
        return WeightFamily(kind=kind)
    return WeightFamily(kind=kind, lower=tuple(test_cfg.weight_lower), upper=tuple(test_cfg.weight_upper))


def build_components(test_cfg):
    """(bandwidth rule, weight family) for a validated TestConfig."""
    return build_bandwidth_rule(test_cfg), build_weight_family(test_cfg)
