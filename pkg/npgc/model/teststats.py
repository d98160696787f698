import dataclasses

import numpy as np

from npgc.errors import DimensionMismatchError
from npgc.model.ciprocess import ProcessValues


@dataclasses.dataclass(frozen=True)
class StatisticValue:
    cvm: float
    ks: float

    def to_dict(self):
        return {"cvm": self.cvm, "ks": self.ks}


def _modulus(s):
    if not isinstance(s, ProcessValues):
        s = ProcessValues(np.asarray(s, dtype=float))
    if s.s.size == 0:
        raise DimensionMismatchError("test statistics need at least one process value")
    return s.modulus


def cvm_stat(s) -> float:
    """n^{-1} sum_t |S_n(W_t, Y_t, Z_t)|^2."""
    m = _modulus(s)
    return float(np.mean(m * m))


def ks_stat(s) -> float:
    """max_t |S_n(W_t, Y_t, Z_t)|, the supremum taken over the observations."""
    return float(np.max(_modulus(s)))


def statistics(s) -> StatisticValue:
    return StatisticValue(cvm=cvm_stat(s), ks=ks_stat(s))
