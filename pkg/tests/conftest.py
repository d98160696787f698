import numpy as np
import pytest

from npgc.model.smoothing import TimeSeriesSample


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_sample(rng, n, d_w=1, d_y=1, d_z=1):
    return TimeSeriesSample(
        W=rng.standard_normal((n, d_w)),
        Y=rng.standard_normal((n, d_y)),
        Z=rng.standard_normal((n, d_z)),
    )


@pytest.fixture
def make_sample(rng):
    def make(n=30, d_w=1, d_y=1, d_z=1):
        return random_sample(rng, n, d_w, d_y, d_z)
    return make


@pytest.fixture
def micro_sample():
    """n=2, W=(0,0), Y=(0,1), Z=(0,1)."""
    return TimeSeriesSample(W=[0.0, 0.0], Y=[0.0, 1.0], Z=[0.0, 1.0])


@pytest.fixture
def csv_file(tmp_path, rng):
    n = 80
    rp = rng.standard_normal(n)
    vrp = rng.standard_normal(n)
    lines = ["date,rp,vrp"]
    for t in range(n):
        lines.append(f"2000-{t // 12 + 1:02d}-{t % 12 + 1:02d},{rp[t]:.17g},{vrp[t]:.17g}")
    path = tmp_path / "data.csv"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path
