import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from npgc.errors import InsufficientDataError, InvalidConfigError
from npgc.eval.dgplib import (
    COEFFICIENTS,
    Z_AR,
    DgpId,
    DgpSpec,
    embedding_times,
    lag_embed,
    make_triplet,
    simulate,
    simulate_sample,
)


@pytest.mark.parametrize("dgp", list(DgpId), ids=lambda d: d.value)
def test_every_design_simulates(dgp):
    raw = simulate(DgpSpec(dgp, n=200, seed=1))
    assert len(raw) == 200
    assert np.all(np.isfinite(raw.y)) and np.all(np.isfinite(raw.z))
    sample = simulate_sample(DgpSpec(dgp, n=200, seed=1))
    assert sample.n == (200 if dgp == DgpId.S1 else 199)


def test_same_seed_same_series():
    a = simulate(DgpSpec("P4", n=150, seed=42))
    b = simulate(DgpSpec("P4", n=150, seed=42))
    assert_array_equal(a.y, b.y)
    assert_array_equal(a.z, b.z)
    c = simulate(DgpSpec("P4", n=150, seed=43))
    assert not np.array_equal(a.y, c.y)


def test_s1_moments():
    raw = simulate(DgpSpec("S1", n=10 ** 5, seed=0))
    assert abs(raw.y.mean()) < 0.02
    assert abs(raw.y.var() - 1.0) < 0.03


def test_ar_companion_variance():
    raw = simulate(DgpSpec("S2", n=10 ** 5, seed=0))
    assert raw.z.var() == pytest.approx(4.0 / 3.0, abs=0.05)


def test_garch_variances_positive():
    for dgp in ("S4", "P7"):
        raw = simulate(DgpSpec(dgp, n=500, seed=2))
        assert np.all(raw.h_y > 0) and np.all(raw.h_z > 0)


def test_burn_in_discards_prefix():
    kept = simulate(DgpSpec("S2", n=20, burn_in=500, seed=4))
    full = simulate(DgpSpec("S2", n=520, burn_in=0, seed=4))
    assert_array_equal(kept.y, full.y[500:])
    assert_array_equal(kept.z, full.z[500:])


def test_invalid_spec():
    with pytest.raises(InvalidConfigError):
        DgpSpec("Q1", n=10)
    with pytest.raises(InvalidConfigError):
        DgpSpec("S1", n=1)
    with pytest.raises(InvalidConfigError):
        DgpSpec("S1", n=10, burn_in=-1)


def test_s1_triplet_layout():
    spec = DgpSpec("S1", n=100, seed=5)
    raw = simulate(spec)
    sample = make_triplet(raw, spec)
    assert sample.n == 100
    assert_array_equal(sample.W[:, 0], raw.x)
    assert_array_equal(sample.Y[:, 0], raw.y)
    assert_array_equal(sample.Z[:, 0], raw.z)


def test_lagged_triplet_layout():
    spec = DgpSpec("S2", n=100, seed=5)
    raw = simulate(spec)
    sample = make_triplet(raw, spec)
    assert sample.n == 99
    t = 10
    assert sample.W[t - 1, 0] == raw.y[t - 1]
    assert sample.Y[t - 1, 0] == raw.y[t]
    assert sample.Z[t - 1, 0] == raw.z[t - 1]


def test_lag_embed_matches_make_triplet():
    spec = DgpSpec("P1", n=60, seed=9)
    raw = simulate(spec)
    lagged = make_triplet(raw, spec)
    embedded = lag_embed(raw.y, raw.z, p=1, tau=1)
    assert_array_equal(embedded.W, lagged.W)
    assert_array_equal(embedded.Y, lagged.Y)
    assert_array_equal(embedded.Z, lagged.Z)

    spec = DgpSpec("S1", n=60, seed=9)
    raw = simulate(spec)
    contemporaneous = lag_embed(raw.y, raw.z, conditioning=raw.x, p=1, tau=0)
    assert_array_equal(contemporaneous.W, make_triplet(raw, spec).W)


def test_lag_embed_rows_and_lags():
    rp = np.arange(10.0)
    vrp = 100.0 + np.arange(10.0)
    sample = lag_embed(rp, vrp, p=2, tau=3)
    assert sample.n == 10 - 2 - 3 + 1
    # first row: information time t = 1
    assert_array_equal(sample.W[0], [1.0, 0.0])
    assert sample.Y[0, 0] == 4.0
    assert sample.Z[0, 0] == 101.0


def test_embedding_row_count():
    assert embedding_times(10, 1, 9).size == 1
    with pytest.raises(InsufficientDataError):
        embedding_times(10, 1, 10)
    with pytest.raises(InsufficientDataError):
        lag_embed(np.arange(10.0), np.arange(10.0), p=1, tau=9)


RECURSION_TABLE = {
    "S1": {},
    "S2": {"y_lag": 0.5},
    "S3": {"y_lag": 0.5, "exp_y_lag_sq": -0.5},
    "S4": {"omega": 0.01, "h_lag": 0.9, "y_lag_sq": 0.05, "z_omega": 0.01, "z_h_lag": 0.9, "z_lag_sq": 0.05},
    "P1": {"y_lag": 0.5, "z_lag": 0.5},
    "P2": {"y_lag": 0.5, "z_lag_sq": 0.5},
    "P3": {"y_lag_z_lag": 0.5},
    "P4": {"const": 0.3, "log_h": 0.2, "omega": 0.01, "y_lag_sq": 0.5, "z_lag_sq": 0.3},
    "P5": {"y_lag": 0.5, "z_lag_eps": 0.5},
    "P6": {"omega": 0.01, "y_lag_sq": 0.5, "z_lag_sq": 0.25},
    "P7": {"omega": 0.01, "h_lag": 0.1, "y_lag_sq": 0.4, "z_lag_sq": 0.5,
           "z_omega": 0.01, "z_h_lag": 0.9, "z_lag_sq_own": 0.05},
}


def test_coefficient_table():
    assert {dgp.value: coef for dgp, coef in COEFFICIENTS.items()} == RECURSION_TABLE
    assert Z_AR == 0.5


def innovations(seed, total):
    streams = [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(3)]
    return [stream.standard_normal(total) for stream in streams]


def lagged(x):
    return np.concatenate([[0.0], x[:-1]])


@pytest.mark.parametrize("dgp", ["S2", "S3", "P1", "P2", "P3", "P4", "P5", "P6"])
def test_recursions_follow_the_table(dgp):
    raw = simulate(DgpSpec(dgp, n=60, burn_in=0, seed=11))
    e1, e2, _ = innovations(11, 60)
    y1, z1 = lagged(raw.y), lagged(raw.z)
    expected = {
        "S2": 0.5 * y1 + e1,
        "S3": 0.5 * y1 * np.exp(-0.5 * y1 ** 2) + e1,
        "P1": 0.5 * y1 + 0.5 * z1 + e1,
        "P2": 0.5 * y1 + 0.5 * z1 ** 2 + e1,
        "P3": 0.5 * y1 * z1 + e1,
        "P4": 0.3 + 0.2 * np.log(0.01 + 0.5 * y1 ** 2 + 0.3 * z1 ** 2)
              + np.sqrt(0.01 + 0.5 * y1 ** 2 + 0.3 * z1 ** 2) * e1,
        "P5": 0.5 * y1 + 0.5 * z1 * e1,
        "P6": np.sqrt(0.01 + 0.5 * y1 ** 2 + 0.25 * z1 ** 2) * e1,
    }[dgp]
    assert_allclose(raw.y, expected, rtol=1e-12, atol=1e-12)
    assert_allclose(raw.z, 0.5 * z1 + e2, rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("dgp", ["S4", "P7"])
def test_garch_recursions_follow_the_table(dgp):
    raw = simulate(DgpSpec(dgp, n=60, burn_in=0, seed=12))
    e1, e2, _ = innovations(12, 60)
    y1, z1 = raw.y[:-1], raw.z[:-1]
    if dgp == "S4":
        h_y = 0.01 + 0.9 * raw.h_y[:-1] + 0.05 * y1 ** 2
        h_z = 0.01 + 0.9 * raw.h_z[:-1] + 0.05 * z1 ** 2
    else:
        h_y = 0.01 + 0.1 * raw.h_y[:-1] + 0.4 * y1 ** 2 + 0.5 * z1 ** 2
        h_z = 0.01 + 0.9 * raw.h_z[:-1] + 0.05 * z1 ** 2
    assert_allclose(raw.h_y[1:], h_y, rtol=1e-12)
    assert_allclose(raw.h_z[1:], h_z, rtol=1e-12)
    assert_allclose(raw.y, np.sqrt(raw.h_y) * e1, rtol=1e-12)
    assert_allclose(raw.z, np.sqrt(raw.h_z) * e2, rtol=1e-12)


@pytest.mark.parametrize("dgp", ["S2", "S4"])
def test_burn_in_forgets_initial_condition(dgp):
    start, kept = [], []
    for seed in range(400):
        full = simulate(DgpSpec(dgp, n=502, burn_in=0, seed=seed))
        start.append(full.y[0])
        kept.append(simulate(DgpSpec(dgp, n=2, burn_in=500, seed=seed)).y[0])
    assert abs(np.corrcoef(start, kept)[0, 1]) < 0.15
