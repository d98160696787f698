import numpy as np
import pytest
from numpy.testing import assert_allclose

from npgc.errors import (
    DegenerateBandwidthError,
    DegenerateNeighborhoodError,
    DimensionMismatchError,
    InvalidConfigError,
    InvalidSampleError,
)
from npgc.model.smoothing import (
    BandwidthKind,
    BandwidthRule,
    KernelSpec,
    TimeSeriesSample,
    bandwidth,
    indicator_matrix,
    kernel_eval,
    kernel_indicator_sums,
    kernel_weight_matrix,
    loo_cond_cdf,
    loo_cond_cdfs,
    loo_densities,
    loo_density,
)


def test_kernel_eval_values():
    assert kernel_eval(KernelSpec(dim=1), 0.0) == pytest.approx(0.3989423, abs=1e-7)
    assert kernel_eval(KernelSpec(dim=2), [0.0, 0.0]) == pytest.approx(0.1591549, abs=1e-7)
    assert kernel_eval(KernelSpec(dim=1), 1.0) == pytest.approx(0.2419707, abs=1e-7)


def test_kernel_eval_shape_mismatch():
    with pytest.raises(DimensionMismatchError):
        kernel_eval(KernelSpec(dim=2), [0.0])


def test_kernel_spec_rejects_zero_dim():
    with pytest.raises(InvalidConfigError):
        KernelSpec(dim=0)


def test_bandwidth_fixed():
    sample = TimeSeriesSample(W=np.arange(100.0), Y=np.zeros(100), Z=np.zeros(100))
    assert bandwidth(BandwidthRule(BandwidthKind.FIXED_C, 1.0), sample) == pytest.approx(0.26827, abs=1e-5)
    assert bandwidth(BandwidthRule(BandwidthKind.FIXED_C, 0.5), sample) == pytest.approx(0.13414, abs=1e-5)


def test_bandwidth_data_driven(make_sample):
    sample = make_sample(n=50)
    h = bandwidth(BandwidthRule(BandwidthKind.DATA_DRIVEN), sample)
    expected = 1.06 * np.std(sample.W[:, 0], ddof=1) * 50 ** (-1 / 3.5)
    assert h == pytest.approx(expected)


def test_bandwidth_data_driven_constant_series():
    sample = TimeSeriesSample(W=np.ones(20), Y=np.arange(20.0), Z=np.arange(20.0))
    with pytest.raises(DegenerateBandwidthError):
        bandwidth(BandwidthRule(BandwidthKind.DATA_DRIVEN), sample)


def test_bandwidth_kind_from_str():
    assert BandwidthKind.from_str("auto") == BandwidthKind.DATA_DRIVEN
    assert BandwidthKind.from_str("fixed") == BandwidthKind.FIXED_C
    with pytest.raises(InvalidConfigError):
        BandwidthKind.from_str("silverman")


def test_sample_validation():
    with pytest.raises(InvalidSampleError):
        TimeSeriesSample(W=[0.0], Y=[0.0], Z=[0.0])
    with pytest.raises(InvalidSampleError):
        TimeSeriesSample(W=[0.0, 1.0], Y=[0.0, np.nan], Z=[0.0, 1.0])
    with pytest.raises(InvalidSampleError):
        TimeSeriesSample(W=[0.0, 1.0, 2.0], Y=[0.0, 1.0], Z=[0.0, 1.0])


def test_weight_matrix_identical_rows():
    M = kernel_weight_matrix(np.zeros((2, 1)), 1.0)
    assert_allclose(M, 0.3989423, atol=1e-7)


def test_weight_matrix_symmetric(rng):
    W = rng.standard_normal((40, 2))
    M = kernel_weight_matrix(W, 0.7)
    assert np.array_equal(M, M.T)
    assert np.all(M >= 0)


def test_weight_matrix_far_points_vanish():
    M = kernel_weight_matrix(np.array([0.0, 100.0]), 1.0)
    assert M[0, 1] == 0.0
    assert M[0, 0] > 0


def test_weight_matrix_rejects_nonpositive_bandwidth():
    with pytest.raises(DegenerateBandwidthError):
        kernel_weight_matrix(np.zeros(3), 0.0)


def test_loo_density_hand_values():
    M = kernel_weight_matrix(np.zeros(2), 1.0)
    assert loo_density(M, 1.0, 1, 1) == pytest.approx(0.3989423, abs=1e-7)
    M3 = kernel_weight_matrix(np.zeros(3), 1.0)
    assert loo_density(M3, 1.0, 1, 0) == pytest.approx(0.3989423, abs=1e-7)


def test_loo_densities_match_pointwise(rng):
    W = rng.standard_normal((25, 2))
    M = kernel_weight_matrix(W, 0.8)
    dens = loo_densities(M, 0.8, 2)
    assert np.all(dens >= 0)
    assert_allclose(dens, [loo_density(M, 0.8, 2, t) for t in range(25)], rtol=1e-12)


def test_loo_cond_cdf_extremes(rng):
    M = kernel_weight_matrix(rng.standard_normal(10), 1.0)
    assert loo_cond_cdf(M, np.ones(10), 3) == pytest.approx(1.0)
    assert loo_cond_cdf(M, np.zeros(10), 3) == 0.0


def test_loo_cond_cdf_hand_value():
    M = kernel_weight_matrix(np.zeros(2), 1.0)
    Z = np.array([0.0, 1.0])
    assert loo_cond_cdf(M, (Z <= 0.5).astype(float), 0) == 0.0


def test_loo_cond_cdf_empty_neighborhood():
    M = kernel_weight_matrix(np.array([0.0, 100.0, 200.0]), 1.0)
    with pytest.raises(DegenerateNeighborhoodError) as excinfo:
        loo_cond_cdf(M, np.ones(3), 1)
    assert excinfo.value.index == 1


def test_loo_cond_cdfs_monotone_in_z(rng):
    W = rng.standard_normal(30)
    Z = rng.standard_normal(30)
    M = kernel_weight_matrix(W, 0.6)
    grid = np.linspace(-3, 3, 41)
    F = loo_cond_cdfs(M, Z, grid)
    assert np.all(np.diff(F, axis=1) >= -1e-15)
    assert np.all((F >= 0) & (F <= 1 + 1e-12))


def test_loo_cond_cdfs_match_pointwise(rng):
    W = rng.standard_normal(20)
    Z = rng.standard_normal(20)
    M = kernel_weight_matrix(W, 0.5)
    F = loo_cond_cdfs(M, Z, Z)
    for t in (0, 7, 19):
        for j in (2, 11):
            assert F[t, j] == pytest.approx(loo_cond_cdf(M, (Z <= Z[j]).astype(float), t), rel=1e-12)


def test_kernel_indicator_sums_sorted_path_matches_product(rng):
    W = rng.standard_normal(35)
    data = np.round(rng.standard_normal(35), 1)
    M = kernel_weight_matrix(W, 0.9)
    fast = kernel_indicator_sums(M, data, data)
    A = M.copy()
    np.fill_diagonal(A, 0.0)
    assert_allclose(fast, A @ indicator_matrix(data, data), rtol=1e-12, atol=1e-14)


def test_indicator_matrix_componentwise():
    data = np.array([[0.0, 0.0], [1.0, -1.0]])
    points = np.array([[0.5, 0.5]])
    assert_allclose(indicator_matrix(data, points), [[1.0], [0.0]])


def test_loo_density_bandwidth_scaling(rng):
    W = np.zeros((6, 2))
    for h in (0.5, 1.0):
        assert_allclose(loo_densities(kernel_weight_matrix(W, h), h, 2), KernelSpec(dim=2).peak / h ** 2)
    half = loo_densities(kernel_weight_matrix(W, 0.5), 0.5, 2)
    double = loo_densities(kernel_weight_matrix(W, 1.0), 1.0, 2)
    assert_allclose(half / double, 4.0)

    W = rng.standard_normal((20, 2))
    spec = KernelSpec(dim=2)
    for h in (0.6, 1.2):
        direct = [sum(kernel_eval(spec, (W[t] - W[s]) / h) for s in range(20) if s != t) / (19 * h ** 2)
                  for t in range(20)]
        assert_allclose(loo_densities(kernel_weight_matrix(W, h), h, 2), direct, rtol=1e-12)


def test_loo_density_excludes_own_row(rng):
    W = rng.standard_normal(15)
    M = kernel_weight_matrix(W, 0.7)
    inflated = M.copy()
    np.fill_diagonal(inflated, 1e6)
    assert_allclose(loo_densities(inflated, 0.7, 1), loo_densities(M, 0.7, 1), rtol=1e-12)

    W[4] += 100.0
    dens = loo_densities(kernel_weight_matrix(W, 0.7), 0.7, 1)
    assert dens[4] == 0.0
    assert loo_density(kernel_weight_matrix(W, 0.7), 0.7, 1, 4) == dens[4]
