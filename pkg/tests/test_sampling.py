import numpy as np
import pytest

from kaczkit.errors import DegenerateSpectrumError, SampleSizeError
from kaczkit.feasibility import augment_with_pairs, binarize_rhs, hadamard_transform
from kaczkit.matgen import LinearSystem
from kaczkit.sampling import (
    RowDistribution,
    SamplingStrategy,
    build_distribution,
    sample_rows,
    spectral_weights,
)


def make_feasibility(m=8, n=3, seed=0):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((m, n))
    return augment_with_pairs(hadamard_transform(a, binarize_rhs(a, rng.standard_normal(n))))


def test_spectral_weights_identical_rows_uniform():
    a = np.tile([1.0, 2.0], (5, 1))
    w = spectral_weights(a, np.array([1.0, 0.0]))
    assert np.allclose(w, 0.2)


def test_spectral_weights_direct_evaluation():
    a = np.diag([2.0, 1.0])
    w = spectral_weights(a, np.array([0.0, 1.0]))
    assert np.array_equal(w, [0.0, 1.0])


def test_spectral_weights_normalized_and_sign_invariant():
    rng = np.random.default_rng(1)
    a = rng.standard_normal((20, 4))
    v = rng.standard_normal(4)
    v /= np.linalg.norm(v)
    w = spectral_weights(a, v)
    assert w.sum() == pytest.approx(1.0, abs=1e-12)
    assert np.array_equal(w, spectral_weights(a, -v))


def test_spectral_weights_degenerate():
    a = np.array([[1.0, 0.0], [2.0, 0.0]])
    with pytest.raises(DegenerateSpectrumError):
        spectral_weights(a, np.array([0.0, 1.0]))


def test_sq_norm_weights():
    system = LinearSystem(matrix=np.array([[1.0, 0.0], [2.0, 0.0]]), rhs=np.zeros(2))
    dist = build_distribution(SamplingStrategy("sq-norm"), system)
    assert np.allclose(dist.weights, [0.2, 0.8])


def test_scheme_base_excludes_pair_rows():
    fs = make_feasibility(m=6)
    dist = build_distribution(SamplingStrategy("scheme-base"), fs)
    assert dist.support.max() < 6
    assert np.allclose(dist.weights, 1.0 / 6.0)


def test_scheme_pairs_excludes_base_rows():
    fs = make_feasibility(m=6)
    dist = build_distribution(SamplingStrategy("scheme-pairs"), fs)
    assert dist.support.min() >= 6
    assert dist.support.size == 15


def test_scheme_combined_restricted_matches_base():
    fs = make_feasibility(m=7)
    combined = build_distribution(SamplingStrategy("scheme-combined"), fs)
    base = build_distribution(SamplingStrategy("scheme-base"), fs)
    mask = combined.support < 7
    w = combined.weights[mask]
    assert np.array_equal(combined.support[mask], base.support)
    assert np.allclose(w / w.sum(), base.weights)


def test_zero_norm_pair_rows_left_out():
    a = np.array([[1.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    fs = augment_with_pairs(hadamard_transform(a, np.ones(3)))
    dist = build_distribution(SamplingStrategy("scheme-combined"), fs)
    # rows 0 and 1 coincide, so pair (0,1) has zero norm and index 3 is skipped
    assert 3 not in dist.support
    assert dist.support.size == 5


def test_sample_rows_full_support():
    dist = RowDistribution(support=np.arange(4), weights=np.full(4, 0.25))
    out = sample_rows(dist, 4, np.random.default_rng(0))
    assert np.array_equal(out, np.arange(4))


def test_sample_rows_zero_weight_never_drawn():
    dist = RowDistribution(support=np.array([0, 1]), weights=np.array([0.0, 1.0]))
    for seed in range(50):
        assert sample_rows(dist, 1, np.random.default_rng(seed))[0] == 1


def test_sample_rows_size_errors():
    dist = RowDistribution(support=np.array([0, 1]), weights=np.array([0.0, 1.0]))
    with pytest.raises(SampleSizeError):
        sample_rows(dist, 2, np.random.default_rng(0))  # only one positive weight


def test_sample_rows_reproducible():
    dist = RowDistribution(support=np.arange(10), weights=np.full(10, 0.1))
    a = [sample_rows(dist, 3, np.random.default_rng(7)).tolist() for _ in range(1)]
    b = [sample_rows(dist, 3, np.random.default_rng(7)).tolist() for _ in range(1)]
    assert a == b


def test_sample_rows_concentrated_weights_terminate():
    w = np.array([0.999998, 1e-6, 1e-6])
    dist = RowDistribution(support=np.arange(3), weights=w / w.sum())
    out = sample_rows(dist, 3, np.random.default_rng(3))
    assert np.array_equal(out, np.arange(3))


def test_sample_frequencies_match_weights():
    # multinomial check: empirical counts within 3 sigma over one million draws
    weights = np.array([0.5, 0.3, 0.15, 0.05])
    dist = RowDistribution(support=np.arange(4), weights=weights)
    rng = np.random.default_rng(2024)
    draws = 1_000_000
    counts = np.zeros(4)
    for _ in range(draws):
        counts[sample_rows(dist, 1, rng)[0]] += 1
    sigma = np.sqrt(draws * weights * (1 - weights))
    assert np.all(np.abs(counts - draws * weights) <= 3.0 * sigma)


def test_distribution_validation():
    with pytest.raises(ValueError):
        RowDistribution(support=np.arange(2), weights=np.array([0.7, 0.7]))
    with pytest.raises(ValueError):
        RowDistribution(support=np.arange(2), weights=np.array([-0.5, 1.5]))
