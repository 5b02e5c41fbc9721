import numpy as np
import pytest

from kaczkit.errors import InvalidLabelError, PairIndexError, TooFewRowsError
from kaczkit.feasibility import (
    PairIndexMap,
    augment_with_pairs,
    binarize_rhs,
    combined_system,
    count_violated_pairs,
    hadamard_transform,
    pairwise_differences,
)
from kaczkit.matgen import Relation


def test_binarize_case_split_including_zero():
    a = np.eye(3)
    x = np.array([-2.0, 0.0, 3.0])
    assert np.array_equal(binarize_rhs(a, x), [-1.0, 1.0, 1.0])


def test_binarize_zero_solution_all_positive():
    a = np.random.default_rng(0).standard_normal((4, 2))
    assert np.all(binarize_rhs(a, np.zeros(2)) == 1.0)


def test_binarize_matches_sign_oracle():
    rng = np.random.default_rng(5)
    a = rng.standard_normal((5, 3))
    x = rng.standard_normal(3)
    expected = np.where(np.sign(a @ x) < 0, -1.0, 1.0)
    assert np.array_equal(binarize_rhs(a, x), expected)


def test_hadamard_rows_flip_by_label():
    a = np.array([[1.0, 2.0], [3.0, 4.0]])
    fs = hadamard_transform(a, np.array([1.0, -1.0]))
    assert np.array_equal(fs.base.matrix[0], -a[0])
    assert np.array_equal(fs.base.matrix[1], a[1])
    assert fs.base.relation is Relation.LESS_EQUAL
    assert np.all(fs.base.rhs == 0.0)


def test_hadamard_rejects_bad_labels():
    with pytest.raises(InvalidLabelError):
        hadamard_transform(np.eye(2), np.array([1.0, 0.5]))


def test_transformed_margins_negative_at_solution():
    rng = np.random.default_rng(6)
    for _ in range(20):
        a = rng.standard_normal((30, 4))
        x = rng.standard_normal(4)
        fs = hadamard_transform(a, binarize_rhs(a, x))
        margins = fs.base.matrix @ x
        assert np.all(margins[np.abs(a @ x) > 0] < 0.0)


def test_sign_match_equivalence_chain():
    # sign(<a_i, x>) == label_i exactly when the scaled row response is < 0
    rng = np.random.default_rng(7)
    a = rng.standard_normal((25, 3))
    labels = binarize_rhs(a, rng.standard_normal(3))
    fs = hadamard_transform(a, labels)
    x = rng.standard_normal(3)
    inner = a @ x
    match = np.where(inner >= 0, 1.0, -1.0) == labels
    scaled = fs.base.matrix @ x
    nonzero = inner != 0.0
    assert np.array_equal(match[nonzero], scaled[nonzero] < 0.0)


def test_pairwise_count_and_order_m3():
    base = np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
    p, pmap = pairwise_differences(base)
    assert p.shape == (3, 2)
    assert np.array_equal(p[0], base[0] - base[1])
    assert np.array_equal(p[1], base[0] - base[2])
    assert np.array_equal(p[2], base[1] - base[2])
    assert pmap.pair_index(0) == (0, 1)
    assert pmap.pair_index(2) == (1, 2)


def test_pairwise_count_240():
    base = np.random.default_rng(8).standard_normal((240, 12))
    p, _ = pairwise_differences(base)
    assert p.shape[0] == 28680  # 240 choose 2


def test_pairwise_duplicate_rows_give_zero_row():
    base = np.array([[1.0, 2.0], [1.0, 2.0]])
    p, _ = pairwise_differences(base)
    assert np.all(p[0] == 0.0)


def test_pairwise_too_few_rows():
    with pytest.raises(TooFewRowsError):
        pairwise_differences(np.ones((1, 3)))


def test_pairwise_linearity_in_scaling():
    rng = np.random.default_rng(9)
    base = rng.standard_normal((10, 4))
    p1, _ = pairwise_differences(base)
    p2, _ = pairwise_differences(2.5 * base)
    assert np.allclose(p2, 2.5 * p1)


def test_pair_rank_fixture_m4():
    pmap = PairIndexMap(4)
    assert pmap.pair_rank(0, 1) == 0
    assert pmap.pair_rank(2, 3) == 5


def test_pair_roundtrip_exhaustive_m50():
    pmap = PairIndexMap(50)
    for h in range(pmap.count):
        i, j = pmap.pair_index(h)
        assert i < j
        assert pmap.pair_rank(i, j) == h


def test_pair_rank_rejects_diagonal_and_range():
    pmap = PairIndexMap(5)
    with pytest.raises(PairIndexError):
        pmap.pair_rank(1, 1)
    with pytest.raises(PairIndexError):
        pmap.pair_rank(3, 1)
    with pytest.raises(PairIndexError):
        pmap.pair_index(10)


def test_combined_shape_and_row_views():
    rng = np.random.default_rng(10)
    a = rng.standard_normal((240, 12))
    fs = augment_with_pairs(hadamard_transform(a, binarize_rhs(a, rng.standard_normal(12))))
    combined = fs.combined
    assert combined.shape == (28920, 12)
    assert combined.relation is Relation.LESS_EQUAL
    # row views are bit-identical to the materialized stack
    for h in (0, 239, 240, 15000, 28919):
        assert fs.row(h).tobytes() == combined.matrix[h].tobytes()


def test_combined_without_pairs_equals_base():
    a = np.random.default_rng(11).standard_normal((6, 3))
    fs = hadamard_transform(a, np.ones(6))
    combined = combined_system(fs.base, None)
    assert np.array_equal(combined.matrix, fs.base.matrix)


def test_violated_pair_diagnostic_counts_positive_residuals():
    rng = np.random.default_rng(12)
    a = rng.standard_normal((12, 3))
    x = rng.standard_normal(3)
    fs = augment_with_pairs(hadamard_transform(a, binarize_rhs(a, x)))
    expected = int(np.sum(fs.pair_rows @ x > 0))
    assert count_violated_pairs(fs, x) == expected
    assert count_violated_pairs(hadamard_transform(a, np.ones(12)), x) == 0
