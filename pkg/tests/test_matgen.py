import numpy as np
import pytest

from kaczkit.errors import ConvergenceError, InvalidSpectrumError, RankDeficiencyError
from kaczkit.matgen import (
    Relation,
    SpectrumSpec,
    generate_ill_conditioned,
    generate_orthogonal,
    least_squares,
    make_system,
    save_matrix_csv,
    smallest_right_singular_vector,
)


def test_orthogonal_1d_is_sign():
    q = generate_orthogonal(1, np.random.default_rng(0))
    assert q.shape == (1, 1)
    assert abs(abs(q[0, 0]) - 1.0) < 1e-15


@pytest.mark.parametrize("dim", [2, 5, 17])
def test_orthogonal_identity(dim):
    q = generate_orthogonal(dim, np.random.default_rng(42))
    assert np.abs(q.T @ q - np.eye(dim)).max() <= 1e-10


def test_orthogonal_deterministic():
    a = generate_orthogonal(6, np.random.default_rng(123))
    b = generate_orthogonal(6, np.random.default_rng(123))
    assert a.tobytes() == b.tobytes()


def test_exp_decay_ratio():
    gen = generate_ill_conditioned(
        240, 12, SpectrumSpec.exponential_decay(), np.random.default_rng(1)
    )
    ratio = gen.singular_values[0] / gen.singular_values[-1]
    assert ratio == pytest.approx(np.exp(11.0), rel=1e-12)


def test_ratio_spectrum_condition_number():
    gen = generate_ill_conditioned(
        200, 20, SpectrumSpec.explicit_ratio(1e7), np.random.default_rng(2)
    )
    kappa = gen.singular_values[0] / gen.singular_values[-1]
    assert kappa == pytest.approx(1e7, rel=1e-6)


def test_rank_one_generation():
    gen = generate_ill_conditioned(
        9, 1, SpectrumSpec.explicit([2.5]), np.random.default_rng(3)
    )
    assert np.linalg.matrix_rank(gen.system.matrix) == 1


def test_reconstruction_and_orthogonality_invariants():
    gen = generate_ill_conditioned(
        60, 8, SpectrumSpec.explicit_ratio(1e5), np.random.default_rng(4)
    )
    a = gen.system.matrix
    rebuilt = (gen.u_factor[:, :8] * gen.singular_values) @ gen.v_factor.T
    assert np.linalg.norm(rebuilt - a) <= 1e-10 * np.linalg.norm(a)
    assert np.abs(gen.v_factor.T @ gen.v_factor - np.eye(8)).max() <= 1e-10


def test_generation_deterministic_bytes():
    g1 = generate_ill_conditioned(30, 4, SpectrumSpec.exponential_decay(),
                                  np.random.default_rng(99))
    g2 = generate_ill_conditioned(30, 4, SpectrumSpec.exponential_decay(),
                                  np.random.default_rng(99))
    assert g1.system.matrix.tobytes() == g2.system.matrix.tobytes()


def test_invalid_spectra():
    with pytest.raises(InvalidSpectrumError):
        SpectrumSpec.explicit([1.0, 2.0]).resolve(2)  # increasing
    with pytest.raises(InvalidSpectrumError):
        SpectrumSpec.explicit([1.0, 0.0]).resolve(2)  # non-positive
    with pytest.raises(InvalidSpectrumError):
        SpectrumSpec.explicit([1.0]).resolve(3)  # wrong length
    with pytest.raises(InvalidSpectrumError):
        SpectrumSpec.explicit_ratio(0.5)


def test_make_system_last_unit_picks_last_column():
    gen = generate_ill_conditioned(20, 5, SpectrumSpec.exponential_decay(),
                                   np.random.default_rng(7))
    x_star = np.zeros(5)
    x_star[-1] = 1.0
    system = make_system(gen, x_star)
    assert np.array_equal(system.rhs, gen.system.matrix @ x_star)
    assert system.relation is Relation.EQUALITY
    assert system.svd is not None


def test_make_system_zero_solution():
    gen = generate_ill_conditioned(10, 3, SpectrumSpec.exponential_decay(),
                                   np.random.default_rng(8))
    system = make_system(gen, np.zeros(3))
    assert np.all(system.rhs == 0.0)


def test_least_squares_identity():
    b = np.array([3.0, -1.0, 2.0])
    assert np.allclose(least_squares(np.eye(3), b), b)


def test_least_squares_hand_normal_equations():
    # A^T A = [[2,1],[1,2]], A^T b = [2,2] -> x = [2/3, 2/3]
    a = np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
    b = np.array([1.0, 1.0, 1.0])
    x = least_squares(a, b)
    assert np.allclose(x, [2.0 / 3.0, 2.0 / 3.0], atol=1e-14)


def test_least_squares_consistent_recovers_solution():
    rng = np.random.default_rng(11)
    a = rng.standard_normal((40, 6))
    x_star = rng.standard_normal(6)
    x = least_squares(a, a @ x_star)
    assert np.linalg.norm(x - x_star) <= 1e-8 * np.linalg.norm(x_star)


def test_least_squares_residual_orthogonality():
    rng = np.random.default_rng(12)
    a = rng.standard_normal((50, 7))
    b = rng.standard_normal(50)
    x = least_squares(a, b)
    r = a @ x - b
    assert np.linalg.norm(a.T @ r) <= 1e-8 * np.linalg.norm(a) * np.linalg.norm(b)


def test_least_squares_rank_deficiency_names_pivot():
    a = np.array([[1.0, 1.0], [2.0, 2.0], [3.0, 3.0]])
    with pytest.raises(RankDeficiencyError) as exc:
        least_squares(a, np.ones(3))
    assert exc.value.pivot == 1


def test_smallest_singular_vector_diagonal():
    v, smin = smallest_right_singular_vector(np.diag([3.0, 1.0]))
    assert abs(abs(v[1]) - 1.0) <= 1e-10
    assert smin == pytest.approx(1.0, abs=1e-10)


def test_smallest_singular_vector_matches_generator():
    gen = generate_ill_conditioned(240, 12, SpectrumSpec.exponential_decay(),
                                   np.random.default_rng(21))
    v, smin = smallest_right_singular_vector(gen.system.matrix)
    assert abs(v @ gen.v_factor[:, -1]) >= 1.0 - 1e-6


def test_smallest_singular_vector_degenerate_pair():
    a = np.diag([3.0, 1.0, 1.0])
    v, smin = smallest_right_singular_vector(a)
    assert np.linalg.norm(a @ v) == pytest.approx(1.0, abs=1e-8)


def test_smallest_singular_vector_nonconvergence():
    a = np.diag([2.0, 1.0])
    with pytest.raises(ConvergenceError):
        smallest_right_singular_vector(a, tol=1e-30, max_iter=2)


def test_sign_convention_first_nonzero_positive():
    v, _ = smallest_right_singular_vector(np.diag([5.0, 2.0, 1.0]))
    nz = np.flatnonzero(np.abs(v) > 1e-12)
    assert v[nz[0]] > 0.0


def test_save_matrix_csv_roundtrip(tmp_path):
    a = np.array([[1.0 / 3.0, 2.0], [-5.0e-13, 4.0]])
    path = tmp_path / "m.csv"
    save_matrix_csv(a, path)
    back = np.loadtxt(path, delimiter=",")
    assert np.array_equal(back, a)  # 17 significant digits round-trips doubles
