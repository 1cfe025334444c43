import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from relcond.errors import InputError, RangeError
from relcond.linalg import (P1, P2, PINF, EigenDecomposition, Norm, dual_row_norm, eig_full,
                            expm_grid, induced_matrix_norm, mat_exp, mean_p, parse_norm,
                            vector_norm)

from conftest import taylor_expm

ALL_NORMS = [P1, P2, PINF, Norm(3.0), mean_p(1), mean_p(2), mean_p(math.inf)]


# --- norms ------------------------------------------------------------------


def test_vector_norm_examples():
    assert vector_norm([3, 4], P2) == pytest.approx(5.0, rel=1e-15)
    assert vector_norm([1, 1], mean_p(1)) == pytest.approx(1.0, rel=1e-15)
    assert vector_norm([1 + 1j, 0], PINF) == pytest.approx(math.sqrt(2), rel=1e-15)


def test_vector_norm_rejects_nonfinite():
    with pytest.raises(InputError):
        vector_norm([1.0, np.nan], P2)


@pytest.mark.parametrize("text,expected", [
    ("1", P1), ("2", P2), ("inf", PINF), ("mean-p:2", mean_p(2)), ("mean-p:inf", mean_p(math.inf)),
])
def test_parse_norm(text, expected):
    assert parse_norm(text) == expected
    assert parse_norm(str(expected)) == expected


@pytest.mark.parametrize("bad", ["0.5", "abc", "mean-p:", "-1"])
def test_parse_norm_rejects(bad):
    with pytest.raises(InputError):
        parse_norm(bad)


def test_dual_row_norm_examples():
    assert dual_row_norm([1, 1, 1], P1, "real") == pytest.approx(1.0)
    w = [-0.029943, -0.73735, -1.1058, -0.1027]
    assert dual_row_norm(w, PINF, "real") == pytest.approx(1.975793, rel=1e-6)
    assert dual_row_norm([1j, 1], P2, "complex") == pytest.approx(math.sqrt(2))


def test_dual_row_norm_complex_p2_is_conjugate_norm(rng):
    for _ in range(100):
        w = rng.standard_normal(6) + 1j * rng.standard_normal(6)
        assert dual_row_norm(w, P2, "complex") == vector_norm(np.conj(w), P2)


def _sampled_real_dual(w, norm, rng, m=200_000):
    u = rng.standard_normal((m, w.size))
    u /= vector_norm(u, norm, axis=-1)[:, None]
    return np.abs(u @ w).max()


@pytest.mark.parametrize("norm", [P1, P2, PINF, Norm(3.0)])
def test_dual_row_norm_real_field_against_sampling(norm, rng):
    w = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    exact = dual_row_norm(w, norm, "real")
    sampled = _sampled_real_dual(w, norm, rng)
    assert sampled <= exact * (1 + 1e-12)
    assert sampled >= 0.98 * exact


def test_dual_row_norm_real_field_p2_is_top_singular_value(rng):
    w = rng.standard_normal(5) + 1j * rng.standard_normal(5)
    R = np.vstack([w.real, w.imag])
    assert dual_row_norm(w, P2, "real") == pytest.approx(np.linalg.svd(R, compute_uv=False)[0])


def test_induced_matrix_norm_examples(rng):
    for norm in ALL_NORMS:
        assert induced_matrix_norm(np.eye(4), norm) == pytest.approx(1.0, rel=1e-12)
    assert induced_matrix_norm(np.array([[1.0, 2], [3, 4]]), P1) == 6.0


def test_induced_matrix_norm_p2_against_sampling(rng):
    M = rng.standard_normal((5, 5))
    x = rng.standard_normal((100_000, 5))
    x /= np.linalg.norm(x, axis=1)[:, None]
    sampled = np.linalg.norm(x @ M.T, axis=1).max()
    exact = induced_matrix_norm(M, P2)
    assert sampled <= exact * (1 + 1e-12)
    assert sampled >= 0.99 * exact


def test_induced_matrix_norm_stack(rng):
    M = rng.standard_normal((7, 3, 3))
    for norm in (P1, P2, PINF):
        stacked = induced_matrix_norm(M, norm)
        single = [induced_matrix_norm(m, norm) for m in M]
        np.testing.assert_allclose(stacked, single, rtol=1e-14)


def test_mean_p_scaling_preserves_ratios(rng):
    M = rng.standard_normal((3, 4))
    x = rng.standard_normal(4)
    for p in (1.0, 2.0, math.inf):
        a = induced_matrix_norm(M, Norm(p)) / vector_norm(M @ (x / vector_norm(x, Norm(p))), Norm(p))
        b = induced_matrix_norm(M, mean_p(p)) / vector_norm(M @ (x / vector_norm(x, mean_p(p))),
                                                            mean_p(p))
        assert a == pytest.approx(b, rel=1e-13)


finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


@settings(max_examples=1000, deadline=None)
@given(M=arrays(np.float64, (4, 4), elements=finite), x=arrays(np.float64, 4, elements=finite),
       k=st.integers(0, len(ALL_NORMS) - 1))
def test_submultiplicative(M, x, k):
    norm = ALL_NORMS[k]
    lhs = vector_norm(M @ x, norm)
    rhs = induced_matrix_norm(M, norm) * vector_norm(x, norm)
    assert lhs <= rhs * (1 + 1e-6) + 1e-12


@settings(max_examples=200, deadline=None)
@given(x=arrays(np.float64, 5, elements=finite), y=arrays(np.float64, 5, elements=finite),
       c=st.floats(-5, 5), k=st.integers(0, len(ALL_NORMS) - 1))
def test_vector_norm_axioms(x, y, c, k):
    norm = ALL_NORMS[k]
    assert vector_norm(x + y, norm) <= vector_norm(x, norm) + vector_norm(y, norm) + 1e-12
    assert vector_norm(c * x, norm) == pytest.approx(abs(c) * vector_norm(x, norm), rel=1e-12,
                                                     abs=1e-300)


# --- matrix exponential -----------------------------------------------------


def test_mat_exp_against_taylor_oracle():
    rng = np.random.default_rng(7)
    for _ in range(50):
        A = rng.standard_normal((4, 4))
        E = mat_exp(A, 0.7)
        T = taylor_expm(A, 0.7)
        assert np.linalg.norm(E - T, 2) <= 1e-12 * np.linalg.norm(T, 2)


def test_mat_exp_identity_and_diagonal(rng):
    A = rng.standard_normal((5, 5))
    assert np.array_equal(mat_exp(A, 0.0), np.eye(5))
    d = np.array([-1.0, 0.5, 2.0])
    np.testing.assert_allclose(mat_exp(np.diag(d), 1.3), np.diag(np.exp(1.3 * d)), rtol=1e-14)


def test_mat_exp_group_property(rng):
    for _ in range(20):
        A = rng.standard_normal((5, 5))
        A *= 2.0 / np.linalg.norm(A, 2)
        s, t = rng.uniform(-1, 1, 2)
        lhs = mat_exp(A, s + t)
        rhs = mat_exp(A, s) @ mat_exp(A, t)
        assert np.linalg.norm(lhs - rhs) <= 1e-10 * np.linalg.norm(lhs)


def test_mat_exp_complex(rng):
    A = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    np.testing.assert_allclose(mat_exp(A, 0.4), taylor_expm(A, 0.4), rtol=1e-12)


def test_mat_exp_overflow_is_range_error():
    with pytest.raises(RangeError):
        mat_exp(np.array([[1000.0]]), 10.0)


def test_expm_grid_matches_pointwise(rng):
    A = rng.standard_normal((4, 4))
    t = np.linspace(0, 3, 11)
    E = expm_grid(A, t, shift=0.3)
    for k, tk in enumerate(t):
        np.testing.assert_allclose(E[k], mat_exp(A, tk) * np.exp(-0.3 * tk), rtol=1e-12,
                                   atol=1e-14)


def test_expm_grid_names_time_on_overflow():
    with pytest.raises(RangeError, match="t="):
        expm_grid(np.array([[1.0]]), [0.0, 1.0, 1e6])


# --- eigendecomposition -----------------------------------------------------


def test_eig_full_examples():
    d = eig_full(np.array([[0.08, -0.07], [0.03, -0.02]]))
    np.testing.assert_allclose(d.values.real, [0.05, 0.01], rtol=1e-12)
    d = eig_full(np.array([[0.0, 1.0], [1.0, 0.0]]))
    np.testing.assert_allclose(d.values, [1.0, -1.0], atol=1e-15)


def test_eig_full_ordering_and_reconstruction(rng):
    for _ in range(50):
        A = rng.standard_normal((6, 6))
        d = eig_full(A)
        lam = d.values
        for a, b in zip(lam[:-1], lam[1:]):
            assert a.real > b.real - 1e-12 or (abs(a.real - b.real) <= 1e-12 and a.imag >= b.imag)
        assert d.trustworthy
        R = d.V @ np.diag(lam) @ d.W - A
        assert np.linalg.norm(R) <= 10 * d.resid * np.linalg.norm(A)
        np.testing.assert_allclose(d.W @ d.V, np.eye(6), atol=1e-10)
        np.testing.assert_allclose(d.W @ A, np.diag(lam) @ d.W, atol=1e-10)


def test_eig_full_phase_convention(rng):
    d = eig_full(rng.standard_normal((5, 5)))
    for k in range(5):
        v = d.V[:, k]
        i = np.argmax(np.abs(v))
        assert abs(v[i].imag) < 1e-15 and v[i].real > 0


def test_eig_full_flags_defective():
    d = eig_full(np.array([[1.0, 1.0], [0.0, 1.0]]))
    assert not d.trustworthy


def test_from_basis_checks_residual():
    V = np.array([[1.0, 1.0], [0.0, 1.0]])
    A = V @ np.diag([2.0, -1.0]) @ np.linalg.inv(V)
    d = EigenDecomposition.from_basis([2.0, -1.0], V, A=A)
    assert d.trustworthy and d.supplied
    np.testing.assert_allclose(d.W @ d.V, np.eye(2), atol=1e-15)
    np.testing.assert_allclose(scipy.linalg.expm(A), d.V @ np.diag(np.exp([2.0, -1.0])) @ d.W,
                               rtol=1e-12)
