import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sdquant.numkit import (
    SingularOperatorError,
    analytic_svd_dinv,
    apply_dinv_power,
    apply_dpower,
    dinv_power_matrix,
    dinv_singular_values,
    dpower_matrix,
    low_frequency_basis,
    materialize_difference,
    numeric_svd,
    principal_angles,
)


def test_difference_small_cases():
    assert np.array_equal(materialize_difference(1), [[1.0]])
    assert np.array_equal(materialize_difference(2), [[1.0, 0.0], [-1.0, 1.0]])
    D = materialize_difference(3)
    assert np.array_equal(D @ [1, 3, 6], [1, 2, 3])


def test_difference_structure():
    D = materialize_difference(7)
    assert np.all(np.diag(D) == 1)
    assert np.all(np.diag(D, -1) == -1)
    assert np.count_nonzero(D) == 7 + 6
    with pytest.raises(ValueError):
        materialize_difference(0)


def test_dinv_examples():
    assert np.array_equal(apply_dinv_power(np.array([1.0, 2, 3]), 1), [1, 3, 6])
    assert np.array_equal(apply_dinv_power(np.zeros(5), 3), np.zeros(5))
    assert np.array_equal(apply_dinv_power(np.array([1.0, 0, 0]), 2), [1, 2, 3])


def test_dpower_examples():
    assert np.array_equal(apply_dpower(np.array([1.0, 3, 6]), 1), [1, 2, 3])
    assert np.array_equal(apply_dpower(np.array([1.0, 1, 1]), 2), [1, -1, 0])


@pytest.mark.parametrize("r", [1, 2, 3])
def test_dinv_matches_triangular_solve(r):
    rng = np.random.default_rng(r)
    v = rng.standard_normal(40) + 1j * rng.standard_normal(40)
    D = materialize_difference(40)
    ref = v.copy()
    for _ in range(r):
        ref = np.linalg.solve(D, ref)
    assert np.allclose(apply_dinv_power(v, r), ref, rtol=1e-12, atol=1e-12)
    assert np.allclose(dpower_matrix(40, r), np.linalg.matrix_power(D, r))
    assert np.allclose(dinv_power_matrix(40, r) @ dpower_matrix(40, r), np.eye(40), atol=1e-9)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 64), st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_inverse_pair(m, r, seed):
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    back = apply_dpower(apply_dinv_power(v, r), r)
    scale = np.max(np.abs(apply_dinv_power(np.abs(v), r)))
    assert np.max(np.abs(back - v)) <= 1e-12 * max(scale, 1.0)


def test_column_wise_on_matrices():
    M = np.arange(12.0).reshape(4, 3)
    out = apply_dinv_power(M, 1)
    for j in range(3):
        assert np.array_equal(out[:, j], np.cumsum(M[:, j]))


def test_bad_order():
    for r in (0, -1, 1.5):
        with pytest.raises(ValueError):
            apply_dinv_power(np.ones(3), r)
        with pytest.raises(ValueError):
            apply_dpower(np.ones(3), r)


def test_analytic_m2_golden_ratio():
    svd = analytic_svd_dinv(2)
    assert np.allclose(svd.singular_values_of_D, [(np.sqrt(5) + 1) / 2, (np.sqrt(5) - 1) / 2], atol=1e-14)
    assert np.allclose(svd.singular_values_of_D, np.linalg.svd(materialize_difference(2), compute_uv=False),
                       atol=1e-12)


@pytest.mark.parametrize("m", [1, 2, 3, 8, 16, 33, 64])
def test_analytic_values_and_orthonormality(m):
    svd = analytic_svd_dinv(m)
    s = svd.singular_values_of_D
    assert np.all(np.diff(s) < 0) and np.all((s > 0) & (s < 2))
    assert np.allclose(s, np.linalg.svd(materialize_difference(m), compute_uv=False), atol=1e-10)
    assert np.allclose(svd.V.T @ svd.V, np.eye(m), atol=1e-10)
    assert np.allclose(svd.dinv_singular_values, np.linalg.svd(dinv_power_matrix(m, 1), compute_uv=False),
                       rtol=1e-10)


@pytest.mark.parametrize("m", [8, 16, 31])
def test_analytic_vectors_are_right_singular_vectors(m):
    svd = analytic_svd_dinv(m)
    Dinv = dinv_power_matrix(m, 1)
    S = svd.dinv_singular_values
    # D^{-1} v_l = sigma_l u_l
    assert np.allclose(Dinv @ svd.V, svd.left_vectors * S, atol=1e-10)
    _, _, Vn = numeric_svd(Dinv)
    for l in range(1, m // 2 + 1):
        ang = principal_angles(svd.low_frequency_basis(l), Vn[:, :l])
        assert ang.max() < 1e-8


def test_analytic_accessors():
    svd = analytic_svd_dinv(5)
    assert svd.dinv_singular_value(1) == pytest.approx(1 / svd.singular_values_of_D[-1])
    with pytest.raises(ValueError):
        svd.low_frequency_basis(0)
    with pytest.raises(ValueError):
        svd.low_frequency_basis(6)
    assert not svd.V.flags.writeable


def test_numeric_svd_examples():
    _, S, _ = numeric_svd(np.eye(4))
    assert np.allclose(S, 1)
    _, S, _ = numeric_svd(np.diag([3.0, 1.0]))
    assert np.allclose(S, [3, 1])
    rng = np.random.default_rng(0)
    M = rng.standard_normal((8, 5)) + 1j * rng.standard_normal((8, 5))
    U, S, V = numeric_svd(M)
    assert np.linalg.norm(U @ np.diag(S) @ V.conj().T - M) < 1e-9 * np.linalg.norm(M, 2)
    assert np.all(S >= 0) and np.all(np.diff(S) <= 0)
    with pytest.raises(ValueError):
        numeric_svd(np.array([[np.nan]]))


def test_singular_operator_error_is_linalg_error():
    assert issubclass(SingularOperatorError, np.linalg.LinAlgError)


@pytest.mark.parametrize("r", [1, 2])
def test_low_frequency_basis_orthonormal(r):
    V = low_frequency_basis(40, 6, r)
    assert V.shape == (40, 6)
    assert np.allclose(V.conj().T @ V, np.eye(6), atol=1e-10)
    s = dinv_singular_values(40, r)
    # these are the directions D^{-r} stretches most
    gain = np.linalg.norm(dinv_power_matrix(40, r) @ V, axis=0)
    assert np.allclose(gain, s[:6], rtol=1e-8)


# Frozen from a calibration run; the r=1 limits are 2/pi and 1/(8 sin(pi/8)).
GROWTH_WINDOW = {1: (0.30, 0.66), 2: (0.095, 0.31)}


@pytest.mark.parametrize("r", [1, 2])
def test_spectral_growth_window(r):
    lo, hi = GROWTH_WINDOW[r]
    for m in (64, 256, 1024):
        s = dinv_singular_values(m, r)
        l = np.arange(1, m // 4 + 1)
        ratio = s[: m // 4] * (l / m) ** r
        assert lo <= ratio.min() and ratio.max() <= hi
