import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm, logm, sqrtm

from oracles import choi_by_units
from qmsbounds.errors import DomainError, SingularReference, SpecParseError
from qmsbounds.matcore import (
    DEFAULT_TOL,
    apply_preadjoint,
    apply_superop,
    choi,
    choi_inverse,
    eig_hermitian,
    hermitian_asymmetry,
    is_psd,
    kms_inner,
    kms_symmetrize,
    kms_weight,
    mat_func,
    mat_log,
    mat_power,
    matrix_from_json,
    matrix_to_json,
    random_density,
    random_hermitian,
    sandwich_superop,
    superop_from_action,
    unvec,
    vec,
)

seeds = st.integers(0, 2 ** 32 - 1)
dims = st.integers(2, 5)


def test_vec_is_column_stacking():
    X = np.array([[1, 2], [3, 4]])
    assert list(vec(X)) == [1, 3, 2, 4]
    assert np.array_equal(unvec(vec(X)), X)


@given(seeds, dims)
def test_sandwich_superop_matches_product(seed, d):
    rng = np.random.default_rng(seed)
    A, B, X = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d)) for _ in range(3))
    assert np.allclose(apply_superop(sandwich_superop(A, B), X), A @ X @ B)


@given(seeds, dims)
def test_preadjoint_is_trace_dual(seed, d):
    rng = np.random.default_rng(seed)
    S = rng.standard_normal((d * d, d * d)) + 1j * rng.standard_normal((d * d, d * d))
    rho, x = random_density(d, rng), random_hermitian(d, rng)
    lhs = np.trace(apply_preadjoint(S, rho).conj().T @ x)
    rhs = np.trace(rho @ apply_superop(S, x))
    assert abs(lhs - rhs) < 1e-9 * max(1.0, abs(lhs))


@given(seeds, dims)
def test_choi_matches_blockwise_construction(seed, d):
    rng = np.random.default_rng(seed)
    K = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    S = superop_from_action(lambda x: K.conj().T @ x @ K, d)
    assert np.allclose(choi(S), choi_by_units(lambda x: K.conj().T @ x @ K, d))
    assert np.allclose(choi_inverse(choi(S)), S)


def test_choi_of_transpose_is_swap():
    d = 3
    S = superop_from_action(lambda x: x.T, d)
    w = np.linalg.eigvalsh(choi(S))
    assert np.isclose(w.min(), -1.0)
    assert np.isclose(w.max(), 1.0)


@given(seeds, dims)
def test_mat_functions_match_scipy(seed, d):
    rng = np.random.default_rng(seed)
    rho = random_density(d, rng, floor=0.1)
    H = random_hermitian(d, rng)
    assert np.allclose(mat_log(rho), logm(rho), atol=1e-9)
    assert np.allclose(mat_power(rho, 0.5), sqrtm(rho), atol=1e-9)
    assert np.allclose(mat_func(H, np.exp), expm(H), atol=1e-9)


def test_mat_log_rejects_negative_spectrum():
    with pytest.raises(DomainError):
        mat_log(np.diag([1.0, -0.5]))


def test_hermitian_asymmetry_zero_matrix():
    assert hermitian_asymmetry(np.zeros((3, 3))) == 0.0


def test_eig_hermitian_is_sorted_and_reconstructs():
    rng = np.random.default_rng(0)
    H = random_hermitian(4, rng)
    w, U = eig_hermitian(H)
    assert np.all(np.diff(w) >= 0)
    assert np.allclose((U * w) @ U.conj().T, H)


@given(seeds, dims)
def test_is_psd_agrees_with_eigenvalues(seed, d):
    rng = np.random.default_rng(seed)
    H = random_hermitian(d, rng)
    assert is_psd(H) == (np.linalg.eigvalsh(H).min() >= -DEFAULT_TOL.psd_tol)
    assert is_psd(H @ H)


@given(seeds, dims)
def test_kms_symmetrize_makes_gns_map_hermitian(seed, d):
    rng = np.random.default_rng(seed)
    ref = random_density(d, rng, floor=0.2)
    # x -> tr(ref x) I is GNS-symmetric for ref
    S = np.outer(vec(np.eye(d)), vec(ref.T))
    assert np.allclose(apply_superop(S, np.eye(d)), np.eye(d))
    M = kms_symmetrize(S, ref)
    assert np.allclose(M, M.conj().T)


def test_kms_weight_rejects_singular_reference():
    with pytest.raises(SingularReference):
        kms_weight(np.diag([1.0, 0.0]))


@settings(max_examples=50)
@given(seeds, dims)
def test_kms_inner_is_hermitian_form(seed, d):
    rng = np.random.default_rng(seed)
    ref = random_density(d, rng, floor=0.2)
    x, y = random_hermitian(d, rng), random_hermitian(d, rng)
    assert abs(kms_inner(x, y, ref) - np.conj(kms_inner(y, x, ref))) < 1e-10
    assert kms_inner(x, x, ref).real >= 0


@given(seeds, dims, st.integers(1, 5))
def test_random_density_is_a_state(seed, d, rank):
    rng = np.random.default_rng(seed)
    rho = random_density(d, rng, rank=min(rank, d))
    assert abs(np.trace(rho) - 1) < 1e-12
    assert np.linalg.eigvalsh(rho).min() > -1e-12
    assert np.linalg.matrix_rank(rho, tol=1e-10) == min(rank, d)


def test_random_density_floor_bounds_spectrum():
    rho = random_density(4, np.random.default_rng(1), rank=1, floor=0.2)
    assert np.linalg.eigvalsh(rho).min() >= 0.2 / 4 - 1e-12


def test_matrix_json_round_trip():
    A = np.array([[1 + 2j, 3], [0.5, -1j]])
    assert np.array_equal(matrix_from_json(matrix_to_json(A)), A)


def test_matrix_json_rejects_bad_input():
    with pytest.raises(SpecParseError):
        matrix_from_json({"dim": 2, "re": [1, 2, 3]})
    with pytest.raises(SpecParseError):
        matrix_from_json({"re": [1]})
