import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from oracles import cyclic_mixing_time, depolarizing_tcb, trace_index
from qmsbounds.channels import identity_expectation, state_expectation, trace_expectation
from qmsbounds.errors import ModularMismatch, PreconditionFailed
from qmsbounds.matcore import apply_superop, matrix_unit, random_density, random_hermitian
from qmsbounds.semigroups import (
    REPORT_COLUMNS,
    cb_index,
    check_lindbladian,
    classical_cb_index,
    decay_check,
    dirichlet_form,
    ergodic_cb_index,
    evolve,
    evolve_state,
    gradient_form,
    lindbladian_gns,
    lipschitz_seminorm,
    mlsi_lower_bounds,
    poincare_check,
    spectral_gap,
    t_cb,
    t_cb_search,
    weighted_l2_norm_sq,
)
from qmsbounds.zoo import (
    cyclic_laplacian,
    depolarizing,
    nc_birth_death,
    random_gns_lindbladian,
    su2_transference,
)

seeds = st.integers(0, 2 ** 31 - 1)


def test_generator_matches_lindblad_action():
    L = random_gns_lindbladian(3, 4, seed=11, kind="dense")
    x = random_hermitian(3, np.random.default_rng(0))
    expected = np.zeros((3, 3), dtype=complex)
    for V, w in zip(L.jumps, L.bohr_weights):
        c = np.exp(-w / 2)
        Vh = V.conj().T
        expected += c * (Vh @ V @ x + x @ Vh @ V - 2 * Vh @ x @ V)
    assert np.allclose(L.apply(x), expected)


def test_lindbladian_rejects_modular_mismatch():
    ref = np.diag([0.7, 0.3])
    V = matrix_unit(0, 1, 2)
    with pytest.raises(ModularMismatch):
        lindbladian_gns([V, V.T], [0.0, 0.0], ref)


def test_lindbladian_rejects_unpaired_jump():
    ref = np.diag([0.7, 0.3])
    w = np.log(0.3 / 0.7)
    with pytest.raises(PreconditionFailed):
        lindbladian_gns([matrix_unit(0, 1, 2)], [w], ref)


@settings(max_examples=15, deadline=None)
@given(seeds, st.integers(2, 4), st.sampled_from(["units", "dense"]))
def test_random_generators_pass_checks(seed, d, kind):
    L = random_gns_lindbladian(d, 2 * d, seed=seed, kind=kind)
    assert check_lindbladian(L)


@settings(max_examples=15, deadline=None)
@given(seeds, st.floats(0.05, 2.0), st.floats(0.05, 2.0))
def test_semigroup_law_and_channel_flags(seed, s, t):
    L = random_gns_lindbladian(3, 5, seed=seed)
    Ts, Tt, Tst = evolve(L, s), evolve(L, t), evolve(L, s + t)
    assert np.allclose(Ts.superop @ Tt.superop, Tst.superop, atol=1e-10)
    assert Ts.cp_verified and Ts.unital_verified and Ts.gns_verified
    assert np.allclose(Tt.superop, expm(-t * L.generator), atol=1e-10)


def test_evolve_state_is_schrodinger_dual():
    L = random_gns_lindbladian(3, 6, seed=2)
    rng = np.random.default_rng(3)
    rho, x = random_density(3, rng), random_hermitian(3, rng)
    t = 0.4
    lhs = np.trace(evolve_state(L, rho, t) @ x)
    rhs = np.trace(rho @ evolve(L, t).apply(x))
    assert abs(lhs - rhs) < 1e-10


def test_reference_is_invariant():
    L = random_gns_lindbladian(4, 8, seed=9)
    assert np.allclose(evolve_state(L, L.reference, 1.3), L.reference, atol=1e-12)


def test_fixed_point_of_ergodic_model_is_state_expectation():
    L = random_gns_lindbladian(3, 6, seed=7)
    E = L.fixed_point
    assert np.allclose(E.superop, state_expectation(L.reference).superop, atol=1e-9)


def test_fixed_point_of_nonergodic_model():
    # jumps only inside the block {0, 1}; the fixed algebra contains e_22
    ref = np.eye(3) / 3
    V = matrix_unit(0, 1, 3)
    L = lindbladian_gns([V, V.T], [0.0, 0.0], ref)
    E = L.fixed_point
    assert np.allclose(E.apply(matrix_unit(2, 2, 3)), matrix_unit(2, 2, 3), atol=1e-9)
    assert spectral_gap(L) > 0


@pytest.mark.parametrize("d", [3, 4, 7, 10])
def test_cyclic_gap_closed_form(d):
    assert abs(spectral_gap(cyclic_laplacian(d)) - 2 * (1 - np.cos(2 * np.pi / d))) < 1e-10


def test_depolarizing_gap_is_one():
    assert spectral_gap(depolarizing(3)) == pytest.approx(1.0, abs=1e-10)
    assert spectral_gap(depolarizing(3, np.diag([0.5, 0.3, 0.2]))) == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("d,eps", [(2, 0.1), (3, 0.05), (4, 0.2)])
def test_depolarizing_tcb_matches_oracle(d, eps):
    value = t_cb(depolarizing(d), eps=eps)
    assert abs(value - depolarizing_tcb(d, eps)) < 1e-6
    assert abs(value - np.log((d * d - 1) / eps)) < 1e-6


def test_fast_paths_agree_with_choi():
    for L in (depolarizing(2, np.diag([0.6, 0.4])), nc_birth_death(3, 0.7)):
        fast = t_cb_search(L)
        slow = t_cb_search(L, L.fixed_point, method="choi")
        assert fast.method == "schur"
        assert abs(fast.value - slow.value) < 1e-6 * slow.value


def test_classical_path_matches_oracle():
    res = t_cb_search(cyclic_laplacian(7))
    assert res.method == "classical"
    assert abs(res.value - cyclic_mixing_time(7, 0.1)) < 1e-6
    assert res.monotone
    assert res.lower < res.value < res.upper


def test_tcb_decreases_with_eps():
    L = depolarizing(2)
    assert t_cb(L, eps=0.2) < t_cb(L, eps=0.1) < t_cb(L, eps=0.05)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_cb_index_of_trace(d):
    assert abs(cb_index(trace_expectation(d)) - d * d) < 1e-6
    assert abs(trace_index(d) - d * d) < 1e-9


def test_cb_index_closed_forms():
    ref = np.diag([0.5, 0.3, 0.2])
    assert cb_index(state_expectation(ref)) == pytest.approx(ergodic_cb_index(ref), rel=1e-7)
    assert cb_index(identity_expectation(3)) == pytest.approx(1.0, rel=1e-7)
    assert classical_cb_index([0.5, 0.25, 0.25]) == 4.0


def test_dirichlet_form_is_kms_inner_product():
    L = random_gns_lindbladian(3, 6, seed=1)
    x = random_hermitian(3, np.random.default_rng(1))
    assert dirichlet_form(L, x) >= 0
    assert dirichlet_form(L, np.eye(3)) == pytest.approx(0.0, abs=1e-12)


def test_gradient_form_of_depolarizing():
    # centered x: Gamma(x, x) = (x^* x + E(x^* x))/2 for L = id - E_tau
    L = depolarizing(2)
    x = np.array([[1.0, 2.0], [0.5, -1.0]], dtype=complex)
    G = gradient_form(L, x, x)
    xx = x.conj().T @ x
    assert np.allclose(G, 0.5 * (xx + np.trace(xx) / 2 * np.eye(2)))
    assert lipschitz_seminorm(L, x) == pytest.approx(np.sqrt(np.linalg.norm(G, 2)))


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_poincare_inequality(seed):
    L = random_gns_lindbladian(3, 6, seed=seed % 1000)
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    lhs, rhs = poincare_check(L, x)
    assert lhs <= rhs + 1e-9


def test_weighted_norm_of_identity():
    ref = np.diag([0.5, 0.3, 0.2])
    assert weighted_l2_norm_sq(np.eye(3), ref) == pytest.approx(1.0)


def test_decay_check_depolarizing():
    L = depolarizing(2)
    tc = t_cb(L)
    rho = random_density(2, np.random.default_rng(0))
    rec = decay_check(L, rho, np.linspace(0.2, 2.0, 8) * tc, tc)
    assert rec.passed and rec.monotone
    # D(T_t rho || tau) <= e^{-t} D(rho || tau) for depolarizing
    assert all(v <= np.exp(-t) * rec.initial + 1e-12 for v, t in zip(rec.values, rec.times))


def test_decay_check_rejects_bad_times():
    with pytest.raises(ValueError):
        decay_check(depolarizing(2), np.eye(2) / 2, [1.0, 0.5], 1.0)


def test_report_for_depolarizing():
    rep = mlsi_lower_bounds(depolarizing(2), snapshot_m=2)
    assert rep.ok
    assert rep.t_cb == pytest.approx(np.log(30), abs=1e-6)
    assert rep.C_cb == pytest.approx(4.0)
    assert rep.bound_tcb == pytest.approx(1 / (2 * np.log(30)), rel=1e-6)
    assert rep.best_lower == max(rep.bound_tcb, rep.bound_index)
    assert rep.k_cb_snapshot <= 2
    assert len(rep.row()) == len(REPORT_COLUMNS)
    assert rep.as_dict()["C_cb"] == rep.C_cb


def test_report_for_su2():
    rep = mlsi_lower_bounds(su2_transference(0.5))
    assert rep.ok
    assert rep.lam == pytest.approx(4.0, abs=1e-10)


def test_report_for_trivial_generator():
    L = lindbladian_gns([np.eye(2)], [0.0], np.eye(2) / 2)
    rep = mlsi_lower_bounds(L)
    assert rep.lam == 0.0
    assert not rep.invariants["nontrivial"]


def test_heat_kernel_deviation_matches_matrix_exponential():
    L = nc_birth_death(4, 1.0)
    us = L.unit_structure
    t = 0.7
    P = expm(-t * us.classical_generator)
    assert np.allclose(us.transition_kernel(t), P, atol=1e-12)
    assert np.allclose(us.heat_kernel_deviation(t), P / us.mu[None, :] - 1.0, atol=1e-10)


def test_full_spectrum_matches_dense_generator():
    L = nc_birth_death(3, 0.5)
    dense = np.sort(np.linalg.eigvals(L.generator).real)
    assert np.allclose(L.unit_structure.full_spectrum(), dense, atol=1e-9)


def test_evolved_reference_projection():
    L = depolarizing(3)
    x = random_hermitian(3, np.random.default_rng(5))
    assert np.allclose(apply_superop(evolve(L, 50.0).superop, x),
                       np.trace(x) / 3 * np.eye(3), atol=1e-12)
