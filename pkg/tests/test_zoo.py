import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from oracles import cyclic_distance, cyclic_mixing_time, pauli_double_commutator_spectrum
from qmsbounds.errors import NotErgodic, PreconditionFailed, SpecParseError
from qmsbounds.matcore import matrix_to_json, matrix_unit, random_density
from qmsbounds.semigroups import spectral_gap, t_cb
from qmsbounds.zoo import (
    GraphModel,
    StochasticKernel,
    bd_decomposition_bound,
    bd_gamma,
    bd_upper_witness,
    bd_witness_closed_form,
    classical_bounds,
    classical_mixing_time,
    cyclic_heat_kernel_bound,
    cyclic_laplacian,
    cyclic_walk,
    depolarizing,
    graph_walk,
    kernel_lindbladian,
    l1_to_linf_distance,
    model_from_spec,
    nc_birth_death,
    path_graph,
    random_gns_channel,
    random_gns_lindbladian,
    rothaus_counterexample,
    su2_representation,
    su2_transference,
    thermal_distribution,
)


def test_cyclic_walk_spectrum():
    K = cyclic_walk(6)
    assert np.allclose(np.sort(np.linalg.eigvals(K.kernel).real), K.exact_spectrum)
    assert K.reversible


def test_stochastic_kernel_validates_rows():
    with pytest.raises(PreconditionFailed):
        StochasticKernel(np.array([[0.5, 0.4], [0.5, 0.5]]), np.array([0.5, 0.5]))


def test_graph_model_validation():
    with pytest.raises(PreconditionFailed):
        GraphModel(3, ((0, 3),))


def test_cyclic_laplacian_generator_is_classical_laplacian():
    d = 5
    L = cyclic_laplacian(d)
    Q = L.unit_structure.classical_generator
    expected = 2 * np.eye(d)
    for k in range(d):
        expected[k, (k + 1) % d] = expected[k, (k - 1) % d] = -1
    assert np.allclose(Q, expected)


def test_kernel_lindbladian_gap():
    L = kernel_lindbladian(cyclic_walk(7))
    assert spectral_gap(L) == pytest.approx(1 - np.cos(2 * np.pi / 7), abs=1e-12)


def test_classical_mixing_time_matches_oracle():
    for d in (5, 8):
        assert classical_mixing_time(cyclic_laplacian(d)) == pytest.approx(
            cyclic_mixing_time(d, 0.1), abs=1e-8)
        assert l1_to_linf_distance(cyclic_laplacian(d), 1.3) == pytest.approx(
            cyclic_distance(d, 1.3), abs=1e-10)


def test_classical_mixing_time_equals_tcb():
    L = cyclic_laplacian(9)
    assert classical_mixing_time(L) == pytest.approx(t_cb(L), rel=1e-8)


def test_mixing_time_needs_ergodic_chain():
    g = GraphModel(4, ((0, 1), (2, 3)))
    with pytest.raises(NotErgodic):
        classical_mixing_time(graph_walk(g))


@pytest.mark.parametrize("d", [5, 9, 15])
def test_cyclic_heat_kernel_bound_dominates(d):
    for t in (0.5, 2.0, 10.0):
        assert cyclic_distance(d, t) <= cyclic_heat_kernel_bound(d, t)


def test_classical_bounds_sandwich():
    L = cyclic_laplacian(7)
    rec = classical_bounds(L, t_cb(L), 1.0)
    assert rec.cmlsi_lower <= rec.lam
    assert rec.index_lower <= rec.lam
    assert rec.cmlsi_lower == pytest.approx(rec.lam / (2 * (rec.lam * rec.t0 + np.log(10))))


def test_graph_walk_stationary_is_degree():
    g = GraphModel(4, ((0, 1), (1, 2), (2, 3), (3, 0), (0, 2)))
    L = graph_walk(g)
    deg = np.array([3, 2, 3, 2])
    assert np.allclose(L.unit_structure.mu, deg / deg.sum())


def test_depolarizing_closed_form_semigroup():
    ref = np.diag([0.5, 0.3, 0.2])
    L = depolarizing(3, ref)
    x = np.arange(9).reshape(3, 3).astype(complex)
    t = 0.8
    expected = np.exp(-t) * x + (1 - np.exp(-t)) * np.trace(ref @ x) * np.eye(3)
    assert np.allclose(expm(-t * L.generator) @ x.reshape(-1, order="F"),
                       expected.reshape(-1, order="F"))


def test_depolarizing_with_rotated_reference():
    rng = np.random.default_rng(4)
    ref = random_density(3, rng, floor=0.3)
    L = depolarizing(3, ref)
    assert spectral_gap(L) == pytest.approx(1.0, abs=1e-9)
    x = rng.standard_normal((3, 3))
    assert np.allclose(L.apply(x), x - np.trace(ref @ x) * np.eye(3))


def test_depolarizing_rejects_singular_reference():
    with pytest.raises(PreconditionFailed):
        depolarizing(2, np.diag([1.0, 0.0]))


def test_thermal_distribution():
    mu = thermal_distribution(4, 1.0)
    assert mu.sum() == pytest.approx(1.0)
    assert np.allclose(mu[1:] / mu[:-1], np.exp(-1.0))


@pytest.mark.parametrize("beta", [0.5, 1.0, 2.0])
def test_birth_death_off_diagonal_eigenvalues(beta):
    n = 4
    L = nc_birth_death(n, beta)
    g = bd_gamma(n, beta)
    for r in range(n):
        for s in range(n):
            if r != s:
                E = matrix_unit(r, s, n)
                assert np.allclose(L.apply(E), g[r, s] * E)
    # two sites: gamma_12 = 4 cosh(beta/2)
    assert bd_gamma(2, beta)[0, 1] == pytest.approx(4 * np.cosh(beta / 2))


def test_birth_death_is_ergodic_with_one_dimensional_kernel():
    L = nc_birth_death(4, 1.0)
    w = np.linalg.eigvals(L.generator).real
    assert np.sum(np.abs(w) < 1e-9) == 1


def test_birth_death_decomposition():
    L = nc_birth_death(5, 1.0)
    diag, exact, schur = bd_decomposition_bound(L, 2.0)
    assert exact <= schur * (1 + 1e-12)
    assert diag >= 0


@pytest.mark.parametrize("n", [4, 10, 40])
def test_birth_death_witness_closed_form(n):
    prod, ent = bd_witness_closed_form(n, 1.0)
    assert bd_upper_witness(n, 1.0) == pytest.approx(prod / (2 * ent))


def test_birth_death_witness_bounds_tcb_bound():
    for n in (4, 8, 16):
        assert 1 / (2 * t_cb(nc_birth_death(n, 1.0))) <= bd_upper_witness(n, 1.0)


def test_birth_death_witness_preconditions():
    with pytest.raises(PreconditionFailed):
        bd_upper_witness(1, 1.0)
    with pytest.raises(PreconditionFailed):
        bd_upper_witness(4, 0.0)


@pytest.mark.parametrize("j", [0.5, 1.0, 1.5, 2.0, 2.5])
def test_su2_brackets(j):
    D = su2_representation(j)
    for a, b, c in (("X", "Y", "Z"), ("Y", "Z", "X"), ("Z", "X", "Y")):
        assert np.abs(D[a] @ D[b] - D[b] @ D[a] - 2 * D[c]).max() < 1e-10
        assert np.allclose(D[a].conj().T, -D[a])


@pytest.mark.parametrize("gens", ["XY", "XYZ", "X"])
def test_su2_spin_half_spectrum(gens):
    L = su2_transference(0.5, tuple(gens))
    spec = np.sort(np.linalg.eigvals(L.generator).real)
    assert np.allclose(spec, pauli_double_commutator_spectrum(gens), atol=1e-10)


def test_su2_rejects_unknown_generator():
    with pytest.raises(PreconditionFailed):
        su2_transference(0.5, ("W",))


@pytest.mark.parametrize("eta", [0.3, 0.5, 0.9, 0.99])
def test_rothaus_metric_closed_form(eta):
    rec = rothaus_counterexample(eta, 0.5)
    assert abs(rec.metric_numeric - rec.metric_closed) <= 1e-8 * rec.metric_closed


def test_rothaus_ratio_decreases():
    ratios = [rothaus_counterexample(eta, 0.5).ratio for eta in (0.3, 0.5, 0.9, 0.99, 0.9999)]
    assert all(b < a for a, b in zip(ratios, ratios[1:]))
    assert ratios[3] < 0.2


def test_rothaus_domain():
    with pytest.raises(PreconditionFailed):
        rothaus_counterexample(1.0, 0.5)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 2 ** 31 - 1), st.integers(2, 4))
def test_random_gns_channel_flags(seed, d):
    ch, L = random_gns_channel(d, np.random.default_rng(seed))
    assert ch.cp_verified and ch.unital_verified and ch.gns_verified
    assert not np.allclose(L.reference, np.eye(d) / d)


def test_random_gns_requires_diagonal_reference():
    with pytest.raises(PreconditionFailed):
        random_gns_lindbladian(2, 2, reference=np.array([[0.5, 0.1], [0.1, 0.5]]))


def test_model_from_spec_round_trip():
    ref = np.diag([0.6, 0.4])
    w = float(np.log(0.4 / 0.6))
    spec = {"type": "custom_gns", "jumps": [matrix_to_json(matrix_unit(0, 1, 2)),
                                            matrix_to_json(matrix_unit(1, 0, 2))],
            "weights": [w, -w], "reference": matrix_to_json(ref)}
    L = model_from_spec(json.dumps(spec))
    assert L.name == "custom_gns"
    assert model_from_spec({"type": "depolarizing", "d": 3}).dim == 3
    assert model_from_spec({"type": "cyclic_graph", "d": 5}).name == "cyclic_graph"
    assert model_from_spec({"type": "graph_walk", "n": 3, "edges": [[0, 1], [1, 2]]}).dim == 3
    assert model_from_spec({"type": "nc_birth_death", "n": 4, "beta": 1.0}).dim == 4
    assert model_from_spec({"type": "su2_transference", "j": 1}).dim == 3
    assert path_graph(3).edges == ((0, 1), (1, 2))


@pytest.mark.parametrize("spec", [
    "{bad json",
    "[1, 2]",
    {"type": "teleporter"},
    {"type": "depolarizing"},
    {"type": "depolarizing", "d": 1},
    {"type": "depolarizing", "d": 2.5},
    {"type": "nc_birth_death", "n": 4, "beta": "hot"},
])
def test_model_from_spec_errors(spec):
    with pytest.raises(SpecParseError):
        model_from_spec(spec)
