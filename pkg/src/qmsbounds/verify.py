"""Seeded property suites shared by the ``verify`` command and the tests.

Every suite returns a :class:`SuiteResult` with the number of checked
instances and the worst slack (negative slack means a violation).
"""

from dataclasses import asdict, dataclass

import numpy as np

from .channels import (
    approximate_projection_check,
    contraction_coefficient_estimate,
    entropy_contraction_check,
    entropy_difference_check,
    k_cb,
    l2_contraction,
    make_channel,
    multiplicative_domain,
    random_channel,
)
from .entropy import (
    bkm_metric,
    domination_constant,
    key_lemma_terms,
    relative_entropy,
    relative_entropy_via_bkm,
)
from .matcore import DEFAULT_TOL, apply_preadjoint, choi, eigvals_hermitian, random_density
from .semigroups import (
    decay_check,
    evolve,
    mlsi_lower_bounds,
    poincare_check,
    t_cb,
)
from .zoo import (
    GraphModel,
    cyclic_laplacian,
    depolarizing,
    graph_walk,
    nc_birth_death,
    random_gns_lindbladian,
    su2_transference,
)


@dataclass
class SuiteResult:
    name: str
    passed: bool
    count: int
    worst_slack: float

    def as_dict(self):
        return asdict(self)


def _result(name, slacks, floor=-1e-9):
    slacks = [float(s) for s in slacks]
    worst = min(slacks) if slacks else 0.0
    return SuiteResult(name, bool(worst >= floor), len(slacks), worst)


def standard_models():
    """Zoo instances used by the model-level suites."""
    return [
        depolarizing(2),
        depolarizing(3, np.diag([0.5, 0.3, 0.2])),
        cyclic_laplacian(5),
        graph_walk(GraphModel(4, ((0, 1), (1, 2), (2, 3), (3, 0), (0, 2)))),
        nc_birth_death(4, 1.0),
        su2_transference(0.5, ("X", "Y")),
        su2_transference(1.0, ("X", "Y", "Z")),
        random_gns_lindbladian(3, 6, seed=7),
    ]


def suite_channel_invariants(rng, count=30, extra=()):
    """CP, unital, trace-preserving and GNS flags of random symmetric channels.

    ``extra`` channels (e.g. a deliberately non-CP fixture) are checked too;
    the slack is the smallest Choi eigenvalue.
    """
    slacks = []
    chans = [random_channel(int(rng.integers(2, 5)), rng) for _ in range(count)] + list(extra)
    for ch in chans:
        flags = ch.cp_verified and ch.unital_verified and ch.trace_preserving_verified
        lam = eigvals_hermitian(choi(ch.superop))[0]
        slacks.append(lam if flags else min(lam, -1.0))
    return _result("channel_invariants", slacks, -DEFAULT_TOL.psd_tol)


def suite_semigroup_invariants(rng, count=10):
    """CP, unitality, GNS symmetry and the semigroup law of ``exp(-tL)``."""
    slacks = []
    for _ in range(count):
        L = random_gns_lindbladian(int(rng.integers(2, 5)), 4, seed=int(rng.integers(2 ** 31)))
        s, t = rng.uniform(0.05, 1.0, 2)
        Ts, Tt, Tst = evolve(L, s), evolve(L, t), evolve(L, s + t)
        ok = all(T.cp_verified and T.unital_verified and T.gns_verified for T in (Ts, Tt, Tst))
        law = np.abs(Ts.superop @ Tt.superop - Tst.superop).max()
        slacks.append(1e-10 - law if ok else -1.0)
    return _result("semigroup_invariants", slacks, 0.0)


def suite_entropy_contraction(rng, count=50):
    """``D(Phi_* rho||Phi_* E_* rho) <= (1 - 1/(2 k_cb)) D(rho||E_* rho)``."""
    slacks = []
    for _ in range(count):
        ch = random_channel(int(rng.integers(2, 5)), rng)
        E = multiplicative_domain(ch)
        k = k_cb(ch, E)
        lhs, rhs, _ = entropy_contraction_check(ch, E, random_density(ch.dim, rng), k)
        slacks.append(rhs - lhs)
    return _result("entropy_contraction", slacks)


def suite_entropy_difference(rng, count=50):
    """Both inequalities of the entropy difference chain."""
    slacks = []
    for _ in range(count):
        ch = random_channel(int(rng.integers(2, 5)), rng)
        d = ch.dim
        lhs, mid, rhs = entropy_difference_check(
            ch, random_density(d, rng, floor=0.01), random_density(d, rng, floor=0.01))
        slacks.append(min(mid - lhs, rhs - mid))
    return _result("entropy_difference", slacks)


def suite_approximate_projection(rng, count=50):
    """``D(rho||Psi_* rho) >= c(0.1) D(rho||E_* rho)`` for ``Psi = T_t``, ``t >= t_cb``."""
    models = [depolarizing(2), depolarizing(3), random_gns_lindbladian(3, 6, seed=3)]
    slacks = []
    for i in range(count):
        L = models[i % len(models)]
        tt = t_cb(L, L.fixed_point, 0.1) * rng.uniform(1.0001, 2.0)
        lhs, rhs = approximate_projection_check(evolve(L, tt), L.fixed_point,
                                                random_density(L.dim, rng))
        slacks.append(lhs - rhs)
    return _result("approximate_projection", slacks)


def suite_bkm(rng, count=30):
    """Segment-integral relative entropy agrees with the direct formula."""
    slacks = []
    for _ in range(count):
        d = int(rng.integers(2, 6))
        r, s = random_density(d, rng, floor=0.05), random_density(d, rng, floor=0.05)
        direct = relative_entropy(r, s)
        slacks.append(1e-6 * max(direct, 1e-12) - abs(relative_entropy_via_bkm(r, s) - direct))
    return _result("bkm_identity", slacks, 0.0)


def suite_key_lemma(rng, count=100):
    """k(c) sandwich, BKM monotonicity and the metric scaling inequality."""
    slacks = []
    for _ in range(count):
        d = int(rng.integers(2, 5))
        r, s = random_density(d, rng, floor=0.05), random_density(d, rng, floor=0.05)
        lo, mid, up = key_lemma_terms(r, s)
        X = r - s
        c = domination_constant(r, s)
        scale = c * bkm_metric(r, X) - bkm_metric(s, X)
        ch = random_channel(d, rng, symmetric=False, unital=False)
        mono = bkm_metric(s, X) - bkm_metric(apply_preadjoint(ch.superop, s),
                                              apply_preadjoint(ch.superop, X))
        slacks.append(min(mid - lo, up - mid, scale, mono))
    return _result("key_lemma", slacks)


def suite_poincare(rng, models, per_model=20):
    slacks = []
    for L in models:
        for _ in range(per_model):
            x = rng.standard_normal((L.dim, L.dim)) + 1j * rng.standard_normal((L.dim, L.dim))
            lhs, rhs = poincare_check(L, x)
            slacks.append(rhs - lhs)
    return _result("poincare", slacks)


def suite_report_chain(models):
    """All BoundReport invariants and decay checks on the given models."""
    slacks = []
    for L in models:
        rep = mlsi_lower_bounds(L, decay_states=2, seed=1)
        slacks.append(min(_report_slacks(rep)) if rep.ok else -1.0)
    return _result("report_chain", slacks)


def _report_slacks(rep):
    return [rep.lam - rep.bound_tcb, rep.lam - rep.bound_index,
            np.log(10 * rep.C_cb) / rep.lam - rep.t_cb]


def suite_decay(rng, models, states=3):
    slacks = []
    for L in models:
        tc = t_cb(L)
        for _ in range(states):
            rec = decay_check(L, random_density(L.dim, rng), np.linspace(0.2, 2.0, 8) * tc, tc)
            slacks.append(min(e - v for v, e in zip(rec.values, rec.envelope))
                          if rec.passed else -1.0)
    return _result("decay", slacks)


@dataclass
class ConsistencyRecord:
    """Contraction-coefficient chain for a snapshot channel of a model.

    ``l2`` is the L2 contraction coefficient of the snapshot and
    ``estimate`` a searched lower bound on its entropy contraction
    coefficient.
    """

    model: str
    l2: float
    estimate: float
    k_cb: int
    upper: float
    l2_le_estimate: bool
    l2_squared_le_estimate: bool
    estimate_le_upper: bool
    report_ok: bool


def consistency_chain(L, m=4, restarts=4, iterations=300, seed=0):
    """Compare ``lambda(Phi)``, the entropy contraction estimate and ``1 - 1/(2 k_cb)``.

    The snapshot is ``Phi = T_{t_cb/(2m)}``.
    """
    rep = mlsi_lower_bounds(L, decay_states=0)
    E = L.fixed_point
    snap = evolve(L, rep.t_cb / (2.0 * m))
    lam = l2_contraction(snap, E)
    est = contraction_coefficient_estimate(snap, E, restarts=restarts, seed=seed,
                                           iterations=iterations)
    k = k_cb(snap, E, 0.1, k_max=max(64, 8 * m))
    upper = 1.0 - 1.0 / (2.0 * k)
    # the ratio only tends to lambda**2 as the state approaches equilibrium
    return ConsistencyRecord(L.name, lam, est, k, upper, bool(lam <= est + 1e-9),
                             bool(lam ** 2 <= est * (1 + 1e-3)), bool(est <= upper + 1e-6),
                             bool(all(rep.invariants.values())))


def non_cp_fixture(d=2):
    """The transpose map: positive and unital but not completely positive."""
    S = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            S[i * d + j, j * d + i] = 1.0
    return make_channel(S)


def run_all(seed=0, inject=None, quick=False):
    """Run every suite with one seed.

    Parameters
    ----------
    inject : {"non-cp"}, optional
        Add a negative-control fixture that must make a suite fail.
    quick : bool
        Shrink sample counts (used by the unit tests).
    """
    rng = np.random.default_rng(seed)
    f = 0.2 if quick else 1.0

    def n(k):
        return max(2, int(k * f))

    extra = [non_cp_fixture()] if inject == "non-cp" else []
    models = standard_models()
    return [
        suite_channel_invariants(rng, n(30), extra),
        suite_semigroup_invariants(rng, n(10)),
        suite_entropy_contraction(rng, n(50)),
        suite_entropy_difference(rng, n(50)),
        suite_approximate_projection(rng, n(30)),
        suite_bkm(rng, n(20)),
        suite_key_lemma(rng, n(100)),
        suite_poincare(rng, models, n(10)),
        suite_report_chain(models),
        suite_decay(rng, models, n(3)),
    ]
