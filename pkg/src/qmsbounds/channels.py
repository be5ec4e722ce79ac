"""Quantum Markov maps: construction, CP order, multiplicative domains, k_cb.

Maps are stored in the Heisenberg picture (acting on observables). The
Schrödinger-picture channel on states is the Hilbert-Schmidt adjoint.
"""

from dataclasses import dataclass, field

import numpy as np

from .entropy import approximate_projection_constant, entropy_functional, relative_entropy
from .errors import (
    AlgebraClosureFailure,
    DimensionMismatch,
    NotReached,
    NotSymmetric,
    PreconditionFailed,
)
from .matcore import (
    DEFAULT_TOL,
    apply_preadjoint,
    apply_superop,
    choi,
    eig_hermitian,
    eigvals_hermitian,
    hermitian_part,
    identity_superop,
    is_psd,
    kms_weight,
    mat_log,
    mat_power,
    sandwich_superop,
    superop_dim,
    unvec,
    vec,
)


@dataclass(frozen=True, eq=False)
class QuantumChannel:
    """A Heisenberg-picture map with verified properties.

    Attributes
    ----------
    superop : ndarray
        ``d**2 x d**2`` matrix of the map on observables.
    cp_verified, unital_verified, trace_preserving_verified : bool
        Outcomes of the Choi, ``S(I) = I`` and ``tr S(x) = tr x`` checks.
    reference : ndarray or None
        Density ``d_phi`` the map is symmetric with respect to.
    gns_verified : bool
        Whether ``d_phi S(x) = S_*(d_phi x)`` was verified.
    domain : ndarray or None
        Orthogonal projection superoperator onto the subalgebra the map
        lives on (``None`` means all of ``M_d``). Classical chains use the
        projection onto diagonal matrices.
    """

    superop: np.ndarray
    cp_verified: bool = False
    unital_verified: bool = False
    trace_preserving_verified: bool = False
    reference: np.ndarray = None
    gns_verified: bool = False
    domain: np.ndarray = None

    @property
    def dim(self):
        return superop_dim(self.superop)

    @property
    def reference_or_trace(self):
        if self.reference is None:
            return np.eye(self.dim) / self.dim
        return self.reference

    def apply(self, x):
        """Heisenberg action on an observable."""
        return apply_superop(self.superop, x)

    def apply_state(self, rho):
        """Schrödinger action on a density."""
        return apply_preadjoint(self.superop, rho)


@dataclass(frozen=True, eq=False)
class ConditionalExpectation:
    """A reference-preserving conditional expectation onto a subalgebra.

    Attributes
    ----------
    superop : ndarray
        Heisenberg-picture matrix of ``E``.
    algebra_basis : tuple of ndarray
        KMS-orthonormal operators spanning the range algebra ``N``.
    reference : ndarray
        The preserved density ``d_phi``.
    """

    superop: np.ndarray
    algebra_basis: tuple = field(default_factory=tuple)
    reference: np.ndarray = None

    @property
    def dim(self):
        return superop_dim(self.superop)

    def apply(self, x):
        return apply_superop(self.superop, x)

    def apply_state(self, rho):
        return apply_preadjoint(self.superop, rho)


def gns_defect(S, reference):
    """``max| M_phi S - S_* M_phi |`` where ``M_phi(x) = d_phi x``."""
    d = superop_dim(S)
    M = np.kron(np.eye(d), reference)
    return float(np.abs(M @ S - S.conj().T @ M).max())


def make_channel(S, reference=None, domain=None, tol=DEFAULT_TOL):
    """Wrap a superoperator, computing its verification flags."""
    S = np.asarray(S, dtype=complex)
    d = superop_dim(S)
    I = vec(np.eye(d))
    cp = is_psd(choi(S), tol.psd_tol)
    unital = bool(np.abs(S @ I - I).max() <= 1e-10)
    tp = bool(np.abs(S.conj().T @ I - I).max() <= 1e-10)
    gns = False
    if reference is not None:
        reference = hermitian_part(reference)
        gns = gns_defect(S, reference) <= 1e-9
    return QuantumChannel(S, cp, unital, tp, reference, gns, domain)


def from_kraus(kraus, direction="heisenberg", reference=None, tol=DEFAULT_TOL):
    """Build a channel from Kraus operators.

    Parameters
    ----------
    kraus : sequence of (d, d) array_like
    direction : {"heisenberg", "schrodinger"}
        ``"heisenberg"`` means the observable map is
        ``x -> sum_j K_j^* x K_j``. ``"schrodinger"`` means the state map
        is ``rho -> sum_j K_j^* rho K_j``, so the observable map is
        ``x -> sum_j K_j x K_j^*``.

    Raises
    ------
    DimensionMismatch
        On an empty list or operators of different shapes.
    """
    kraus = [np.asarray(K, dtype=complex) for K in kraus]
    if not kraus:
        raise DimensionMismatch("empty Kraus list")
    d = kraus[0].shape[0]
    if any(K.shape != (d, d) for K in kraus):
        raise DimensionMismatch("Kraus operators must share one square shape")
    if direction == "heisenberg":
        S = sum(sandwich_superop(K.conj().T, K) for K in kraus)
    elif direction == "schrodinger":
        S = sum(sandwich_superop(K, K.conj().T) for K in kraus)
    else:
        raise ValueError(f"unknown direction {direction!r}")
    return make_channel(S, reference, tol=tol)


def kms_adjoint(S, reference=None, tol=DEFAULT_TOL):
    """Adjoint of ``S`` in the KMS inner product of ``reference``.

    With no reference this is the trace adjoint ``S^*``.
    """
    if reference is None:
        return S.conj().T
    W = kms_weight(reference, 1.0, tol)
    Winv = kms_weight(reference, -1.0, tol)
    return Winv @ (W @ S @ Winv).conj().T @ W


def cp_leq(A, B, tol=DEFAULT_TOL.psd_tol):
    """True iff ``B - A`` is completely positive (Choi matrix PSD within tol)."""
    A = np.asarray(A)
    B = np.asarray(B)
    if A.shape != B.shape:
        raise DimensionMismatch(f"{A.shape} vs {B.shape}")
    return is_psd(choi(B - A), tol)


def trace_expectation(d):
    """``E_tau(x) = tr(x) I / d`` as a conditional expectation."""
    return state_expectation(np.eye(d) / d)


def state_expectation(reference):
    """``E_phi(x) = tr(d_phi x) I``, the expectation onto the scalars."""
    reference = hermitian_part(reference)
    d = reference.shape[0]
    S = np.outer(vec(np.eye(d)), vec(reference.T))
    return ConditionalExpectation(S.astype(complex), (np.eye(d, dtype=complex),), reference)


def identity_expectation(d, reference=None):
    """The identity map viewed as the expectation onto all of ``M_d``."""
    ref = np.eye(d) / d if reference is None else reference
    basis = _kms_basis_from_columns(np.eye(d * d), ref)
    return ConditionalExpectation(identity_superop(d), basis, ref)


def _kms_basis_from_columns(U0, reference, tol=DEFAULT_TOL):
    Winv = kms_weight(reference, -1.0, tol)
    d = reference.shape[0]
    return tuple(unvec(Winv @ U0[:, k], d) for k in range(U0.shape[1]))


def expectation_from_kms_eigenspace(U0, reference, tol=DEFAULT_TOL):
    """Expectation whose KMS-weighted range is spanned by orthonormal ``U0``.

    Parameters
    ----------
    U0 : (d**2, m) ndarray
        Orthonormal columns in the weighted picture ``W x``.
    """
    W = kms_weight(reference, 1.0, tol)
    Winv = kms_weight(reference, -1.0, tol)
    E = Winv @ (U0 @ U0.conj().T) @ W
    basis = _kms_basis_from_columns(U0, reference, tol)
    return ConditionalExpectation(E, basis, hermitian_part(reference))


def check_expectation(E, rng=None, max_pairs=400, tol=DEFAULT_TOL):
    """Verify the conditional-expectation invariants of ``E``.

    Checks idempotence, complete positivity, unitality, closure of the
    range under products and the bimodule property. At most
    ``max_pairs`` basis pairs are tested (a seeded subset when there are
    more).

    Raises
    ------
    AlgebraClosureFailure
        With a message naming the first violated invariant.
    """
    S = E.superop
    d = E.dim
    if rng is None:
        rng = np.random.default_rng(0)
    if np.abs(S @ S - S).max() > 1e-9:
        raise AlgebraClosureFailure("E is not idempotent")
    if not is_psd(choi(S), tol.psd_tol):
        raise AlgebraClosureFailure("E is not completely positive")
    I = vec(np.eye(d))
    if np.abs(S @ I - I).max() > 1e-10:
        raise AlgebraClosureFailure("E is not unital")
    basis = np.array(E.algebra_basis)
    m = len(basis)
    if m == 0:
        raise AlgebraClosureFailure("empty algebra basis")
    pairs = [(a, b) for a in range(m) for b in range(m)]
    if len(pairs) > max_pairs:
        idx = rng.choice(len(pairs), size=max_pairs, replace=False)
        pairs = [pairs[k] for k in idx]
    ia = np.array([p[0] for p in pairs])
    ib = np.array([p[1] for p in pairs])
    scale = max(1.0, np.abs(basis).max() ** 2)
    prods = np.einsum("kij,kjl->kil", basis[ia], basis[ib])
    V = prods.transpose(0, 2, 1).reshape(len(pairs), -1).T
    if np.abs(S @ V - V).max() > 1e-8 * scale:
        raise AlgebraClosureFailure("range of E is not closed under products")
    X = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    EX = unvec(S @ vec(X), d)
    left = np.einsum("kij,jl,klm->kim", basis[ia], X, basis[ib])
    right = np.einsum("kij,jl,klm->kim", basis[ia], EX, basis[ib])
    L = left.transpose(0, 2, 1).reshape(len(pairs), -1).T
    R = right.transpose(0, 2, 1).reshape(len(pairs), -1).T
    if np.abs(S @ L - R).max() > 1e-8 * scale * max(1.0, np.abs(X).max()):
        raise AlgebraClosureFailure("E is not a bimodule map over its range")
    return True


def multiplicative_domain(channel, tol=DEFAULT_TOL):
    """Reference-preserving expectation onto the multiplicative domain.

    For a GNS-symmetric unital CP map the multiplicative domain is the
    eigenvalue-1 eigenspace of ``Phi^dagger Phi`` (KMS adjoint). The
    spectral projection onto that eigenspace, computed in the KMS-weighted
    picture, is the expectation.

    Raises
    ------
    NotSymmetric
        If the map is not GNS-symmetric to its reference.
    PreconditionFailed
        If the map is not unital and CP.
    AlgebraClosureFailure
        If the clustered eigenspace is not an algebra.
    """
    ref = channel.reference_or_trace
    S = channel.superop
    if not (channel.cp_verified and channel.unital_verified):
        raise PreconditionFailed("multiplicative_domain needs a unital CP map")
    if gns_defect(S, ref) > 1e-9:
        raise NotSymmetric("map is not GNS-symmetric to its reference")
    W = kms_weight(ref, 1.0, tol)
    Winv = kms_weight(ref, -1.0, tol)
    M = W @ S @ Winv
    # the identity is always in the domain; deflating it keeps E exactly unital
    u = W @ vec(np.eye(channel.dim))
    u = u / np.linalg.norm(u)
    P = np.eye(u.size) - np.outer(u, u.conj())
    w, U = eig_hermitian(P @ (M.conj().T @ M) @ P)
    U0 = U[:, w > 1.0 - tol.fixed_point_cluster]
    U0 = np.column_stack([u, U0 - np.outer(u, u.conj() @ U0)])
    E = expectation_from_kms_eigenspace(U0, ref, tol)
    check_expectation(E, tol=tol)
    return E


def sandwich_holds(P, E, eps, tol=DEFAULT_TOL):
    """True iff ``(1 - eps) E <=_cp P <=_cp (1 + eps) E``."""
    return cp_leq((1.0 - eps) * E, P, tol.psd_tol) and cp_leq(P, (1.0 + eps) * E, tol.psd_tol)


def k_cb(channel, expectation, eps=0.1, k_max=64, tol=DEFAULT_TOL):
    """Discrete CB return time of ``Phi^dagger Phi`` to ``E``.

    Smallest ``k <= k_max`` with
    ``(1 - eps) E <=_cp (Phi^dagger Phi)^k <=_cp (1 + eps) E``. Powers are
    formed by repeated multiplication; when ``k_max > 64`` a doubling
    search with repeated squaring brackets ``k`` first, then a bisection
    pins it down (this assumes the sandwich persists once reached).

    When the map is GNS-symmetric, ``Phi^dagger Phi`` is checked to agree
    with ``Phi^2``.

    Raises
    ------
    NotReached
        If no ``k <= k_max`` works.
    """
    if not 0.0 < eps < 1.0:
        raise ValueError("eps must lie in (0, 1)")
    S = channel.superop
    E = expectation.superop
    ref = channel.reference_or_trace
    Psi = kms_adjoint(S, ref, tol) @ S
    if gns_defect(S, ref) <= 1e-9:
        gap = np.abs(Psi - S @ S).max()
        if gap > 1e-8 * max(1.0, np.abs(Psi).max()):
            raise NotSymmetric(f"Phi^dagger Phi differs from Phi^2 by {gap:.2e}")
    if k_max <= 64:
        P = Psi.copy()
        for k in range(1, k_max + 1):
            if sandwich_holds(P, E, eps, tol):
                return k
            P = P @ Psi
        raise NotReached(k_max)
    lo, k, P = 0, 1, Psi
    while not sandwich_holds(P, E, eps, tol):
        if k >= k_max:
            raise NotReached(k_max)
        nxt = min(2 * k, k_max)
        P = P @ P if nxt == 2 * k else np.linalg.matrix_power(Psi, nxt)
        lo, k = k, nxt
    hi = k
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if sandwich_holds(np.linalg.matrix_power(Psi, mid), E, eps, tol):
            hi = mid
        else:
            lo = mid
    return hi


def regularize(rho, reference, tol=DEFAULT_TOL):
    """Mix in ``delta * reference`` when ``rho`` is rank deficient."""
    rho = hermitian_part(rho)
    if eigvals_hermitian(rho)[0] <= tol.support_cutoff:
        delta = tol.regularization
        return (1.0 - delta) * rho + delta * hermitian_part(reference)
    return rho


def diagonal_projection(d):
    """Superoperator of ``x -> diag(x)``, the expectation onto diagonals."""
    P = np.zeros((d * d, d * d), dtype=complex)
    idx = np.arange(d) * (d + 1)
    P[idx, idx] = 1.0
    return P


def is_diagonal_projection(P):
    """True iff ``P`` is the superoperator of ``x -> diag(x)``."""
    return bool(np.array_equal(P, diagonal_projection(superop_dim(P))))


def _restrict_state(channel, rho):
    if channel.domain is None:
        return hermitian_part(rho)
    return hermitian_part(apply_preadjoint(channel.domain, rho))


def entropy_contraction_check(channel, expectation, rho, k=None, eps=0.1, tol=DEFAULT_TOL):
    """Compare both sides of the k_cb entropy contraction inequality.

    Parameters
    ----------
    k : int, optional
        The value of :func:`k_cb`; computed with ``eps`` when omitted.

    Returns
    -------
    lhs : float
        ``D(Phi_* rho || Phi_* E_* rho)``.
    rhs : float
        ``(1 - 1/(2k)) D(rho || E_* rho)``.
    ratio : float
        ``lhs / max(D(rho || E_* rho), 1e-12)``.
    """
    if k is None:
        k = k_cb(channel, expectation, eps, tol=tol)
    rho = regularize(_restrict_state(channel, rho), channel.reference_or_trace, tol)
    sigma = expectation.apply_state(rho)
    before = relative_entropy(rho, sigma, tol)
    lhs = relative_entropy(channel.apply_state(rho), channel.apply_state(sigma), tol)
    rhs = (1.0 - 1.0 / (2.0 * k)) * before
    return lhs, rhs, lhs / max(before, 1e-12)


def entropy_difference_check(channel, rho, omega, tol=DEFAULT_TOL):
    """The three terms of the entropy difference chain.

    With ``Phi`` the state channel and ``Phi^*`` its trace adjoint:
    ``D(rho || Phi^* Phi omega) <= D_Phi(rho) + D(rho || omega)
    <= tr((id - Phi^* Phi)(rho) ln rho) + D(rho || omega)``, where
    ``D_Phi(rho) = H(rho) - H(Phi rho)``.

    Returns
    -------
    lhs, mid, rhs : float
    """
    if not (channel.unital_verified and channel.trace_preserving_verified):
        raise PreconditionFailed("entropy difference needs a unital trace-preserving map")
    S = channel.superop
    rho = hermitian_part(rho)
    omega = hermitian_part(omega)
    round_trip = apply_superop(S, apply_preadjoint(S, omega))
    lhs = relative_entropy(rho, round_trip, tol)
    base = relative_entropy(rho, omega, tol)
    d_phi = entropy_functional(rho, tol) - entropy_functional(channel.apply_state(rho), tol)
    mid = d_phi + base
    moved = rho - apply_superop(S, apply_preadjoint(S, rho))
    rhs = float(np.trace(moved @ mat_log(rho, tol)).real) + base
    return lhs, mid, rhs


def approximate_projection_check(psi, expectation, rho, eps=0.1, tol=DEFAULT_TOL):
    """Check ``D(rho || Psi_* rho) >= c(eps) D(rho || E_* rho)``.

    Preconditions: ``(1 - eps) E <=_cp Psi <=_cp (1 + eps) E`` and
    ``E Psi = E``.

    Returns
    -------
    lhs : float
        ``D(rho || Psi_* rho)``.
    rhs : float
        ``c(eps) D(rho || E_* rho)`` with ``c`` from
        :func:`approximate_projection_constant`; at ``eps = 0.1`` the
        constant exceeds one half.

    Raises
    ------
    PreconditionFailed
    """
    P = psi.superop
    E = expectation.superop
    if not cp_leq((1.0 - eps) * E, P, tol.psd_tol):
        raise PreconditionFailed("(1 - eps) E <=_cp Psi fails")
    if not cp_leq(P, (1.0 + eps) * E, tol.psd_tol):
        raise PreconditionFailed("Psi <=_cp (1 + eps) E fails")
    if np.abs(E @ P - E).max() > 1e-9:
        raise PreconditionFailed("E Psi != E")
    rho = regularize(rho, psi.reference_or_trace, tol)
    lhs = relative_entropy(rho, psi.apply_state(rho), tol)
    rhs = approximate_projection_constant(eps) * relative_entropy(
        rho, expectation.apply_state(rho), tol
    )
    return lhs, rhs


def _ratio(channel, expectation, rho, tol):
    sigma = expectation.apply_state(rho)
    den = relative_entropy(rho, sigma, tol)
    if not np.isfinite(den) or den < 1e-12:
        return 0.0
    num = relative_entropy(channel.apply_state(rho), channel.apply_state(sigma), tol)
    return num / den


def _tangent_states(channel, expectation, tol):
    # states sigma +- delta d^{1/2} X d^{1/2}, X the slowest-decaying L2 mode
    ref = channel.reference_or_trace
    d = channel.dim
    W = kms_weight(ref, 1.0, tol)
    Winv = kms_weight(ref, -1.0, tol)
    M = W @ channel.superop @ (identity_superop(d) - expectation.superop) @ Winv
    top = np.linalg.svd(M)[2][0].conj()
    X = unvec(Winv @ top, d)
    H = hermitian_part(X)
    if np.abs(H).max() < 1e-8 * max(np.abs(X).max(), 1e-300):
        H = hermitian_part(1j * X)
    r = mat_power(ref, 0.5)
    Y = r @ H @ r
    sigma = _restrict_state(channel, expectation.apply_state(ref))
    floor = eigvals_hermitian(sigma)[0]
    out = []
    for frac in (0.005, 0.05, 0.5):
        delta = frac * floor / max(np.linalg.norm(Y, 2), 1e-300)
        for sgn in (1.0, -1.0):
            out.append(_restrict_state(channel, sigma + sgn * delta * Y))
    return out


def contraction_coefficient_estimate(channel, expectation, restarts=4, seed=0,
                                     iterations=500, tol=DEFAULT_TOL):
    """Empirical lower bound on the entropy contraction coefficient.

    Maximizes ``D(Phi_* rho || Phi_* E_* rho) / D(rho || E_* rho)`` over
    states by coordinate perturbation ascent with a shrinking step. Starts
    are ``restarts`` seeded random states plus states displaced from the
    reference along the slowest-decaying ``L_2`` mode, where the ratio
    approaches ``lambda(Phi)**2``. The result is the best ratio seen: a
    lower bound on the supremum, never a certificate.
    """
    rng = np.random.default_rng(seed)
    d = channel.dim
    ref = channel.reference_or_trace
    diagonal = channel.domain is not None and is_diagonal_projection(channel.domain)

    def state(params):
        if diagonal:
            p = params ** 2
            rho = np.diag(p / p.sum()).astype(complex)
        else:
            A = (params[: d * d] + 1j * params[d * d:]).reshape(d, d)
            rho = A @ A.conj().T
            rho = _restrict_state(channel, rho / np.trace(rho).real)
        return regularize(rho, ref, tol)

    def params_of(rho):
        if diagonal:
            return np.sqrt(np.maximum(np.diag(rho).real, 0.0))
        A = mat_power(rho, 0.5)
        return np.concatenate([A.real.ravel(), A.imag.ravel()])

    n_par = d if diagonal else 2 * d * d
    starts = []
    for r in range(restarts):
        x = rng.standard_normal(n_par)
        if r % 2 == 1:
            # start near a low-rank state
            x[1:] *= 0.1
        starts.append((x, 0.5))
    starts += [(params_of(rho), 0.05) for rho in _tangent_states(channel, expectation, tol)]
    best = 0.0
    for x, step in starts:
        val = _ratio(channel, expectation, state(x), tol)
        fails = 0
        for it in range(iterations):
            k = it % n_par
            improved = False
            for sgn in (1.0, -1.0):
                y = x.copy()
                y[k] += sgn * step
                if not np.any(y):
                    continue
                v = _ratio(channel, expectation, state(y), tol)
                if v > val:
                    x, val, improved = y, v, True
                    break
            fails = 0 if improved else fails + 1
            if fails >= n_par:
                step *= 0.5
                fails = 0
        best = max(best, val)
    return float(best)


def l2_contraction(channel, expectation, tol=DEFAULT_TOL):
    """``||Phi (id - E)||`` on the KMS-weighted ``L_2`` space."""
    ref = channel.reference_or_trace
    d = channel.dim
    W = kms_weight(ref, 1.0, tol)
    Winv = kms_weight(ref, -1.0, tol)
    M = W @ channel.superop @ (identity_superop(d) - expectation.superop) @ Winv
    return float(np.linalg.norm(M, 2))


def _operator_sinkhorn(kraus, max_iter=2000):
    # Alternately normalize sum K^* K and sum K K^* towards the identity;
    # returns None when the scaling has not converged.
    for _ in range(max_iter):
        T = sum(K.conj().T @ K for K in kraus)
        R = mat_power(T, -0.5)
        kraus = [K @ R for K in kraus]
        U = sum(K @ K.conj().T for K in kraus)
        L = mat_power(U, -0.5)
        kraus = [L @ K for K in kraus]
        T = sum(K.conj().T @ K for K in kraus)
        if np.abs(T - np.eye(T.shape[0])).max() < 1e-13:
            return kraus
    return None


def random_channel(d, rng, n_kraus=3, symmetric=True, unital=True):
    """Seeded random channel from complex Gaussian Kraus operators.

    The Kraus set is completed to trace preservation. With ``unital``
    both ``sum K^* K`` and ``sum K K^*`` are normalized to the identity
    (operator Sinkhorn scaling); Kraus sets whose scaling does not
    converge are redrawn. With ``symmetric`` the map is replaced
    by ``(Phi + Phi^*)/2``, which is trace-symmetric.
    """
    kraus = None
    while unital and kraus is None:
        kraus = _operator_sinkhorn(
            [rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d)) for _ in range(n_kraus)])
    if not unital:
        kraus = [rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d)) for _ in range(n_kraus)]
        T = sum(K.conj().T @ K for K in kraus)
        R = mat_power(T, -0.5)
        kraus = [K @ R for K in kraus]
    S = sum(sandwich_superop(K.conj().T, K) for K in kraus)
    if symmetric:
        S = 0.5 * (S + S.conj().T)
    return make_channel(S, np.eye(d) / d if symmetric else None)
