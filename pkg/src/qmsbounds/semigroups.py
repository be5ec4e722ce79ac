"""GNS-symmetric Lindbladians, their semigroups and MLSI lower bounds.

Generators are written in the positive convention ``T_t = exp(-t L)``
with

    L(x) = sum_j exp(-w_j / 2) (V_j^* V_j x + x V_j^* V_j - 2 V_j^* x V_j),

where each jump satisfies ``d_phi V_j = exp(-w_j) V_j d_phi`` and the jump
list is closed under adjoints with negated weights. Under these two
conditions ``L`` is GNS-symmetric with respect to ``d_phi``, so every
spectral computation is done on the Hermitian matrix ``W L W^{-1}``.

A Lindbladian may live on the diagonal subalgebra only
(``algebra="diagonal"``). That is how classical Markov chains are
embedded: every map is composed with ``x -> diag(x)`` and spectra are
taken on the diagonal.
"""

import warnings
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.linalg import expm

from .channels import (
    check_expectation,
    diagonal_projection,
    expectation_from_kms_eigenspace,
    gns_defect,
    k_cb as discrete_k_cb,
    make_channel,
    regularize,
    sandwich_holds,
)
from .entropy import relative_entropy
from .errors import (
    AlgebraClosureFailure,
    BracketNotFound,
    ModularMismatch,
    NotErgodic,
    NotSymmetric,
    PreconditionFailed,
)
from .matcore import (
    DEFAULT_TOL,
    apply_superop,
    choi,
    eig_hermitian,
    hermitian_part,
    identity_superop,
    is_psd,
    kms_weight,
    mat_power,
    random_density,
    unvec,
    vec,
)


@dataclass(frozen=True, eq=False)
class Lindbladian:
    """A generator in GNS canonical form.

    Attributes
    ----------
    dim : int
    jumps : tuple of ndarray
        Jump operators ``V_j``.
    bohr_weights : tuple of float
        Modular frequencies ``w_j``.
    reference : ndarray
        Faithful invariant density ``d_phi``.
    algebra : {"full", "diagonal"}
        Algebra the semigroup acts on.
    name : str
        Model label used in reports.
    params : dict
        Model parameters used in reports.
    """

    dim: int
    jumps: tuple
    bohr_weights: tuple
    reference: np.ndarray
    algebra: str = "full"
    name: str = "custom_gns"
    params: dict = field(default_factory=dict)

    @cached_property
    def domain(self):
        """Projection onto the algebra, or ``None`` for ``M_d``."""
        return diagonal_projection(self.dim) if self.algebra == "diagonal" else None

    @cached_property
    def generator(self):
        """Heisenberg-picture generator superoperator."""
        d = self.dim
        A = np.zeros((d, d), dtype=complex)
        K = np.zeros((d * d, d * d), dtype=complex)
        for V, w in zip(self.jumps, self.bohr_weights):
            c = np.exp(-w / 2.0)
            A += c * V.conj().T @ V
            K += c * np.kron(V.T, V.conj().T)
        I = np.eye(d)
        L = np.kron(I, A) + np.kron(A.T, I) - 2.0 * K
        if self.domain is not None:
            L = L @ self.domain
        return L

    def apply(self, x):
        """Heisenberg action ``L(x)``."""
        return apply_superop(self.generator, x)

    @cached_property
    def unit_structure(self):
        """Classical rates and Schur decay rates when all jumps are matrix units.

        Returns ``None`` unless every jump has a single nonzero entry.
        Otherwise returns a :class:`UnitStructure`.
        """
        return _unit_structure(self)

    @cached_property
    def kms_frame(self):
        """Spectral data of the KMS-symmetrized generator on the algebra.

        Returns
        -------
        w : ndarray
            Ascending eigenvalues.
        U : ndarray
            Orthonormal eigenvectors in algebra coordinates.
        B : ndarray
            Orthonormal basis of the weighted algebra as columns of
            length ``d**2`` (identity for the full algebra).
        """
        d = self.dim
        if self.algebra == "diagonal":
            us = self.unit_structure
            if us is None:
                raise PreconditionFailed("diagonal algebra needs matrix-unit jumps")
            H = us.symmetrized_rates()
            B = np.zeros((d * d, d), dtype=complex)
            B[np.arange(d) * (d + 1), np.arange(d)] = 1.0
        else:
            W = kms_weight(self.reference, 1.0)
            Winv = kms_weight(self.reference, -1.0)
            H = W @ self.generator @ Winv
            B = np.eye(d * d, dtype=complex)
        asym = np.abs(H - H.conj().T).max()
        if asym > 1e-8 * max(1.0, np.abs(H).max()):
            raise NotSymmetric(f"KMS-symmetrized generator has asymmetry {asym:.2e}")
        w, U = eig_hermitian(H)
        return w, U, B

    @cached_property
    def fixed_point(self):
        return fixed_point_expectation(self)


@dataclass(frozen=True, eq=False)
class UnitStructure:
    """Decomposition of a generator whose jumps are all matrix units.

    On diagonal matrices the generator acts as the classical generator
    ``rates`` (``(L f)(v) = sum_u q(v, u) (f(v) - f(u))``); each
    off-diagonal unit ``e_rs`` is an eigenvector with eigenvalue
    ``kappa[r] + kappa[s]``.
    """

    mu: np.ndarray
    rates: np.ndarray
    kappa: np.ndarray

    @property
    def classical_generator(self):
        """Matrix ``G`` with ``(L f) = G f`` on the diagonal."""
        return np.diag(self.rates.sum(axis=1)) - self.rates

    @property
    def schur_rates(self):
        """Matrix ``gamma_rs = kappa_r + kappa_s`` (diagonal set to zero)."""
        g = self.kappa[:, None] + self.kappa[None, :]
        np.fill_diagonal(g, 0.0)
        return g

    def symmetrized_rates(self):
        s = np.sqrt(self.mu)
        return (s[:, None] * self.classical_generator) / s[None, :]

    @cached_property
    def spectral(self):
        H = self.symmetrized_rates()
        H = 0.5 * (H + H.T)
        w, U = np.linalg.eigh(H)
        return w, U

    def full_spectrum(self):
        """Generator spectrum on ``M_d``: classical part plus the Schur rates."""
        g = self.schur_rates
        off = g[~np.eye(g.shape[0], dtype=bool)]
        return np.sort(np.concatenate([self.spectral[0], off]))

    def is_ergodic(self, tol=DEFAULT_TOL):
        w, _ = self.spectral
        return bool(w[1] > tol.kernel_cluster) if w.size > 1 else True

    def heat_kernel_deviation(self, t, tol=DEFAULT_TOL):
        """``h_t(u, v) - 1`` with ``h_t(u, v) = p_t(u, v)/mu(v)``.

        Computed from the nonzero modes only, so tiny stationary masses do
        not cause cancellation.
        """
        w, U = self.spectral
        keep = w > tol.kernel_cluster
        Uk = U[:, keep]
        core = (Uk * np.exp(-t * w[keep])) @ Uk.T
        s = 1.0 / np.sqrt(self.mu)
        return s[:, None] * core * s[None, :]

    def transition_kernel(self, t):
        """``p_t = exp(-t G)`` (rows are start states)."""
        w, U = self.spectral
        core = (U * np.exp(-t * w)) @ U.T
        s = np.sqrt(self.mu)
        return core / s[:, None] * s[None, :]


def _unit_structure(L):
    d = L.dim
    mu = np.real(np.diag(L.reference)).copy()
    if np.abs(L.reference - np.diag(mu)).max() > 1e-12:
        return None
    rates = np.zeros((d, d))
    kappa = np.zeros(d)
    for V, w in zip(L.jumps, L.bohr_weights):
        nz = np.argwhere(np.abs(V) > 0)
        if len(nz) != 1:
            return None
        a, b = nz[0]
        c2 = abs(V[a, b]) ** 2 * np.exp(-w / 2.0)
        kappa[b] += c2
        if a != b:
            rates[b, a] += 2.0 * c2
    return UnitStructure(mu, rates, kappa)


def _pair_adjoints(jumps, weights):
    # every V_j needs a partner V_k = V_j^* with w_k = -w_j
    for j, (V, w) in enumerate(zip(jumps, weights)):
        Vs = V.conj().T
        scale = max(1.0, np.abs(V).max())
        if not any(
            abs(wk + w) <= 1e-9 and np.abs(Vk - Vs).max() <= 1e-10 * scale
            for Vk, wk in zip(jumps, weights)
        ):
            return j
    return None


def lindbladian_gns(jumps, bohr_weights, reference, algebra="full", name="custom_gns",
                    params=None, verify=True, tol=DEFAULT_TOL):
    """Assemble and validate a GNS canonical-form Lindbladian.

    Parameters
    ----------
    jumps : sequence of (d, d) array_like
        Closed under adjoints: each ``V`` has a partner ``V^*`` whose
        weight is negated.
    bohr_weights : sequence of float
    reference : (d, d) array_like
        Faithful density ``d_phi``.
    algebra : {"full", "diagonal"}
    verify : bool
        Run the generator invariants (``L(I) = 0`` and GNS symmetry of
        ``exp(-0.1 L)``).

    Raises
    ------
    ModularMismatch
        If ``d_phi V_j != exp(-w_j) V_j d_phi``.
    PreconditionFailed
        If the jump list is not closed under adjoints.
    NotSymmetric
        If the assembled semigroup fails the GNS check.
    """
    reference = hermitian_part(reference)
    d = reference.shape[0]
    jumps = tuple(np.asarray(V, dtype=complex) for V in jumps)
    weights = tuple(float(w) for w in bohr_weights)
    if len(jumps) != len(weights):
        raise PreconditionFailed("one Bohr weight per jump is required")
    for V, w in zip(jumps, weights):
        if V.shape != (d, d):
            raise PreconditionFailed(f"jump shape {V.shape} does not match reference")
        defect = np.abs(reference @ V - np.exp(-w) * V @ reference).max()
        if defect > 1e-8 * max(np.abs(V).max(), 1e-300):
            raise ModularMismatch(f"jump with weight {w:g} has defect {defect:.2e}")
    bad = _pair_adjoints(jumps, weights)
    if bad is not None:
        raise PreconditionFailed(f"jump {bad} has no adjoint partner with negated weight")
    L = Lindbladian(d, jumps, weights, reference, algebra, name, dict(params or {}))
    if verify:
        check_lindbladian(L, tol)
    return L


def check_lindbladian(L, tol=DEFAULT_TOL):
    """Check ``L(I) = 0`` and GNS symmetry of ``exp(-0.1 L)``.

    Diagonal-algebra models, and matrix-unit models with ``d > 8``, are
    checked through detailed balance of their classical rates, which
    avoids ``d**4`` work. For matrix-unit jumps ``L(I) = 0`` holds by
    construction and the modular and pairing checks of
    :func:`lindbladian_gns` already imply GNS symmetry.
    """
    us = L.unit_structure
    if L.algebra == "diagonal" or (us is not None and L.dim > 8):
        if us is None:
            raise PreconditionFailed("diagonal algebra needs matrix-unit jumps")
        flux = us.mu[:, None] * us.rates
        if np.abs(flux - flux.T).max() > 1e-10 * max(1.0, flux.max()):
            raise NotSymmetric("classical rates violate detailed balance")
        return True
    S = L.generator
    if np.abs(S @ vec(np.eye(L.dim))).max() > 1e-10 * max(1.0, np.abs(S).max()):
        raise PreconditionFailed("L(I) != 0")
    T = expm(-0.1 * S)
    if gns_defect(T, L.reference) > 1e-9:
        raise NotSymmetric("exp(-0.1 L) is not GNS-symmetric")
    return True


def _frame_map(L, fw):
    # W^{-1} B U diag(fw) U^* B^* W
    w, U, B = L.kms_frame
    W = kms_weight(L.reference, 1.0)
    Winv = kms_weight(L.reference, -1.0)
    core = (U * fw) @ U.conj().T
    if L.algebra == "full":
        return Winv @ core @ W
    return Winv @ (B @ core @ B.conj().T) @ W


def evolve(L, t, tol=DEFAULT_TOL):
    """The Markov map ``T_t = exp(-t L)`` as a :class:`QuantumChannel`."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    w, _, _ = L.kms_frame
    S = _frame_map(L, np.exp(-t * w))
    return make_channel(S, L.reference, L.domain, tol)


def evolve_state(L, rho, t):
    """Schrödinger evolution ``T_{t*}(rho)`` (projected onto the algebra)."""
    w, U, B = L.kms_frame
    d = L.dim
    r = mat_power(L.reference, 0.25)
    rinv = mat_power(L.reference, -0.25)
    # pre-adjoint of W^{-1} B U e^{-tw} U^* B^* W is W B U e^{-tw} U^* B^* W^{-1}
    v = vec(rinv @ np.asarray(rho) @ rinv)
    y = U @ (np.exp(-t * w) * (U.conj().T @ (B.conj().T @ v)))
    out = unvec(B @ y, d)
    return hermitian_part(r @ out @ r)


def fixed_point_expectation(L, tol=DEFAULT_TOL):
    """Reference-preserving expectation onto ``ker L``.

    Raises
    ------
    AlgebraClosureFailure
        If the kernel is not an algebra or ``T_t E != E``.
    """
    w, U, B = L.kms_frame
    U0 = B @ U[:, w < tol.kernel_cluster]
    E = expectation_from_kms_eigenspace(U0, L.reference, tol)
    check_expectation(E, tol=tol)
    for t in (0.5, 2.0):
        T = _frame_map(L, np.exp(-t * w))
        if np.abs(T @ E.superop - E.superop).max() > 1e-8 or \
                np.abs(E.superop @ T - E.superop).max() > 1e-8:
            raise AlgebraClosureFailure("T_t E != E on the kernel projection")
    return E


def spectral_gap(L, tol=DEFAULT_TOL):
    """Smallest nonzero eigenvalue of the generator (0 if ``L = 0``)."""
    us = L.unit_structure
    if L.algebra == "full" and us is not None and L.dim > 8:
        w = us.full_spectrum()
    else:
        w = L.kms_frame[0]
    nz = w[w >= tol.kernel_cluster]
    return float(nz[0]) if nz.size else 0.0


def _superop(L):
    return L.generator if isinstance(L, Lindbladian) else np.asarray(L)


def _reference(L):
    if isinstance(L, Lindbladian):
        return L.reference
    d = int(round(np.sqrt(np.asarray(L).shape[0])))
    return np.eye(d) / d


def dirichlet_form(L, x):
    """``<x, L x>`` in the KMS inner product of the reference (real part)."""
    x = np.asarray(x, dtype=complex)
    r = mat_power(_reference(L), 0.5)
    Lx = apply_superop(_superop(L), x)
    return float(np.trace(r @ x.conj().T @ r @ Lx).real)


def gradient_form(L, x, y):
    """Carré du champ ``(L(x^*) y + x^* L(y) - L(x^* y)) / 2``."""
    S = _superop(L)
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    xs = x.conj().T
    return 0.5 * (apply_superop(S, xs) @ y + xs @ apply_superop(S, y) - apply_superop(S, xs @ y))


def lipschitz_seminorm(L, x):
    """``max(||Gamma(x, x)||, ||Gamma(x^*, x^*)||)^{1/2}``."""
    x = np.asarray(x, dtype=complex)
    a = np.linalg.norm(gradient_form(L, x, x), 2)
    b = np.linalg.norm(gradient_form(L, x.conj().T, x.conj().T), 2)
    return float(np.sqrt(max(a, b)))


def weighted_l2_norm_sq(x, reference):
    """``||d^{1/4} x d^{1/4}||_2^2``."""
    r = mat_power(reference, 0.25)
    y = r @ np.asarray(x) @ r
    return float(np.sum(np.abs(y) ** 2))


def poincare_check(L, x, tol=DEFAULT_TOL):
    """Both sides of ``lambda ||x - E x||^2_{2,phi} <= E(x, x)``.

    ``x`` is first projected onto the algebra of ``L``.
    """
    x = np.asarray(x, dtype=complex)
    if L.domain is not None:
        x = apply_superop(L.domain, x)
    E = L.fixed_point
    lam = spectral_gap(L, tol)
    lhs = lam * weighted_l2_norm_sq(x - E.apply(x), L.reference)
    return lhs, dirichlet_form(L, x)


@dataclass
class TcbResult:
    """Outcome of a CB return-time search.

    Attributes
    ----------
    value : float
        Midpoint of the final bracket.
    lower, upper : float
        Final bracket (predicate false at ``lower``, true at ``upper``).
    iterations : int
        Bisection steps taken.
    monotone : bool
        Whether the 8 interior probes agreed with a monotone predicate.
    method : str
        ``"choi"``, ``"classical"`` or ``"schur"``.
    """

    value: float
    lower: float
    upper: float
    iterations: int
    monotone: bool
    method: str


def _classical_margin(us, t, tol):
    return float(np.abs(us.heat_kernel_deviation(t, tol)).max())


def _schur_margin(us, t, tol):
    # Choi of T_t splits into the |rr> block and a diagonal remainder;
    # both are compared to the diagonal Choi of E after normalization.
    dev = us.heat_kernel_deviation(t, tol)
    s = 1.0 / np.sqrt(us.mu)
    N = np.exp(-t * us.schur_rates) * s[:, None] * s[None, :]
    np.fill_diagonal(N, np.diag(dev))
    off = dev.copy()
    np.fill_diagonal(off, 0.0)
    ev = np.linalg.eigvalsh(N)
    return float(max(np.abs(ev).max(), np.abs(off).max()))


def _pick_method(L, method, tol):
    if method != "auto":
        return method
    us = L.unit_structure
    if us is not None and us.is_ergodic(tol):
        if L.algebra == "diagonal":
            return "classical"
        if us.kappa.min() > 0 or L.dim == 1:
            return "schur"
    return "choi"


def sandwich_predicate(L, E, eps, method="auto", tol=DEFAULT_TOL):
    """Predicate ``t -> (1 - eps) E <=_cp T_t <=_cp (1 + eps) E``.

    The ``"classical"`` and ``"schur"`` methods evaluate the same Choi
    inequalities through the block structure of matrix-unit generators
    and are only valid for ergodic models (``E`` the state expectation).
    """
    method = _pick_method(L, method, tol)
    if method in ("classical", "schur"):
        us = L.unit_structure
        if us is None or not us.is_ergodic(tol):
            raise NotErgodic("fast paths need an ergodic matrix-unit model")
        margin = _classical_margin if method == "classical" else _schur_margin
        return (lambda t: margin(us, t, tol) <= eps), method
    w = L.kms_frame[0]
    Es = E.superop

    def pred(t):
        return sandwich_holds(_frame_map(L, np.exp(-t * w)), Es, eps, tol)

    return pred, "choi"


def t_cb_search(L, E=None, eps=0.1, t_hint=None, method="auto", tol=DEFAULT_TOL):
    """Bisection for ``t_cb(eps) = inf{t : (1-eps)E <=_cp T_t <=_cp (1+eps)E}``.

    The bracket is found by doubling (or halving) from ``t_hint``, which
    defaults to ``1/lambda``. Bisection stops once the bracket width is at
    most ``tol.bisect_rel`` times its upper end, or after 60 steps. Eight
    probes inside the initial bracket test that the predicate is monotone;
    a violation is reported with a warning and ``monotone=False``.

    Raises
    ------
    BracketNotFound
        If the predicate is still false at ``2**20 * t_hint``.
    """
    if not 0.0 < eps < 1.0:
        raise ValueError("eps must lie in (0, 1)")
    method = _pick_method(L, method, tol)
    if E is None and method == "choi":
        E = L.fixed_point
    pred, used = sandwich_predicate(L, E, eps, method, tol)
    if t_hint is None:
        lam = spectral_gap(L, tol)
        t_hint = 1.0 / lam if lam > 0 else 1.0
    if pred(0.0):
        return TcbResult(0.0, 0.0, 0.0, 0, True, used)
    hi = float(t_hint)
    lo = 0.0
    if pred(hi):
        for _ in range(60):
            mid = hi / 2.0
            if not pred(mid):
                lo = mid
                break
            hi = mid
    else:
        lo = hi
        for _ in range(20):
            hi *= 2.0
            if pred(hi):
                break
            lo = hi
        else:
            raise BracketNotFound(f"sandwich not reached by t = {hi:g}")
    lo0, hi0 = lo, hi
    it = 0
    while hi - lo > tol.bisect_rel * hi and it < 60:
        mid = 0.5 * (lo + hi)
        if pred(mid):
            hi = mid
        else:
            lo = mid
        it += 1
    value = 0.5 * (lo + hi)
    monotone = True
    for s in np.linspace(lo0, hi0, 10)[1:-1]:
        if abs(s - value) <= hi - lo:
            continue
        if pred(s) != (s > value):
            monotone = False
    if not monotone:
        warnings.warn("CP sandwich predicate is not monotone in t", RuntimeWarning)
    return TcbResult(value, lo, hi, it, monotone, used)


def t_cb(L, E=None, eps=0.1, t_hint=None, method="auto", tol=DEFAULT_TOL):
    """CB return time ``t_cb(eps)``; see :func:`t_cb_search`."""
    return t_cb_search(L, E, eps, t_hint, method, tol).value


def cb_index(E, domain=None, tol=DEFAULT_TOL):
    """Index ``C_cb(E) = inf{c : id <=_cp c E}`` by bisection on ``c``.

    Parameters
    ----------
    E : ConditionalExpectation
    domain : ndarray, optional
        Projection onto the algebra ``E`` acts on; the identity of that
        algebra replaces ``id``.

    Raises
    ------
    BracketNotFound
        If ``id <=_cp c E`` fails for ``c`` up to ``2**60``.
    """
    d = E.dim
    ident = identity_superop(d) if domain is None else domain
    Ci = choi(ident)
    Ce = choi(E.superop)

    def ok(c):
        return is_psd(c * Ce - Ci, tol.psd_tol)

    lo, hi = 0.0, 1.0
    for _ in range(60):
        if ok(hi):
            break
        lo, hi = hi, 2.0 * hi
    else:
        raise BracketNotFound("id <=_cp c E fails for every tested c")
    while hi - lo > min(tol.bisect_rel, 1e-8) * hi:
        mid = 0.5 * (lo + hi)
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def ergodic_cb_index(reference):
    """Closed form ``tr(d_phi^{-1})`` of the index of ``x -> tr(d_phi x) I``."""
    return float(np.sum(1.0 / np.linalg.eigvalsh(hermitian_part(reference))))


def classical_cb_index(mu):
    """Index ``||mu^{-1}||_inf`` of the expectation of a classical chain."""
    return float(np.max(1.0 / np.asarray(mu, dtype=float)))


def _model_cb_index(L, E, tol):
    us = L.unit_structure
    if E is None and us is not None and us.is_ergodic(tol):
        if L.algebra == "diagonal":
            return classical_cb_index(us.mu)
        return ergodic_cb_index(L.reference)
    return cb_index(E if E is not None else L.fixed_point, L.domain, tol)


def _project_state(L, E, rho, tol):
    # ergodic models need no d**4 expectation superoperator
    if E is None:
        us = L.unit_structure
        if us is not None and us.is_ergodic(tol) and (L.algebra == "diagonal" or us.kappa.min() > 0):
            return np.trace(rho).real * L.reference
        E = L.fixed_point
    return E.apply_state(rho)


@dataclass
class DecayRecord:
    """Relative-entropy trajectory against the ``exp(-t/t_cb)`` envelope."""

    times: list
    values: list
    envelope: list
    initial: float
    passed: bool
    monotone: bool


def decay_check(L, rho, times, t_cb_value=None, E=None, tol=DEFAULT_TOL):
    """Check ``D(T_{t*} rho || E_* rho) <= exp(-t/t_cb) D(rho || E_* rho) + 1e-9``.

    Also checks that the trajectory is nonincreasing (within ``1e-9``).
    States are projected onto the algebra of ``L`` and regularized when
    rank deficient.
    """
    times = [float(t) for t in times]
    if any(b <= a for a, b in zip(times, times[1:])) or times[0] <= 0:
        raise ValueError("times must be positive and ascending")
    if t_cb_value is None:
        t_cb_value = t_cb(L, E, 0.1, tol=tol)
    rho = hermitian_part(rho)
    if L.domain is not None:
        rho = np.diag(np.diag(rho))
    rho = regularize(rho, L.reference, tol)
    sigma = _project_state(L, E, rho, tol)
    d0 = relative_entropy(rho, sigma, tol)
    values, env = [], []
    for t in times:
        values.append(relative_entropy(evolve_state(L, rho, t), sigma, tol))
        env.append(np.exp(-t / t_cb_value) * d0 if t_cb_value > 0 else 0.0)
    passed = all(v <= e + 1e-9 for v, e in zip(values, env))
    seq = [d0] + values
    monotone = all(b <= a + 1e-9 for a, b in zip(seq, seq[1:]))
    return DecayRecord(times, values, env, d0, passed and monotone, monotone)


REPORT_COLUMNS = ("model", "d", "lambda", "t_cb", "C_cb", "bound_tcb",
                  "bound_index", "best_lower", "decay_pass")


@dataclass
class BoundReport:
    """Spectral gap, CB return time, index and the derived MLSI lower bounds.

    ``bound_tcb = 1/(2 t_cb)`` and ``bound_index = lambda/(2 ln(10 C_cb))``
    are lower bounds on the complete MLSI constant; ``best_lower`` is the
    larger one. Both must not exceed ``lambda``.
    """

    model: str
    d: int
    lam: float
    t_cb: float
    C_cb: float
    bound_tcb: float
    bound_index: float
    best_lower: float
    decay_pass: bool
    k_cb_snapshot: int = None
    invariants: dict = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)

    def row(self):
        """Values in :data:`REPORT_COLUMNS` order."""
        return [self.model, self.d, self.lam, self.t_cb, self.C_cb, self.bound_tcb,
                self.bound_index, self.best_lower, self.decay_pass]

    def as_dict(self):
        out = dict(zip(REPORT_COLUMNS, self.row()))
        out["k_cb_snapshot"] = self.k_cb_snapshot
        out["invariants"] = dict(self.invariants)
        out["diagnostics"] = dict(self.diagnostics)
        return out

    @property
    def ok(self):
        return all(self.invariants.values()) and bool(self.decay_pass)


def mlsi_lower_bounds(L, eps=0.1, method="auto", decay_states=3, seed=0,
                      snapshot_m=None, tol=DEFAULT_TOL):
    """Assemble a :class:`BoundReport` for a Lindbladian.

    Parameters
    ----------
    decay_states : int
        Number of seeded random states run through :func:`decay_check`
        (0 skips the check and records ``decay_pass=True``).
    snapshot_m : int, optional
        When given, also compute ``k_cb`` of ``T_{t_cb/(2m)}`` and record
        whether it is at most ``m``.
    """
    label = L.name
    lam = spectral_gap(L, tol)
    if lam <= 0.0:
        return BoundReport(label, L.dim, 0.0, 0.0, 1.0, float("nan"), float("nan"),
                           float("nan"), True, None, {"nontrivial": False},
                           {"note": "no decay: trivial generator"})
    method = _pick_method(L, method, tol)
    E = L.fixed_point if method == "choi" else None
    res = t_cb_search(L, E, eps, method=method, tol=tol)
    tcb = res.value
    C = _model_cb_index(L, E, tol)
    C = float(C)
    b_t = 1.0 / (2.0 * tcb)
    b_i = float(lam / (2.0 * np.log(10.0 * C)))
    inv = {
        "bound_tcb<=lambda": b_t <= lam + 1e-9,
        "bound_index<=lambda": bool(b_i <= lam + 1e-9),
        "t_cb<=ln(10C)/lambda": bool(tcb <= np.log(10.0 * C) / lam + 1e-6),
        "monotone_predicate": bool(res.monotone),
    }
    decay_ok = True
    if decay_states:
        rng = np.random.default_rng(seed)
        times = np.linspace(0.25, 2.0, 8) * tcb
        for _ in range(decay_states):
            rec = decay_check(L, random_density(L.dim, rng), times, tcb, E, tol)
            decay_ok = decay_ok and rec.passed
    k_snap = None
    if snapshot_m:
        E = L.fixed_point if E is None else E
        snap = evolve(L, tcb / (2.0 * snapshot_m), tol)
        k_snap = discrete_k_cb(snap, E, eps, k_max=max(64, 4 * snapshot_m), tol=tol)
        inv["k_cb(snapshot)<=m"] = bool(k_snap <= snapshot_m)
    diag = {"t_cb_method": res.method, "t_cb_bracket": [float(res.lower), float(res.upper)],
            "params": dict(L.params)}
    return BoundReport(label, L.dim, float(lam), float(tcb), C, b_t, b_i, max(b_t, b_i),
                       bool(decay_ok),
                       k_snap, inv, diag)
