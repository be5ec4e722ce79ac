"""Concrete models: classical walks, depolarizing, birth-death, SU(2) and more.

Every model is returned as a :class:`~qmsbounds.semigroups.Lindbladian` in
GNS canonical form, so the whole bound pipeline applies uniformly.
Classical chains live on the diagonal subalgebra.
"""

import json
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import brentq

from .entropy import bkm_metric, entropy_production, relative_entropy
from .errors import NotErgodic, PreconditionFailed, SpecParseError
from .matcore import (
    DEFAULT_TOL,
    eig_hermitian,
    hermitian_part,
    matrix_from_json,
    matrix_unit,
)
from .semigroups import evolve, lindbladian_gns, spectral_gap


@dataclass(frozen=True, eq=False)
class StochasticKernel:
    """Row-stochastic transition matrix with its stationary distribution.

    Attributes
    ----------
    kernel : (n, n) ndarray
    stationary : (n,) ndarray
    exact_spectrum : ndarray, optional
        Closed-form eigenvalues, when known.
    """

    kernel: np.ndarray
    stationary: np.ndarray
    exact_spectrum: np.ndarray = None

    def __post_init__(self):
        K, mu = self.kernel, self.stationary
        if np.abs(K.sum(axis=1) - 1.0).max() > 1e-12:
            raise PreconditionFailed("kernel rows must sum to 1")
        if np.abs(mu @ K - mu).max() > 1e-12:
            raise PreconditionFailed("stationary distribution is not invariant")

    @property
    def n(self):
        return self.kernel.shape[0]

    @property
    def reversible(self):
        flux = self.stationary[:, None] * self.kernel
        return bool(np.abs(flux - flux.T).max() <= 1e-10)


@dataclass(frozen=True)
class GraphModel:
    """Undirected graph with positive symmetric edge weights.

    Attributes
    ----------
    n : int
        Number of vertices.
    edges : tuple of (int, int)
        Unordered edges, each listed once.
    weights : tuple of float
        One positive weight per edge.
    """

    n: int
    edges: tuple
    weights: tuple = None

    def __post_init__(self):
        if self.weights is None:
            object.__setattr__(self, "weights", tuple(1.0 for _ in self.edges))
        if len(self.weights) != len(self.edges):
            raise PreconditionFailed("one weight per edge is required")
        seen = set()
        for (r, s), w in zip(self.edges, self.weights):
            if not (0 <= r < self.n and 0 <= s < self.n) or r == s:
                raise PreconditionFailed(f"bad edge ({r}, {s})")
            if w <= 0:
                raise PreconditionFailed("edge weights must be positive")
            key = (min(r, s), max(r, s))
            if key in seen:
                raise PreconditionFailed(f"edge {key} listed twice")
            seen.add(key)

    def adjacency(self):
        A = np.zeros((self.n, self.n))
        for (r, s), w in zip(self.edges, self.weights):
            A[r, s] = A[s, r] = w
        return A


def path_graph(n, weights=None):
    return GraphModel(n, tuple((k, k + 1) for k in range(n - 1)),
                      None if weights is None else tuple(weights))


def cycle_graph(n):
    return GraphModel(n, tuple((k, (k + 1) % n) for k in range(n)))


def cyclic_walk(d):
    """Simple random walk on the cycle ``C_d``; spectrum ``cos(2 pi j/d)``."""
    if d < 3:
        raise PreconditionFailed("cycle needs d >= 3")
    K = np.zeros((d, d))
    for i in range(d):
        K[i, (i + 1) % d] += 0.5
        K[i, (i - 1) % d] += 0.5
    spec = np.sort(np.cos(2 * np.pi * np.arange(d) / d))
    return StochasticKernel(K, np.full(d, 1.0 / d), spec)


def reversible_chain(rates, mu, name, params=None, verify=True):
    """Diagonal-algebra Lindbladian of a reversible continuous-time chain.

    Parameters
    ----------
    rates : (n, n) array_like
        Jump rates ``q(u, v)`` off the diagonal (the diagonal is ignored).
    mu : (n,) array_like
        Stationary distribution with ``mu_u q(u,v) = mu_v q(v,u)``.

    Notes
    -----
    Each edge ``u -> v`` becomes the jump ``c e_vu`` with Bohr weight
    ``ln(mu_u/mu_v)`` and ``c**2 = q(u,v) sqrt(mu_u/mu_v)/2``. Its adjoint
    is the jump for ``v -> u``.
    """
    rates = np.asarray(rates, dtype=float)
    mu = np.asarray(mu, dtype=float)
    mu = mu / mu.sum()
    n = mu.size
    jumps, weights = [], []
    for u in range(n):
        for v in range(u + 1, n):
            if rates[u, v] == 0 and rates[v, u] == 0:
                continue
            c = np.sqrt(rates[u, v] * np.sqrt(mu[u] / mu[v]) / 2.0)
            w = np.log(mu[u] / mu[v])
            jumps += [c * matrix_unit(v, u, n), c * matrix_unit(u, v, n)]
            weights += [w, -w]
    return lindbladian_gns(jumps, weights, np.diag(mu), algebra="diagonal",
                           name=name, params=params, verify=verify)


def cyclic_laplacian(d):
    """``L_{C_d} = 2(I - K_{C_d})`` on the diagonal of ``M_d``."""
    if d < 3:
        raise PreconditionFailed("cycle needs d >= 3")
    return graph_laplacian(cycle_graph(d), name="cyclic_graph", params={"d": d})


def graph_laplacian(graph, name="graph_laplacian", params=None):
    """Weighted graph Laplacian ``L_G``; symmetric for the uniform measure."""
    A = graph.adjacency()
    return reversible_chain(A, np.full(graph.n, 1.0 / graph.n), name,
                            params or {"n": graph.n})


def graph_walk(graph, name="graph_walk", params=None):
    """``I - K_G`` with ``K_G(u, v) = w(u, v)/deg(u)``; reversible for ``mu ~ deg``."""
    A = graph.adjacency()
    deg = A.sum(axis=1)
    if np.any(deg == 0):
        raise PreconditionFailed("isolated vertex")
    return reversible_chain(A / deg[:, None], deg, name,
                            params or {"n": graph.n, "edges": [list(e) for e in graph.edges]})


def kernel_lindbladian(K):
    """Continuous-time generator ``I - K`` of a reversible :class:`StochasticKernel`."""
    if not K.reversible:
        raise PreconditionFailed("kernel is not reversible")
    R = K.kernel.copy()
    np.fill_diagonal(R, 0.0)
    return reversible_chain(R, K.stationary, "kernel_walk", {"n": K.n})


def _as_lindbladian(model):
    return kernel_lindbladian(model) if isinstance(model, StochasticKernel) else model


def l1_to_linf_distance(model, t):
    """``||T_t - E : L_1(mu) -> L_inf||`` = ``max |h_t(u, v) - 1|``."""
    us = _as_lindbladian(model).unit_structure
    return float(np.abs(us.heat_kernel_deviation(t)).max())


def classical_mixing_time(model, eps=0.1, tol=DEFAULT_TOL):
    """``t_b(eps) = inf{t : ||T_t - E||_{L_1 -> L_inf} <= eps}``.

    The distance is nonincreasing in ``t`` for reversible chains, so the
    crossing is bracketed by doubling and refined with ``brentq``.

    Raises
    ------
    NotErgodic
        If the chain has more than one closed class.
    """
    L = _as_lindbladian(model)
    us = L.unit_structure
    if us is None or not us.is_ergodic(tol):
        raise NotErgodic("mixing time needs an ergodic reversible chain")

    def gap(t):
        return float(np.abs(us.heat_kernel_deviation(t, tol)).max()) - eps

    if gap(0.0) <= 0:
        return 0.0
    hi = 1.0 / us.spectral[0][1]
    while gap(hi) > 0:
        hi *= 2.0
    return float(brentq(gap, 0.0, hi, xtol=1e-14, rtol=4 * np.finfo(float).eps))


def cyclic_heat_kernel_bound(d, t):
    """Literature estimate ``2 exp(-4t/d^2) sqrt(1 + d^2/(4t))``."""
    return 2.0 * np.exp(-4.0 * t / d ** 2) * np.sqrt(1.0 + d ** 2 / (4.0 * t))


@dataclass
class ClassicalBounds:
    """MLSI and LSI lower bounds of a reversible chain from ``(t0, C0)``."""

    lam: float
    t0: float
    C0: float
    cmlsi_lower: float
    lsi_lower: float
    loglog_factor: float
    index_lower: float


def classical_bounds(model, t0=None, C0=None, tol=DEFAULT_TOL):
    """CMLSI bound ``lam/(2(lam t0 + ln C0 + ln 10))`` and its LSI analogue.

    Without ``(t0, C0)`` the pair ``(0, ||mu^{-1}||_inf)`` is used.
    ``loglog_factor`` is ``4 + ln ln ||mu^{-1}||_inf`` and
    ``index_lower`` is ``lam/(2 ln(10 ||mu^{-1}||_inf))``.
    """
    L = _as_lindbladian(model)
    us = L.unit_structure
    lam = spectral_gap(L, tol)
    inv = float(np.max(1.0 / us.mu))
    if t0 is None:
        t0, C0 = 0.0, inv
    cm = lam / (2.0 * (lam * t0 + np.log(C0) + np.log(10.0)))
    ls = lam / (lam * t0 + np.log(C0) + 1.0)
    ll = 4.0 + np.log(np.log(inv)) if inv > np.e else float("nan")
    rec = ClassicalBounds(lam, float(t0), float(C0), cm, ls, ll,
                          lam / (2.0 * np.log(10.0 * inv)))
    if cm > lam + 1e-12:
        raise PreconditionFailed("CMLSI bound exceeds the spectral gap")
    return rec


def _rotate(jumps, U):
    return [U @ V @ U.conj().T for V in jumps]


def depolarizing(d, reference=None):
    """``L(x) = x - tr(d_phi x) I`` with spectral gap 1.

    Jumps are ``c_ab e_ab`` in the eigenbasis of the reference with
    ``c_ab**2 = sqrt(mu_a mu_b)/2``.
    """
    if reference is None:
        reference = np.eye(d) / d
    reference = hermitian_part(reference)
    mu, U = eig_hermitian(reference)
    if mu.min() <= DEFAULT_TOL.support_cutoff:
        raise PreconditionFailed("reference must be faithful")
    diagonal = np.abs(reference - np.diag(np.diag(reference))).max() <= 1e-14
    if diagonal:
        mu, U = np.real(np.diag(reference)), np.eye(d)
    jumps, weights = [], []
    for a in range(d):
        for b in range(d):
            c = np.sqrt(np.sqrt(mu[a] * mu[b]) / 2.0)
            jumps.append(c * matrix_unit(a, b, d))
            weights.append(float(np.log(mu[b] / mu[a])))
    if not diagonal:
        jumps = _rotate(jumps, U)
    return lindbladian_gns(jumps, weights, reference, name="depolarizing",
                           params={"d": d})


def thermal_distribution(n, beta):
    """``mu_j ~ exp(-beta j)`` for ``j = 1..n``."""
    e = np.exp(-beta * (np.arange(1, n + 1) - 1.0))
    return e / e.sum()


def nc_birth_death(n, beta, weights=None):
    """Noncommutative birth-death generator on the path graph.

    Every edge ``(r, s)`` contributes the jumps ``sqrt(2 w) e_rs`` and
    ``sqrt(2 w) e_sr`` with Bohr weights fixed by the thermal reference
    ``mu_j ~ exp(-beta j)``. Off-diagonal units are eigenvectors with
    eigenvalues ``gamma_rs`` (see :func:`bd_gamma`).
    """
    if n < 2:
        raise PreconditionFailed("birth-death needs n >= 2")
    graph = path_graph(n, weights)
    mu = thermal_distribution(n, beta)
    jumps, bw = [], []
    for (r, s), w in zip(graph.edges, graph.weights):
        c = np.sqrt(2.0 * w)
        jumps += [c * matrix_unit(r, s, n), c * matrix_unit(s, r, n)]
        lw = float(np.log(mu[s] / mu[r]))
        bw += [lw, -lw]
    return lindbladian_gns(jumps, bw, np.diag(mu), name="nc_birth_death",
                           params={"n": n, "beta": beta})


def bd_gamma(n, beta, weights=None):
    """Off-diagonal eigenvalues ``gamma_rs`` from the edge formula.

    ``gamma_rs = 2 (sum_{a~r} w sqrt(mu_a/mu_r) + sum_{a~s} w sqrt(mu_a/mu_s))``.
    """
    graph = path_graph(n, weights)
    mu = thermal_distribution(n, beta)
    kappa = np.zeros(n)
    for (r, s), w in zip(graph.edges, graph.weights):
        kappa[r] += 2.0 * w * np.sqrt(mu[s] / mu[r])
        kappa[s] += 2.0 * w * np.sqrt(mu[r] / mu[s])
    g = kappa[:, None] + kappa[None, :]
    np.fill_diagonal(g, 0.0)
    return g


def bd_decomposition_bound(L, t, tol=DEFAULT_TOL):
    """Split ``T_t - E`` into its diagonal and off-diagonal parts.

    Returns
    -------
    diag_norm : float
        ``max |h_t - 1|`` of the classical part.
    offdiag_norm : float
        Exact ``||A_t||`` for ``A_t = sum_{r != s} mu_r^{-1/2} e^{-gamma_rs t} mu_s^{-1/2} e_rs``.
    schur_bound : float
        Schur-test bound ``max_r sum_s`` of the entries of ``A_t``.
    """
    us = L.unit_structure
    if us is None:
        raise PreconditionFailed("decomposition needs matrix-unit jumps")
    diag = float(np.abs(us.heat_kernel_deviation(t, tol)).max())
    s = 1.0 / np.sqrt(us.mu)
    A = s[:, None] * np.exp(-t * us.schur_rates) * s[None, :]
    np.fill_diagonal(A, 0.0)
    exact = float(np.linalg.norm(A, 2))
    schur = float(A.sum(axis=1).max())
    if exact > schur * (1 + 1e-12) + 1e-300:
        raise PreconditionFailed("Schur test violated")
    return diag, exact, schur


def bd_witness_closed_form(n, beta):
    """Entropy production and relative entropy of ``rho = I/n`` in closed form.

    Returns ``(production, entropy)`` with production
    ``8 beta sinh(beta/2)(n-1)/n`` and entropy
    ``ln Z - ln n + beta (n+1)/2`` for ``Z = sum_{k=1}^n e^{-beta k}``.
    """
    Z = np.sum(np.exp(-beta * np.arange(1, n + 1)))
    prod = 8.0 * beta * np.sinh(beta / 2.0) * (n - 1) / n
    ent = np.log(Z) - np.log(n) + beta * (n + 1) / 2.0
    return float(prod), float(ent)


def bd_upper_witness(n, beta, tol=DEFAULT_TOL):
    """Upper bound ``I(rho)/(2 D(rho||mu))`` on the MLSI constant of the birth-death chain.

    The test state is ``f mu`` with ``f(k) = Z e^{beta k}/n``, i.e.
    ``rho = I/n``. Production and entropy are computed numerically and
    cross-checked against :func:`bd_witness_closed_form`.
    """
    if n < 2 or beta <= 0:
        raise PreconditionFailed("witness needs n >= 2 and beta > 0")
    L = nc_birth_death(n, beta)
    rho = np.eye(n) / n
    # thermal masses fall below the default support cutoff near n = 33
    fine = replace(tol, support_cutoff=1e-300)
    prod = entropy_production(L, rho, fine)
    ent = relative_entropy(rho, L.reference, fine)
    cp, ce = bd_witness_closed_form(n, beta)
    if abs(ent - ce) > 1e-10 * max(1.0, ce) or abs(prod - cp) > 1e-9 * max(1.0, cp):
        raise PreconditionFailed("witness closed form disagrees with numerics")
    return prod / (2.0 * ent)


def spin_matrices(j):
    """Angular momentum ``(J_x, J_y, J_z)`` of spin ``j`` (dimension ``2j+1``)."""
    dim = int(round(2 * j + 1))
    if dim < 2 or abs(dim - (2 * j + 1)) > 1e-12:
        raise PreconditionFailed("j must be a positive half-integer")
    m = j - np.arange(dim)
    ladder = np.zeros((dim, dim), dtype=complex)
    for k in range(1, dim):
        ladder[k - 1, k] = np.sqrt(j * (j + 1) - m[k] * (m[k] + 1))
    Jx = 0.5 * (ladder + ladder.conj().T)
    Jy = -0.5j * (ladder - ladder.conj().T)
    return Jx, Jy, np.diag(m).astype(complex)


def su2_representation(j):
    """Skew-Hermitian images ``d(X), d(Y), d(Z)`` with ``[d(X), d(Y)] = 2 d(Z)``."""
    Jx, Jy, Jz = spin_matrices(j)
    return {"X": 2j * Jy, "Y": 2j * Jx, "Z": 2j * Jz}


def su2_transference(j, generators=("X", "Y")):
    """Double-commutator generator ``L(x) = -sum [d(X_i), [d(X_i), x]]``.

    Trace-symmetric with reference ``I/(2j+1)``; each ``-i d(X_i)`` is a
    Hermitian jump with Bohr weight 0.
    """
    rep = su2_representation(j)
    bad = set(generators) - set(rep)
    if bad or not generators:
        raise PreconditionFailed("generators must be a nonempty subset of X, Y, Z")
    D = rep
    for a, b, c in (("X", "Y", "Z"), ("Y", "Z", "X"), ("Z", "X", "Y")):
        if np.abs(D[a] @ D[b] - D[b] @ D[a] - 2 * D[c]).max() > 1e-10:
            raise PreconditionFailed("representation violates the bracket relations")
    dim = D["X"].shape[0]
    jumps = [-1j * D[g] for g in generators]
    return lindbladian_gns(jumps, [0.0] * len(jumps), np.eye(dim) / dim,
                           name="su2_transference",
                           params={"j": j, "generators": list(generators)})


@dataclass
class RothausRecord:
    """Second-order Rothaus computation on two atoms of masses ``r, 1-r``."""

    eta: float
    r: float
    metric_numeric: float
    metric_closed: float
    h_norm_sq: float
    entropy_term: float
    ratio: float


def rothaus_counterexample(eta, r, tol=DEFAULT_TOL):
    """Ratio ``(D(h^2||E h^2) + ||h||_2^2)/gamma_f(2h)`` for the two-atom model.

    The algebra is ``M_2 (x) L_inf({X, X^c})`` realized as block-diagonal
    ``4 x 4`` matrices, the trace is ``tr/2 (x) mu`` with ``mu(X) = r``,
    ``f = diag(1+eta, 1-eta) (x) 1`` and ``h`` is the off-diagonal
    ``h0 (x) sigma_x`` with ``h0 = (1-r) 1_X - r 1_{X^c}``. As ``eta -> 1``
    the metric diverges and the ratio tends to 0.
    """
    if not (0 < eta < 1 and 0 < r < 1):
        raise PreconditionFailed("eta and r must lie in (0, 1)")
    weight = 0.5 * np.diag([r, r, 1 - r, 1 - r])
    f = np.diag([1 + eta, 1 - eta, 1 + eta, 1 - eta]).astype(complex)
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    h = np.zeros((4, 4), dtype=complex)
    h[:2, :2] = (1 - r) * sx
    h[2:, 2:] = -r * sx
    metric = bkm_metric(weight @ f, weight @ (2 * h), tol)
    hn = float(np.trace(weight @ h @ h).real)
    closed = 2.0 / eta * np.log((1 + eta) / (1 - eta)) * hn
    if abs(metric - closed) > 1e-8 * closed:
        raise PreconditionFailed("BKM metric disagrees with the closed form")
    h2 = h @ h
    Eh2 = hn * np.eye(4)
    ent = relative_entropy(weight @ h2, weight @ Eh2, tol)
    ent += float(np.trace(weight @ (Eh2 - h2)).real)
    return RothausRecord(eta, r, metric, closed, hn, ent, (ent + hn) / metric)


def random_gns_lindbladian(d, num_jumps, reference=None, seed=0, kind="units"):
    """Seeded random GNS-symmetric generator.

    Parameters
    ----------
    reference : ndarray, optional
        Diagonal faithful density; a random thermal one by default.
    kind : {"units", "dense"}
        ``"units"`` samples matrix units ``e_kl`` with amplitudes in
        ``[0.5, 1.5]`` and ``w = ln(mu_l/mu_k)``. ``"dense"`` draws random combinations of
        units sharing a Bohr frequency (dense when ``reference = I/d``).
    """
    rng = np.random.default_rng(seed)
    if reference is None:
        e = rng.uniform(0.3, 1.0, d)
        reference = np.diag(e / e.sum())
    reference = np.asarray(reference, dtype=complex)
    if np.abs(reference - np.diag(np.diag(reference))).max() > 1e-14:
        raise PreconditionFailed("reference must be diagonal")
    mu = np.real(np.diag(reference))
    freq = np.log(mu[None, :] / mu[:, None])
    jumps, weights = [], []
    for _ in range(num_jumps):
        k, l = rng.integers(0, d, size=2)
        w = float(freq[k, l])
        if kind == "units":
            V = rng.uniform(0.5, 1.5) * matrix_unit(k, l, d)
        elif kind == "dense":
            mask = np.abs(freq - w) <= 1e-12
            G = (rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))) * mask
            V = G
        else:
            raise ValueError(f"unknown kind {kind!r}")
        jumps += [V, V.conj().T]
        weights += [w, -w]
    return lindbladian_gns(jumps, weights, reference, name="random_gns",
                           params={"d": d, "num_jumps": num_jumps, "seed": seed, "kind": kind})


def random_gns_channel(d, rng, time=0.5, num_jumps=None):
    """``exp(-time L)`` for a random GNS generator with a thermal reference."""
    seed = int(rng.integers(2 ** 31))
    L = random_gns_lindbladian(d, num_jumps or 2 * d, seed=seed)
    return evolve(L, time), L


MODEL_TYPES = ("depolarizing", "cyclic_graph", "graph_walk", "nc_birth_death",
               "su2_transference", "custom_gns")


def _need(obj, key, kind):
    if key not in obj:
        raise SpecParseError(f"{kind} spec needs {key!r}")
    return obj[key]


def _int(v, name, low):
    if isinstance(v, bool) or not isinstance(v, (int, float)) or int(v) != v or v < low:
        raise SpecParseError(f"{name} must be an integer >= {low}")
    return int(v)


def model_from_spec(spec):
    """Build a model from a JSON object (or JSON text).

    Recognized ``type`` values are listed in :data:`MODEL_TYPES`.

    Raises
    ------
    SpecParseError
        On malformed input or invalid parameters.
    """
    if isinstance(spec, (str, bytes)):
        try:
            spec = json.loads(spec)
        except json.JSONDecodeError as exc:
            raise SpecParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(spec, dict):
        raise SpecParseError("model spec must be a JSON object")
    kind = spec.get("type")
    try:
        if kind == "depolarizing":
            d = _int(_need(spec, "d", kind), "d", 2)
            ref = spec.get("reference")
            return depolarizing(d, None if ref is None else matrix_from_json(ref))
        if kind == "cyclic_graph":
            return cyclic_laplacian(_int(_need(spec, "d", kind), "d", 3))
        if kind == "graph_walk":
            n = _int(_need(spec, "n", kind), "n", 2)
            edges = tuple(tuple(int(v) for v in e) for e in _need(spec, "edges", kind))
            w = spec.get("weights")
            return graph_walk(GraphModel(n, edges, None if w is None else tuple(w)))
        if kind == "nc_birth_death":
            n = _int(_need(spec, "n", kind), "n", 2)
            beta = float(_need(spec, "beta", kind))
            return nc_birth_death(n, beta, spec.get("weights"))
        if kind == "su2_transference":
            j = float(_need(spec, "j", kind))
            return su2_transference(j, tuple(spec.get("generators", ("X", "Y"))))
        if kind == "custom_gns":
            jumps = [matrix_from_json(m) for m in _need(spec, "jumps", kind)]
            weights = [float(w) for w in _need(spec, "weights", kind)]
            ref = matrix_from_json(_need(spec, "reference", kind))
            return lindbladian_gns(jumps, weights, ref, algebra=spec.get("algebra", "full"),
                                   name="custom_gns")
    except SpecParseError:
        raise
    except (TypeError, ValueError) as exc:
        raise SpecParseError(f"bad {kind} parameters: {exc}") from exc
    raise SpecParseError(f"unknown model type {kind!r}; expected one of {MODEL_TYPES}")
