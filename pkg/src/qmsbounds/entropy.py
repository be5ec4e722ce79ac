"""Relative entropy, the BKM metric and related entropic functionals.

All traces are unnormalized matrix traces, so these functions accept any
positive semidefinite operators, not only unit-trace states.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, QuadratureBudgetExceeded, SingularReference
from .matcore import (
    DEFAULT_TOL,
    apply_preadjoint,
    eig_hermitian,
    hermitian_part,
    mat_log,
)


@dataclass(frozen=True)
class QuadratureSpec:
    """How to integrate along the segment between two states.

    Attributes
    ----------
    scheme : {"adaptive-simpson", "fixed-gauss"}
    max_subdivisions : int
        Interval budget for the adaptive scheme, node count for Gauss.
    abs_tol : float
        Target absolute error of the adaptive scheme.
    """

    scheme: str = "adaptive-simpson"
    max_subdivisions: int = 2 ** 14
    abs_tol: float = 1e-8

    def __post_init__(self):
        if self.abs_tol <= 0:
            raise ValueError("abs_tol must be positive")
        if self.scheme not in ("adaptive-simpson", "fixed-gauss"):
            raise ValueError(f"unknown scheme {self.scheme!r}")


def _psd_eig(rho, tol):
    w, U = eig_hermitian(rho)
    if w.size and w.min() < -tol.psd_tol:
        raise DomainError(f"operator has eigenvalue {w.min():.3e}")
    return w, U


def relative_entropy(rho, sigma, tol=DEFAULT_TOL, support_tol=1e-10):
    """Umegaki relative entropy ``tr(rho ln rho - rho ln sigma)``.

    Parameters
    ----------
    rho, sigma : (d, d) array_like
        Positive semidefinite operators.
    support_tol : float
        ``rho`` counts as supported on ``supp(sigma)`` when
        ``||(I - P) rho (I - P)|| <= support_tol`` for the support
        projection ``P`` of ``sigma``.

    Returns
    -------
    float
        The relative entropy, or ``inf`` when the support condition fails.
    """
    p, _ = _psd_eig(rho, tol)
    s, V = _psd_eig(sigma, tol)
    rho = hermitian_part(rho)
    keep = s > tol.support_cutoff
    Vk = V[:, keep]
    Q = np.eye(rho.shape[0]) - Vk @ Vk.conj().T
    if np.linalg.norm(Q @ rho @ Q, 2) > support_tol:
        return float("inf")
    pp = p[p > tol.support_cutoff]
    rho_log_rho = float(np.sum(pp * np.log(pp)))
    weights = np.einsum("ik,ij,jk->k", Vk.conj(), rho, Vk).real
    rho_log_sigma = float(np.sum(weights * np.log(s[keep])))
    return rho_log_rho - rho_log_sigma


def entropy_functional(rho, tol=DEFAULT_TOL):
    """``H(rho) = tr(rho ln rho)``; note the sign, ``H(I/d) = -ln d``."""
    p, _ = _psd_eig(rho, tol)
    pp = p[p > tol.support_cutoff]
    return float(np.sum(pp * np.log(pp)))


def log_mean_kernel(a, b, rel=1e-12):
    """``(ln a - ln b)/(a - b)``, with value ``1/a`` on the diagonal.

    Entries with ``|a - b| <= rel * max(a, b)`` use the diagonal branch.
    The off-diagonal branch uses ``log1p`` to avoid cancellation.
    """
    a, b = np.broadcast_arrays(np.asarray(a, float), np.asarray(b, float))
    out = np.empty(a.shape)
    close = np.abs(a - b) <= rel * np.maximum(a, b)
    out[close] = 1.0 / a[close]
    far = ~close
    aa, bb = a[far], b[far]
    out[far] = np.log1p((aa - bb) / bb) / (aa - bb)
    return out


def bkm_metric(sigma, X, tol=DEFAULT_TOL):
    """Bogoliubov-Kubo-Mori metric ``gamma_sigma(X)``.

    Evaluates ``int_0^inf tr(X^* (sigma+s)^{-1} X (sigma+s)^{-1}) ds`` in
    closed form: ``sum_ij |X~_ij|^2 kappa(l_i, l_j)`` where ``X~`` is ``X``
    in the eigenbasis of ``sigma`` and ``kappa`` is
    :func:`log_mean_kernel`.

    Raises
    ------
    SingularReference
        If ``sigma`` is not faithful.
    """
    w, U = eig_hermitian(sigma)
    if w.min() <= tol.support_cutoff:
        raise SingularReference(f"sigma has eigenvalue {w.min():.3e}")
    Xt = U.conj().T @ np.asarray(X) @ U
    K = log_mean_kernel(w[:, None], w[None, :])
    return float(np.sum(np.abs(Xt) ** 2 * K))


def _adaptive_simpson(f, a, b, abs_tol, budget):
    # Iterative adaptive Simpson with Richardson correction.
    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
    whole = (b - a) * (fa + 4 * fm + fb) / 6.0
    stack = [(a, b, fa, fm, fb, whole, abs_tol)]
    total = 0.0
    intervals = 1
    while stack:
        a, b, fa, fm, fb, whole, eps = stack.pop()
        m = 0.5 * (a + b)
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm, frm = f(lm), f(rm)
        left = (m - a) * (fa + 4 * flm + fm) / 6.0
        right = (b - m) * (fm + 4 * frm + fb) / 6.0
        delta = left + right - whole
        if abs(delta) <= 15.0 * eps or b - a < 1e-12:
            total += left + right + delta / 15.0
            continue
        intervals += 1
        if intervals > budget:
            raise QuadratureBudgetExceeded(f"more than {budget} subdivisions")
        stack.append((a, m, fa, flm, fm, left, 0.5 * eps))
        stack.append((m, b, fm, frm, fb, right, 0.5 * eps))
    return total


def integrate(f, a, b, q=QuadratureSpec()):
    """Integrate a smooth scalar function on ``[a, b]`` with ``q``."""
    if q.scheme == "fixed-gauss":
        x, w = np.polynomial.legendre.leggauss(q.max_subdivisions)
        x = 0.5 * (b - a) * x + 0.5 * (b + a)
        return float(0.5 * (b - a) * sum(wi * f(xi) for xi, wi in zip(x, w)))
    return _adaptive_simpson(f, a, b, q.abs_tol, q.max_subdivisions)


def relative_entropy_via_bkm(rho, sigma, q=QuadratureSpec(), tol=DEFAULT_TOL):
    """Relative entropy from the segment integral of the BKM metric.

    Computes ``int_0^1 (1 - t) gamma_{rho_t}(rho - sigma) dt`` with
    ``rho_t = t rho + (1 - t) sigma``. Both states must be faithful.
    """
    rho = hermitian_part(rho)
    sigma = hermitian_part(sigma)
    X = rho - sigma

    def integrand(t):
        return (1.0 - t) * bkm_metric(t * rho + (1.0 - t) * sigma, X, tol)

    return integrate(integrand, 0.0, 1.0, q)


def k_of_c(c):
    """Comparison function ``k(c) = (c ln c - c + 1)/(c - 1)^2``.

    Near ``c = 1`` the series ``1/2 - (c - 1)/6`` is used.

    Raises
    ------
    DomainError
        For ``c <= 1 - 1e-6``.
    """
    c = float(c)
    if c <= 1.0 - 1e-6:
        raise DomainError(f"k(c) needs c > 1, got {c}")
    u = c - 1.0
    if abs(u) < 1e-6:
        return 0.5 - u / 6.0
    return (c * np.log(c) - c + 1.0) / (u * u)


def approximate_projection_constant(eps):
    """``(1-eps)/(1+eps) - eps/((1-eps) k(2))``; about 0.53 at ``eps = 0.1``."""
    return (1.0 - eps) / (1.0 + eps) - eps / ((1.0 - eps) * k_of_c(2.0))


def entropy_production(lindbladian, rho, tol=DEFAULT_TOL):
    """Entropy production ``tr(L_*(rho) (ln rho - ln d_phi))``.

    ``L_*`` is the trace-dual of the Heisenberg generator and ``d_phi``
    the generator's reference density. This equals
    ``-d/dt D(T_{t*} rho || E_* rho)`` at ``t = 0``.
    """
    ref = lindbladian.reference
    w = eig_hermitian(ref)[0]
    if w.min() <= tol.support_cutoff:
        raise SingularReference("reference is not faithful")
    Lrho = apply_preadjoint(lindbladian.generator, rho)
    G = mat_log(rho, tol) - mat_log(ref, tol)
    return float(np.trace(Lrho @ G).real)


def entropy_second_derivative_terms(rho, drho, d2rho, tol=DEFAULT_TOL):
    """First and second derivatives of ``F(t) = tr(rho_t ln rho_t)``.

    Parameters
    ----------
    rho, drho, d2rho : (d, d) array_like
        The path and its first two derivatives at the evaluation point.

    Returns
    -------
    first : float
        ``tr(rho' (ln rho + 1))``.
    second : float
        ``tr(rho'' (ln rho + 1)) + gamma_rho(rho')``.
    """
    rho = hermitian_part(rho)
    d = rho.shape[0]
    G = mat_log(rho, tol) + np.eye(d)
    first = float(np.trace(np.asarray(drho) @ G).real)
    second = float(np.trace(np.asarray(d2rho) @ G).real) + bkm_metric(rho, drho, tol)
    return first, second


def domination_constant(rho, sigma, tol=DEFAULT_TOL):
    """Smallest ``c`` with ``rho <= c sigma`` (``sigma`` faithful)."""
    w, U = eig_hermitian(sigma)
    if w.min() <= tol.support_cutoff:
        raise SingularReference(f"sigma has eigenvalue {w.min():.3e}")
    root = (U * w ** -0.5) @ U.conj().T
    return float(eig_hermitian(root @ np.asarray(rho) @ root)[0][-1])


def key_lemma_terms(rho, sigma, tol=DEFAULT_TOL):
    """Terms of ``k(c) gamma_sigma(rho - sigma) <= D(rho||sigma) <= gamma_sigma(rho - sigma)``.

    ``c`` is :func:`domination_constant`; states must have equal trace.

    Returns
    -------
    lower, middle, upper : float
    """
    c = max(domination_constant(rho, sigma, tol), 1.0)
    g = bkm_metric(sigma, np.asarray(rho) - np.asarray(sigma), tol)
    return k_of_c(c) * g, relative_entropy(rho, sigma, tol), g
