"""Weighted p-norms, MLSI concentration ratios and a matrix Bernstein experiment."""

from dataclasses import dataclass

import numpy as np
from scipy.stats import linregress

from .errors import PreconditionFailed, SingularReference
from .matcore import DEFAULT_TOL, eig_hermitian, mat_power
from .semigroups import lipschitz_seminorm
from .zoo import depolarizing


def weighted_p_norm(x, reference, p, tol=DEFAULT_TOL):
    """``||d^{1/(2p)} x d^{1/(2p)}||_p`` (Schatten); ``p = inf`` gives ``||x||``.

    Raises
    ------
    SingularReference
        If ``reference`` is not faithful.
    """
    x = np.asarray(x, dtype=complex)
    if p < 1:
        raise ValueError("p must be at least 1")
    if np.isinf(p):
        return float(np.linalg.norm(x, 2))
    w = eig_hermitian(reference)[0]
    if w.min() <= tol.support_cutoff:
        raise SingularReference("reference is not faithful")
    r = mat_power(reference, 1.0 / (2.0 * p))
    s = np.linalg.svd(r @ x @ r, compute_uv=False)
    return float(np.sum(s ** p) ** (1.0 / p))


@dataclass
class ConcentrationReport:
    """Ratios ``alpha ||x - E x||_{p,phi} / (sqrt(p) ||x||_Lip)`` over a p grid.

    ``growth_exponent`` is the log-log slope of the ratios against ``p``;
    bounded ratios give a slope near zero or negative.
    """

    p_grid: list
    ratios: list
    sup_ratio: float
    growth_exponent: float
    lipschitz: float

    @property
    def spread(self):
        nz = [r for r in self.ratios if r > 0]
        return max(nz) / min(nz) if nz else 1.0


def mlsi_concentration_ratios(L, alpha_lower, x, p_grid=(2, 4, 8, 16, 32, 64)):
    """Evaluate the concentration ratios of ``x`` for the semigroup ``L``.

    Parameters
    ----------
    alpha_lower : float
        Positive MLSI lower bound, e.g. ``BoundReport.best_lower``.
    x : (d, d) array_like
        Observable; projected onto the algebra of ``L`` first.
    """
    if alpha_lower <= 0:
        raise PreconditionFailed("alpha_lower must be positive")
    x = np.asarray(x, dtype=complex)
    if L.domain is not None:
        x = np.diag(np.diag(x))
    dev = x - L.fixed_point.apply(x)
    lip = lipschitz_seminorm(L, x)
    p_grid = [float(p) for p in p_grid]
    if lip <= 1e-12:
        if np.abs(dev).max() > 1e-10:
            raise PreconditionFailed("zero Lipschitz seminorm for a non-invariant x")
        return ConcentrationReport(p_grid, [0.0] * len(p_grid), 0.0, 0.0, 0.0)
    ratios = [float(alpha_lower) * weighted_p_norm(dev, L.reference, p) / (np.sqrt(p) * lip)
              for p in p_grid]
    if min(ratios) > 0 and len(p_grid) > 1:
        slope = float(linregress(np.log(p_grid), np.log(ratios)).slope)
    else:
        slope = 0.0
    return ConcentrationReport(p_grid, [float(r) for r in ratios], float(max(ratios)), slope, lip)


@dataclass
class BernsteinRecord:
    """Monte Carlo summary for ``Z = S_1 + ... + S_n``.

    Attributes
    ----------
    mean_norm : float
        Estimate of ``E||Z - EZ||``.
    v : float
        Estimate of ``||E (Z - EZ)^2||``.
    ratio : float
        ``mean_norm / sqrt((v + M^2) ln d)``.
    stderr : float
        Standard error of ``mean_norm``.
    """

    d: int
    n: int
    trials: int
    bound: float
    mean_norm: float
    v: float
    ratio: float
    stderr: float
    norms: np.ndarray = None


def _summands(rng, ensemble, d, count, M):
    if ensemble == "diagonal":
        return rng.uniform(-M, M, size=(count, d))
    if ensemble == "dense":
        A = rng.uniform(-1, 1, size=(count, d, d)) + 1j * rng.uniform(-1, 1, size=(count, d, d))
        H = 0.5 * (A + np.conj(np.swapaxes(A, 1, 2)))
        norms = np.abs(np.linalg.eigvalsh(H)).max(axis=1)
        return H * (M / np.maximum(norms, M))[:, None, None]
    if ensemble == "constant":
        return np.full((count, d), M)
    raise ValueError(f"unknown ensemble {ensemble!r}")


def matrix_bernstein_mc(d, n, bound=1.0, trials=200, seed=0, ensemble="diagonal"):
    """Monte Carlo check of the matrix Bernstein scale ``sqrt((v + M^2) ln d)``.

    Parameters
    ----------
    d : int
        Matrix dimension, at least 2.
    n : int
        Number of independent summands.
    bound : float
        Almost-sure norm bound ``M`` of each summand.
    ensemble : {"diagonal", "dense", "constant"}
        ``"diagonal"``: diagonal Hermitian summands with i.i.d. uniform
        entries in ``[-M, M]``. ``"dense"``: Hermitian matrices with
        uniform entries rescaled to norm at most ``M``. ``"constant"``:
        the deterministic summand ``M I``.

    Notes
    -----
    ``EZ`` and ``v`` are the empirical mean and second moment over the
    trials, so deterministic sums give exactly zero.
    """
    if d < 2 or n < 1 or trials < 2:
        raise PreconditionFailed("need d >= 2, n >= 1 and trials >= 2")
    rng = np.random.default_rng(seed)
    if ensemble == "dense":
        Z = np.stack([_summands(rng, ensemble, d, n, bound).sum(axis=0) for _ in range(trials)])
        C = Z - Z.mean(axis=0)
        norms = np.abs(np.linalg.eigvalsh(C)).max(axis=1)
        v = float(np.linalg.norm(np.einsum("tij,tjk->ik", C, C) / trials, 2))
    else:
        Z = np.stack([_summands(rng, ensemble, d, n, bound).sum(axis=0) for _ in range(trials)])
        C = Z - Z.mean(axis=0)
        norms = np.abs(C).max(axis=1)
        v = float((C ** 2).mean(axis=0).max())
    mean = float(norms.mean())
    ratio = mean / np.sqrt((v + bound ** 2) * np.log(d))
    stderr = float(norms.std(ddof=1) / np.sqrt(trials))
    return BernsteinRecord(d, n, trials, bound, mean, v, float(ratio), stderr, norms)


def bernstein_sweep(dims=(2, 4, 8, 16, 32, 64), n=50, bound=1.0, trials=200, seed=0,
                    ensemble="diagonal"):
    """Run :func:`matrix_bernstein_mc` over ``dims`` and fit the log-log slope.

    Returns
    -------
    records : list of BernsteinRecord
    slope : float
        Slope of ``ln ratio`` against ``ln d``.
    """
    records = [matrix_bernstein_mc(d, n, bound, trials, seed + k, ensemble)
               for k, d in enumerate(dims)]
    slope = float(linregress(np.log(dims), np.log([r.ratio for r in records])).slope)
    return records, slope


def tail_profile(norms, thresholds):
    """Empirical ``P(||Z - EZ|| > t)`` for each threshold."""
    norms = np.asarray(norms)
    return np.array([(norms > t).mean() for t in thresholds])


def gaussian_tail_fit(norms, v, bound):
    """Smallest ``c`` with ``P(||Z - EZ|| > t) <= exp(-t^2/(64 e c^2 (v + M^2)))`` empirically.

    Only reports the fitted constant; the inequality's constant is not
    known, so nothing is asserted.
    """
    norms = np.sort(np.asarray(norms))
    tails = 1.0 - np.arange(1, norms.size + 1) / norms.size
    keep = tails > 0
    t, q = norms[keep], tails[keep]
    denom = 64.0 * np.e * (v + bound ** 2)
    c2 = np.max(t ** 2 / (denom * -np.log(q)))
    return float(np.sqrt(c2))


def depolarizing_lipschitz_gap(x, reference=None):
    """Slack of ``||x||_Lip^2 <= (||x||^2 + ||E(x^* x)||)/2`` for ``L = id - E_phi``.

    Returns the right side minus the left side (nonnegative when the
    bound holds). ``x`` is centered first.
    """
    x = np.asarray(x, dtype=complex)
    d = x.shape[0]
    L = depolarizing(d, reference)
    E = L.fixed_point
    y = x - E.apply(x)
    lip2 = lipschitz_seminorm(L, y) ** 2
    a = np.linalg.norm(y, 2) ** 2
    b = max(np.linalg.norm(E.apply(y.conj().T @ y), 2), np.linalg.norm(E.apply(y @ y.conj().T), 2))
    return float(0.5 * (a + b) - lip2)
