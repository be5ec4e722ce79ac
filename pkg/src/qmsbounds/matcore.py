"""Dense Hermitian linear algebra, vectorization, superoperators and Choi matrices.

Conventions
-----------
Operators are ``d x d`` complex numpy arrays. Vectorization is column
stacking: the entry ``x[i, j]`` sits at index ``j*d + i`` of ``vec(x)``.
A superoperator is the ``d**2 x d**2`` matrix ``S`` with
``vec(T(x)) = S @ vec(x)``. Superoperators are Heisenberg-picture maps
(they act on observables); states are moved with the Hilbert-Schmidt
adjoint ``S.conj().T``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NonConvergence, SingularReference, SpecParseError


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds used across the library.

    Attributes
    ----------
    psd_tol : float
        Eigenvalues above ``-psd_tol`` count as nonnegative.
    support_cutoff : float
        Eigenvalues below this are outside the support.
    hermitian_tol : float
        Relative asymmetry tolerated in Hermitian inputs.
    trace_tol : float
        Allowed deviation of a state's trace from one.
    fixed_point_cluster : float
        Eigenvalues above ``1 - fixed_point_cluster`` belong to the
        multiplicative domain of a channel.
    kernel_cluster : float
        Generator eigenvalues below this belong to its kernel.
    regularization : float
        Weight of the reference state mixed into rank-deficient states.
    bisect_rel : float
        Relative bracket width at which bisections stop.
    """

    psd_tol: float = 1e-10
    support_cutoff: float = 1e-14
    hermitian_tol: float = 1e-12
    trace_tol: float = 1e-10
    fixed_point_cluster: float = 1e-8
    kernel_cluster: float = 1e-9
    regularization: float = 1e-9
    bisect_rel: float = 1e-9


DEFAULT_TOL = Tolerances()


def hermitian_asymmetry(A):
    """Return ``max|A - A^*|`` relative to ``max|A|`` (0 for the zero matrix)."""
    A = np.asarray(A)
    scale = np.abs(A).max() if A.size else 0.0
    if scale == 0.0:
        return 0.0
    return float(np.abs(A - A.conj().T).max() / scale)


def hermitian_part(A):
    """Return ``(A + A^*) / 2``."""
    A = np.asarray(A, dtype=complex)
    return 0.5 * (A + A.conj().T)


def eig_hermitian(A):
    """Eigendecomposition of a Hermitian matrix.

    The input is symmetrized first, so small asymmetries from floating
    point round-off are harmless.

    Parameters
    ----------
    A : (n, n) array_like

    Returns
    -------
    w : (n,) ndarray
        Eigenvalues in ascending order.
    U : (n, n) ndarray
        Orthonormal eigenvectors as columns, ``A = U diag(w) U^*``.
    """
    H = hermitian_part(A)
    try:
        w, U = np.linalg.eigh(H)
    except np.linalg.LinAlgError as exc:
        raise NonConvergence(str(exc)) from exc
    return w, U


def eigvals_hermitian(A):
    """Ascending eigenvalues of the Hermitian part of ``A``."""
    try:
        return np.linalg.eigvalsh(hermitian_part(A))
    except np.linalg.LinAlgError as exc:
        raise NonConvergence(str(exc)) from exc


def clamp_spectrum(w, tol=DEFAULT_TOL):
    """Lift eigenvalues in ``(-psd_tol, support_cutoff)`` to the cutoff.

    Raises
    ------
    DomainError
        If an eigenvalue is below ``-psd_tol``.
    """
    w = np.asarray(w, dtype=float)
    if w.size and w.min() < -tol.psd_tol:
        raise DomainError(f"eigenvalue {w.min():.3e} is below -{tol.psd_tol:g}")
    return np.maximum(w, tol.support_cutoff)


def mat_func(A, f, clamp=False, tol=DEFAULT_TOL):
    """Apply a real scalar function to a Hermitian matrix.

    Parameters
    ----------
    A : (n, n) array_like
        Hermitian input (symmetrized internally).
    f : callable
        Vectorized real function of the eigenvalues.
    clamp : bool
        Clamp the spectrum with :func:`clamp_spectrum` before applying
        ``f``. Use it for logarithms and negative powers of states.

    Returns
    -------
    ndarray
        ``U diag(f(w)) U^*``.
    """
    w, U = eig_hermitian(A)
    if clamp:
        w = clamp_spectrum(w, tol)
    with np.errstate(all="ignore"):
        fw = np.asarray(f(w), dtype=float)
    if not np.all(np.isfinite(fw)):
        raise DomainError("function is undefined on part of the spectrum")
    return (U * fw) @ U.conj().T


def mat_log(A, tol=DEFAULT_TOL):
    """Matrix logarithm of a positive semidefinite matrix (spectrum clamped)."""
    return mat_func(A, np.log, clamp=True, tol=tol)


def mat_power(A, p, tol=DEFAULT_TOL):
    """Real power of a positive semidefinite matrix.

    Negative powers clamp the spectrum first; nonnegative powers clip
    round-off negatives to zero.
    """
    if p < 0:
        return mat_func(A, lambda w: w ** p, clamp=True, tol=tol)
    return mat_func(A, lambda w: np.maximum(w, 0.0) ** p)


def is_psd(A, tol=DEFAULT_TOL.psd_tol):
    """True iff the smallest eigenvalue of the Hermitian part is ``>= -tol``.

    A Gershgorin certificate and a negative-diagonal test are tried first;
    they decide most structured (diagonal or block) inputs without an
    eigendecomposition and agree exactly with the eigenvalue test.
    """
    H = hermitian_part(A)
    diag = H.diagonal().real
    if diag.min() < -tol:
        return False
    radius = np.abs(H).sum(axis=1) - np.abs(H.diagonal())
    if np.all(diag - radius >= -tol):
        return True
    return bool(eigvals_hermitian(H)[0] >= -tol)


def vec(X):
    """Column-stacking vectorization."""
    return np.asarray(X).reshape(-1, order="F")


def unvec(v, d=None):
    """Inverse of :func:`vec`."""
    v = np.asarray(v)
    if d is None:
        d = int(round(np.sqrt(v.size)))
    return v.reshape((d, d), order="F")


def matrix_unit(i, j, d):
    """The matrix unit ``e_ij`` of ``M_d``."""
    E = np.zeros((d, d), dtype=complex)
    E[i, j] = 1.0
    return E


def superop_from_action(apply, d):
    """Superoperator matrix of a linear map given by its action.

    Column ``j*d + i`` is ``vec(apply(e_ij))``.
    """
    S = np.zeros((d * d, d * d), dtype=complex)
    for j in range(d):
        for i in range(d):
            S[:, j * d + i] = vec(apply(matrix_unit(i, j, d)))
    return S


def sandwich_superop(A, B):
    """Superoperator of ``X -> A X B``, i.e. ``kron(B^T, A)``."""
    return np.kron(np.asarray(B).T, np.asarray(A))


def apply_superop(S, X):
    """Apply a superoperator to an operator."""
    X = np.asarray(X)
    return unvec(S @ vec(X), X.shape[0])


def apply_preadjoint(S, rho):
    """Apply the Hilbert-Schmidt adjoint of ``S`` (Schrödinger picture)."""
    rho = np.asarray(rho)
    return unvec(S.conj().T @ vec(rho), rho.shape[0])


def identity_superop(d):
    """Identity map on ``M_d``."""
    return np.eye(d * d, dtype=complex)


def superop_dim(S):
    """Operator dimension ``d`` of a ``d**2 x d**2`` superoperator."""
    d = int(round(np.sqrt(S.shape[0])))
    if d * d != S.shape[0] or S.shape[0] != S.shape[1]:
        raise ValueError(f"not a superoperator shape: {S.shape}")
    return d


def _shuffle(M, d):
    # C[i*d+a, j*d+b] = S[b*d+a, j*d+i]; the same axis swap inverts itself
    return M.reshape(d, d, d, d).transpose(3, 1, 2, 0).reshape(d * d, d * d)


def choi(S):
    """Choi matrix ``C = sum_ij e_ij (x) T(e_ij)`` of a superoperator."""
    S = np.asarray(S)
    return _shuffle(S, superop_dim(S))


def choi_inverse(C):
    """Superoperator whose Choi matrix is ``C``."""
    C = np.asarray(C)
    return _shuffle(C, superop_dim(C))


def adjoint_trace(S):
    """Adjoint of a superoperator under ``<A, B> = tr(A^* B)``."""
    return np.asarray(S).conj().T


def kms_weight(reference, power=1.0, tol=DEFAULT_TOL):
    """Superoperator of ``X -> d^{p/4} X d^{p/4}`` for a faithful density ``d``.

    ``power=1`` gives the KMS weight ``W``; ``power=-1`` gives ``W^{-1}``.

    Raises
    ------
    SingularReference
        If ``reference`` has an eigenvalue at or below the support cutoff.
    """
    w, U = eig_hermitian(reference)
    if w.min() <= tol.support_cutoff:
        raise SingularReference(f"reference has eigenvalue {w.min():.3e}")
    R = (U * w ** (power / 4.0)) @ U.conj().T
    return sandwich_superop(R, R)


def kms_symmetrize(S, reference, tol=DEFAULT_TOL):
    """Return ``W S W^{-1}`` with ``W(X) = d^{1/4} X d^{1/4}``.

    A map that is GNS-symmetric with respect to ``reference`` becomes a
    Hermitian matrix, so its spectral data can be computed with
    :func:`eig_hermitian`.
    """
    W = kms_weight(reference, 1.0, tol)
    Winv = kms_weight(reference, -1.0, tol)
    return W @ S @ Winv


def kms_inner(x, y, reference):
    """KMS inner product ``tr(d^{1/2} x^* d^{1/2} y)``."""
    r = mat_power(reference, 0.5)
    return complex(np.trace(r @ np.asarray(x).conj().T @ r @ np.asarray(y)))


def random_hermitian(d, rng, scale=1.0):
    """Gaussian Hermitian matrix (GUE shape)."""
    G = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return scale * 0.5 * (G + G.conj().T)


def random_density(d, rng, rank=None, floor=0.0):
    """Random density matrix from the induced (Ginibre) measure.

    Parameters
    ----------
    rank : int, optional
        Rank before flooring; full rank by default.
    floor : float
        Weight of ``I/d`` mixed in, which bounds the smallest eigenvalue
        below by ``floor/d``.
    """
    k = d if rank is None else rank
    G = rng.standard_normal((d, k)) + 1j * rng.standard_normal((d, k))
    rho = G @ G.conj().T
    rho = rho / np.trace(rho).real
    if floor:
        rho = (1.0 - floor) * rho + floor * np.eye(d) / d
    return hermitian_part(rho)


def matrix_to_json(A):
    """Serialize a square matrix as ``{"dim", "re", "im"}`` (row-major)."""
    A = np.asarray(A, dtype=complex)
    return {
        "dim": int(A.shape[0]),
        "re": [float(v) for v in A.real.reshape(-1)],
        "im": [float(v) for v in A.imag.reshape(-1)],
    }


def matrix_from_json(obj):
    """Inverse of :func:`matrix_to_json`; ``im`` may be omitted."""
    try:
        d = int(obj["dim"])
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj.get("im", [0.0] * re.size), dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecParseError(f"bad matrix object: {exc}") from exc
    n = re.size
    if im.size != n:
        raise SpecParseError("re and im have different lengths")
    side = int(round(np.sqrt(n)))
    if side * side != n or side != d:
        raise SpecParseError(f"{n} entries do not form a {d}x{d} matrix")
    A = (re + 1j * im).reshape(d, d)
    if not np.all(np.isfinite(A)):
        raise SpecParseError("matrix has non-finite entries")
    return A
