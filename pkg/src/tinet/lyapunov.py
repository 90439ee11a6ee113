"""Complex continuous-time algebraic Lyapunov equations.

Controllability side::

    A X + X A^* + V = 0

Observability side::

    A^* X + X A + V = 0

The production path is a complex Bartels-Stewart solve: ``A = U T U^*``
with ``T`` upper triangular, then a column sweep on the transformed
equation.  :func:`solve_ale_kron` is the dense ``O(n^6)`` reference used in
tests.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.linalg.lapack import ztrtrs as _trtrs

from .errors import IllConditioned, NotHurwitz

__all__ = ["solve_ale", "solve_ale_batch", "solve_ale_kron", "ale_residual",
           "AleSolution", "TOL_HURWITZ", "TOL_ALE"]

TOL_HURWITZ = 1e-9
TOL_ALE = 1e-10
TOL_HERMITIAN = 1e-8
SIDES = ("controllability", "observability")


@dataclass(frozen=True)
class AleSolution:
    X: np.ndarray
    residual: float
    scale: float
    hermitian_defect: float
    max_real_eig: float


def _check(A, V, side):
    if side not in SIDES:
        raise ValueError("side must be one of %s" % (SIDES,))
    A = np.asarray(A, dtype=complex)
    V = np.asarray(V, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or V.shape != A.shape:
        raise ValueError("A and V must be square of equal order, got %s "
                         "and %s" % (A.shape, V.shape))
    return A, V


def ale_residual(A, X, V, side="controllability"):
    """Frobenius norm of the equation residual."""
    A, V = _check(A, V, side)
    if side == "controllability":
        R = A @ X + X @ A.conj().T + V
    else:
        R = A.conj().T @ X + X @ A + V
    return float(np.linalg.norm(R))


def _triangular_sweep(T, W):
    """Solve ``T Y + Y T^* = W`` for upper-triangular ``T``.

    Column ``j`` of ``Y T^*`` only involves columns ``k >= j`` of ``Y``, so
    the sweep runs from the last column to the first.
    """
    n = T.shape[0]
    Y = np.zeros_like(W)
    Tc = T.conj()
    diag = np.arange(n)
    for j in range(n - 1, -1, -1):
        rhs = W[:, j] - Y[:, j + 1:] @ Tc[j, j + 1:]
        M = T.copy()
        M[diag, diag] += Tc[j, j]
        y, info = _trtrs(M, rhs)
        if info != 0:
            raise np.linalg.LinAlgError("singular shifted Schur factor")
        Y[:, j] = y
    return Y


def _triangular_sweep_batch(T, W):
    """Stacked version of :func:`_triangular_sweep` over the leading axis."""
    n = T.shape[-1]
    Y = np.zeros_like(W)
    Tc = T.conj()
    diag = np.arange(n)
    for j in range(n - 1, -1, -1):
        rhs = W[:, :, j] - np.einsum("pik,pk->pi", Y[:, :, j + 1:],
                                     Tc[:, j, j + 1:])
        M = T.copy()
        M[:, diag, diag] += Tc[:, j, j][:, None]
        Y[:, :, j] = np.linalg.solve(M, rhs[..., None])[..., 0]
    return Y


def solve_ale(A, V, side="controllability", full_output=False):
    """Solve a Hermitian Lyapunov equation for Hurwitz ``A``.

    Parameters
    ----------
    A : (n, n) array_like
        Strictly Hurwitz matrix.
    V : (n, n) array_like
        Hermitian forcing term.
    side : {'controllability', 'observability'}
    full_output : bool
        Also return an :class:`AleSolution` with diagnostics.

    Returns
    -------
    X : (n, n) ndarray
        Hermitian solution; positive semidefinite whenever ``V`` is.

    Raises
    ------
    NotHurwitz
        If the largest real part of the spectrum of ``A`` is not below
        ``-TOL_HURWITZ``.
    IllConditioned
        If the solve misses the scaled residual target.
    """
    A, V = _check(A, V, side)
    # A* X + X A + V = 0 is the controllability form for A^*
    Ac = A if side == "controllability" else A.conj().T
    T, U = scipy.linalg.schur(Ac, output="complex", check_finite=False)
    max_real = float(np.max(np.diag(T).real))
    if max_real >= -TOL_HURWITZ:
        raise NotHurwitz(max_real)
    W = -(U.conj().T @ V @ U)
    Y = _triangular_sweep(T, W)
    X = U @ Y @ U.conj().T
    defect = float(np.linalg.norm(X - X.conj().T))
    X = 0.5 * (X + X.conj().T)
    xnorm = np.linalg.norm(X)
    if defect > TOL_HERMITIAN * max(xnorm, np.finfo(float).tiny):
        raise IllConditioned(defect, TOL_HERMITIAN * xnorm)
    res = ale_residual(A, X, V, side)
    scale = np.linalg.norm(A) * xnorm + np.linalg.norm(V)
    if res > TOL_ALE * scale:
        raise IllConditioned(res, TOL_ALE * scale)
    if full_output:
        return X, AleSolution(X, res, float(scale), defect, max_real)
    return X


def solve_ale_batch(A, V, side="controllability"):
    """Solve a stack of Lyapunov equations ``A[k], V[k]``.

    Same algorithm and checks as :func:`solve_ale`; the triangular sweep is
    vectorized across the stack, which pays off for the small symbols
    evaluated on frequency grids.  ``V`` may be a single matrix shared by
    all equations.
    """
    A = np.asarray(A, dtype=complex)
    if A.ndim != 3 or A.shape[1] != A.shape[2]:
        raise ValueError("A must be a stack of square matrices")
    V = np.broadcast_to(np.asarray(V, dtype=complex), A.shape)
    if side not in SIDES:
        raise ValueError("side must be one of %s" % (SIDES,))
    Ac = A if side == "controllability" else np.conj(A).transpose(0, 2, 1)
    T = np.empty_like(Ac)
    U = np.empty_like(Ac)
    for k in range(len(Ac)):
        T[k], U[k] = scipy.linalg.schur(Ac[k], output="complex",
                                        check_finite=False)
    max_real = np.diagonal(T, axis1=1, axis2=2).real.max(axis=1)
    if max_real.max() >= -TOL_HURWITZ:
        raise NotHurwitz(max_real.max())
    Uh = np.conj(U).transpose(0, 2, 1)
    Y = _triangular_sweep_batch(T, -(Uh @ V @ U))
    X = U @ Y @ Uh
    Xh = np.conj(X).transpose(0, 2, 1)
    defect = np.linalg.norm(X - Xh, axis=(1, 2))
    X = 0.5 * (X + Xh)
    xnorm = np.linalg.norm(X, axis=(1, 2))
    bad = defect > TOL_HERMITIAN * np.maximum(xnorm, np.finfo(float).tiny)
    if bad.any():
        k = int(np.argmax(bad))
        raise IllConditioned(defect[k], TOL_HERMITIAN * xnorm[k])
    Ah = np.conj(A).transpose(0, 2, 1)
    if side == "controllability":
        R = A @ X + X @ Ah + V
    else:
        R = Ah @ X + X @ A + V
    res = np.linalg.norm(R, axis=(1, 2))
    scale = (np.linalg.norm(A, axis=(1, 2)) * xnorm
             + np.linalg.norm(V, axis=(1, 2)))
    bad = res > TOL_ALE * scale
    if bad.any():
        k = int(np.argmax(bad))
        raise IllConditioned(res[k], TOL_ALE * scale[k])
    return X


def solve_ale_kron(A, V, side="controllability"):
    """Reference solve via the Kronecker-sum linear system.

    With row-major ``vec``, ``vec(A X) = (A kron I) vec X`` and
    ``vec(X B) = (I kron B^T) vec X``.
    """
    A, V = _check(A, V, side)
    n = A.shape[0]
    eye = np.eye(n)
    if side == "controllability":
        K = np.kron(A, eye) + np.kron(eye, A.conj())
    else:
        K = np.kron(A.conj().T, eye) + np.kron(eye, A.T)
    lam = np.linalg.eigvals(A)
    if lam.real.max() >= -TOL_HURWITZ:
        raise NotHurwitz(lam.real.max())
    x = np.linalg.solve(K, -V.ravel())
    X = x.reshape(n, n)
    return 0.5 * (X + X.conj().T)
