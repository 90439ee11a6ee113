"""Explicit finite ring, used as ground truth for the frequency-domain path.

State ordering is node-major: node ``j`` occupies rows
``j*s : (j+1)*s`` with ``s = 2(n1 + n2)`` and holds ``[X_{1,j}; X_{2,j}]``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lyapunov import solve_ale
from .network import NetworkSpec
from .spectral import symbol_B, symbol_omega, unit_grid

__all__ = ["FiniteNetwork", "build_finite", "finite_covariance",
           "finite_cost_direct", "dft_matrix", "dft_blocks", "shift_matrix",
           "MAX_ORACLE_DIM"]

MAX_ORACLE_DIM = 256


@dataclass(frozen=True)
class FiniteNetwork:
    N: int
    node_size: int
    plant_size: int
    Afull: np.ndarray
    Bfull: np.ndarray
    OmegaFull: np.ndarray
    weightToeplitz: np.ndarray
    Efull: np.ndarray

    @property
    def dim(self):
        return self.Afull.shape[0]


def build_finite(spec: NetworkSpec, N) -> FiniteNetwork:
    """Assemble the block-circulant closed loop of a ring of ``N`` nodes.

    Plant rows couple to ``X_{., j-l}`` (indices mod N) for both the plant
    drift and the plant-side coupling; controller rows see the plant at
    ``X_{1, j+l}``.
    """
    d = spec.dims
    if N <= 2 * d.max_range:
        raise ValueError("N=%d must exceed 2*max(d1, d2, dTilde) = %d"
                         % (N, 2 * d.max_range))
    p, c = d.plant_size, d.controller_size
    s = p + c
    if s * N > MAX_ORACLE_DIM:
        raise ValueError("oracle dimension %d exceeds cap %d"
                         % (s * N, MAX_ORACLE_DIM))
    At1, At2 = spec.cross_drift
    A = np.zeros((s * N, s * N))

    def put(j, k, r0, c0, M):
        r, c_ = j * s + r0, k * s + c0
        A[r:r + M.shape[0], c_:c_ + M.shape[1]] += M

    P_, C_ = 0, p
    for j in range(N):
        for ell, M in spec.plant_drift.items():
            put(j, (j - ell) % N, P_, P_, M)
        for ell, M in At1.items():
            put(j, (j - ell) % N, P_, C_, M)
        for ell, M in At2.items():
            put(j, (j + ell) % N, C_, P_, M)
        for ell, M in spec.controller_drift.items():
            put(j, (j - ell) % N, C_, C_, M)

    eye = np.eye(N)
    Bfull = np.kron(eye, symbol_B(spec))
    Omega = np.kron(eye, symbol_omega(spec))
    q = spec.weights.size
    W = np.zeros((q * N, q * N))
    for j in range(N):
        for k in range(N):
            W[j * q:(j + 1) * q, k * q:(k + 1) * q] = spec.weights.lag(j - k)
    Efull = np.kron(eye, spec.E)
    return FiniteNetwork(N, s, p, A, Bfull, Omega, W, Efull)


def shift_matrix(net: FiniteNetwork):
    """Block cyclic shift ``(Pi x)_j = x_{j-1}``."""
    return np.kron(np.roll(np.eye(net.N), 1, axis=0), np.eye(net.node_size))


def dft_matrix(N, s):
    """Block DFT ``F`` with block row ``z`` equal to ``[z^{-j} I_s]_j``.

    Rows are ordered like ``unit_grid(N)``.
    """
    z = unit_grid(N)
    j = np.arange(N)
    return np.kron(z[:, None] ** (-j[None, :]), np.eye(s))


def finite_covariance(net: FiniteNetwork):
    """Steady second moments ``S`` with ``A S + S A^T + B Omega B^T = 0``.

    ``S`` is complex Hermitian; its real part is the symmetric covariance
    and its imaginary part the commutator contribution.
    """
    V = net.Bfull @ net.OmegaFull @ net.Bfull.T
    V = 0.5 * (V + V.conj().T)
    return solve_ale(net.Afull, V)


def dft_blocks(net: FiniteNetwork, S):
    """Cross moments ``S_{z,v} = F_z S F_v^*`` as an ``(N, N, s, s)`` array."""
    F = dft_matrix(net.N, net.node_size)
    G = F @ S @ F.conj().T
    s = net.node_size
    return G.reshape(net.N, s, net.N, s).transpose(0, 2, 1, 3)


def finite_cost_direct(net: FiniteNetwork, S=None):
    """``(1/N) Re tr(W (I kron E) S (I kron E)^T)`` for the Toeplitz weight ``W``."""
    if S is None:
        S = finite_covariance(net)
    Ef = net.Efull
    val = np.trace(net.weightToeplitz @ Ef @ S @ Ef.T) / net.N
    return float(val.real)
