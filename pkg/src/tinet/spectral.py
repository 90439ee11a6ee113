"""Frequency-domain symbols of the closed-loop ring.

All evaluators accept a scalar ``z`` or an array of points and return a
stack of matrices with the frequency axis first.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .network import NetworkSpec, WeightSequence

__all__ = [
    "FrequencyGrid", "ClosedLoopSymbol", "unit_grid", "roots_of_unity",
    "uniform_grid", "symbol_A", "symbol_B", "symbol_noise", "symbol",
    "sigma_of_z", "cesaro_sigma", "write_grid_csv",
]

UNIT_TOL = 1e-14
ON_CIRCLE_TOL = 1e-12


def unit_grid(P):
    """The ``P`` points ``exp(2 pi i j / P)``, ``j = 0..P-1``."""
    j = np.arange(P)
    z = np.exp(2j * np.pi * j / P)
    # exact values at the real/imaginary axes keep conjugate pairs exact
    z[j == 0] = 1.0
    if P % 2 == 0:
        z[j == P // 2] = -1.0
    if P % 4 == 0:
        z[j == P // 4] = 1j
        z[j == 3 * P // 4] = -1j
    # mirror the upper half so conjugate pairs are exact
    h = np.arange(1, (P + 1) // 2)
    z[P - h] = np.conj(z[h])
    return z


@dataclass(frozen=True)
class FrequencyGrid:
    points: np.ndarray
    kind: str
    size: int

    def __len__(self):
        return self.size

    @property
    def phi(self):
        return 2 * np.pi * np.arange(self.size) / self.size

    def conjugate_index(self):
        """Index map ``j -> k`` with ``points[k] == conj(points[j])``."""
        return (-np.arange(self.size)) % self.size


def roots_of_unity(N) -> FrequencyGrid:
    """The set of ``N``-th roots of unity used by the finite ring."""
    if N < 1:
        raise ValueError("N must be >= 1")
    return FrequencyGrid(unit_grid(N), "rootsOfUnity", int(N))


def uniform_grid(P) -> FrequencyGrid:
    """Uniform quadrature grid on the unit circle (includes conjugate pairs)."""
    if P < 1:
        raise ValueError("P must be >= 1")
    return FrequencyGrid(unit_grid(P), "uniform", int(P))


def _as_points(z):
    z = np.asarray(z, dtype=complex)
    dev = np.max(np.abs(np.abs(z) - 1.0), initial=0.0)
    if dev > ON_CIRCLE_TOL:
        raise ValueError("frequency points must lie on the unit circle "
                         "(max deviation %.3e)" % dev)
    return z


def _laurent(blocks, z, sign=-1):
    """``sum_l z^{sign*l} blocks[l]`` over a stack of points ``z``."""
    z = np.atleast_1d(z)
    first = next(iter(blocks.values()))
    out = np.zeros((z.size,) + first.shape, dtype=complex)
    for ell, M in blocks.items():
        out += (z ** (sign * ell))[:, None, None] * M
    return out


def symbol_A(spec: NetworkSpec, z):
    """Closed-loop drift symbol at ``z``.

    ``[[sum z^-l A1_l, sum z^-l At1_l], [sum z^l At2_l, sum z^-l A2_l]]``;
    note the flipped exponent in the lower-left block.
    """
    z = _as_points(z)
    scalar = z.ndim == 0
    zz = np.atleast_1d(z)
    p, c = spec.dims.plant_size, spec.dims.controller_size
    At1, At2 = spec.cross_drift
    out = np.empty((zz.size, p + c, p + c), dtype=complex)
    out[:, :p, :p] = _laurent(spec.plant_drift, zz)
    out[:, :p, p:] = _laurent(At1, zz)
    out[:, p:, :p] = _laurent(At2, zz, sign=+1)
    out[:, p:, p:] = _laurent(spec.controller_drift, zz)
    return out[0] if scalar else out


def symbol_B(spec: NetworkSpec):
    """Block-diagonal noise input matrix ``blkdiag(B1, B2)`` (real)."""
    B1, B2 = spec.B1, spec.B2
    B = np.zeros((B1.shape[0] + B2.shape[0], B1.shape[1] + B2.shape[1]))
    B[:B1.shape[0], :B1.shape[1]] = B1
    B[B1.shape[0]:, B1.shape[1]:] = B2
    return B


def symbol_omega(spec: NetworkSpec):
    O1, O2 = spec.noise1.Omega, spec.noise2.Omega
    Om = np.zeros((O1.shape[0] + O2.shape[0],) * 2, dtype=complex)
    Om[:O1.shape[0], :O1.shape[0]] = O1
    Om[O1.shape[0]:, O1.shape[0]:] = O2
    return Om


def symbol_noise(spec: NetworkSpec):
    """Constant forcing term ``V = B Omega B^T`` (Hermitian, PSD)."""
    B = symbol_B(spec)
    V = B @ symbol_omega(spec) @ B.T
    return 0.5 * (V + V.conj().T)


@dataclass(frozen=True)
class ClosedLoopSymbol:
    z: complex
    Az: np.ndarray
    Bcal: np.ndarray
    Omega: np.ndarray


def symbol(spec: NetworkSpec, z) -> ClosedLoopSymbol:
    return ClosedLoopSymbol(complex(z), symbol_A(spec, complex(z)),
                            symbol_B(spec), symbol_omega(spec))


def sigma_of_z(weights: WeightSequence, z):
    """Spectral density ``Sigma_z = sigma_0 + sum_k (z^-k s_k + z^k s_k^T)``."""
    z = np.asarray(z, dtype=complex)
    scalar = z.ndim == 0
    zz = np.atleast_1d(z)
    s0 = weights.sigma[0]
    out = np.broadcast_to(s0, (zz.size,) + s0.shape).astype(complex)
    for k in range(1, weights.K + 1):
        s = weights.sigma[k]
        out += (zz ** -k)[:, None, None] * s + (zz ** k)[:, None, None] * s.T
    return out[0] if scalar else out


def cesaro_sigma(weights: WeightSequence, N, z):
    """Fejer-weighted partial sum ``sum_{|k|<N} (1 - |k|/N) z^-k sigma_k``."""
    if N < 1:
        raise ValueError("N must be >= 1")
    z = np.asarray(z, dtype=complex)
    scalar = z.ndim == 0
    zz = np.atleast_1d(z)
    s0 = weights.sigma[0]
    out = np.broadcast_to(s0, (zz.size,) + s0.shape).astype(complex)
    for k in range(1, min(weights.K, N - 1) + 1):
        w = 1.0 - k / N
        s = weights.sigma[k]
        out += w * ((zz ** -k)[:, None, None] * s
                    + (zz ** k)[:, None, None] * s.T)
    return out[0] if scalar else out


def write_grid_csv(path, z, mats):
    """Dump a stack of matrices on a grid.

    Columns are ``re_z, im_z`` followed by the row-major entries, complex
    entries split into ``re_`` and ``im_`` columns.
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    mats = np.asarray(mats)
    if mats.ndim == 1:
        mats = mats[:, None, None]
    elif mats.ndim == 2:
        mats = mats[:, :, None]
    n, m = mats.shape[1:]
    cplx = np.iscomplexobj(mats)
    header = ["re_z", "im_z"]
    for i in range(n):
        for j in range(m):
            if cplx:
                header += ["re_%d_%d" % (i, j), "im_%d_%d" % (i, j)]
            else:
                header.append("m_%d_%d" % (i, j))
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for zk, M in zip(z, mats):
            row = [format(zk.real, ".17g"), format(zk.imag, ".17g")]
            for x in M.ravel():
                if cplx:
                    row += [format(x.real, ".17g"), format(x.imag, ".17g")]
                else:
                    row.append(format(float(x), ".17g"))
            w.writerow(row)
