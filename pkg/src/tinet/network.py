"""Plant and controller network parameters.

A network node carries ``2n`` quadrature variables obeying ``[X, X^T] = 2i Theta``
and is coupled to ``m`` boson field channels.  The Hamiltonian of a ring of
identical nodes is given by energy blocks ``R_l`` for offsets ``|l| <= d``
with ``R_{-l} = R_l^T``; only ``R_0, R_1, ..., R_d`` are stored.

Everything here is a thin, immutable container plus the algebra that turns
energy/coupling data into drift coefficients.
"""
from __future__ import annotations

import dataclasses
import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .errors import SingularCcrMatrix

__all__ = [
    "J2", "canonical_theta", "NodeDims", "NoiseModel", "EnergyBlocks",
    "WeightSequence", "ControllerPoint", "NetworkSpec", "Violation",
    "ValidationReport", "validate_spec", "b_from_coupling", "drift_blocks",
    "coupling_drift", "output_consistency", "jdj_selection",
    "cost_output_matrix", "TOL_SINGULAR", "TOL_PSD", "PSD_GRID",
]

J2 = np.array([[0.0, 1.0], [-1.0, 0.0]])

TOL_SINGULAR = 1e-10   # relative to ||Theta||_2
TOL_PSD = 1e-9         # relative to ||sigma_0||_2
PSD_GRID = 512


def _frozen(a, dtype=float):
    a = np.array(a, dtype=dtype, copy=True)
    a.setflags(write=False)
    return a


def canonical_theta(n):
    """Return ``I_n kron J2``, the default CCR matrix of ``n`` modes."""
    return np.kron(np.eye(n), J2)


@dataclass(frozen=True)
class NodeDims:
    n1: int
    n2: int
    m1: int
    m2: int
    d1: int = 0
    d2: int = 0
    d_tilde: int = 0

    def __post_init__(self):
        for name in ("n1", "n2", "m1", "m2"):
            if int(getattr(self, name)) < 1:
                raise ValueError("%s must be >= 1" % name)
        for name in ("d1", "d2", "d_tilde"):
            if int(getattr(self, name)) < 0:
                raise ValueError("%s must be >= 0" % name)

    @property
    def plant_size(self):
        return 2 * self.n1

    @property
    def controller_size(self):
        return 2 * self.n2

    @property
    def state_size(self):
        return 2 * (self.n1 + self.n2)

    @property
    def max_range(self):
        return max(self.d1, self.d2, self.d_tilde)


@dataclass(frozen=True)
class NoiseModel:
    """Quantum Ito matrix ``Omega = I + iJ`` of ``m`` field channels."""

    m: int

    @cached_property
    def J(self):
        return _frozen(np.kron(np.eye(self.m), J2))

    @cached_property
    def Omega(self):
        return _frozen(np.eye(2 * self.m) + 1j * self.J, complex)


@dataclass(frozen=True)
class EnergyBlocks:
    """Energy matrices ``R_0`` (symmetric) and ``R_1..R_d`` of a ring.

    ``R0`` is symmetrized on construction, so ``R0 == R0.T`` holds exactly.
    """

    R0: np.ndarray
    Rpos: Tuple[np.ndarray, ...] = ()

    def __post_init__(self):
        R0 = np.asarray(self.R0, dtype=float)
        if R0.ndim != 2 or R0.shape[0] != R0.shape[1]:
            raise ValueError("R0 must be square, got shape %s" % (R0.shape,))
        object.__setattr__(self, "R0", _frozen(0.5 * (R0 + R0.T)))
        blocks = tuple(_frozen(R) for R in self.Rpos)
        for ell, R in enumerate(blocks, 1):
            if R.shape != R0.shape:
                raise ValueError("R%d has shape %s, expected %s"
                                 % (ell, R.shape, R0.shape))
        object.__setattr__(self, "Rpos", blocks)

    @property
    def d(self):
        return len(self.Rpos)

    @property
    def size(self):
        return self.R0.shape[0]

    def block(self, ell):
        """``R_ell`` for any offset, zero outside ``|ell| <= d``."""
        if ell == 0:
            return self.R0
        if abs(ell) > self.d:
            return np.zeros_like(self.R0)
        R = self.Rpos[abs(ell) - 1]
        return R if ell > 0 else R.T

    def blocks(self):
        """Dictionary ``{ell: R_ell}`` over ``-d..d``."""
        return {ell: self.block(ell) for ell in range(-self.d, self.d + 1)}

    def symbol(self, z):
        """``R(z) = sum_l z^{-l} R_l``; Hermitian on the unit circle."""
        z = complex(z)
        return sum(z ** (-ell) * R for ell, R in self.blocks().items())


@dataclass(frozen=True)
class WeightSequence:
    """Finitely supported weighting sequence ``sigma_0..sigma_K``.

    Negative lags follow from ``sigma_{-k} = sigma_k^T``; ``sigma_0`` is
    symmetrized on construction.
    """

    sigma: Tuple[np.ndarray, ...]

    def __post_init__(self):
        if len(self.sigma) == 0:
            raise ValueError("weight sequence needs at least sigma_0")
        s0 = np.asarray(self.sigma[0], dtype=float)
        if s0.ndim != 2 or s0.shape[0] != s0.shape[1]:
            raise ValueError("sigma0 must be square")
        blocks = [_frozen(0.5 * (s0 + s0.T))]
        for k, s in enumerate(self.sigma[1:], 1):
            s = _frozen(s)
            if s.shape != s0.shape:
                raise ValueError("sigma%d has shape %s, expected %s"
                                 % (k, s.shape, s0.shape))
            blocks.append(s)
        object.__setattr__(self, "sigma", tuple(blocks))

    @property
    def K(self):
        return len(self.sigma) - 1

    @property
    def size(self):
        return self.sigma[0].shape[0]

    def lag(self, k):
        if abs(k) > self.K:
            return np.zeros_like(self.sigma[0])
        s = self.sigma[abs(k)]
        return s if k >= 0 else s.T

    def is_zero(self):
        return all(not np.any(s) for s in self.sigma)


@dataclass(frozen=True)
class ControllerPoint:
    """Decision variable ``g = (R_{2,0}, ..., R_{2,d2}, Rt_0)``.

    ``coupling`` optionally holds plant-controller matrices at nonzero
    offsets (``{ell: Rt_ell}``); they enter the closed-loop symbol but are
    outside the gradient formulas.
    """

    R2: EnergyBlocks
    Rt0: np.ndarray
    coupling: Mapping[int, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "Rt0", _frozen(self.Rt0))
        if self.Rt0.ndim != 2:
            raise ValueError("Rt0 must be a matrix")
        extra = {}
        for ell, R in dict(self.coupling).items():
            ell = int(ell)
            if ell == 0:
                raise ValueError("offset 0 coupling belongs in Rt0")
            R = _frozen(R)
            if R.shape != self.Rt0.shape:
                raise ValueError("Rt%d has shape %s, expected %s"
                                 % (ell, R.shape, self.Rt0.shape))
            extra[ell] = R
        object.__setattr__(self, "coupling", extra)

    @property
    def d_tilde(self):
        return max((abs(ell) for ell in self.coupling), default=0)

    def coupling_block(self, ell):
        if ell == 0:
            return self.Rt0
        return self.coupling.get(ell, np.zeros_like(self.Rt0))

    # The parameter space G is a Hilbert space with the direct-sum
    # Frobenius inner product; these helpers flatten it to a vector.

    def to_vector(self):
        parts = [self.R2.R0.ravel()]
        parts += [R.ravel() for R in self.R2.Rpos]
        parts.append(self.Rt0.ravel())
        return np.concatenate(parts)

    @classmethod
    def from_vector(cls, v, like: "ControllerPoint"):
        v = np.asarray(v, dtype=float)
        s = like.R2.size
        blocks, k = [], 0
        for _ in range(like.R2.d + 1):
            blocks.append(v[k:k + s * s].reshape(s, s))
            k += s * s
        Rt0 = v[k:k + like.Rt0.size].reshape(like.Rt0.shape)
        if k + like.Rt0.size != v.size:
            raise ValueError("vector length %d does not match point" % v.size)
        return cls(EnergyBlocks(blocks[0], tuple(blocks[1:])), Rt0,
                   like.coupling)

    def is_symmetric(self, tol=0.0):
        R = self.R2.R0
        return np.max(np.abs(R - R.T), initial=0.0) <= tol


@dataclass(frozen=True)
class NetworkSpec:
    """Complete plant-controller problem instance."""

    dims: NodeDims
    theta1: np.ndarray
    theta2: np.ndarray
    plant: EnergyBlocks
    M1: np.ndarray
    M2: np.ndarray
    weights: WeightSequence
    controller: ControllerPoint

    def __post_init__(self):
        for name in ("theta1", "theta2", "M1", "M2"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))

    @cached_property
    def noise1(self):
        return NoiseModel(self.dims.m1)

    @cached_property
    def noise2(self):
        return NoiseModel(self.dims.m2)

    @cached_property
    def B1(self):
        return _frozen(b_from_coupling(self.theta1, self.M1))

    @cached_property
    def B2(self):
        return _frozen(b_from_coupling(self.theta2, self.M2))

    @cached_property
    def plant_drift(self):
        return drift_blocks(self.theta1, self.plant, self.B1, self.noise1)

    @cached_property
    def controller_drift(self):
        return drift_blocks(self.theta2, self.controller.R2, self.B2,
                            self.noise2)

    @cached_property
    def cross_drift(self):
        dt = self.dims.d_tilde
        Rt = {ell: self.controller.coupling_block(ell)
              for ell in range(-dt, dt + 1)}
        return coupling_drift(self.theta1, self.theta2, Rt)

    @cached_property
    def E(self):
        return _frozen(cost_output_matrix(self.dims.n1, self.controller.Rt0))

    def with_controller(self, point: ControllerPoint) -> "NetworkSpec":
        """Copy of the spec with the controller replaced."""
        return dataclasses.replace(self, controller=point)

    def with_weights(self, weights: WeightSequence) -> "NetworkSpec":
        return dataclasses.replace(self, weights=weights)


# ---------------------------------------------------------------------------
# Validation

@dataclass(frozen=True)
class Violation:
    name: str
    magnitude: float
    message: str = ""

    def as_dict(self):
        return {"name": self.name, "magnitude": float(self.magnitude),
                "message": self.message}


@dataclass
class ValidationReport:
    violations: List[Violation] = field(default_factory=list)

    def __bool__(self):
        return not self.violations

    @property
    def ok(self):
        return not self.violations

    def names(self):
        return [v.name for v in self.violations]

    def add(self, name, magnitude, message=""):
        self.violations.append(Violation(name, float(magnitude), message))

    def as_dict(self):
        return {"ok": self.ok,
                "violations": [v.as_dict() for v in self.violations]}


def _check_ccr(report, name, theta, n):
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (2 * n, 2 * n):
        report.add(name + " shape", abs(theta.shape[0] - 2 * n) or 1,
                   "expected %dx%d, got %s" % (2 * n, 2 * n, theta.shape))
        return
    asym = np.max(np.abs(theta + theta.T))
    if asym > 0:
        report.add(name + " antisymmetry", asym,
                   "max |theta + theta^T| entry")
    s = np.linalg.svd(theta, compute_uv=False)
    if s[-1] <= TOL_SINGULAR * s[0] or s[0] == 0:
        report.add(name + " nonsingularity", s[-1],
                   "smallest singular value below %.0e * ||theta||_2"
                   % TOL_SINGULAR)


def _check_shape(report, name, a, shape):
    a = np.asarray(a)
    if a.shape != shape:
        report.add(name + " shape", 1.0,
                   "expected %s, got %s" % (shape, a.shape))
        return False
    return True


def weight_psd_violation(weights: WeightSequence, points=PSD_GRID):
    """Return ``max(0, -min eigenvalue)`` of ``Sigma_z`` over a grid."""
    from .spectral import sigma_of_z, unit_grid

    z = unit_grid(points)
    S = sigma_of_z(weights, z)
    lam = np.linalg.eigvalsh(S)
    return max(0.0, -float(lam.min()))


def validate_spec(spec: NetworkSpec) -> ValidationReport:
    """Check every structural invariant of ``spec``.

    Problems are collected rather than raised; an empty report means the
    spec is well formed.
    """
    report = ValidationReport()
    d = spec.dims
    _check_ccr(report, "theta1", spec.theta1, d.n1)
    _check_ccr(report, "theta2", spec.theta2, d.n2)
    _check_shape(report, "M1", spec.M1, (2 * d.m1, 2 * d.n1))
    _check_shape(report, "M2", spec.M2, (2 * d.m2, 2 * d.n2))
    _check_shape(report, "plant R0", spec.plant.R0, (2 * d.n1, 2 * d.n1))
    _check_shape(report, "controller R0", spec.controller.R2.R0,
                 (2 * d.n2, 2 * d.n2))
    _check_shape(report, "Rt0", spec.controller.Rt0, (2 * d.n1, 2 * d.n2))
    if spec.plant.d != d.d1:
        report.add("plant range", abs(spec.plant.d - d.d1),
                   "plant has %d offset blocks, dims.d1 = %d"
                   % (spec.plant.d, d.d1))
    if spec.controller.R2.d != d.d2:
        report.add("controller range", abs(spec.controller.R2.d - d.d2),
                   "controller has %d offset blocks, dims.d2 = %d"
                   % (spec.controller.R2.d, d.d2))
    if spec.controller.d_tilde > d.d_tilde:
        report.add("coupling range", spec.controller.d_tilde - d.d_tilde,
                   "coupling blocks beyond dims.dTilde")

    for noise, name in ((spec.noise1, "noise1"), (spec.noise2, "noise2")):
        Om = noise.Omega
        herm = np.max(np.abs(Om - Om.conj().T))
        if herm > 0:
            report.add(name + " Omega hermiticity", herm)
        lam = np.linalg.eigvalsh(Om).min()
        if lam < -1e-12:
            report.add(name + " Omega psd", -lam)

    w = spec.weights
    if _check_shape(report, "sigma0", w.sigma[0], (4 * d.n1, 4 * d.n1)):
        s0 = w.sigma[0]
        asym = np.max(np.abs(s0 - s0.T))
        if asym > 0:
            report.add("sigma0 symmetry", asym)
        neg = weight_psd_violation(w)
        scale = np.linalg.norm(s0, 2)
        if neg > TOL_PSD * max(scale, np.finfo(float).tiny):
            report.add("weights psd", neg,
                       "Sigma_z has eigenvalue %.3e on the unit circle"
                       % -neg)
    for name, a in (("theta1", spec.theta1), ("theta2", spec.theta2),
                    ("M1", spec.M1), ("M2", spec.M2)):
        if not np.all(np.isfinite(a)):
            report.add(name + " finiteness", np.inf)
    return report


# ---------------------------------------------------------------------------
# Coefficient algebra

def b_from_coupling(theta, M):
    """Noise input matrix ``B = 2 Theta M^T``."""
    theta = np.asarray(theta, dtype=float)
    M = np.asarray(M, dtype=float)
    if theta.ndim != 2 or M.ndim != 2 or M.shape[1] != theta.shape[0]:
        raise ValueError("M must be 2m x %d to match theta, got %s"
                         % (theta.shape[0], M.shape))
    return 2.0 * theta @ M.T


def _check_theta(theta):
    theta = np.asarray(theta, dtype=float)
    s = np.linalg.svd(theta, compute_uv=False)
    if s[0] == 0 or s[-1] <= TOL_SINGULAR * s[0]:
        raise SingularCcrMatrix("CCR matrix is numerically singular "
                                "(sigma_min = %.3e)" % s[-1])
    return theta


def drift_blocks(theta, energy: EnergyBlocks, B, noise: NoiseModel):
    """Drift coefficients ``{ell: A_ell}`` for offsets ``-d..d``.

    ``A_0 = 2 Theta R_0 - 1/2 B J B^T Theta^{-1}`` and
    ``A_ell = 2 Theta R_ell`` otherwise.
    """
    theta = _check_theta(theta)
    B = np.asarray(B, dtype=float)
    n = theta.shape[0]
    if energy.size != n or B.shape != (n, noise.J.shape[0]):
        raise ValueError("dimension mismatch between theta, energy and B")
    damping = 0.5 * B @ noise.J @ B.T @ np.linalg.inv(theta)
    out = {}
    for ell, R in energy.blocks().items():
        out[ell] = 2.0 * theta @ R
    out[0] = out[0] - damping
    return out


def coupling_drift(theta1, theta2, Rt: Mapping[int, np.ndarray]):
    """Cross drift families ``At1[l] = 2 Theta1 Rt_l``, ``At2[l] = 2 Theta2 Rt_l^T``."""
    theta1 = np.asarray(theta1, dtype=float)
    theta2 = np.asarray(theta2, dtype=float)
    A1, A2 = {}, {}
    for ell, R in Rt.items():
        R = np.asarray(R, dtype=float)
        if R.shape != (theta1.shape[0], theta2.shape[0]):
            raise ValueError("Rt%d has shape %s, expected %s"
                             % (ell, R.shape,
                                (theta1.shape[0], theta2.shape[0])))
        A1[ell] = 2.0 * theta1 @ R
        A2[ell] = 2.0 * theta2 @ R.T
    return A1, A2


def jdj_selection(D, J) -> Optional[Tuple[int, ...]]:
    """Find the row selection ``s`` with ``D J D^T == J[s][:, s]``.

    Returns the selected row indices of ``J`` or ``None``.  Channels are
    tried in increasing lexicographic order, so the first match is the
    recorded choice.
    """
    D = np.asarray(D, dtype=float)
    J = np.asarray(J, dtype=float)
    target = D @ J @ D.T
    q2, m2 = D.shape
    if q2 % 2 or q2 > m2:
        return None
    for chans in itertools.combinations(range(m2 // 2), q2 // 2):
        rows = [r for c in chans for r in (2 * c, 2 * c + 1)]
        if np.allclose(target, J[np.ix_(rows, rows)], atol=1e-12):
            return tuple(rows)
    return None


def output_consistency(theta, B, C, D, noise: NoiseModel):
    """Residual ``||Theta C^T + B J D^T||_F`` of the non-demolition relation.

    Raises ``ValueError`` if ``D J D^T`` is not a principal submatrix of
    ``J`` on a channel selection.
    """
    J = noise.J
    if jdj_selection(D, J) is None:
        raise ValueError("D J D^T is not a channel submatrix of J")
    theta = np.asarray(theta, dtype=float)
    r = theta @ np.asarray(C, dtype=float).T + \
        np.asarray(B, dtype=float) @ J @ np.asarray(D, dtype=float).T
    return float(np.linalg.norm(r, "fro"))


def cost_output_matrix(n1, Rt0):
    """``E = blkdiag(I_{2 n1}, Rt0)``."""
    Rt0 = np.asarray(Rt0, dtype=float)
    p = 2 * n1
    E = np.zeros((2 * p, p + Rt0.shape[1]))
    E[:p, :p] = np.eye(p)
    E[p:, p:] = Rt0
    return E
