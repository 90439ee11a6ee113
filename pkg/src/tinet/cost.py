"""Mean-square cost of the closed loop and its exact gradients.

Per frequency ``z`` on the unit circle:

* ``S_z`` solves ``A_z S + S A_z^* + B Omega B^T = 0`` (state density),
* ``Q_z`` solves ``A_z^* Q + Q A_z + E^T Sigma_z E = 0`` (adjoint density),
* ``H_z = Q_z S_z``.

The thermodynamic-limit cost is the circle mean of
``<Sigma_z, E S_z E^T>``; circle means (equivalently residues of ``f(z)/z``
at the origin) are computed with the trapezoid rule on uniform grids,
which converges geometrically for integrands analytic near the circle.
Gradients are taken in the controller parameters
``g = (R_{2,0}, ..., R_{2,d2}, Rt_0)`` for zero plant-controller coupling
range.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from ._parallel import chunked_map
from .errors import NoConvergence, NotHurwitz, NotStabilizing, \
    UnsupportedCoupling
from .lyapunov import solve_ale, solve_ale_batch
from .network import NetworkSpec
from .spectral import cesaro_sigma, sigma_of_z, symbol_A, symbol_noise, \
    unit_grid
from .stability import require_stabilizing

__all__ = [
    "SpectralSample", "CostReport", "spectral_sample", "finite_cost",
    "thermo_cost", "evaluate", "grad_energy", "grad_coupling",
    "optimality_residual", "cost_spectrum", "circle_mean",
    "laurent_coefficients", "QUAD_POINTS", "MAX_QUAD", "TOL_QUAD",
]

QUAD_POINTS = 256
MAX_QUAD = 4096
TOL_QUAD = 1e-9


@dataclass(frozen=True)
class SpectralSample:
    z: complex
    Az: np.ndarray
    Sz: np.ndarray
    Qz: np.ndarray
    Hz: np.ndarray
    SigmaZ: np.ndarray


@dataclass
class CostReport:
    value: float
    kind: str                      # 'finite' or 'thermodynamic'
    grid_size: int
    N: Optional[int] = None
    imag_residue: float = 0.0
    grad_R2: Optional[List[np.ndarray]] = None
    grad_Rt0: Optional[np.ndarray] = None
    optimality_residuals: Optional[Dict[str, float]] = None
    diagnostics: Dict[str, float] = field(default_factory=dict)

    def gradient_vector(self):
        """Gradient flattened in the order of ``ControllerPoint.to_vector``."""
        parts = [G.ravel() for G in self.grad_R2] + [self.grad_Rt0.ravel()]
        return np.concatenate(parts)

    def gradient_norm(self):
        return float(np.linalg.norm(self.gradient_vector()))

    def as_dict(self):
        d = {"value": self.value, "kind": self.kind,
             "grid_size": self.grid_size, "imag_residue": self.imag_residue}
        if self.N is not None:
            d["N"] = self.N
        if self.grad_R2 is not None:
            d["grad_R2"] = [G.tolist() for G in self.grad_R2]
            d["grad_Rt0"] = self.grad_Rt0.tolist()
            d["gradient_norm"] = self.gradient_norm()
        if self.optimality_residuals is not None:
            d["optimality_residuals"] = dict(self.optimality_residuals)
        if self.diagnostics:
            d["diagnostics"] = dict(self.diagnostics)
        return d


def spectral_sample(spec: NetworkSpec, z) -> SpectralSample:
    """Symbol, state/adjoint densities and Hankelian at one frequency."""
    z = complex(z)
    A = symbol_A(spec, z)
    Sig = sigma_of_z(spec.weights, z)
    S = solve_ale(A, symbol_noise(spec))
    E = spec.E
    Q = solve_ale(A, E.T @ Sig @ E, side="observability")
    return SpectralSample(z, A, S, Q, Q @ S, Sig)


def _solve_grid(A, V, side="controllability"):
    V = np.broadcast_to(V, A.shape)
    try:
        return chunked_map(lambda a, v: solve_ale_batch(a, v, side), A, V)
    except NotHurwitz as exc:
        raise NotStabilizing(exc.max_real) from exc


def _observability_forcing(spec, Sig):
    E = spec.E
    return np.einsum("ai,pab,bj->pij", E, Sig, E)


def _pairing(Sig, E, S):
    # <Sig, E S E^T> = tr(Sig^* E S E^T) per grid point; Sig is Hermitian
    return np.einsum("pij,pji->p", Sig, E @ S @ E.T)


def circle_mean(values):
    """Trapezoid mean over a uniform grid (fixed summation order)."""
    values = np.asarray(values)
    return values.sum(axis=0) / values.shape[0]


def laurent_coefficients(values):
    """Laurent coefficients ``c_k`` of samples ``f(z_j)`` on a uniform grid.

    Entry ``k`` (taken modulo the grid size) approximates the coefficient
    of ``z^k``; in particular ``c_0 = Res_{z=0} f(z)/z``.
    """
    values = np.asarray(values)
    return np.fft.fft(values, axis=0) / values.shape[0]


def _require_pre(spec, N):
    if N <= 2 * spec.dims.max_range:
        raise ValueError("ring size N=%d must exceed 2*max(d1, d2, dTilde)"
                         " = %d" % (N, 2 * spec.dims.max_range))


def finite_cost(spec: NetworkSpec, N) -> CostReport:
    """Cost of the ring of ``N`` nodes via its ``N`` decoupled frequencies.

    ``E_N = (1/N) sum_{z^N = 1} <Sigma_N(z), E S_z E^T>`` with the
    Fejer-weighted partial sum ``Sigma_N``.
    """
    _require_pre(spec, N)
    z = unit_grid(N)
    S = _solve_grid(symbol_A(spec, z), symbol_noise(spec))
    f = _pairing(cesaro_sigma(spec.weights, N, z), spec.E, S)
    total = circle_mean(f)
    return CostReport(float(total.real), "finite", N, N=N,
                      imag_residue=float(abs(total.imag)))


def _cost_values(spec, z):
    S = _solve_grid(symbol_A(spec, z), symbol_noise(spec))
    return _pairing(sigma_of_z(spec.weights, z), spec.E, S)


def cost_spectrum(spec: NetworkSpec, P=QUAD_POINTS):
    """``(phi, <Sigma_z, E S_z E^T>)`` on a ``P``-point grid."""
    z = unit_grid(P)
    return 2 * np.pi * np.arange(P) / P, _cost_values(spec, z).real


def thermo_cost(spec: NetworkSpec, quad_points=QUAD_POINTS, max_quad=MAX_QUAD,
                tol_quad=TOL_QUAD, adaptive=True,
                check_stability=True) -> CostReport:
    """Infinite-ring cost by trapezoid quadrature on the unit circle.

    With ``adaptive`` the grid is doubled (reusing old nodes) until two
    successive values agree to ``tol_quad`` relative; the finer value is
    returned.  With ``adaptive=False`` exactly ``quad_points`` nodes are
    used, which is what finite-difference checks need.
    """
    if check_stability:
        require_stabilizing(spec)
    P = int(quad_points)
    f = _cost_values(spec, unit_grid(P))
    value = circle_mean(f)
    if adaptive:
        while True:
            if 2 * P > max_quad:
                raise NoConvergence(
                    "quadrature did not settle to %.0e by %d points"
                    % (tol_quad, P))
            z2 = unit_grid(2 * P)
            f2 = np.empty(2 * P, dtype=complex)
            f2[0::2] = f
            f2[1::2] = _cost_values(spec, z2[1::2])
            new = circle_mean(f2)
            P, f = 2 * P, f2
            done = abs(new.real - value.real) <= tol_quad * abs(new.real)
            value = new
            if done:
                break
    return CostReport(float(value.real), "thermodynamic", P,
                      imag_residue=float(abs(value.imag)))


def _check_coupling(spec):
    if spec.dims.d_tilde > 0 or spec.controller.coupling:
        raise UnsupportedCoupling("gradients require zero plant-controller "
                                  "coupling range (dTilde = 0)")


def evaluate(spec: NetworkSpec, quad_points=QUAD_POINTS,
             check_stability=True) -> CostReport:
    """Cost, gradients and optimality residuals on one fixed grid.

    Gradient blocks (in the Frobenius geometry of the parameter space):

    * ``dE/dR_{2,0} = 2 mean Re(H22^* Th2 - Th2 H22)`` (symmetric),
    * ``dE/dR_{2,l} = 4 mean Re(z^l (H22^* Th2 - Th2 H22))``, ``l > 0``,
    * ``dE/dRt_0 = 4 mean Re(H21^* Th2 - Th1 H12 + (Sigma E S)_22 / 2)``,

    where ``(Sigma E S)_22`` is the block with rows ``2n1:4n1`` and columns
    ``2n1:``.

    ``diagnostics`` records the largest imaginary part of the circle means
    before the real part is taken.  For the energy blocks it is at roundoff
    level.  For ``Rt0`` it is not: the commutator part of ``S_z`` makes
    ``(Sigma E S)_22`` carry an imaginary mean, and only the real part is
    the derivative of the (real) cost.
    """
    _check_coupling(spec)
    if check_stability:
        require_stabilizing(spec)
    P = int(quad_points)
    z = unit_grid(P)
    A = symbol_A(spec, z)
    Sig = sigma_of_z(spec.weights, z)
    E = spec.E
    th1, th2 = spec.theta1, spec.theta2
    p = spec.dims.plant_size

    S = _solve_grid(A, symbol_noise(spec))
    Q = _solve_grid(A, _observability_forcing(spec, Sig), "observability")
    H = Q @ S
    H12, H21, H22 = H[:, :p, p:], H[:, p:, :p], H[:, p:, p:]
    H22h = np.conj(H22).transpose(0, 2, 1)
    H21h = np.conj(H21).transpose(0, 2, 1)
    K = H22h @ th2 - th2 @ H22
    L = H21h @ th2 - th1 @ H12 + 0.5 * (Sig @ E @ S)[:, p:, p:]
    # optimality-condition integrand, assembled in its own form
    C41 = th2 @ H22 - H22h @ th2

    value = circle_mean(_pairing(Sig, E, S))
    grads, resid = [], {}
    asym = imag_R2 = 0.0
    for ell in range(spec.dims.d2 + 1):
        zl = (z ** ell)[:, None, None]
        mc = circle_mean(zl * K)
        imag_R2 = max(imag_R2, float(np.abs(mc.imag).max()))
        m = mc.real
        if ell == 0:
            G = 2.0 * m
            asym = float(np.linalg.norm(G - G.T))
            G = 0.5 * (G + G.T)
        else:
            G = 4.0 * m
        grads.append(G)
        resid["R2_%d" % ell] = float(np.linalg.norm(circle_mean(zl * C41).real))
    mLc = circle_mean(L)
    mL = mLc.real
    resid["Rt0"] = float(np.linalg.norm(mL))

    return CostReport(float(value.real), "thermodynamic", P,
                      imag_residue=float(abs(value.imag)),
                      grad_R2=grads, grad_Rt0=4.0 * mL,
                      optimality_residuals=resid,
                      diagnostics={"grad_R2_0_asymmetry": asym,
                                   "grad_R2_imag": imag_R2,
                                   "grad_Rt0_imag": float(
                                       np.abs(mLc.imag).max())})


def grad_energy(spec: NetworkSpec, quad_points=QUAD_POINTS):
    """Gradients of the infinite-ring cost in ``R_{2,0}, ..., R_{2,d2}``."""
    return evaluate(spec, quad_points).grad_R2


def grad_coupling(spec: NetworkSpec, quad_points=QUAD_POINTS):
    """Gradient of the infinite-ring cost in ``Rt_0``."""
    return evaluate(spec, quad_points).grad_Rt0


def optimality_residual(spec: NetworkSpec, quad_points=QUAD_POINTS):
    """Frobenius norms of the first-order optimality conditions.

    Keys ``'R2_l'`` for ``l = 0..d2`` and ``'Rt0'``.  They equal the
    gradient norms divided by 2 (``R2_0``) or 4 (all others).
    """
    return evaluate(spec, quad_points).optimality_residuals
