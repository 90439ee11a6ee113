"""Membership test for the stabilizing set.

The closed loop is stable for every ring size iff ``A_z`` is Hurwitz on the
whole unit circle.  We sample the largest real eigenvalue on nested uniform
grids, doubling until the estimate settles.  Only the upper half circle is
evaluated: ``A_conj(z) = conj(A_z)`` has the conjugate spectrum.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import Inconclusive, NotStabilizing
from .lyapunov import TOL_HURWITZ
from .network import NetworkSpec
from .spectral import symbol_A, unit_grid

__all__ = ["StabilityReport", "stability_sweep", "margin_curve",
           "max_real_eig", "require_stabilizing", "MAX_GRID", "TOL_MARGIN"]

MAX_GRID = 8192
TOL_MARGIN = 1e-8


@dataclass(frozen=True)
class StabilityReport:
    margin: float
    worst_z: complex
    grid_size: int
    verdict: str  # 'stable' | 'unstable' | 'inconclusive'

    @property
    def is_stabilizing(self):
        return self.verdict == "stable"

    @property
    def spectral_radius(self):
        """``max_z r(exp(A_z)) = exp(margin)``; below 1 iff stable."""
        return math.exp(self.margin)

    def as_dict(self):
        return {"margin": self.margin,
                "worst_z": [self.worst_z.real, self.worst_z.imag],
                "grid_size": self.grid_size,
                "is_stabilizing": self.is_stabilizing,
                "verdict": self.verdict,
                "spectral_radius_exp": self.spectral_radius}


def max_real_eig(spec: NetworkSpec, z):
    """Largest real part of the spectrum of ``A_z`` at each point."""
    A = symbol_A(spec, np.atleast_1d(z))
    return np.linalg.eigvals(A).real.max(axis=-1)


def _half_circle(P):
    z = unit_grid(P)
    return z[: P // 2 + 1]


def margin_curve(spec: NetworkSpec, P):
    """``(phi, margin(phi))`` on the full ``P``-point grid."""
    z = unit_grid(P)
    return 2 * np.pi * np.arange(P) / P, max_real_eig(spec, z)


def stability_sweep(spec: NetworkSpec, initial_grid=64, max_grid=MAX_GRID,
                    tol_margin=TOL_MARGIN) -> StabilityReport:
    """Estimate ``max_{|z|=1} max Re eig(A_z)`` by grid doubling.

    The verdict is ``'inconclusive'`` when the final margin lies within
    ``TOL_HURWITZ`` of zero; such controllers are never accepted as
    stabilizing.
    """
    if initial_grid < 16:
        raise ValueError("initial_grid must be >= 16")
    P = int(initial_grid)
    prev = None
    while True:
        z = _half_circle(P)
        m = max_real_eig(spec, z)
        k = int(np.argmax(m))
        margin, worst = float(m[k]), complex(z[k])
        if prev is not None and abs(margin - prev) < tol_margin:
            break
        if 2 * P > max_grid:
            break
        prev = margin
        P *= 2
    if margin < -TOL_HURWITZ:
        verdict = "stable"
    elif margin > TOL_HURWITZ:
        verdict = "unstable"
    else:
        verdict = "inconclusive"
    return StabilityReport(margin, worst, P, verdict)


def require_stabilizing(spec: NetworkSpec, **kw) -> StabilityReport:
    """Sweep and raise :class:`NotStabilizing`/:class:`Inconclusive` on failure."""
    rep = stability_sweep(spec, **kw)
    if rep.verdict == "inconclusive":
        raise Inconclusive(rep.margin)
    if rep.verdict == "unstable":
        raise NotStabilizing(rep.margin)
    return rep
