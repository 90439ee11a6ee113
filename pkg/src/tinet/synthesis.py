"""Gradient-descent search for locally optimal stabilizing controllers."""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .cost import QUAD_POINTS, evaluate, thermo_cost
from .errors import NotStabilizing, Stalled, StepLeavesStabilizingSet
from .lyapunov import TOL_HURWITZ
from .network import ControllerPoint, NetworkSpec
from .stability import stability_sweep

__all__ = ["DescentConfig", "IterRecord", "DescentTrace", "descend",
           "GradCheckReport", "grad_check", "parameter_basis", "MIN_STEP"]

MIN_STEP = 1e-14


@dataclass(frozen=True)
class DescentConfig:
    max_iters: int = 2000
    init_step: float = 1.0
    backtrack_factor: float = 0.5
    armijo_c: float = 1e-4
    stationarity_tol: Optional[float] = None   # default 1e-7 (1 + |g_0|)
    seed: int = 0
    jitter: float = 0.0
    quad_points: int = QUAD_POINTS
    bb_steps: bool = True

    def __post_init__(self):
        if self.max_iters < 0:
            raise ValueError("max_iters must be >= 0")
        if not self.init_step > 0:
            raise ValueError("init_step must be positive")
        if not 0 < self.backtrack_factor < 1:
            raise ValueError("backtrack_factor must lie in (0, 1)")
        if not 0 < self.armijo_c < 1:
            raise ValueError("armijo_c must lie in (0, 1)")
        if self.stationarity_tol is not None and not self.stationarity_tol > 0:
            raise ValueError("stationarity_tol must be positive")


@dataclass(frozen=True)
class IterRecord:
    iteration: int
    cost: float
    grad_norm: float
    step: float
    margin: float


@dataclass
class DescentTrace:
    records: List[IterRecord] = field(default_factory=list)
    termination_reason: str = ""
    stationarity_tol: float = 0.0
    optimality_residuals: dict = field(default_factory=dict)

    @property
    def iterations(self):
        return len(self.records) - 1

    @property
    def costs(self):
        return np.array([r.cost for r in self.records])

    def write_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["iteration", "cost", "grad_norm", "step", "margin"])
            for r in self.records:
                w.writerow([r.iteration, format(r.cost, ".17g"),
                            format(r.grad_norm, ".17g"),
                            format(r.step, ".17g"),
                            format(r.margin, ".17g")])


def _point(x, like):
    return ControllerPoint.from_vector(x, like)


def descend(spec: NetworkSpec, cfg: DescentConfig = DescentConfig(),
            raise_on_stall=False):
    """Minimize the infinite-ring cost over the controller parameters.

    Steepest descent in the direct-sum Frobenius geometry with a
    backtracking line search.  A trial step is accepted only if the new
    controller is stabilizing and satisfies the Armijo condition, so the
    accepted costs strictly decrease and every iterate is stabilizing.
    Trial steps start from the Barzilai-Borwein length when ``bb_steps`` is
    set, otherwise from the last accepted step.

    Returns ``(point, trace)``.  ``trace.termination_reason`` is one of
    ``'converged'``, ``'maxIters'`` or ``'stalled'`` (line search fell
    below ``MIN_STEP``).  With ``raise_on_stall`` a stall raises
    :class:`Stalled` instead, carrying the trace as ``exc.trace``.
    """
    like = spec.controller
    x = like.to_vector()
    if cfg.jitter > 0:
        rng = np.random.default_rng(cfg.seed)
        x = _point(x + cfg.jitter * rng.standard_normal(x.size), like) \
            .to_vector()
        spec = spec.with_controller(_point(x, like))
    rep = stability_sweep(spec)
    if not rep.is_stabilizing:
        raise NotStabilizing(rep.margin, "initial controller is not "
                             "stabilizing (margin %.3e)" % rep.margin)
    ev = evaluate(spec, cfg.quad_points, check_stability=False)
    G = ev.gradient_vector()
    gnorm = float(np.linalg.norm(G))
    tol = cfg.stationarity_tol
    if tol is None:
        tol = 1e-7 * (1.0 + gnorm)
    trace = DescentTrace([IterRecord(0, ev.value, gnorm, 0.0, rep.margin)],
                         stationarity_tol=tol)
    alpha = cfg.init_step
    s = y = None
    reason = "maxIters"
    for it in range(1, cfg.max_iters + 1):
        if gnorm <= tol:
            reason = "converged"
            break
        if cfg.bb_steps and s is not None:
            sy = float(s @ y)
            if sy > 0:
                alpha = float(s @ s) / sy
        while True:
            x_try = x - alpha * G
            spec_try = spec.with_controller(_point(x_try, like))
            rep_try = stability_sweep(spec_try)
            if rep_try.margin < -TOL_HURWITZ and rep_try.is_stabilizing:
                f_try = thermo_cost(spec_try, cfg.quad_points, adaptive=False,
                                    check_stability=False).value
                if f_try <= ev.value - cfg.armijo_c * alpha * gnorm ** 2 \
                        and f_try < ev.value:
                    break
            alpha *= cfg.backtrack_factor
            if alpha < MIN_STEP:
                break
        if alpha < MIN_STEP:
            reason = "stalled"
            break
        ev_new = evaluate(spec_try, cfg.quad_points, check_stability=False)
        G_new = ev_new.gradient_vector()
        s, y = x_try - x, G_new - G
        x, G, ev, spec = x_try, G_new, ev_new, spec_try
        gnorm = float(np.linalg.norm(G))
        trace.records.append(IterRecord(it, ev.value, gnorm, alpha,
                                        rep_try.margin))
    else:
        if gnorm <= tol:
            reason = "converged"
    trace.termination_reason = reason
    trace.optimality_residuals = dict(ev.optimality_residuals)
    if reason == "stalled" and raise_on_stall:
        exc = Stalled("line search step fell below %.0e at iteration %d "
                      "(gradient norm %.3e)" % (MIN_STEP, it, gnorm))
        exc.trace = trace
        raise exc
    return spec.controller, trace


# ---------------------------------------------------------------------------
# Finite-difference check of the analytic gradient

def parameter_basis(point: ControllerPoint):
    """Orthonormal basis of the parameter space as ``(block, vector)`` pairs.

    The ``R_{2,0}`` block uses the symmetric basis ``E_ii`` and
    ``(E_ij + E_ji)/sqrt(2)``; all other blocks use matrix units.
    """
    s = point.R2.size
    n = point.to_vector().size
    out = []
    for i in range(s):
        for j in range(i, s):
            v = np.zeros(n)
            if i == j:
                v[i * s + j] = 1.0
            else:
                v[i * s + j] = v[j * s + i] = 1.0 / np.sqrt(2.0)
            out.append(("R2_0", v))
    k = s * s
    for ell in range(1, point.R2.d + 1):
        for _ in range(s * s):
            v = np.zeros(n)
            v[k] = 1.0
            out.append(("R2_%d" % ell, v))
            k += 1
    while k < n:
        v = np.zeros(n)
        v[k] = 1.0
        out.append(("Rt0", v))
        k += 1
    return out


@dataclass
class GradCheckReport:
    h: float
    max_rel_error: float
    block_errors: dict
    analytic: np.ndarray
    numeric: np.ndarray

    def as_dict(self):
        return {"h": self.h, "max_rel_error": self.max_rel_error,
                "block_errors": dict(self.block_errors)}


def grad_check(spec: NetworkSpec, h=1e-5, quad_points=QUAD_POINTS,
               check_steps=True) -> GradCheckReport:
    """Compare analytic gradients with central differences of the cost.

    Directional derivatives are taken along the orthonormal basis of
    :func:`parameter_basis` on a fixed quadrature grid.  Per-block errors
    are normalized by the norm of the full gradient; ``max_rel_error`` is
    the relative error of the whole projected gradient vector (0 when both
    sides vanish).
    """
    like = spec.controller
    ev = evaluate(spec, quad_points)
    g = ev.gradient_vector()
    x0 = like.to_vector()
    basis = parameter_basis(like)
    an = np.array([g @ v for _, v in basis])
    fd = np.empty_like(an)
    for k, (_, v) in enumerate(basis):
        vals = []
        for sgn in (1.0, -1.0):
            sp = spec.with_controller(_point(x0 + sgn * h * v, like))
            if check_steps and not stability_sweep(sp).is_stabilizing:
                raise StepLeavesStabilizingSet(
                    "perturbation of size %.1e leaves the stabilizing set" % h)
            vals.append(thermo_cost(sp, quad_points, adaptive=False,
                                    check_stability=False).value)
        fd[k] = (vals[0] - vals[1]) / (2.0 * h)
    scale = np.linalg.norm(an)
    err = np.linalg.norm(fd - an)
    if scale == 0.0:
        rel = 0.0 if err == 0.0 else np.inf
    else:
        rel = float(err / scale)
    blocks = {}
    names = [b for b, _ in basis]
    for b in dict.fromkeys(names):
        idx = [i for i, n in enumerate(names) if n == b]
        e = float(np.linalg.norm(fd[idx] - an[idx]))
        blocks[b] = 0.0 if e == 0.0 else (e / scale if scale else np.inf)
    return GradCheckReport(h, rel, blocks, an, fd)
