"""Random and canned problem instances."""
from __future__ import annotations

import numpy as np

from .network import (ControllerPoint, EnergyBlocks, NetworkSpec, NodeDims,
                      WeightSequence, canonical_theta)
from .stability import stability_sweep

__all__ = ["random_instance", "random_weights", "decoupled_instance"]


def _sym(rng, n, scale):
    G = rng.standard_normal((n, n))
    return scale * 0.5 * (G + G.T)


def _coupling(rng, m, n, damping):
    # rows of a positively oriented frame keep each channel dissipative
    M = np.zeros((2 * m, 2 * n))
    for c in range(m):
        k = c % n
        F = np.eye(2) + 0.3 * rng.standard_normal((2, 2))
        if np.linalg.det(F) < 0:
            F[0] *= -1
        M[2 * c:2 * c + 2, 2 * k:2 * k + 2] = damping * F
    return M


def random_weights(rng, n1, K=2, decay=0.15):
    """PSD weighting sequence ``sigma_0..sigma_K`` of order ``4 n1``.

    Off-zero lags are random with norms shrinking like ``decay / k``;
    ``sigma_0`` is lifted just enough to keep ``Sigma_z`` positive
    definite on the circle.
    """
    from .spectral import sigma_of_z, unit_grid

    q = 4 * n1
    G = rng.standard_normal((q, q))
    s0 = G @ G.T / q + np.eye(q)
    lags = [s0] + [decay / k * rng.standard_normal((q, q))
                   for k in range(1, K + 1)]
    w = WeightSequence(tuple(lags))
    lam = np.linalg.eigvalsh(sigma_of_z(w, unit_grid(512))).min()
    if lam < 0.1:
        lags[0] = lags[0] + (0.1 - lam) * np.eye(q)
        w = WeightSequence(tuple(lags))
    return w


def random_instance(seed, n1=1, n2=1, m1=1, m2=1, d1=1, d2=1, K=2,
                    coupling=0.4, hopping=0.25, max_margin=-0.1,
                    max_tries=200) -> NetworkSpec:
    """Random stabilizing instance with ``d_tilde = 0``.

    Draws are repeated until the stability margin is at most
    ``max_margin``.
    """
    rng = np.random.default_rng(seed)
    dims = NodeDims(n1, n2, m1, m2, d1, d2, 0)
    for _ in range(max_tries):
        plant = EnergyBlocks(
            _sym(rng, 2 * n1, 0.5) + np.eye(2 * n1),
            tuple(hopping / ell * rng.standard_normal((2 * n1, 2 * n1))
                  for ell in range(1, d1 + 1)))
        ctrl = EnergyBlocks(
            _sym(rng, 2 * n2, 0.5) + np.eye(2 * n2),
            tuple(hopping / ell * rng.standard_normal((2 * n2, 2 * n2))
                  for ell in range(1, d2 + 1)))
        Rt0 = coupling * rng.standard_normal((2 * n1, 2 * n2))
        spec = NetworkSpec(
            dims, canonical_theta(n1), canonical_theta(n2), plant,
            _coupling(rng, m1, n1, 0.8), _coupling(rng, m2, n2, 0.8),
            random_weights(rng, n1, K), ControllerPoint(ctrl, Rt0))
        if stability_sweep(spec).margin <= max_margin:
            return spec
    raise RuntimeError("no stabilizing draw within %d tries" % max_tries)


def decoupled_instance(a=0.5):
    """Single-mode plant and controller with ``A_z = -a I`` and no coupling.

    Zero energy matrices, damping ``2 det(M) = a`` per quadrature, unit
    weights.  Useful for hand-checkable values.
    """
    c = np.sqrt(a / 2.0)
    dims = NodeDims(1, 1, 1, 1, 0, 0, 0)
    Z = np.zeros((2, 2))
    return NetworkSpec(dims, canonical_theta(1), canonical_theta(1),
                       EnergyBlocks(Z), c * np.eye(2), c * np.eye(2),
                       WeightSequence((np.eye(4),)),
                       ControllerPoint(EnergyBlocks(Z), Z))
