"""Coherent quantum controllers for translation-invariant oscillator networks.

A ring of identical open quantum harmonic oscillators (the plant) is coupled
to a ring of controller oscillators.  The closed loop is block-circulant, so
its steady state decouples over frequencies ``z`` on the unit circle.  The
package evaluates the resulting mean-square cost, its exact gradients with
respect to the controller energy and coupling matrices, and runs a
stability-preserving gradient descent.
"""
__version__ = "0.1.0"

from .errors import (IllConditioned, Inconclusive, NoConvergence, NotHurwitz,
                     NotStabilizing, SingularCcrMatrix, SpecFormatError,
                     Stalled, StepLeavesStabilizingSet, TinetError,
                     UnsupportedCoupling)
from .network import (ControllerPoint, EnergyBlocks, NetworkSpec, NodeDims,
                      NoiseModel, WeightSequence, canonical_theta,
                      output_consistency, validate_spec)
from .spectral import sigma_of_z, symbol, symbol_A, unit_grid
from .lyapunov import solve_ale, solve_ale_kron
from .stability import StabilityReport, stability_sweep
from .cost import (CostReport, evaluate, finite_cost, grad_coupling,
                   grad_energy, optimality_residual, spectral_sample,
                   thermo_cost)
from .synthesis import DescentConfig, DescentTrace, descend, grad_check
from .oracle import build_finite, finite_cost_direct, finite_covariance
from .io import example_path, load_config, load_spec, dump_spec

__all__ = [
    "__version__", "TinetError", "SpecFormatError", "SingularCcrMatrix",
    "NotHurwitz", "IllConditioned", "NotStabilizing", "Inconclusive",
    "NoConvergence", "UnsupportedCoupling", "Stalled",
    "StepLeavesStabilizingSet", "NodeDims", "NoiseModel", "EnergyBlocks",
    "WeightSequence", "ControllerPoint", "NetworkSpec", "canonical_theta",
    "validate_spec", "output_consistency", "symbol", "symbol_A", "sigma_of_z",
    "unit_grid", "solve_ale", "solve_ale_kron", "StabilityReport",
    "stability_sweep", "CostReport", "spectral_sample", "finite_cost",
    "thermo_cost", "evaluate", "grad_energy", "grad_coupling",
    "optimality_residual", "DescentConfig", "DescentTrace", "descend",
    "grad_check", "build_finite", "finite_covariance", "finite_cost_direct",
    "load_spec", "dump_spec", "load_config", "example_path",
]
