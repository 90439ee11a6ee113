import dataclasses

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tinet.errors import Inconclusive, NotStabilizing
from tinet.instances import decoupled_instance, random_instance
from tinet.network import J2, EnergyBlocks
from tinet.spectral import symbol_A, unit_grid
from tinet.stability import (margin_curve, max_real_eig, require_stabilizing,
                             stability_sweep)


def chain_instance(a):
    """Plant symbol ``-1 + a (z - 1/z)`` per quadrature, controller ``-I``."""
    spec = decoupled_instance(1.0)
    plant = EnergyBlocks(np.zeros((2, 2)), (0.5 * a * J2,))
    dims = dataclasses.replace(spec.dims, d1=1)
    return dataclasses.replace(spec, dims=dims, plant=plant)


def test_minus_identity_symbol_has_unit_margin():
    rep = stability_sweep(decoupled_instance(1.0))
    assert rep.margin == pytest.approx(-1.0, abs=1e-14)
    assert rep.is_stabilizing
    assert rep.spectral_radius == pytest.approx(np.exp(-1.0))


def test_zero_drift_is_inconclusive():
    spec = dataclasses.replace(decoupled_instance(), M1=np.zeros((2, 2)))
    rep = stability_sweep(spec)
    assert rep.margin == 0.0
    assert rep.verdict == "inconclusive"
    assert not rep.is_stabilizing
    with pytest.raises(Inconclusive):
        require_stabilizing(spec)


@pytest.mark.parametrize("a", [0.1, 0.7, 3.0])
def test_scalar_chain_margin_against_dense_scan(a):
    spec = chain_instance(a)
    z = unit_grid(8)
    p = symbol_A(spec, z)[:, :2, :2]
    expect = (-1 + a * (z - 1 / z))[:, None, None] * np.eye(2)
    assert np.allclose(p, expect, atol=1e-14)
    rep = stability_sweep(spec)
    dense = np.linalg.eigvals(symbol_A(spec, unit_grid(4096))).real.max()
    assert rep.margin == pytest.approx(-1.0, abs=1e-12)
    assert rep.margin == pytest.approx(dense, abs=1e-12)


def test_unstable_controller_raises():
    spec = decoupled_instance()
    unstable = dataclasses.replace(
        spec, theta1=-J2, M1=spec.M1)  # flips the damping sign
    rep = stability_sweep(unstable)
    assert rep.verdict == "unstable"
    with pytest.raises(NotStabilizing) as exc:
        require_stabilizing(unstable)
    assert exc.value.margin == pytest.approx(rep.margin)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 200))
def test_nested_grids_refine_monotonically(seed):
    spec = random_instance(seed)
    m = [max_real_eig(spec, unit_grid(P)).max() for P in (16, 32, 64, 128)]
    assert all(b >= a for a, b in zip(m, m[1:]))


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 200))
def test_upper_half_circle_suffices(seed):
    spec = random_instance(seed)
    full = max_real_eig(spec, unit_grid(256))
    half = full[: 129]
    assert half.max() == pytest.approx(full.max(), abs=1e-13)


def test_sweep_reports_worst_frequency(spec0):
    rep = stability_sweep(spec0)
    assert abs(abs(rep.worst_z) - 1) < 1e-14
    assert max_real_eig(spec0, rep.worst_z)[0] == pytest.approx(rep.margin)
    assert rep.grid_size >= 64
    d = rep.as_dict()
    assert d["verdict"] == "stable" and d["is_stabilizing"]


def test_margin_curve_shape(spec0):
    phi, m = margin_curve(spec0, 32)
    assert phi.shape == m.shape == (32,)
    assert m.max() <= stability_sweep(spec0).margin + 1e-12


def test_initial_grid_precondition(spec0):
    with pytest.raises(ValueError):
        stability_sweep(spec0, initial_grid=8)
