import dataclasses

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from tinet.errors import SingularCcrMatrix
from tinet.network import (J2, ControllerPoint, EnergyBlocks, NetworkSpec,
                           NodeDims, NoiseModel, WeightSequence,
                           b_from_coupling, canonical_theta, coupling_drift,
                           cost_output_matrix, drift_blocks, jdj_selection,
                           output_consistency, validate_spec)

finite = st.floats(-3, 3, allow_nan=False, allow_infinity=False)


def test_dims_reject_nonpositive_modes():
    with pytest.raises(ValueError):
        NodeDims(0, 1, 1, 1)
    with pytest.raises(ValueError):
        NodeDims(1, 1, 1, 1, d1=-1)


def test_canonical_theta_is_antisymmetric_and_squares_to_minus_identity():
    th = canonical_theta(3)
    assert np.array_equal(th, -th.T)
    assert np.array_equal(th @ th, -np.eye(6))


def test_noise_model_omega():
    nm = NoiseModel(2)
    assert np.allclose(nm.J @ nm.J, -np.eye(4))
    assert np.array_equal(nm.Omega, nm.Omega.conj().T)
    assert np.linalg.eigvalsh(nm.Omega).min() > -1e-15


@given(arrays(float, (4, 4), elements=finite))
def test_energy_blocks_store_symmetric_r0(R):
    eb = EnergyBlocks(R)
    assert np.array_equal(eb.R0, eb.R0.T)


@given(arrays(float, (2, 2), elements=finite),
       arrays(float, (2, 2), elements=finite),
       st.floats(0, 2 * np.pi))
def test_energy_symbol_is_hermitian_on_circle(R0, R1, phi):
    eb = EnergyBlocks(R0, (R1,))
    Rz = eb.symbol(np.exp(1j * phi))
    assert np.allclose(Rz, Rz.conj().T, atol=1e-12)


def test_negative_offsets_are_transposes(rng):
    R1 = rng.standard_normal((2, 2))
    eb = EnergyBlocks(np.eye(2), (R1,))
    assert np.array_equal(eb.block(-1), R1.T)
    assert not np.any(eb.block(3))


def test_valid_spec_has_empty_report(example):
    assert validate_spec(example).ok


def test_symmetric_theta_reported_with_magnitude_two(example):
    bad = dataclasses.replace(example, theta1=np.eye(2))
    report = validate_spec(bad)
    assert "theta1 antisymmetry" in report.names()
    v = [v for v in report.violations if v.name == "theta1 antisymmetry"][0]
    assert v.magnitude == 2.0


def test_indefinite_weight_density_reported(example):
    s0 = np.eye(4)
    s1 = 0.8 * np.eye(4)
    # at z = -1 the density is s0 - s1 - s1^T = -0.6 I
    w = WeightSequence((s0, s1))
    lam = np.linalg.eigvalsh(s0 - s1 - s1.T).min()
    assert lam < 0
    report = validate_spec(example.with_weights(w))
    assert "weights psd" in report.names()
    v = [v for v in report.violations if v.name == "weights psd"][0]
    assert v.magnitude == pytest.approx(-lam, rel=1e-9)


def test_range_and_shape_mismatches_reported(example):
    dims = dataclasses.replace(example.dims, d1=3)
    report = validate_spec(dataclasses.replace(example, dims=dims))
    assert "plant range" in report.names()
    report = validate_spec(dataclasses.replace(example, M1=np.eye(3)))
    assert any("M1" in n for n in report.names())


def test_b_from_coupling_examples(rng):
    assert np.array_equal(b_from_coupling(J2, np.eye(2)), 2 * J2)
    assert not np.any(b_from_coupling(J2, np.zeros((2, 2))))
    th = canonical_theta(2) + 0.1 * rng.standard_normal((4, 4))
    th = th - th.T
    M = rng.standard_normal((2, 4))
    expect = np.einsum("ij,kj->ik", th, M) * 2
    assert np.allclose(b_from_coupling(th, M), expect, rtol=1e-14)
    with pytest.raises(ValueError):
        b_from_coupling(J2, np.eye(3))


def test_drift_blocks_zero_and_hamiltonian_cases():
    nm = NoiseModel(1)
    Z = np.zeros((2, 2))
    A = drift_blocks(J2, EnergyBlocks(Z, (Z,)), Z, nm)
    assert all(not np.any(a) for a in A.values())
    A = drift_blocks(J2, EnergyBlocks(np.eye(2)), Z, nm)
    assert np.array_equal(A[0], 2 * J2)


def test_drift_block_scalar_expansion():
    # theta = J, M = I, R0 = I; expand each product entry by entry
    nm = NoiseModel(1)
    B = b_from_coupling(J2, np.eye(2))
    A0 = drift_blocks(J2, EnergyBlocks(np.eye(2)), B, nm)[0]
    j = [[0.0, 1.0], [-1.0, 0.0]]
    jinv = [[0.0, -1.0], [1.0, 0.0]]
    b = [[2 * j[r][c] for c in range(2)] for r in range(2)]

    def mul(x, y):
        return [[sum(x[r][k] * y[k][c] for k in range(2)) for c in range(2)]
                for r in range(2)]

    bt = [[b[c][r] for c in range(2)] for r in range(2)]
    damp = mul(mul(mul(b, j), bt), jinv)
    expect = [[2 * j[r][c] - 0.5 * damp[r][c] for c in range(2)]
              for r in range(2)]
    assert np.array_equal(A0, np.array(expect))
    assert np.array_equal(A0, 2 * J2 - 2 * np.eye(2))


def test_damping_term_times_theta_is_antisymmetric(rng):
    th = canonical_theta(2)
    M = rng.standard_normal((4, 4))
    R0 = rng.standard_normal((4, 4))
    nm = NoiseModel(2)
    B = b_from_coupling(th, M)
    A0 = drift_blocks(th, EnergyBlocks(R0), B, nm)[0]
    D = (A0 - 2 * th @ EnergyBlocks(R0).R0) @ th
    BJB = B @ nm.J @ B.T
    # (A0 - 2 Th R0) Th = -BJB^T / 2, antisymmetric like BJB^T itself
    assert np.allclose(D, -0.5 * BJB, atol=1e-12)
    assert np.linalg.norm(D + D.T) <= 1e-12 * np.linalg.norm(D)
    assert np.allclose(BJB, -BJB.T, atol=1e-12)


def test_singular_theta_rejected():
    with pytest.raises(SingularCcrMatrix):
        drift_blocks(np.zeros((2, 2)), EnergyBlocks(np.eye(2)),
                     np.zeros((2, 2)), NoiseModel(1))


def test_coupling_drift_examples(rng):
    Z = np.zeros((2, 2))
    A1, A2 = coupling_drift(J2, J2, {0: Z})
    assert not np.any(A1[0]) and not np.any(A2[0])
    A1, A2 = coupling_drift(J2, J2, {0: np.eye(2)})
    assert np.array_equal(A2[0], 2 * J2)
    R = rng.standard_normal((2, 2))
    th1 = rng.standard_normal((2, 2))
    th1 = th1 - th1.T
    A1, A2 = coupling_drift(th1, J2, {0: R, 1: R})
    assert np.allclose(A1[1], 2 * np.einsum("ik,kj->ij", th1, R))
    assert np.allclose(A2[0], 2 * np.einsum("ik,jk->ij", J2, R))


def _realizable(rng, n, m, q):
    th = canonical_theta(n)
    M = rng.standard_normal((2 * m, 2 * n))
    nm = NoiseModel(m)
    D = np.zeros((2 * q, 2 * m))
    D[:, :2 * q] = np.eye(2 * q)
    B = b_from_coupling(th, M)
    C = 2 * D @ nm.J @ M
    return th, B, C, D, nm


def test_output_consistency_zero_for_realizable_triples(rng):
    for _ in range(10):
        th, B, C, D, nm = _realizable(rng, 2, 2, 1)
        r = output_consistency(th, B, C, D, nm)
        assert r <= 1e-12 * (np.linalg.norm(B) * np.linalg.norm(D) + 1)


def test_output_consistency_is_linear_in_c_perturbation(rng):
    th, B, C, D, nm = _realizable(rng, 2, 2, 1)
    delta = rng.standard_normal(C.shape)
    r = output_consistency(th, B, C + delta, D, nm)
    assert r == pytest.approx(np.linalg.norm(th @ delta.T), rel=1e-12)


def test_jdj_selection_records_first_channel():
    J = NoiseModel(3).J
    D = np.zeros((2, 6))
    D[:, 2:4] = np.eye(2)
    assert jdj_selection(D, J) == (0, 1)   # all channel blocks of J agree
    assert jdj_selection(np.ones((2, 6)), J) is None
    with pytest.raises(ValueError):
        output_consistency(canonical_theta(1), np.zeros((2, 6)),
                           np.zeros((2, 2)), np.ones((2, 6)), NoiseModel(3))


def test_cost_output_matrix_examples():
    E = cost_output_matrix(1, np.zeros((2, 2)))
    assert np.array_equal(E, np.diag([1.0, 1.0, 0.0, 0.0]))
    assert np.array_equal(cost_output_matrix(1, np.eye(2)), np.eye(4))
    Rt = np.array([[1.0, 2.0], [3.0, 4.0]])
    E = cost_output_matrix(1, Rt)
    assert np.array_equal(E[:2, :2], np.eye(2))
    assert np.array_equal(E[2:, 2:], Rt)
    assert not np.any(E[:2, 2:]) and not np.any(E[2:, :2])


@settings(max_examples=30)
@given(st.integers(0, 2**32 - 1))
def test_controller_vector_round_trip(seed):
    rng = np.random.default_rng(seed)
    R0 = rng.standard_normal((2, 2))
    pt = ControllerPoint(EnergyBlocks(R0, (rng.standard_normal((2, 2)),)),
                         rng.standard_normal((2, 2)))
    back = ControllerPoint.from_vector(pt.to_vector(), pt)
    assert np.array_equal(back.to_vector(), pt.to_vector())
    assert back.is_symmetric()


def test_spec_arrays_are_read_only(example):
    with pytest.raises(ValueError):
        example.M1[0, 0] = 1.0
    assert isinstance(example, NetworkSpec)
