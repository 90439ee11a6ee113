import numpy as np
import pytest

from tinet.cost import finite_cost, spectral_sample
from tinet.instances import decoupled_instance
from tinet.network import WeightSequence
from tinet.oracle import (build_finite, dft_blocks, dft_matrix,
                          finite_cost_direct, finite_covariance,
                          shift_matrix)
from tinet.spectral import symbol_A, unit_grid


def test_no_offsets_gives_block_diagonal_ring():
    spec = decoupled_instance(0.4)
    net = build_finite(spec, 3)
    assert np.allclose(net.Afull, np.kron(np.eye(3), symbol_A(spec, 1.0)))


def test_block_circulant(spec0):
    net = build_finite(spec0, 8)
    Pi = shift_matrix(net)
    comm = net.Afull @ Pi - Pi @ net.Afull
    assert np.linalg.norm(comm) <= 1e-12 * np.linalg.norm(net.Afull)
    W = net.weightToeplitz
    assert np.array_equal(W, W.T)


@pytest.mark.parametrize("N", [4, 8])
def test_dft_block_diagonalizes(spec0, N):
    net = build_finite(spec0, N)
    F = dft_matrix(N, net.node_size) / np.sqrt(N)
    D = F @ net.Afull @ F.conj().T
    s = net.node_size
    z = unit_grid(N)
    for j in range(N):
        for k in range(N):
            blk = D[j * s:(j + 1) * s, k * s:(k + 1) * s]
            if j == k:
                assert np.allclose(blk, symbol_A(spec0, z[j]), atol=1e-10)
            else:
                assert np.abs(blk).max() <= 1e-10


def test_small_ring_rejected(spec0):
    with pytest.raises(ValueError):
        build_finite(spec0, 2)
    with pytest.raises(ValueError):
        build_finite(spec0, 100)   # beyond the dimension cap


def test_single_node_covariance_is_density_at_one():
    spec = decoupled_instance(0.9)
    net = build_finite(spec, 1)
    S = finite_covariance(net)
    assert np.allclose(S, spectral_sample(spec, 1.0).Sz, atol=1e-14)
    E, w = spec.E, spec.weights.sigma[0]
    assert finite_cost_direct(net, S) == pytest.approx(
        np.trace(w @ E @ S @ E.T).real, rel=1e-14)


def test_dft_block_diagonalization_at_eight_nodes(spec0):
    net = build_finite(spec0, 8)
    S = finite_covariance(net)
    blocks = dft_blocks(net, S)
    z = unit_grid(8)
    for j in range(8):
        Sz = spectral_sample(spec0, z[j]).Sz
        diag = blocks[j, j]
        assert np.linalg.norm(diag - 8 * Sz) <= 1e-8 * np.linalg.norm(diag)
        for k in range(8):
            if k != j:
                assert np.linalg.norm(blocks[j, k]) <= \
                    1e-8 * np.linalg.norm(diag)


def test_real_part_is_a_covariance(spec0):
    S = finite_covariance(build_finite(spec0, 4))
    R = S.real
    assert np.array_equal(R, R.T)
    assert np.linalg.eigvalsh(R).min() >= -1e-10 * np.linalg.norm(R)
    # the imaginary part is the antisymmetric commutator contribution
    assert np.allclose(S.imag, -S.imag.T)


def test_zero_weights_direct_cost(spec0):
    q = spec0.weights.size
    spec = spec0.with_weights(WeightSequence((np.zeros((q, q)),)))
    assert finite_cost_direct(build_finite(spec, 8)) == 0.0


@pytest.mark.parametrize("N", [8, 16, 32])
def test_direct_cost_equals_frequency_sum(instances, N):
    for spec in instances[:3]:
        direct = finite_cost_direct(build_finite(spec, N))
        spectral = finite_cost(spec, N).value
        assert spectral == pytest.approx(direct, rel=1e-8)
