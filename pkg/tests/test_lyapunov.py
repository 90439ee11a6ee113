import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tinet.errors import NotHurwitz
from tinet.lyapunov import (TOL_ALE, ale_residual, solve_ale, solve_ale_batch,
                            solve_ale_kron)


def random_hurwitz(rng, n, shift=0.2):
    A = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    lam = np.linalg.eigvals(A).real.max()
    return A - (lam + shift) * np.eye(n)


def random_psd(rng, n, rank=None):
    G = rng.standard_normal((n, rank or n)) + 1j * rng.standard_normal((n, rank or n))
    return G @ G.conj().T


def test_half_identity_returns_forcing(rng):
    V = random_psd(rng, 4) - 2 * np.eye(4)
    X = solve_ale(-0.5 * np.eye(4), V)
    assert np.allclose(X, V, atol=1e-14)


def test_diagonal_example():
    X = solve_ale(np.diag([-1.0, -2.0]), np.eye(2))
    assert np.allclose(X, np.diag([0.5, 0.25]), atol=1e-15)


def test_matches_kronecker_oracle_order_six(rng):
    A = random_hurwitz(rng, 6)
    V = random_psd(rng, 6)
    for side in ("controllability", "observability"):
        X = solve_ale(A, V, side)
        Y = solve_ale_kron(A, V, side)
        assert np.linalg.norm(X - Y) <= 1e-10 * np.linalg.norm(Y)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 12), st.integers(0, 2**32 - 1),
       st.sampled_from(["controllability", "observability"]))
def test_agreement_residual_and_psd(n, seed, side):
    rng = np.random.default_rng(seed)
    A = random_hurwitz(rng, n, shift=0.05 + rng.random())
    V = random_psd(rng, n, rank=max(1, n // 2))
    X, info = solve_ale(A, V, side, full_output=True)
    Y = solve_ale_kron(A, V, side)
    assert np.linalg.norm(X - Y) <= 1e-9 * np.linalg.norm(Y)
    assert info.residual <= TOL_ALE * info.scale
    assert ale_residual(A, X, V, side) == pytest.approx(info.residual)
    assert np.array_equal(X, X.conj().T)
    assert np.linalg.eigvalsh(X).min() >= -1e-10 * max(1, np.linalg.norm(X))
    assert info.hermitian_defect <= 1e-8 * np.linalg.norm(X)


def test_not_hurwitz_reports_eigenvalue():
    with pytest.raises(NotHurwitz) as exc:
        solve_ale(np.diag([-1.0, 0.3]), np.eye(2))
    assert exc.value.max_real == pytest.approx(0.3)
    with pytest.raises(NotHurwitz):
        solve_ale(np.zeros((2, 2)), np.eye(2))


def test_shape_and_side_checks():
    with pytest.raises(ValueError):
        solve_ale(-np.eye(2), np.eye(3))
    with pytest.raises(ValueError):
        solve_ale(-np.eye(2), np.eye(2), side="sideways")


def test_batch_matches_single_solves(rng):
    A = np.stack([random_hurwitz(rng, 5) for _ in range(7)])
    V = random_psd(rng, 5)
    for side in ("controllability", "observability"):
        Xb = solve_ale_batch(A, V, side)
        for k in range(len(A)):
            assert np.allclose(Xb[k], solve_ale(A[k], V, side),
                               rtol=1e-12, atol=1e-12)


def test_batch_detects_unstable_member(rng):
    A = np.stack([random_hurwitz(rng, 3) for _ in range(4)])
    A[2] += 5 * np.eye(3)
    with pytest.raises(NotHurwitz):
        solve_ale_batch(A, np.eye(3))
