"""Complex Lyapunov equations, the workhorse of every cost evaluation.

``solve_ale`` uses a complex Schur form and a column sweep; the Kronecker
solver is the slow dense reference.
"""
import time

import numpy as np

from tinet import solve_ale, solve_ale_kron

rng = np.random.default_rng(0)
n = 12
A = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
A -= (np.linalg.eigvals(A).real.max() + 0.5) * np.eye(n)   # make Hurwitz
G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
V = G @ G.conj().T

t = time.perf_counter()
X, info = solve_ale(A, V, full_output=True)
t_schur = time.perf_counter() - t
t = time.perf_counter()
Y = solve_ale_kron(A, V)
t_kron = time.perf_counter() - t

print("A X + X A^* + V = 0, order", n)
print("scaled residual   %.2e" % (info.residual / info.scale))
print("vs Kronecker      %.2e" % (np.linalg.norm(X - Y) / np.linalg.norm(Y)))
print("min eigenvalue    %.3f  (PSD forcing gives PSD solution)"
      % np.linalg.eigvalsh(X).min())
print("time schur %.1e s, kron %.1e s" % (t_schur, t_kron))

# the observability side solves A^* Q + Q A + V = 0
Q = solve_ale(A, V, side="observability")
R = A.conj().T @ Q + Q @ A + V
print("observability residual %.2e" % np.linalg.norm(R))
