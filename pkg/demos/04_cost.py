"""Mean-square cost: finite rings and the infinite-ring limit.

For a ring of ``N`` nodes the cost is an average over the ``N`` roots of
unity.  As ``N`` grows it approaches the infinite-ring cost, a circle mean.
The finite ring sees Fejer-weighted correlations, so the gap shrinks like
``1/N``, not faster.
"""
import numpy as np

import tinet
from tinet.oracle import build_finite, finite_cost_direct

spec = tinet.load_spec(tinet.example_path())
E = tinet.thermo_cost(spec)
print("infinite ring: %.12f  (grid %d, imag residue %.1e)"
      % (E.value, E.grid_size, E.imag_residue))

print("   N      E_N            |E-E_N|     N|E-E_N|")
for N in 2 ** np.arange(3, 12):
    EN = tinet.finite_cost(spec, int(N)).value
    gap = abs(E.value - EN)
    print("%5d  %.12f  %.3e  %.5f" % (N, EN, gap, N * gap))

# the same number from the explicit 8-node ring, no Fourier tricks
net = build_finite(spec, 8)
print("direct N=8: %.12f" % finite_cost_direct(net))
print("via roots : %.12f" % tinet.finite_cost(spec, 8).value)
