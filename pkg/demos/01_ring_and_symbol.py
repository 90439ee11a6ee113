"""A ring of oscillators and its frequency decomposition.

Load the bundled single-mode example, check it, then look at the closed-loop
symbol ``A_z``: the big block-circulant drift of an ``N``-node ring splits
into ``N`` small blocks, one per ``N``-th root of unity.
"""
import numpy as np

import tinet
from tinet.oracle import build_finite, dft_blocks, finite_covariance
from tinet.spectral import symbol_A

spec = tinet.load_spec(tinet.example_path())
print(tinet.validate_spec(spec).as_dict())

d = spec.dims
print("plant modes %d, controller modes %d, ranges d1=%d d2=%d"
      % (d.n1, d.n2, d.d1, d.d2))

# symbol on a few frequencies; conj(z) gives the conjugate matrix
z = tinet.unit_grid(8)
A = symbol_A(spec, z)
print("A at z=1:\n", np.round(A[0].real, 3))
print("conjugate symmetry defect:", np.abs(A[7] - np.conj(A[1])).max())

# explicit ring with N = 8 nodes: its steady-state covariance, rotated by the
# block DFT, is block diagonal with N * S_z on the diagonal
N = 8
net = build_finite(spec, N)
S = finite_covariance(net)
blocks = dft_blocks(net, S)
off = max(np.linalg.norm(blocks[j, k]) for j in range(N) for k in range(N)
          if j != k)
Sz = tinet.spectral_sample(spec, z[3]).Sz
print("ring state dimension", net.dim)
print("largest off-diagonal DFT block", off)
print("diagonal block vs N S_z:", np.linalg.norm(blocks[3, 3] - N * Sz))
