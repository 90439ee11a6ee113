"""Exact gradients of the cost in the controller parameters.

The controller is described by its energy blocks ``R_{2,l}`` and the
coupling ``Rt_0``.  The gradients come from one pair of Lyapunov solves per
frequency; here they are checked against central differences.
"""
import numpy as np

import tinet

spec = tinet.load_spec(tinet.example_path())
ev = tinet.evaluate(spec)
for l, G in enumerate(ev.grad_R2):
    print("dE/dR2_%d =\n" % l, np.round(G, 5))
print("dE/dRt0 =\n", np.round(ev.grad_Rt0, 5))
print("optimality residuals", ev.optimality_residuals)

for h in (1e-3, 1e-4, 1e-5):
    rep = tinet.grad_check(spec, h)
    print("h=%.0e  max rel error %.2e  blocks %s"
          % (h, rep.max_rel_error,
             {k: "%.1e" % v for k, v in rep.block_errors.items()}))
