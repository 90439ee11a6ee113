"""Gradient descent towards a locally optimal controller.

Every accepted step keeps the closed loop stable and lowers the cost, so
the trace is a monotone path through the stabilizing set.
"""
import tinet
from tinet.io import dumps, point_to_dict

spec = tinet.load_spec(tinet.example_path())
cfg = tinet.load_config(tinet.example_path("single_mode_descent.json"))
point, trace = tinet.descend(spec, cfg)

print("termination:", trace.termination_reason,
      "after", trace.iterations, "iterations")
for r in trace.records[:: max(1, trace.iterations // 10)]:
    print("it %4d  cost %.8f  |grad| %.2e  step %.2e  margin %+.4f"
          % (r.iteration, r.cost, r.grad_norm, r.step, r.margin))
last = trace.records[-1]
print("final    cost %.8f  |grad| %.2e" % (last.cost, last.grad_norm))
print("residuals", trace.optimality_residuals)
print("controller:"); print(dumps(point_to_dict(point)))
