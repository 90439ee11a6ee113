"""Stability of the infinite ring.

The closed loop is stable when every ``A_z`` on the unit circle is Hurwitz.
``stability_sweep`` refines a frequency grid until the margin settles, and
returns a verdict rather than raising.
"""
import numpy as np

import tinet
from tinet.stability import margin_curve

spec = tinet.load_spec(tinet.example_path())
rep = tinet.stability_sweep(spec)
print(rep.as_dict())

phi, m = margin_curve(spec, 16)
for p, v in zip(phi, m):
    print("phi %5.2f  max Re eig %+.4f" % (p, v))

# scaling up the controller coupling eventually destabilizes the loop
for scale in (1.0, 4.0, 16.0):
    Rt0 = scale * spec.controller.Rt0
    trial = spec.with_controller(
        tinet.ControllerPoint(spec.controller.R2, Rt0))
    r = tinet.stability_sweep(trial)
    print("coupling x%-4g margin %+.4f  %s" % (scale, r.margin, r.verdict))
