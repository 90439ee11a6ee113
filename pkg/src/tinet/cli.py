"""Command-line front end.

Each subcommand loads a spec, calls one library operation, prints a JSON
result to stdout and, when ``--out`` is given, writes plot-ready CSV files
and a ``run_manifest.json`` into that directory.

Exit codes: 0 success, 1 validation failed, 2 malformed input,
3 not stabilizing or inconclusive, 4 no convergence, 5 any other error.
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import os
import sys
import time

import numpy as np

from . import __version__
from .cost import QUAD_POINTS, cost_spectrum, finite_cost, thermo_cost
from .errors import NoConvergence, NotStabilizing, SpecFormatError, TinetError
from .io import (config_to_dict, document_asymmetry, dumps, load_config,
                 point_to_dict, read_json, spec_from_dict, write_text_atomic)
from .network import validate_spec
from .oracle import build_finite, dft_blocks, finite_cost_direct, \
    finite_covariance
from .stability import margin_curve, require_stabilizing
from .synthesis import descend, grad_check

EXIT_OK, EXIT_INVALID, EXIT_FORMAT, EXIT_UNSTABLE, EXIT_NOCONV, EXIT_ERROR = \
    range(6)


class _Run:
    """Collects outputs for the manifest."""

    def __init__(self, args):
        self.args = args
        self.outputs = []
        self.t0 = time.perf_counter()

    def path(self, name):
        return os.path.join(self.args.out, name)

    def write_csv(self, name, header, rows):
        path = self.path(name)
        tmp = path + ".part"
        with open(tmp, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            for row in rows:
                w.writerow([format(v, ".17g") if isinstance(v, float)
                            else v for v in row])
        os.replace(tmp, path)
        self.outputs.append(path)

    def write_json(self, name, obj):
        path = self.path(name)
        write_text_atomic(path, dumps(obj))
        self.outputs.append(path)

    def manifest(self, params):
        if not self.args.out:
            return
        doc = {"inputPath": os.path.abspath(self.args.spec),
               "command": self.args.command,
               "parameters": params,
               "outputPaths": [os.path.abspath(p) for p in self.outputs],
               "toolVersion": __version__,
               "wallTime": time.perf_counter() - self.t0}
        write_text_atomic(self.path("run_manifest.json"), dumps(doc))


def _emit(obj, stream=None):
    (stream or sys.stdout).write(dumps(obj))


def _load(path):
    return spec_from_dict(read_json(path))


def cmd_validate(args, run):
    doc = read_json(args.spec)
    spec = spec_from_dict(doc)
    report = validate_spec(spec)
    for name, mag in document_asymmetry(doc).items():
        report.add(name, mag, "matrix is not symmetric")
    _emit(report.as_dict())
    run.manifest({})
    return EXIT_OK if report.ok else EXIT_INVALID


def cmd_stability(args, run):
    spec = _load(args.spec)
    grid = args.grid or 64
    rep = require_stabilizing(spec, initial_grid=grid)
    if args.out:
        phi, m = margin_curve(spec, max(grid, rep.grid_size))
        run.write_csv("margin_curve.csv", ["phi", "max_real_eig"],
                      zip(phi.tolist(), m.tolist()))
    _emit(rep.as_dict())
    run.manifest({"grid": grid})
    return EXIT_OK


def cmd_cost(args, run):
    spec = _load(args.spec)
    quad = args.quad or QUAD_POINTS
    if args.N is not None:
        require_stabilizing(spec)
        rep = finite_cost(spec, args.N)
        P = args.N
    else:
        rep = thermo_cost(spec, quad_points=quad)
        P = rep.grid_size
    if args.out:
        phi, f = cost_spectrum(spec, P)
        run.write_csv("cost_spectrum.csv", ["phi", "density"],
                      zip(phi.tolist(), f.tolist()))
    _emit(rep.as_dict())
    run.manifest({"N": args.N, "thermo": args.N is None, "quad": quad})
    return EXIT_OK


def cmd_gradcheck(args, run):
    spec = _load(args.spec)
    h = args.h if args.h is not None else 1e-5
    rep = grad_check(spec, h, quad_points=args.quad or QUAD_POINTS)
    out = rep.as_dict()
    out["analytic"] = rep.analytic
    out["numeric"] = rep.numeric
    _emit(out)
    run.manifest({"h": h, "quad": args.quad or QUAD_POINTS})
    return EXIT_OK


def cmd_synthesize(args, run):
    spec = _load(args.spec)
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg = dataclasses.replace(cfg, seed=args.seed)
    point, trace = descend(spec, cfg)
    last = trace.records[-1]
    out = {"terminationReason": trace.termination_reason,
           "iterations": trace.iterations,
           "initialCost": trace.records[0].cost,
           "finalCost": last.cost,
           "initialGradientNorm": trace.records[0].grad_norm,
           "finalGradientNorm": last.grad_norm,
           "stationarityTol": trace.stationarity_tol,
           "optimalityResiduals": trace.optimality_residuals,
           "controller": point_to_dict(point)}
    if args.out:
        run.write_json("controller.json", point_to_dict(point))
        run.write_csv("trace.csv",
                      ["iteration", "cost", "grad_norm", "step", "margin"],
                      ([r.iteration, r.cost, r.grad_norm, r.step, r.margin]
                       for r in trace.records))
    _emit(out)
    run.manifest({"config": os.path.abspath(args.config),
                  "descent": config_to_dict(cfg)})
    return EXIT_OK


def cmd_oracle(args, run):
    spec = _load(args.spec)
    N = args.N if args.N is not None else 8
    net = build_finite(spec, N)
    S = finite_covariance(net)
    blocks = dft_blocks(net, S)
    diag = np.array([np.linalg.norm(blocks[k, k]) for k in range(N)])
    off = max((np.linalg.norm(blocks[j, k]) / diag[j]
               for j in range(N) for k in range(N) if j != k), default=0.0)
    out = {"N": N, "dimension": net.dim,
           "value": finite_cost_direct(net, S),
           "max_offdiagonal_ratio": float(off)}
    _emit(out)
    run.manifest({"N": N})
    return EXIT_OK


COMMANDS = {"validate": cmd_validate, "stability": cmd_stability,
            "cost": cmd_cost, "gradcheck": cmd_gradcheck,
            "synthesize": cmd_synthesize, "oracle": cmd_oracle}


def _positive_int(text):
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _grid_size(text):
    v = int(text)
    if v < 16:
        raise argparse.ArgumentTypeError("grid size must be at least 16")
    return v


def _positive_float(text):
    v = float(text)
    if not v > 0 or not np.isfinite(v):
        raise argparse.ArgumentTypeError("must be a positive finite number")
    return v


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="directory for CSV and manifest output")
    common.add_argument("--seed", type=int, help="seed for randomized steps")

    p = argparse.ArgumentParser(
        prog="tinet", description="Coherent quantum control of "
        "translation-invariant oscillator networks.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", parents=[common], help="check a spec file")
    s.add_argument("spec")

    s = sub.add_parser("stability", parents=[common],
                       help="stability sweep of the closed loop")
    s.add_argument("spec")
    s.add_argument("--grid", type=_grid_size,
                   help="initial grid size (>= 16, default 64)")

    s = sub.add_parser("cost", parents=[common], help="finite or "
                       "infinite-ring cost")
    s.add_argument("spec")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--N", type=_positive_int, help="ring size")
    g.add_argument("--thermo", action="store_true",
                   help="infinite-ring limit (default)")
    s.add_argument("--quad", type=_positive_int,
                   help="initial quadrature points")

    s = sub.add_parser("gradcheck", parents=[common],
                       help="finite-difference gradient check")
    s.add_argument("spec")
    s.add_argument("--h", type=_positive_float, help="difference step")
    s.add_argument("--quad", type=_positive_int, help="quadrature points")

    s = sub.add_parser("synthesize", parents=[common],
                       help="gradient-descent controller synthesis")
    s.add_argument("spec")
    s.add_argument("config", help="descent config JSON")

    s = sub.add_parser("oracle", parents=[common],
                       help="explicit finite-ring cost")
    s.add_argument("spec")
    s.add_argument("--N", type=_positive_int, help="ring size (default 8)")
    return p


def _exit_code(exc):
    if isinstance(exc, SpecFormatError):
        return EXIT_FORMAT
    if isinstance(exc, NotStabilizing):
        return EXIT_UNSTABLE
    if isinstance(exc, NoConvergence):
        return EXIT_NOCONV
    return EXIT_ERROR


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
    run = _Run(args)
    try:
        return COMMANDS[args.command](args, run)
    except TinetError as exc:
        _emit(exc.as_dict())
        return _exit_code(exc)
    except (ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
        _emit({"error": type(exc).__name__, "message": str(exc)})
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
