"""JSON reading and writing for specs, controller points and configs.

Spec document layout (matrices are row-major nested lists)::

    {
      "dims": {"n1": 1, "n2": 1, "m1": 1, "m2": 1,
               "d1": 1, "d2": 1, "dTilde": 0},
      "theta1": [[0, 1], [-1, 0]],          # optional, canonical default
      "theta2": [[0, 1], [-1, 0]],          # optional
      "plant": {"R0": ..., "R1": ...},      # R0 .. R_d1
      "M1": ..., "M2": ...,
      "weights": {"sigma0": ..., "sigma1": ...},
      "controller": {"R0": ..., "R1": ..., "Rt0": ...,
                     "Rt1": ..., "Rt-1": ...}
    }

Coupling blocks at nonzero offsets use the keys ``"Rt<l>"`` with a signed
integer ``l``.  Parsing rejects NaN and infinities.  Output is deterministic:
keys in a fixed order and every float printed with 17 significant digits.
"""
from __future__ import annotations

import json
import math
import os
import re
import tempfile
from importlib import resources

import numpy as np

from .errors import SpecFormatError
from .network import (ControllerPoint, EnergyBlocks, NetworkSpec, NodeDims,
                      WeightSequence, canonical_theta)
from .synthesis import DescentConfig

__all__ = ["loads_json", "load_spec", "spec_from_dict", "spec_to_dict",
           "dump_spec", "document_asymmetry", "point_from_dict",
           "point_to_dict", "load_point", "dump_point", "config_from_dict",
           "config_to_dict", "load_config", "dumps", "read_json",
           "write_text_atomic", "example_path"]

_DIM_KEYS = (("n1", "n1"), ("n2", "n2"), ("m1", "m1"), ("m2", "m2"),
             ("d1", "d1"), ("d2", "d2"), ("dTilde", "d_tilde"))
_CFG_KEYS = (("maxIters", "max_iters", int),
             ("initStep", "init_step", float),
             ("backtrackFactor", "backtrack_factor", float),
             ("armijoC", "armijo_c", float),
             ("stationarityTol", "stationarity_tol", float),
             ("seed", "seed", int),
             ("jitter", "jitter", float),
             ("quadPoints", "quad_points", int),
             ("bbSteps", "bb_steps", bool))


def _reject_constant(name):
    raise SpecFormatError("non-finite number %r is not allowed" % name)


def loads_json(text):
    """Parse JSON text, mapping syntax errors to :class:`SpecFormatError`."""
    try:
        return json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise SpecFormatError("malformed JSON at line %d column %d: %s"
                              % (exc.lineno, exc.colno, exc.msg)) from exc


def read_json(path):
    """Parse a JSON file; unreadable or malformed files raise SpecFormatError."""
    try:
        with open(path, encoding="utf-8") as fh:
            return loads_json(fh.read())
    except OSError as exc:
        raise SpecFormatError("cannot read %s: %s" % (path, exc)) from exc


def _matrix(value, name):
    try:
        a = np.array(value, dtype=float)
    except (TypeError, ValueError) as exc:
        raise SpecFormatError("%s is not a numeric matrix" % name) from exc
    if a.ndim != 2:
        raise SpecFormatError("%s must be a 2-D nested list, got %d-D"
                              % (name, a.ndim))
    if not np.all(np.isfinite(a)):
        raise SpecFormatError("%s contains non-finite entries" % name)
    return a


def _obj(doc, key, where="spec"):
    if not isinstance(doc, dict):
        raise SpecFormatError("%s must be a JSON object" % where)
    if key not in doc:
        raise SpecFormatError("%s is missing %r" % (where, key))
    return doc[key]


def _indexed(doc, prefix, where):
    """Blocks keyed ``prefix0, prefix1, ...`` as a contiguous list."""
    pat = re.compile(r"^%s(\d+)$" % re.escape(prefix))
    found = {}
    for key, val in doc.items():
        m = pat.match(key)
        if m:
            found[int(m.group(1))] = _matrix(val, "%s.%s" % (where, key))
    if 0 not in found:
        raise SpecFormatError("%s is missing %r" % (where, prefix + "0"))
    if sorted(found) != list(range(len(found))):
        raise SpecFormatError("%s blocks must be contiguous from %s0"
                              % (where, prefix))
    return [found[k] for k in range(len(found))]


def point_from_dict(doc, where="controller"):
    if not isinstance(doc, dict):
        raise SpecFormatError("%s must be a JSON object" % where)
    allowed = re.compile(r"^(R\d+|Rt-?\d+)$")
    for key in doc:
        if not allowed.match(key):
            raise SpecFormatError("%s has unknown key %r" % (where, key))
    R = _indexed(doc, "R", where)
    Rt0 = _matrix(_obj(doc, "Rt0", where), where + ".Rt0")
    coupling = {}
    for key, val in doc.items():
        m = re.match(r"^Rt(-?\d+)$", key)
        if m and int(m.group(1)) != 0:
            coupling[int(m.group(1))] = _matrix(val, "%s.%s" % (where, key))
    try:
        return ControllerPoint(EnergyBlocks(R[0], tuple(R[1:])), Rt0,
                               coupling)
    except ValueError as exc:
        raise SpecFormatError("%s: %s" % (where, exc)) from exc


def spec_from_dict(doc):
    """Build a :class:`NetworkSpec` from a parsed JSON document.

    Only the document structure is checked here; physical consistency is
    the job of :func:`tinet.network.validate_spec`.
    """
    d = _obj(doc, "dims")
    try:
        kw = {attr: int(_obj(d, key, "dims")) for key, attr in _DIM_KEYS
              if key in d or key != "dTilde"}
        dims = NodeDims(**kw)
    except (TypeError, ValueError) as exc:
        raise SpecFormatError("dims: %s" % exc) from exc
    theta1 = (_matrix(doc["theta1"], "theta1") if "theta1" in doc
              else canonical_theta(dims.n1))
    theta2 = (_matrix(doc["theta2"], "theta2") if "theta2" in doc
              else canonical_theta(dims.n2))
    plant_doc = _obj(doc, "plant")
    if not isinstance(plant_doc, dict):
        raise SpecFormatError("plant must be a JSON object")
    P = _indexed(plant_doc, "R", "plant")
    w_doc = _obj(doc, "weights")
    if not isinstance(w_doc, dict):
        raise SpecFormatError("weights must be a JSON object")
    sig = _indexed(w_doc, "sigma", "weights")
    try:
        plant = EnergyBlocks(P[0], tuple(P[1:]))
        weights = WeightSequence(tuple(sig))
    except ValueError as exc:
        raise SpecFormatError(str(exc)) from exc
    return NetworkSpec(dims, theta1, theta2, plant,
                       _matrix(_obj(doc, "M1"), "M1"),
                       _matrix(_obj(doc, "M2"), "M2"), weights,
                       point_from_dict(_obj(doc, "controller")))


def load_spec(path) -> NetworkSpec:
    return spec_from_dict(read_json(path))


def document_asymmetry(doc):
    """Asymmetry of the symmetric blocks as written in a spec document.

    The containers symmetrize ``R0`` and ``sigma0`` on construction, so a
    validator must look at the raw document to see the original defect.
    Returns ``{name: max|X - X^T|}`` for the blocks that are not symmetric.
    """
    out = {}
    for where, key in (("plant", "R0"), ("controller", "R0"),
                       ("weights", "sigma0")):
        try:
            a = np.array(doc[where][key], dtype=float)
        except (KeyError, TypeError, ValueError):
            continue
        if a.ndim == 2 and a.shape[0] == a.shape[1]:
            asym = float(np.max(np.abs(a - a.T), initial=0.0))
            if asym > 0:
                out["%s %s symmetry" % (where, key)] = asym
    return out


def load_point(path) -> ControllerPoint:
    return point_from_dict(read_json(path))


def point_to_dict(point: ControllerPoint):
    out = {"R0": point.R2.R0}
    for ell, R in enumerate(point.R2.Rpos, start=1):
        out["R%d" % ell] = R
    out["Rt0"] = point.Rt0
    for ell in sorted(point.coupling, key=lambda k: (abs(k), -k)):
        out["Rt%d" % ell] = point.coupling[ell]
    return out


def spec_to_dict(spec: NetworkSpec):
    d = spec.dims
    plant = {"R0": spec.plant.R0}
    for ell, R in enumerate(spec.plant.Rpos, start=1):
        plant["R%d" % ell] = R
    return {
        "dims": {key: getattr(d, attr) for key, attr in _DIM_KEYS},
        "theta1": spec.theta1,
        "theta2": spec.theta2,
        "plant": plant,
        "M1": spec.M1,
        "M2": spec.M2,
        "weights": {"sigma%d" % k: s for k, s in
                    enumerate(spec.weights.sigma)},
        "controller": point_to_dict(spec.controller),
    }


def config_from_dict(doc) -> DescentConfig:
    if not isinstance(doc, dict):
        raise SpecFormatError("descent config must be a JSON object")
    known = {k for k, _, _ in _CFG_KEYS}
    for key in doc:
        if key not in known:
            raise SpecFormatError("descent config has unknown key %r" % key)
    kw = {}
    for key, attr, typ in _CFG_KEYS:
        if key in doc and doc[key] is not None:
            try:
                kw[attr] = typ(doc[key])
            except (TypeError, ValueError) as exc:
                raise SpecFormatError("%s: %s" % (key, exc)) from exc
    try:
        return DescentConfig(**kw)
    except ValueError as exc:
        raise SpecFormatError(str(exc)) from exc


def load_config(path) -> DescentConfig:
    return config_from_dict(read_json(path))


def config_to_dict(cfg: DescentConfig):
    return {key: getattr(cfg, attr) for key, attr, _ in _CFG_KEYS}


# ---------------------------------------------------------------------------
# Deterministic writer

def _float(x):
    x = float(x)
    if not math.isfinite(x):
        raise ValueError("cannot serialize non-finite value %r" % x)
    s = format(x, ".17g")
    if s == "-0":
        s = "0"
    return s


def _scalar(x):
    if x is None:
        return "null"
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return _float(x)
    if isinstance(x, str):
        return json.dumps(x)
    raise TypeError("cannot serialize %r" % type(x).__name__)


def _dump(x, level):
    pad = "  " * (level + 1)
    if isinstance(x, np.ndarray):
        x = x.tolist()
    if isinstance(x, dict):
        if not x:
            return "{}"
        items = ["%s%s: %s" % (pad, json.dumps(str(k)), _dump(v, level + 1))
                 for k, v in x.items()]
        return "{\n" + ",\n".join(items) + "\n" + "  " * level + "}"
    if isinstance(x, (list, tuple)):
        if not x:
            return "[]"
        if all(not isinstance(v, (list, tuple, dict, np.ndarray)) for v in x):
            return "[" + ", ".join(_scalar(v) for v in x) + "]"
        items = [pad + _dump(v, level + 1) for v in x]
        return "[\n" + ",\n".join(items) + "\n" + "  " * level + "]"
    return _scalar(x)


def dumps(obj):
    """Serialize to JSON text with 17 significant digits for floats.

    Dict order is preserved, so callers control key order; innermost lists
    stay on one line.
    """
    return _dump(obj, 0) + "\n"


def write_text_atomic(path, text):
    """Write ``text`` to ``path`` through a temporary file and ``os.replace``."""
    path = os.fspath(path)
    folder = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=folder, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def dump_spec(spec: NetworkSpec, path):
    write_text_atomic(path, dumps(spec_to_dict(spec)))


def dump_point(point: ControllerPoint, path):
    write_text_atomic(path, dumps(point_to_dict(point)))


def example_path(name="single_mode.json"):
    """Filesystem path of a bundled example file."""
    return str(resources.files("tinet") / "data" / name)
