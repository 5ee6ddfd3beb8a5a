"""Canonical JSON / CSV formats for instances, certificates and trajectories.

Rationals are written as "p/q" strings (just "p" for integers), surds as
``{"a": "p/q", "b": "p/q", "c": int}``.  JSON is emitted with sorted keys
and no whitespace so equal objects give byte-identical files.
"""
from __future__ import annotations

import hashlib
import json
import os
import tempfile
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import DimensionMismatch, FormatError
from .gadgets import KINDS, PolytopeInstance, QtInstance
from .matrix import RatMatrix
from .oracles import SingularityCertificate
from .rational import Surd, format_rat, parse_rat


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def _matrix_to_json(m: RatMatrix) -> list:
    return [[format_rat(x) for x in m.row(i)] for i in range(m.rows)]


def _matrix_from_json(obj) -> RatMatrix:
    if not isinstance(obj, list) or not obj or not all(isinstance(r, list) for r in obj):
        raise FormatError("matrix must be a nonempty list of rows")
    width = len(obj[0])
    if width == 0 or any(len(r) != width for r in obj):
        raise DimensionMismatch("ragged matrix rows")
    return RatMatrix.from_rows([[_parse_entry(x) for x in r] for r in obj])


def _parse_entry(x) -> Fraction:
    if isinstance(x, bool) or not isinstance(x, (str, int)):
        raise FormatError(f"rational entries must be strings, got {x!r}")
    return parse_rat(str(x))


def _provenance_to_json(prov: dict | None):
    if not prov:
        return None
    out = {}
    for key, val in prov.items():
        out[key] = format_rat(val) if isinstance(val, Fraction) else val
    return out


def _provenance_from_json(obj):
    if obj is None:
        return None
    if not isinstance(obj, dict):
        raise FormatError("provenance must be an object")
    out = dict(obj)
    if "tau" in out:
        out["tau"] = parse_rat(str(out["tau"]))
    return out


def _instance_obj(inst: PolytopeInstance, with_provenance: bool = True) -> dict:
    obj = {
        "dim": inst.dim,
        "kind": inst.kind,
        "matrices": [_matrix_to_json(m) for m in inst.matrices],
    }
    prov = _provenance_to_json(inst.provenance) if with_provenance else None
    if prov:
        obj["provenance"] = prov
    return obj


def write_instance(inst: PolytopeInstance) -> str:
    return canonical_json(_instance_obj(inst))


def parse_instance(text: str) -> PolytopeInstance:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from exc
    if not isinstance(obj, dict) or "matrices" not in obj:
        raise FormatError("instance must be an object with 'matrices'")
    kind = obj.get("kind", "general")
    if kind not in KINDS:
        raise FormatError(f"unknown kind {kind!r}")
    raw = obj["matrices"]
    if not isinstance(raw, list) or not raw:
        raise FormatError("'matrices' must be a nonempty list")
    mats = tuple(_matrix_from_json(m) for m in raw)
    dim = obj.get("dim", mats[0].rows)
    for m in mats:
        if m.shape != (dim, dim):
            raise DimensionMismatch(f"matrix of shape {m.shape} but dim is {dim}")
    return PolytopeInstance(mats, kind, _provenance_from_json(obj.get("provenance")))


def instance_sha256(inst: PolytopeInstance) -> str:
    """Hash of the canonical instance text without provenance."""
    return hashlib.sha256(canonical_json(_instance_obj(inst, False)).encode()).hexdigest()


def write_qt_instance(q: QtInstance) -> str:
    obj = {"dim": q.n, "kind": "quadratic-threshold", "minv": _matrix_to_json(q.minv)}
    prov = _provenance_to_json(q.provenance)
    if prov:
        obj["provenance"] = prov
    return canonical_json(obj)


def parse_qt_instance(text: str) -> QtInstance:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from exc
    if not isinstance(obj, dict) or obj.get("kind") != "quadratic-threshold":
        raise FormatError("not a quadratic-threshold instance")
    return QtInstance(_matrix_from_json(obj["minv"]), _provenance_from_json(obj.get("provenance")))


def _field_to_json(x):
    if isinstance(x, Surd):
        return format_rat(x.a) if x.is_rational else x.to_json()
    return format_rat(x)


def _field_from_json(x):
    if isinstance(x, dict):
        return Surd.from_json(x)
    return _parse_entry(x)


def write_certificate(cert: SingularityCertificate) -> str:
    return canonical_json({
        "weights": [_field_to_json(x) for x in cert.weights],
        "kernel": [_field_to_json(x) for x in cert.kernel],
        "radicand": cert.radicand,
        "instance_sha256": cert.instance_sha256,
    })


def parse_certificate(text: str) -> SingularityCertificate:
    try:
        obj = json.loads(text)
        weights = tuple(_field_from_json(x) for x in obj["weights"])
        kernel = tuple(_field_from_json(x) for x in obj["kernel"])
        radicand = int(obj.get("radicand", 0))
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise FormatError(f"malformed certificate: {exc}") from exc
    return SingularityCertificate(weights, kernel, radicand, obj.get("instance_sha256"))


def trajectory_csv(times, states) -> str:
    """CSV with header t,x1..x_dim,l2norm and 17 significant digits."""
    states = np.asarray(states, dtype=float)
    dim = states.shape[1]
    lines = [",".join(["t"] + [f"x{i + 1}" for i in range(dim)] + ["l2norm"])]
    for t, x in zip(times, states):
        vals = [t, *x, float(np.linalg.norm(x))]
        lines.append(",".join(f"{v:.17g}" for v in vals))
    return "\n".join(lines) + "\n"


def atomic_write(path, text: str) -> None:
    """Write via a temporary file in the same directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
