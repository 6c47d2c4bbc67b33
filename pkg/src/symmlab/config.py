"""JSON experiment configuration: schema, validation and conversion.

A configuration is one JSON object::

    {
      "grid":   {"half_width": 2.0, "resolution": 512},        # optional
      "shape":  {"type": "rect", "lo": [0, 0], "hi": [1, 1]},
      "kernel": {"type": "iid_polar", "sigma": 1.0},
      "steps":  500,
      "trials": 20,                                          # optional, 1
      "seed":   0,                                           # optional, 0
      "output": {"dir": "out", "frame_every": 50}            # optional
    }

Unknown keys are rejected everywhere.  Shape and kernel objects are selected
by their ``type`` field; see :data:`SHAPE_SCHEMAS` and :data:`KERNEL_SCHEMAS`.
"""

from __future__ import annotations

import json
from typing import Any

import jsonschema

from . import markov
from .errors import (
    ConstraintViolation,
    InvalidSpec,
    MalformedShape,
    NonPositiveWindow,
    OddOrTinyResolution,
    SchemaError,
    UnknownKernel,
)
from .geometry import Annulus, Difference, Disk, HalfDisk, Rect, Union
from .harness import ExperimentConfig

__all__ = ["parse_config", "load_config", "TOP_SCHEMA", "SHAPE_SCHEMAS", "KERNEL_SCHEMAS"]

DEFAULT_HALF_WIDTH = 2.0
DEFAULT_RESOLUTION = 512

_num = {"type": "number"}
_pos = {"type": "number", "exclusiveMinimum": 0}
_vec = {"type": "array", "items": _num, "minItems": 2, "maxItems": 2}
_typed = {"type": "object", "required": ["type"], "properties": {"type": {"type": "string"}}}
_kind = {"enum": ["cap", "polar"]}


def _obj(required, **props):
    props = {"type": {"type": "string"}, **props}
    return {"type": "object", "additionalProperties": False, "required": ["type", *required], "properties": props}


TOP_SCHEMA: dict[str, Any] = {
    "type": "object",
    "additionalProperties": False,
    "required": ["shape", "kernel", "steps"],
    "properties": {
        "grid": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"half_width": _pos, "resolution": {"type": "integer"}},
        },
        "shape": _typed,
        "kernel": _typed,
        "steps": {"type": "integer", "minimum": 1},
        "trials": {"type": "integer", "minimum": 1},
        "seed": {"type": "integer", "minimum": 0},
        "output": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "dir": {"type": "string"},
                "frame_every": {"type": ["integer", "null"], "minimum": 1},
            },
        },
    },
}

SHAPE_SCHEMAS: dict[str, dict] = {
    "disk": _obj(["center", "radius"], center=_vec, radius=_num),
    "rect": _obj(["lo", "hi"], lo=_vec, hi=_vec),
    "annulus": _obj(["center", "r_in", "r_out"], center=_vec, r_in=_num, r_out=_num),
    "half_disk": _obj(["radius"], radius=_num, sign={"enum": [1, -1]}),
    "union": _obj(["parts"], parts={"type": "array", "items": _typed}),
    "difference": _obj(["a", "b"], a=_typed, b=_typed),
}

KERNEL_SCHEMAS: dict[str, tuple[dict, type]] = {
    "iid_polar": (_obj([], sigma=_num), markov.IidPolar),
    "proj_ball_walk": (_obj([], rho=_num), markov.ProjBallWalk),
    "kronecker": (_obj([], alpha=_num, theta0=_num), markov.Kronecker),
    "enumerated_dense": (_obj([], seed={"type": "integer"}), markov.EnumeratedDense),
    "mult_walk_cap": (_obj([], log_sigma=_num, kind=_kind), markov.MultWalkCap),
    "reflected_walk_cap": (_obj([], mean=_num, std=_num, delta=_num, kind=_kind), markov.ReflectedWalkCap),
    "sharp_product": (
        _obj([], beta_plus=_num, beta_minus=_num, mean=_num, std=_num, delta=_num),
        markov.SharpProduct,
    ),
    "sharp_failing": (_obj([], sigma=_num), markov.SharpFailing),
}


def _validate(doc, schema, path: str) -> None:
    validator = jsonschema.Draft202012Validator(schema)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        sub = "".join(f"[{p}]" if isinstance(p, int) else f".{p}" for p in err.absolute_path)
        raise SchemaError(f"{path}{sub}".lstrip("."), err.message)


def _shape(doc, path: str):
    _validate(doc, _typed, path)
    kind = doc["type"]
    if kind not in SHAPE_SCHEMAS:
        raise SchemaError(f"{path}.type", f"unknown shape type {kind!r}")
    _validate(doc, SHAPE_SCHEMAS[kind], path)
    try:
        if kind == "disk":
            return Disk(tuple(doc["center"]), doc["radius"])
        if kind == "rect":
            return Rect(tuple(doc["lo"]), tuple(doc["hi"]))
        if kind == "annulus":
            return Annulus(tuple(doc["center"]), doc["r_in"], doc["r_out"])
        if kind == "half_disk":
            return HalfDisk(doc["radius"], doc.get("sign", 1))
        if kind == "union":
            return Union(tuple(_shape(p, f"{path}.parts[{i}]") for i, p in enumerate(doc["parts"])))
        return Difference(_shape(doc["a"], f"{path}.a"), _shape(doc["b"], f"{path}.b"))
    except MalformedShape as exc:
        raise ConstraintViolation(f"{path}: {exc}") from exc


def _kernel(doc, path: str):
    _validate(doc, _typed, path)
    kind = doc["type"]
    if kind not in KERNEL_SCHEMAS:
        raise UnknownKernel(f"{path}.type: unknown kernel {kind!r}; expected one of {sorted(KERNEL_SCHEMAS)}")
    schema, cls = KERNEL_SCHEMAS[kind]
    _validate(doc, schema, path)
    spec = cls(**{k: v for k, v in doc.items() if k != "type"})
    try:
        markov.build_kernel(spec)
    except InvalidSpec as exc:
        raise ConstraintViolation(f"{path}: {exc}") from exc
    return spec


def parse_config(text: str) -> ExperimentConfig:
    """Parse and validate a JSON configuration, filling defaults."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("", f"invalid JSON: {exc}") from exc
    _validate(doc, TOP_SCHEMA, "")
    grid = doc.get("grid", {})
    output = doc.get("output", {})
    try:
        cfg = ExperimentConfig(
            shape=_shape(doc["shape"], "shape"),
            kernel=_kernel(doc["kernel"], "kernel"),
            steps=doc["steps"],
            trials=doc.get("trials", 1),
            seed=doc.get("seed", 0),
            half_width=grid.get("half_width", DEFAULT_HALF_WIDTH),
            resolution=grid.get("resolution", DEFAULT_RESOLUTION),
            out_dir=output.get("dir"),
            frame_every=output.get("frame_every"),
        )
        cfg.grid  # validates the window
    except (NonPositiveWindow, OddOrTinyResolution) as exc:
        raise ConstraintViolation(f"grid: {exc}") from exc
    return cfg


def load_config(path) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())
