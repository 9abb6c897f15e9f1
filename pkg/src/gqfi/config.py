"""Flat ``key = value`` run configuration.

One assignment per line, ``#`` starts a comment, keys use dotted sections::

    preset = fig6f
    model.name = trapped_nonreciprocal
    model.dphi = -pi/2
    sweep.M_list = 30..60        # inclusive range, optional step: 30..60:2
    output.prefix = nonrecip

Values are Python literals (numbers, strings, lists), arithmetic on numbers
and ``pi``, inclusive ranges ``a..b[:step]``, or bare words taken as
strings.
"""

from __future__ import annotations

import ast
import math
import operator
import re
from typing import Any

from .errors import ConfigError

MODES = ("trajectory", "sweep", "asymptotics", "validate", "bounds", "dephasing", "skin")

# key -> expected type; model.* keys are checked against the chosen builder
SCHEMA: dict[str, type | tuple] = {
    "preset": str,
    "mode": str,
    "model.name": str,
    "integrator.dt": float,
    "integrator.t_max": float,
    "integrator.scheme": str,
    "integrator.record_stride": int,
    "sweep.M_list": list,
    "sweep.dphi_list": list,
    "output.dir": str,
    "output.prefix": str,
    "output.extra": list,
    "validate.t": float,
    "validate.cutoff": int,
    "validate.eps": float,
    "validate.dt": float,
    "validate.tol": float,
    "skin.t_R": float,
    "skin.t_L": float,
    "skin.w": float,
    "skin.L_list": list,
    "bounds.tolerance": float,
}

_RANGE = re.compile(r"^\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*(?::\s*(\d+))?\s*$")
_OPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
        ast.Div: operator.truediv, ast.Pow: operator.pow, ast.USub: operator.neg,
        ast.UAdd: operator.pos}


def _eval_node(node: ast.AST) -> Any:
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float, str, bool)):
        return node.value
    if isinstance(node, ast.Name) and node.id == "pi":
        return math.pi
    if isinstance(node, ast.Name) and node.id in ("inf", "nan"):
        return float(node.id)
    if isinstance(node, ast.UnaryOp) and type(node.op) in _OPS:
        return _OPS[type(node.op)](_eval_node(node.operand))
    if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
        return _OPS[type(node.op)](_eval_node(node.left), _eval_node(node.right))
    if isinstance(node, (ast.List, ast.Tuple)):
        return [_eval_node(e) for e in node.elts]
    raise ValueError("unsupported expression")


def parse_value(text: str) -> Any:
    """Interpret the right-hand side of one assignment."""
    text = text.strip()
    m = _RANGE.match(text)
    if m:
        lo, hi, step = int(m[1]), int(m[2]), int(m[3] or 1)
        return list(range(lo, hi + 1, step))
    try:
        return _eval_node(ast.parse(text, mode="eval").body)
    except (SyntaxError, ValueError, ZeroDivisionError, TypeError):
        return text


def parse_config_text(text: str) -> dict[str, Any]:
    """Parse configuration text into a flat dict.

    Raises
    ------
    ConfigError
        On malformed lines or duplicate keys.
    """
    out: dict[str, Any] = {}
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {no}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if not key or not re.fullmatch(r"[A-Za-z_][\w.]*", key):
            raise ConfigError(f"line {no}: bad key {key!r}")
        if key in out:
            raise ConfigError(f"line {no}: duplicate key {key!r}")
        out[key] = parse_value(value)
    return out


def load_config(path: str) -> dict[str, Any]:
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_config_text(fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc


def _coerce(key: str, value: Any, kind) -> Any:
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{key}: expected a number, got {value!r}")
        value = float(value)
        if not math.isfinite(value):
            raise ConfigError(f"{key}: must be finite")
        return value
    if kind is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{key}: expected an integer, got {value!r}")
        return value
    if kind is list:
        if not isinstance(value, list):
            value = [value]
        return value
    if kind is str:
        return str(value)
    return value


def validate(cfg: dict[str, Any], model_keys: set[str] | None) -> dict[str, Any]:
    """Type-check keys; unknown keys are rejected.

    Parameters
    ----------
    cfg : dict
    model_keys : set of str or None
        Parameters accepted by the selected model builder.
    """
    out: dict[str, Any] = {}
    for key, value in cfg.items():
        if key.startswith("model.") and key != "model.name":
            name = key.split(".", 1)[1]
            if model_keys is None or name not in model_keys:
                raise ConfigError(f"unknown model parameter {key!r}")
            if name in ("M",):
                out[key] = _coerce(key, value, int)
            elif name in ("coupling",):
                out[key] = _coerce(key, value, str)
            else:
                out[key] = _coerce(key, value, float)
            continue
        if key not in SCHEMA:
            raise ConfigError(f"unknown key {key!r}")
        out[key] = _coerce(key, value, SCHEMA[key])
    if "mode" in out and out["mode"] not in MODES:
        raise ConfigError(f"mode must be one of {MODES}")
    for key in ("sweep.M_list", "skin.L_list"):
        if key in out:
            if not out[key]:
                raise ConfigError(f"{key} is empty")
            for v in out[key]:
                if isinstance(v, bool) or not isinstance(v, int) or v < 1:
                    raise ConfigError(f"{key}: entries must be positive integers")
    if "sweep.dphi_list" in out:
        out["sweep.dphi_list"] = [_coerce("sweep.dphi_list", v, float)
                                  for v in out["sweep.dphi_list"]]
    return out


def render(cfg: dict[str, Any]) -> list[str]:
    """Sorted ``key = value`` lines with round-trip float formatting."""
    def fmt(v):
        if isinstance(v, float):
            return repr(v)
        if isinstance(v, list):
            return "[" + ", ".join(fmt(x) for x in v) + "]"
        return str(v)
    return [f"{k} = {fmt(cfg[k])}" for k in sorted(cfg)]
