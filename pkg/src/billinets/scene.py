"""Scene configuration: a strict JSON schema for family, net and outputs.

Schema (unknown keys are rejected, nested included):

    {
      "semi_axes":    [4, 1],                 required, strictly decreasing > 0
      "lambdas":      [0, -3],                required, pairwise distinct,
                                              none equal to a semi-axis
      "initial_line": {"base": [0, 1],        required, same dimension as
                       "dir":  [1, -1]},      semi_axes, dir nonzero
      "window":       [3, 3],                 required, positive ints, one
                                              entry per lambda
      "tolerances":   {"tol_rank": 1e-9,      optional, defaults shown
                       "tol_cr": 1e-7,
                       "tol_caustic": 1e-8,
                       "tol_forward": 1e-9},
      "output":       {"json": "lattice.json",  optional
                       "svg": "tiling.svg"}
    }
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .confocal import ConfocalFamily
from .errors import ConfigError
from .projective import ProjLine
from .tolerances import Tolerances


@dataclass(frozen=True)
class SceneConfig:
    semi_axes: tuple[float, ...]
    lambdas: tuple[float, ...]
    initial_base: tuple[float, ...]
    initial_dir: tuple[float, ...]
    window: tuple[int, ...]
    tolerances: Tolerances = field(default_factory=Tolerances)
    json_out: str | None = None
    svg_out: str | None = None

    @property
    def d(self) -> int:
        return len(self.semi_axes)

    @property
    def m(self) -> int:
        return len(self.lambdas)

    def family(self) -> ConfocalFamily:
        return ConfocalFamily(self.semi_axes)

    def initial_line(self) -> ProjLine:
        return ProjLine.from_affine(self.initial_base, self.initial_dir)


def _reject_unknown(obj: dict, allowed, where: str):
    for key in obj:
        if key not in allowed:
            raise ConfigError(f"unknown field '{key}' in {where}")


def _number_list(obj, name, min_len=1):
    if not isinstance(obj, list) or len(obj) < min_len \
            or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in obj):
        raise ConfigError(f"'{name}' must be a list of at least {min_len} numbers")
    return [float(x) for x in obj]


def parse_config(text: str) -> SceneConfig:
    """Parse and validate a scene document; defaults applied, unknown or
    invalid fields rejected with the offending field named."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("top-level document must be an object")
    _reject_unknown(doc, {"semi_axes", "lambdas", "initial_line", "window",
                          "tolerances", "output"}, "the document")
    for required in ("semi_axes", "lambdas", "initial_line", "window"):
        if required not in doc:
            raise ConfigError(f"missing required field '{required}'")

    axes = _number_list(doc["semi_axes"], "semi_axes", 2)
    if any(a <= 0 for a in axes):
        raise ConfigError("semi_axes must be positive")
    if any(axes[i] <= axes[i + 1] for i in range(len(axes) - 1)):
        raise ConfigError("semi_axes must be strictly decreasing")

    lambdas = _number_list(doc["lambdas"], "lambdas", 1)
    for i in range(len(lambdas)):
        for j in range(i + 1, len(lambdas)):
            if lambdas[i] == lambdas[j]:
                raise ConfigError("lambdas must be pairwise distinct")
    for lam in lambdas:
        if any(abs(lam - a) <= 1e-9 * max(1.0, abs(a)) for a in axes):
            raise ConfigError(f"lambda {lam} coincides with a semi-axis")

    line = doc["initial_line"]
    if not isinstance(line, dict):
        raise ConfigError("'initial_line' must be an object with 'base' and 'dir'")
    _reject_unknown(line, {"base", "dir"}, "'initial_line'")
    for required in ("base", "dir"):
        if required not in line:
            raise ConfigError(f"missing required field 'initial_line.{required}'")
    base = _number_list(line["base"], "initial_line.base", 2)
    direction = _number_list(line["dir"], "initial_line.dir", 2)
    if len(base) != len(axes) or len(direction) != len(axes):
        raise ConfigError("initial_line dimensions must match semi_axes")
    if not np.any(np.asarray(direction) != 0.0):
        raise ConfigError("initial_line.dir must be nonzero")

    window_raw = doc["window"]
    if not isinstance(window_raw, list) or len(window_raw) != len(lambdas) \
            or not all(isinstance(x, int) and not isinstance(x, bool) for x in window_raw):
        raise ConfigError("'window' must be a list of ints, one per lambda")
    if any(n < 1 for n in window_raw):
        raise ConfigError("window extents must be >= 1")

    tol_kwargs = {}
    if "tolerances" in doc:
        tols = doc["tolerances"]
        if not isinstance(tols, dict):
            raise ConfigError("'tolerances' must be an object")
        _reject_unknown(tols, {"tol_rank", "tol_cr", "tol_caustic", "tol_forward"},
                        "'tolerances'")
        for key, value in tols.items():
            if not isinstance(value, (int, float)) or isinstance(value, bool) or value <= 0:
                raise ConfigError(f"'tolerances.{key}' must be a positive number")
            tol_kwargs[key] = float(value)

    json_out = svg_out = None
    if "output" in doc:
        out = doc["output"]
        if not isinstance(out, dict):
            raise ConfigError("'output' must be an object")
        _reject_unknown(out, {"json", "svg"}, "'output'")
        for key in out:
            if not isinstance(out[key], str) or not out[key]:
                raise ConfigError(f"'output.{key}' must be a non-empty path string")
        json_out = out.get("json")
        svg_out = out.get("svg")

    return SceneConfig(semi_axes=tuple(axes), lambdas=tuple(lambdas),
                       initial_base=tuple(base), initial_dir=tuple(direction),
                       window=tuple(window_raw), tolerances=Tolerances(**tol_kwargs),
                       json_out=json_out, svg_out=svg_out)
