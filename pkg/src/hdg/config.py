"""Job configuration for the command-line front end.

A job is one JSON document; command-line flags override its fields.  Schema
violations are reported with the line of the offending value.
"""

from __future__ import annotations

import csv
import io
import json
import math
import re
from dataclasses import dataclass, field
from json.decoder import scanstring
from typing import Any, Sequence

import jsonschema

from .diff import ACCURATE, DEFAULT, DiffConfig
from .errors import HDGError
from .expr import VARIABLES, EvalError, Expression, ParseError, default_params, evaluate, parse

KINDS = ("frame", "cr-check", "cr-check-polar", "forms", "regular", "eval")
CONSTRAINT_PARAMS = ("t", "u", "v", "w")
CARTESIAN = ("x0", "x1", "x2", "x3")
POLAR = ("rho", "theta", "phi", "xi")
# coordinates left off the grid of a CR check take these values
CR_DEFAULTS = {"x0": 0.0, "x1": 0.0, "x2": 0.0, "x3": 0.0,
               "rho": 1.0, "theta": math.pi / 2, "phi": math.pi / 2, "xi": 0.0}

_BOUND = {"oneOf": [{"type": "number"}, {"type": "string", "minLength": 1}]}

CONFIG_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "kind": {"enum": list(KINDS)},
        "expr": {"type": "string", "minLength": 1},
        "params": {"type": "array", "items": {"enum": sorted(VARIABLES)}, "uniqueItems": True},
        "grid": {
            "type": "object",
            "propertyNames": {"enum": sorted(VARIABLES)},
            "additionalProperties": {
                "oneOf": [
                    {"type": "string", "pattern": "^[^:]+:[^:]+:[^:]+$"},
                    {
                        "type": "object",
                        "additionalProperties": False,
                        "required": ["min", "max", "count"],
                        "properties": {"min": _BOUND, "max": _BOUND,
                                       "count": {"type": "integer", "minimum": 1}},
                    },
                ]
            },
        },
        "diff": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "scheme": {"enum": ["central", "exact"]},
                "step": {"type": "number", "exclusiveMinimum": 0},
                "step2": {"type": "number", "exclusiveMinimum": 0},
                "richardson": {"type": "boolean"},
            },
        },
        "format": {"enum": ["csv", "json"]},
        "out": {"type": "string", "minLength": 1},
        "threads": {"type": "integer", "minimum": 1},
    },
}

_CELL = {"type": ["number", "string", "boolean", "null"]}

RESULT_SCHEMA = {
    "oneOf": [
        {
            "type": "object",
            "additionalProperties": False,
            "required": ["kind", "expr", "params", "columns", "rows"],
            "properties": {
                "kind": {"enum": list(KINDS)},
                "expr": {"type": "string"},
                "params": {"type": "array", "items": {"type": "string"}},
                "columns": {"type": "array", "items": {"type": "string"}},
                "rows": {"type": "array", "items": {"type": "array", "items": _CELL}},
            },
        },
        {
            "type": "object",
            "additionalProperties": False,
            "required": list(CARTESIAN),
            "properties": {name: {"type": "number"} for name in CARTESIAN},
        },
    ]
}


class ConfigError(HDGError):
    """Invalid job configuration; ``line`` points into the config file when known."""

    def __init__(self, message: str, source: str | None = None, line: int | None = None):
        self.source, self.line = source, line
        where = source or "config"
        if line is not None:
            where = f"{where}:{line}"
        super().__init__(f"{where}: {message}")


# locating values in JSON text -------------------------------------------------------

_WS = re.compile(r"\s*")


def _skip(text: str, pos: int) -> int:
    return _WS.match(text, pos).end()


def locate(text: str, path: Sequence) -> int:
    """1-based line of the value at ``path`` (keys and list indices) in JSON ``text``.

    Falls back to the deepest container found when the path does not exist.
    """
    decoder = json.JSONDecoder()
    pos = _skip(text, 0)
    for key in path:
        if pos >= len(text):
            break
        if text[pos] == "{" and isinstance(key, str):
            pos_obj, pos = pos, _skip(text, pos + 1)
            found = False
            while pos < len(text) and text[pos] == '"':
                name, pos = scanstring(text, pos + 1)
                pos = _skip(text, _skip(text, pos) + 1)  # past ':'
                if name == key:
                    found = True
                    break
                _, pos = decoder.raw_decode(text, pos)
                pos = _skip(text, pos)
                if text[pos] == ",":
                    pos = _skip(text, pos + 1)
            if not found:
                pos = pos_obj
                break
        elif text[pos] == "[" and isinstance(key, int):
            pos_arr, pos = pos, _skip(text, pos + 1)
            for _ in range(key):
                if text[pos] == "]":
                    break
                _, pos = decoder.raw_decode(text, pos)
                pos = _skip(text, pos)
                if text[pos] == ",":
                    pos = _skip(text, pos + 1)
            if text[pos] == "]":
                pos = pos_arr
                break
        else:
            break
    return text.count("\n", 0, pos) + 1


def load_document(text: str, source: str = "config") -> tuple[dict, Any]:
    """Parse and schema-check a config document; returns (document, locator)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc.msg} (column {exc.colno})", source, exc.lineno) from None
    validator = jsonschema.Draft202012Validator(CONFIG_SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: (list(map(str, e.absolute_path)), e.message))
    if errors:
        err = errors[0]
        where = "/".join(map(str, err.absolute_path)) or "<root>"
        raise ConfigError(f"{where}: {err.message}", source, locate(text, list(err.absolute_path)))

    def line_of(*path):
        return locate(text, list(path))

    return doc, line_of


# job configuration ------------------------------------------------------------------


@dataclass(frozen=True)
class GridAxis:
    name: str
    lo: float
    hi: float
    count: int

    def values(self) -> list[float]:
        if self.count == 1:
            return [self.lo]
        step = (self.hi - self.lo) / (self.count - 1)
        # endpoints exact, interior points from the same formula every run
        return [self.lo + n * step if n < self.count - 1 else self.hi for n in range(self.count)]


@dataclass(frozen=True)
class JobConfig:
    kind: str
    expr: str
    params: tuple
    grid: tuple  # GridAxis per grid variable, in params order
    diff: DiffConfig = DEFAULT
    format: str = "csv"
    out: str | None = None
    threads: int = 1
    fixed: dict = field(default_factory=dict)


def _real_constant(text, what: str) -> float:
    if isinstance(text, (int, float)) and not isinstance(text, bool):
        value = float(text)
    else:
        try:
            q = evaluate(parse(str(text)), {})
        except (ParseError, EvalError) as exc:
            raise ValueError(f"{what}: cannot evaluate {text!r} ({exc})") from None
        if not q.is_real():
            raise ValueError(f"{what}: {text!r} is not real")
        value = q.x0
    if not math.isfinite(value):
        raise ValueError(f"{what}: {text!r} is not finite")
    return value


def parse_axis(name: str, spec) -> GridAxis:
    """Build a grid axis from ``"min:max:count"`` or ``{"min", "max", "count"}``.

    Bounds may be constant expressions such as ``2*pi``.
    """
    if isinstance(spec, str):
        parts = spec.split(":")
        if len(parts) != 3:
            raise ValueError(f"grid {name}: expected min:max:count, got {spec!r}")
        lo, hi, count = parts
        try:
            count = int(count)
        except ValueError:
            raise ValueError(f"grid {name}: count {count!r} is not an integer") from None
    else:
        lo, hi, count = spec["min"], spec["max"], spec["count"]
    lo = _real_constant(lo, f"grid {name} min")
    hi = _real_constant(hi, f"grid {name} max")
    if count < 1:
        raise ValueError(f"grid {name}: count must be at least 1")
    if lo > hi:
        raise ValueError(f"grid {name}: min {lo!r} exceeds max {hi!r}")
    return GridAxis(name, lo, hi, count)


def parse_grid_flag(flag: str) -> tuple[str, str]:
    """Split ``var=min:max:count``."""
    name, sep, spec = flag.partition("=")
    if not sep or not name.strip():
        raise ValueError(f"--grid expects var=min:max:count, got {flag!r}")
    return name.strip(), spec.strip()


def _params_for(kind: str, tree, declared) -> tuple:
    names = default_params(tree) if declared is None else tuple(declared)
    if kind == "cr-check":
        return CARTESIAN
    if kind == "cr-check-polar":
        return POLAR
    if kind in ("frame", "regular", "forms"):
        bad = [n for n in names if n not in CONSTRAINT_PARAMS]
        if bad:
            raise ValueError(f"{kind} parameters must be among t, u, v, w; got {bad}")
        if not names:
            names = ("t",)
        if len(names) > 3:
            raise ValueError(f"{kind} takes 1 to 3 parameters, got {len(names)}")
        return names
    return names


def build_job(kind: str, doc: dict | None = None, line_of=None, *, source: str = "config",
              expr: str | None = None, grid_flags: Sequence[str] = (), out: str | None = None,
              fmt: str | None = None, threads: int | None = None, step: float | None = None,
              exact: bool = False, env_threads: str | None = None) -> JobConfig:
    """Merge a config document with command-line overrides into a JobConfig."""
    doc = dict(doc or {})

    def fail(message, *path):
        line = line_of(*path) if (line_of is not None and path and path[0] in doc) else None
        raise ConfigError(message, source if line is not None else "arguments", line)

    if kind not in KINDS:
        fail(f"unknown job kind {kind!r}")
    if expr is None:
        expr = doc.get("expr")
        expr_from_doc = True
    else:
        expr_from_doc = False
    if not expr:
        fail("an expression is required (--expr or the 'expr' field)")
    declared = doc.get("params")
    try:
        params = _params_for(kind, parse(expr), declared)
        expression = Expression.compile(expr, params)
    except (ParseError, EvalError, ValueError) as exc:
        if expr_from_doc:
            fail(f"expr: {exc}", "expr")
        if declared is not None:
            fail(f"params: {exc}", "params")
        raise ConfigError(f"--expr: {exc}", "arguments") from None

    axes = {}
    for name, spec in (doc.get("grid") or {}).items():
        try:
            axes[name] = parse_axis(name, spec)
        except ValueError as exc:
            fail(str(exc), "grid", name)
    for flag in grid_flags:
        try:
            name, spec = parse_grid_flag(flag)
            if name not in VARIABLES:
                raise ValueError(f"--grid: unknown variable {name!r}")
            axes[name] = parse_axis(name, spec)
        except ValueError as exc:
            raise ConfigError(str(exc), "arguments") from None

    extra = [n for n in axes if n not in params]
    if extra:
        msg = f"grid variables {extra} are not parameters of this job {list(params)}"
        if "grid" in doc and any(n in doc["grid"] for n in extra):
            fail(msg, "grid", next(n for n in extra if n in doc["grid"]))
        raise ConfigError(msg, "arguments")
    fixed = {}
    if kind in ("cr-check", "cr-check-polar"):
        fixed = {n: CR_DEFAULTS[n] for n in params if n not in axes}
    else:
        missing = [n for n in params if n not in axes]
        if missing:
            if kind == "eval":
                fail(f"eval needs a value for {missing} (use --grid name=value:value:1)")
            fail(f"no grid given for parameters {missing}")
    if kind == "eval" and any(a.count != 1 for a in axes.values()):
        fail("eval evaluates a single point; every grid count must be 1")

    base = ACCURATE if kind in ("frame", "regular", "forms") else DEFAULT
    changes = dict(doc.get("diff") or {})
    if step is not None:
        if not step > 0:
            raise ConfigError("--step must be positive", "arguments")
        changes["step"] = float(step)
    if exact:
        changes["scheme"] = "exact"
    diff = base.with_(**changes)

    fmt = fmt or doc.get("format") or ("json" if kind == "eval" else "csv")
    if threads is None:
        threads = doc.get("threads")
    if threads is None and env_threads:
        try:
            threads = int(env_threads)
        except ValueError:
            raise ConfigError(f"HDG_THREADS must be an integer, got {env_threads!r}", "environment") from None
    threads = 1 if threads is None else threads
    if threads < 1:
        raise ConfigError("thread count must be at least 1", "arguments")
    return JobConfig(kind, expr, tuple(params), tuple(axes[n] for n in params if n in axes),
                     diff, fmt, out if out is not None else doc.get("out"), threads, fixed)


# output formatting and reading ---------------------------------------------------------


def format_number(x) -> Any:
    """JSON-ready value: integral floats as ints, shortest round-trip otherwise.

    Infinities become the strings ``"inf"``/``"-inf"`` and NaN becomes null.
    """
    if x is None or isinstance(x, bool):
        return x
    if isinstance(x, int):
        return x
    x = float(x)
    if math.isnan(x):
        return None
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if x.is_integer() and abs(x) < 2 ** 53:
        return int(x)
    return x


def cell_text(x) -> str:
    value = format_number(x)
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    return repr(value) if isinstance(value, float) else str(value)


def render_csv(columns, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([cell_text(x) for x in row])
    return buf.getvalue()


def render_json(document) -> str:
    return json.dumps(document, separators=(",", ":"), allow_nan=False) + "\n"


def _parse_cell(text: str):
    if text == "":
        return None
    if text in ("inf", "-inf"):
        return float(text)
    try:
        return int(text)
    except ValueError:
        return float(text)


def read_result(text: str) -> dict:
    """Read CSV or JSON output back into ``{"columns": [...], "rows": [[...]]}``.

    JSON documents are checked against the result schema.  Cells come back
    as numbers (``inf`` as a float infinity) or None for undefined values.
    """
    stripped = text.lstrip()
    if stripped.startswith("{"):
        doc = json.loads(text)
        jsonschema.validate(doc, RESULT_SCHEMA)
        if "columns" not in doc:
            return {"columns": list(CARTESIAN), "rows": [[doc[n] for n in CARTESIAN]]}

        def cell(v):
            return float(v) if isinstance(v, str) and v in ("inf", "-inf") else v

        return {"kind": doc["kind"], "expr": doc["expr"], "params": doc["params"],
                "columns": doc["columns"], "rows": [[cell(v) for v in row] for row in doc["rows"]]}
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    return {"columns": header, "rows": [[_parse_cell(c) for c in row] for row in reader]}
