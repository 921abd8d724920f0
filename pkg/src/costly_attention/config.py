"""Scenario, policy and menu files (YAML or JSON) with field and line diagnostics."""
import csv
import os

import numpy as np
import yaml

from .dist import CutoffDensity, Prior, TypePopulation
from .errors import ValidationError
from .policy import (
    bi_upper_censorship,
    from_points,
    full_info_policy,
    lower_censorship,
    mix,
    null_info_policy,
    upper_censorship,
)
from .receiver import EffortCost
from .sender import Scenario, SolverSettings


class ConfigError(ValidationError):
    """A configuration file failed to parse or validate."""

    def __init__(self, message, field=None, line=None, source=None):
        where = ":".join(str(p) for p in (source, line) if p is not None)
        label = f"{where}: " if where else ""
        if field:
            label += f"{field}: "
        super().__init__(label + message)
        self.field, self.line, self.source = field, line, source


def _line_index(node, path=(), out=None):
    """Map field paths to 1-based source lines by walking the YAML node tree."""
    out = {} if out is None else out
    out[path] = node.start_mark.line + 1
    if isinstance(node, yaml.MappingNode):
        for k, v in node.value:
            _line_index(v, path + (k.value,), out)
    elif isinstance(node, yaml.SequenceNode):
        for i, v in enumerate(node.value):
            _line_index(v, path + (i,), out)
    return out


class _Doc:
    """Parsed document plus line lookup for error messages."""

    def __init__(self, text, source):
        self.source = source
        try:
            self.data = yaml.safe_load(text)
            node = yaml.compose(text)
        except yaml.YAMLError as exc:
            mark = getattr(exc, "problem_mark", None)
            line = mark.line + 1 if mark is not None else None
            raise ConfigError(f"cannot parse: {getattr(exc, 'problem', exc)}", line=line, source=source) from None
        self.lines = _line_index(node) if node is not None else {}

    def error(self, path, message):
        line = None
        for cut in range(len(path), -1, -1):
            if tuple(path[:cut]) in self.lines:
                line = self.lines[tuple(path[:cut])]
                break
        return ConfigError(message, field=".".join(str(p) for p in path), line=line, source=self.source)


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read file ({exc.strerror})", source=str(path)) from None


def _get(doc, node, path, key, default=..., kind=None):
    if not isinstance(node, dict):
        raise doc.error(path, "expected a mapping")
    if key not in node:
        if default is ...:
            raise doc.error(path + (key,), "required field missing")
        return default
    val = node[key]
    if kind is float:
        try:
            return float(val)
        except (TypeError, ValueError):
            raise doc.error(path + (key,), f"expected a number, got {val!r}") from None
    if kind is int:
        if isinstance(val, bool) or not isinstance(val, int):
            raise doc.error(path + (key,), f"expected an integer, got {val!r}")
    return val


def _build(doc, path, fn, *args, **kw):
    try:
        return fn(*args, **kw)
    except (ValidationError, KeyError, TypeError) as exc:
        msg = f"missing parameter {exc}" if isinstance(exc, KeyError) else str(exc)
        raise doc.error(path, msg) from None


def _params(doc, node, path):
    params = dict(_get(doc, node, path, "params", {}) or {})
    if "table" in node:
        params["table"] = node["table"]
    return params


def _prior(doc, node, path):
    family = _get(doc, node, path, "family", "uniform")
    return _build(doc, path, Prior, family, **_params(doc, node, path))


def _cutoff(doc, node, path):
    family = _get(doc, node, path, "family", "uniform")
    params = _params(doc, node, path)
    for key, val in node.items():
        if key not in ("family", "params", "table") and (key != "peak" or family == "triangular"):
            params.setdefault(key, val)
    return _build(doc, path, CutoffDensity, family, **params)


def _population(doc, node, path):
    lam = _get(doc, node, path, "lambda")
    lpath = path + ("lambda",)
    if isinstance(lam, (int, float)):
        support, weights = [float(lam)], [1.0]
    elif isinstance(lam, dict) and "degenerate" in lam:
        support, weights = [_get(doc, lam, lpath, "degenerate", kind=float)], [1.0]
    elif isinstance(lam, dict):
        support = _get(doc, lam, lpath, "support")
        weights = _get(doc, lam, lpath, "weights", None)
        if not isinstance(support, list) or not support:
            raise doc.error(lpath + ("support",), "expected a nonempty list")
        if weights is None:
            weights = [1.0 / len(support)] * len(support)
    else:
        raise doc.error(lpath, "expected a number or {degenerate: v} or {support, weights}")
    cut = _get(doc, node, path, "cutoff")
    cpath = path + ("cutoff",)
    if isinstance(cut, list):
        dens = [_cutoff(doc, c, cpath + (i,)) for i, c in enumerate(cut)]
        peak = _get(doc, node, path, "peak", None)
    else:
        dens = _cutoff(doc, cut, cpath)
        peak = _get(doc, node, path, "peak", cut.get("peak") if isinstance(cut, dict) else None)
    return _build(doc, path, TypePopulation, support, weights, dens, peak=None if peak is None else float(peak))


def _cost(doc, node, path):
    if node is None:
        return EffortCost("linear")
    family = _get(doc, node, path, "family", "linear")
    return _build(doc, path, EffortCost, family, **_params(doc, node, path))


def _solver(doc, node, path):
    if node is None:
        return SolverSettings()
    known = SolverSettings.__dataclass_fields__
    for key in node:
        if key not in known:
            raise doc.error(path + (key,), "unknown solver setting")
    kw = {}
    for key, f in known.items():
        if key in node:
            kw[key] = _get(doc, node, path, key, kind=int if f.type in (int, "int") else float)
    return SolverSettings(**kw)


SCENARIO_KEYS = {"prior", "population", "cost", "gamma", "solver", "name"}


def scenario_from_dict(data, source=None, doc=None):
    doc = doc or _Doc(yaml.safe_dump(data), source)
    if not isinstance(data, dict):
        raise doc.error((), "scenario must be a mapping")
    for key in data:
        if key not in SCENARIO_KEYS:
            raise doc.error((key,), "unknown field")
    prior = _prior(doc, _get(doc, data, (), "prior", {"family": "uniform"}) or {}, ("prior",))
    pop = _population(doc, _get(doc, data, (), "population"), ("population",))
    cost = _cost(doc, data.get("cost"), ("cost",))
    gamma = _get(doc, data, (), "gamma", 0.0, kind=float)
    solver = _solver(doc, data.get("solver"), ("solver",))
    return _build(doc, (), Scenario, prior, pop, cost, gamma, solver)


def load_scenario(path):
    doc = _Doc(_read(path), str(path))
    return scenario_from_dict(doc.data, doc=doc)


# -------------------------------------------------------------------- policies

POLICY_FORMS = ("full", "null", "upper_censorship", "lower_censorship", "bi_upper_censorship", "mixture", "points")


def read_policy_csv(path):
    """(x, I(x)) pairs from a CSV file; '#' lines and a non-numeric header row are skipped."""
    rows = []
    with open(path, encoding="utf-8", newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or row[0].lstrip().startswith("#"):
                continue
            try:
                rows.append((float(row[0]), float(row[1])))
            except (ValueError, IndexError):
                if rows:
                    raise ConfigError("expected two numeric columns x, I", line=lineno, source=str(path)) from None
    if len(rows) < 2:
        raise ConfigError("need at least two (x, I) rows", source=str(path))
    return np.array(rows)


def policy_from_spec(prior, spec, doc=None, path=(), base_dir="."):
    """Build a policy from an analytic spec mapping or a path to a policy file."""
    doc = doc or _Doc(yaml.safe_dump(spec), None)
    if isinstance(spec, str):
        return load_policy(prior, os.path.join(base_dir, spec))
    form = _get(doc, spec, path, "form")
    if form == "full":
        return full_info_policy(prior)
    if form == "null":
        return null_info_policy(prior)
    if form == "upper_censorship":
        return _build(doc, path, upper_censorship, prior, _get(doc, spec, path, "theta_bar", kind=float))
    if form == "lower_censorship":
        return _build(doc, path, lower_censorship, prior, _get(doc, spec, path, "theta", kind=float))
    if form == "bi_upper_censorship":
        args = [_get(doc, spec, path, k, kind=float) for k in ("theta1", "x1", "x2")]
        return _build(doc, path, bi_upper_censorship, prior, *args)
    if form == "mixture":
        base = policy_from_spec(prior, _get(doc, spec, path, "base"), doc, path + ("base",), base_dir)
        return _build(doc, path, mix, base, _get(doc, spec, path, "weight", kind=float))
    if form == "points":
        if "file" in spec:
            return load_policy(prior, os.path.join(base_dir, spec["file"]))
        pts = np.asarray(_get(doc, spec, path, "points"), dtype=float)
        return _build(doc, path + ("points",), from_points, prior, pts[:, 0], pts[:, 1])
    raise doc.error(path + ("form",), f"unknown policy form {form!r}; expected one of {', '.join(POLICY_FORMS)}")


def load_policy(prior, path):
    """Policy from a CSV of (x, I(x)) pairs or a YAML/JSON spec file."""
    path = str(path)
    if path.lower().endswith(".csv"):
        if not os.path.exists(path):
            raise ConfigError("cannot read file", source=path)
        pts = read_policy_csv(path)
        try:
            return from_points(prior, pts[:, 0], pts[:, 1])
        except ValidationError as exc:
            raise ConfigError(str(exc), source=path) from None
    doc = _Doc(_read(path), path)
    return policy_from_spec(prior, doc.data, doc, (), os.path.dirname(path) or ".")


def load_menu(prior, path):
    """List of policies from a file holding ``menu: [spec or path, ...]`` or a bare list."""
    doc = _Doc(_read(path), str(path))
    data = doc.data
    items, base = (data.get("menu") if isinstance(data, dict) else data), ("menu",) if isinstance(data, dict) else ()
    if not isinstance(items, list) or not items:
        raise doc.error(base, "expected a nonempty list of policies")
    base_dir = os.path.dirname(str(path)) or "."
    return [policy_from_spec(prior, s, doc, base + (i,), base_dir) for i, s in enumerate(items)]
