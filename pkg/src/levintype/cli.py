"""Batch experiment runner.

Usage::

    levintype run CONFIG.toml [key=value ...]
    levintype repro PRESET [key=value ...]
    levintype list-presets

A config is a TOML file with the sections ``[series]``, ``[subsequence]``
(optional), ``[variant]``, ``[transform]``, ``[run]`` and, for presets,
``[[expected]]``.  Overrides address keys by dotted path, for example
``run.n_max=20`` or ``transform.p=3``.  The default precision comes from
``LEVINTYPE_PRECISION`` (``double`` or a digit count) when the config does not
set ``run.precision``.

Exit codes: 0 success, 2 invalid config, 3 a reproduction check failed,
1 any other library error.
"""

from __future__ import annotations

import argparse
import copy
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field
from importlib import resources
from math import isinf
from typing import Any, Callable, Sequence

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from . import analysis, classic, oscillatory, serieslab, transforms
from .engine import SINGULAR, TransformTable
from .errors import ConfigError, DomainError, InsufficientDataError, LevinTypeError
from .estimates import EstimateSeries, estimates_at
from .numcore import Context, make_context

__all__ = [
    "ExperimentConfig",
    "ResultRow",
    "ResultTable",
    "load_config",
    "parse_config",
    "apply_overrides",
    "run",
    "emit",
    "preset_names",
    "load_preset",
    "check_expected",
    "main",
]

PRECISION_ENV = "LEVINTYPE_PRECISION"
CSV_COLUMNS = ("n", "k", "value_re", "value_im", "digits", "gamma", "eps_est")

LINEAR_FAMILIES = {"levin", "drummond", "pJ", "genlevin", "weniger", "W", "d1", "F", "Flimit",
                   "MM", "H", "genH", "I", "K", "JD"}
CLASSIC_FAMILIES = {"E", "epsilon", "aitken", "overholt"}
TRANSFORM_FAMILIES = LINEAR_FAMILIES | CLASSIC_FAMILIES
STEP2 = {"H", "I", "K", "JD", "epsilon", "aitken"}

_SECTIONS = {
    "series": {"family", "z", "a", "q", "eps", "m", "moments", "coefficients", "function"},
    "subsequence": {"tau", "sigma", "start"},
    "variant": {"kind", "beta", "weight", "weight_a", "weight_offset", "weight_beta"},
    "transform": {"family", "p", "beta", "alpha", "xi", "zeta", "kind", "aux", "aux_a",
                  "aux_offset", "aux_beta", "nodes", "thetas", "recurrence", "exponents", "basis"},
    "run": {"n_max", "k_max", "path", "column", "precision", "outputs", "format", "name", "description"},
    "expected": None,
}


@dataclass
class ExperimentConfig:
    series: serieslab.SeriesSpec
    variant: dict
    transform: dict
    n_max: int
    k_max: int | None = None
    path: str = "default"
    column: int | None = None
    precision: Any = "double"
    outputs: tuple = ("digits", "stability", "eps_est")
    format: str = "csv"
    subsequence: dict = field(default_factory=dict)
    expected: list = field(default_factory=list)
    name: str = ""
    description: str = ""


@dataclass
class ResultRow:
    n: int
    k: int
    value: Any
    digits: float | None = None
    gamma: Any = None
    eps_est: Any = None


@dataclass
class ResultTable:
    rows: list
    ctx: Context
    name: str = ""

    def row(self, n: int, k: int) -> ResultRow:
        for r in self.rows:
            if r.n == n and r.k == k:
                return r
        raise KeyError((n, k))


# -- configuration -----------------------------------------------------------

def _get(d: dict, section: str, key: str, default=None):
    return d.get(section, {}).get(key, default)


def _default_precision():
    raw = os.environ.get(PRECISION_ENV, "double").strip()
    if raw.lower() == "double":
        return "double"
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(PRECISION_ENV, f"expected 'double' or a digit count, got {raw!r}")


def parse_config(raw: dict) -> ExperimentConfig:
    """Validate a config mapping; errors name the offending field."""
    for section, body in raw.items():
        if section not in _SECTIONS:
            raise ConfigError(section, "unknown section")
        keys = _SECTIONS[section]
        if keys is None:
            continue
        if not isinstance(body, dict):
            raise ConfigError(section, "must be a table")
        for key in body:
            if key not in keys:
                raise ConfigError(f"{section}.{key}", "unknown key")
    for section in ("series", "variant", "transform", "run"):
        if section not in raw:
            raise ConfigError(section, "section missing")
    try:
        series = serieslab.SeriesSpec(**raw["series"])
    except (TypeError, DomainError) as exc:
        raise ConfigError("series", str(exc))
    fam = _get(raw, "transform", "family")
    if fam not in TRANSFORM_FAMILIES:
        raise ConfigError("transform.family", f"expected one of {sorted(TRANSFORM_FAMILIES)}, got {fam!r}")
    kind = _get(raw, "variant", "kind")
    if fam in LINEAR_FAMILIES and fam != "d1" and kind not in ("t", "u", "v", "tt", "K"):
        raise ConfigError("variant.kind", f"expected t, u, v, tt or K, got {kind!r}")
    if kind == "K" and series.family != "boys":
        raise ConfigError("variant.kind", "the K variant is available for the boys family only")
    n_max = _get(raw, "run", "n_max")
    if not isinstance(n_max, int) or n_max < 0:
        raise ConfigError("run.n_max", "must be a non-negative integer")
    k_max = _get(raw, "run", "k_max")
    if k_max is not None and (not isinstance(k_max, int) or k_max < 0):
        raise ConfigError("run.k_max", "must be a non-negative integer")
    path = _get(raw, "run", "path", "default")
    if path not in ("default", "diagonal", "staircase", "column"):
        raise ConfigError("run.path", "expected default, diagonal, staircase or column")
    column = _get(raw, "run", "column")
    if path == "column" and not isinstance(column, int):
        raise ConfigError("run.column", "column path needs an integer order")
    step = 2 if fam in STEP2 else (len(_get(raw, "transform", "nodes", [])) if fam == "genH" else 1)
    if path == "diagonal" and step != 1:
        raise ConfigError("run.path", f"{fam} tables are L-shaped; use staircase or column")
    if path == "staircase" and step == 1:
        raise ConfigError("run.path", f"{fam} tables are triangular; use diagonal or column")
    precision = _get(raw, "run", "precision", None)
    if precision is None:
        precision = _default_precision()
    if precision != "double" and not (isinstance(precision, int) and precision >= 5):
        raise ConfigError("run.precision", "expected 'double' or an integer >= 5")
    outputs = tuple(_get(raw, "run", "outputs", ["digits", "stability", "eps_est"]))
    for o in outputs:
        if o not in ("digits", "stability", "eps_est"):
            raise ConfigError("run.outputs", f"unknown output {o!r}")
    fmt = _get(raw, "run", "format", "csv")
    if fmt not in ("csv", "jsonl", "pretty"):
        raise ConfigError("run.format", "expected csv, jsonl or pretty")
    sub = dict(raw.get("subsequence", {}))
    if sub and (("tau" in sub) == ("sigma" in sub)):
        raise ConfigError("subsequence", "give exactly one of tau and sigma")
    if fam == "d1" and not sub:
        raise ConfigError("subsequence", "d1 needs a subsequence schedule")
    return ExperimentConfig(
        series=series, variant=dict(raw["variant"]), transform=dict(raw["transform"]),
        n_max=n_max, k_max=k_max, path=path, column=column, precision=precision,
        outputs=outputs, format=fmt, subsequence=sub, expected=list(raw.get("expected", [])),
        name=_get(raw, "run", "name", ""), description=_get(raw, "run", "description", ""))


def _coerce(text: str):
    try:
        return tomllib.loads(f"v = {text}")["v"]
    except tomllib.TOMLDecodeError:
        return text


def apply_overrides(raw: dict, overrides: Sequence[str]) -> dict:
    """Apply ``section.key=value`` overrides; values use TOML syntax, bare words are strings."""
    out = copy.deepcopy(raw)
    for item in overrides:
        if "=" not in item:
            raise ConfigError(item, "override must look like section.key=value")
        path, value = item.split("=", 1)
        parts = path.strip().split(".")
        if len(parts) != 2:
            raise ConfigError(path, "override key must be section.key")
        out.setdefault(parts[0], {})[parts[1]] = _coerce(value.strip())
    return out


def load_config(path: str, overrides: Sequence[str] = ()) -> ExperimentConfig:
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError("config", str(exc))
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError("config", f"invalid TOML: {exc}")
    return parse_config(apply_overrides(raw, overrides))


def preset_names() -> list[str]:
    files = resources.files("levintype").joinpath("presets")
    return sorted(p.name[:-5] for p in files.iterdir() if p.name.endswith(".toml"))


def _preset_raw(name: str) -> dict:
    if name not in preset_names():
        raise ConfigError("preset", f"unknown preset {name!r}")
    text = resources.files("levintype").joinpath("presets", f"{name}.toml").read_text()
    return tomllib.loads(text)


def load_preset(name: str, overrides: Sequence[str] = ()) -> ExperimentConfig:
    return parse_config(apply_overrides(_preset_raw(name), overrides))


# -- building the experiment -------------------------------------------------

def _indices(cfg: ExperimentConfig, count: int) -> list[int]:
    sub = cfg.subsequence
    if not sub:
        return list(range(count))
    return serieslab.subsequence_indices(count, tau=sub.get("tau"), sigma=sub.get("sigma"),
                                         start=sub.get("start", 0))


def _weights(cfg: ExperimentConfig, idx: list[int], ctx: Context) -> list:
    w = cfg.variant.get("weight")
    if w is None:
        return [ctx.one] * len(idx)
    if w == "log":
        a = ctx.num(cfg.variant.get("weight_a", 1))
        off = ctx.num(cfg.variant.get("weight_offset", 1))
        return [off + ctx.log(m + a) for m in idx]
    if w == "linear":
        b = ctx.num(cfg.variant.get("weight_beta", 1))
        return [m + b for m in idx]
    raise ConfigError("variant.weight", "expected 'log' or 'linear'")


def _estimates(cfg: ExperimentConfig, src, idx: list[int], ctx: Context) -> EstimateSeries:
    kind = cfg.variant.get("kind")
    if cfg.transform["family"] == "d1":
        alpha = ctx.num(cfg.transform.get("alpha", 1))
        return EstimateSeries([(m + alpha) * src.term(m) for m in idx], "u")
    if kind == "K":
        if cfg.subsequence:
            raise ConfigError("variant.kind", "K variant does not combine with a subsequence")
        base = list(serieslab.kummer_estimates_fm(cfg.series.z, len(idx), ctx))
        if cfg.series.m != 0:
            raise ConfigError("series.m", "the Kummer companion series is implemented for m = 0")
    else:
        base = estimates_at(kind, src.term, idx, ctx.num(cfg.variant.get("beta", 1)))
    return EstimateSeries([w * b for w, b in zip(_weights(cfg, idx, ctx), base)], kind)


def _aux(cfg: ExperimentConfig, idx: list[int], ctx: Context, inverse: bool) -> list:
    t = cfg.transform
    aux = t.get("aux")
    if aux == "log":
        a = ctx.num(t.get("aux_a", 1))
        off = ctx.num(t.get("aux_offset", 1))
        x = [off + ctx.log(m + a) for m in idx]
    elif aux == "shifted":
        b = ctx.num(t.get("aux_beta", 1))
        x = [m + b for m in idx]
    elif aux == "geometric" and inverse:
        q = ctx.num(t.get("xi", 2))
        return [q ** (-m) for m in idx]
    else:
        raise ConfigError("transform.aux", f"unsupported auxiliary sequence {aux!r}")
    return [ctx.one / v for v in x] if inverse else x


def _builder(cfg: ExperimentConfig, idx: list[int], ctx: Context) -> Callable[[Sequence, Sequence], TransformTable]:
    """``(s, omega) -> table`` for the configured linear family."""
    t = cfg.transform
    fam = t["family"]
    k_max = cfg.k_max
    num = ctx.num
    beta = num(t.get("beta", 1))
    if fam == "levin":
        return lambda s, w: transforms.levin(s, w, beta, k_max)
    if fam == "drummond":
        return lambda s, w: transforms.drummond(s, w, k_max)
    if fam == "pJ":
        p = t.get("p", 2)
        return lambda s, w: transforms.pj_transform(s, w, p, beta, k_max)
    if fam == "genlevin":
        alpha = num(t.get("alpha", 1))
        return lambda s, w: transforms.generalized_levin(s, w, alpha, beta, k_max)
    if fam == "weniger":
        kind = t.get("kind", "S")
        xi = num(t["xi"]) if "xi" in t else None
        alpha = num(t["alpha"]) if "alpha" in t else None
        zeta = num(t["zeta"]) if "zeta" in t else None
        return lambda s, w: transforms.weniger(s, w, kind, beta, xi, alpha, zeta, k_max)
    if fam == "W":
        tt = _aux(cfg, idx, ctx, inverse=True)
        return lambda s, w: transforms.w_algorithm(s, w, tt, k_max)
    if fam == "d1":
        alpha = num(t.get("alpha", 1))
        tt = [ctx.one / (m + alpha) for m in idx]
        return lambda s, w: transforms.w_algorithm(s, w, tt, k_max)
    if fam == "F":
        x = _aux(cfg, idx, ctx, inverse=False)
        return lambda s, w: transforms.f_transform(s, w, x, k_max)
    if fam == "Flimit":
        xi = num(t.get("xi", 2))
        return lambda s, w: transforms.f_limit(s, w, xi, k_max)
    if fam == "MM":
        x = _aux(cfg, idx, ctx, inverse=False)
        return lambda s, w: transforms.mosig_michalski(s, w, x, k_max)
    if fam == "H":
        alpha = num(t.get("alpha", 1))
        return lambda s, w: oscillatory.h_transform(s, w, alpha, beta, k_max)
    if fam == "genH":
        nodes = [num(e) for e in t.get("nodes", [])]
        if not nodes:
            raise ConfigError("transform.nodes", "generalized H needs a node list")
        return lambda s, w: oscillatory.generalized_h(s, w, nodes, beta, k_max)
    if fam == "I":
        alpha = num(t.get("alpha", 1))
        thetas = [num(v) for v in t.get("thetas", [])]
        if len(thetas) < 2:
            raise ConfigError("transform.thetas", "I needs Theta_0 = 1 and further values")
        kk = min(k_max if k_max is not None else len(thetas) - 1, len(thetas) - 1)
        return lambda s, w: oscillatory.i_transform(s, w, alpha, oscillatory.i_limit_delta(thetas),
                                                    min(kk, (len(s) - 1) // 2))
    if fam == "K":
        rec = [num(v) for v in t.get("recurrence", [1, -2, 1])]
        if len(rec) != 3:
            raise ConfigError("transform.recurrence", "need three constant coefficients")
        return lambda s, w: oscillatory.k_transform(s, w, lambda j, n: rec[j], None, k_max)
    if fam == "JD":
        exps = t.get("exponents")
        if not exps:
            raise ConfigError("transform.exponents", "JD needs one exponent per order")
        zeta = oscillatory.jd_power_zeta(exps, beta, ctx)
        return lambda s, w: oscillatory.jd_transform(
            s, w, zeta, min(k_max if k_max is not None else len(exps), len(exps), (len(s) - 1) // 2))
    raise ConfigError("transform.family", f"{fam} is not a Levin-type family")


def _classic_table(cfg: ExperimentConfig, s: list) -> TransformTable:
    fam = cfg.transform["family"]
    k_max = cfg.k_max
    if fam == "E":
        if cfg.transform.get("basis", "shanks") != "shanks":
            raise ConfigError("transform.basis", "only the shanks basis is available from configs")
        return classic.e_algorithm(s, classic.shanks_basis(s), k_max)
    if fam == "epsilon":
        return classic.epsilon_algorithm(s, None if k_max is None else 2 * k_max).shanks()
    if fam == "aitken":
        return classic.iterated_aitken(s, k_max)
    return classic.overholt(s, k_max)


def _path(cfg: ExperimentConfig, table: TransformTable) -> list[tuple[int, int]]:
    if cfg.path == "column":
        return [(n, cfg.column) for n in range(table.size(cfg.column))]
    if cfg.path == "diagonal":
        return table.diagonal()
    if cfg.path == "staircase":
        return table.staircase()
    return table.default_path()


def run(cfg: ExperimentConfig) -> ResultTable:
    """Build series, estimates and table; report the configured path."""
    ctx = make_context(None if cfg.precision == "double" else cfg.precision)
    count = cfg.n_max + 1
    idx = _indices(cfg, count)
    src = serieslab.series_source(cfg.series, ctx)
    s = [src.partial_sum(m) for m in idx]
    fam = cfg.transform["family"]
    gammas = None
    if fam in CLASSIC_FAMILIES:
        table = _classic_table(cfg, s)
    else:
        omega = list(_estimates(cfg, src, idx, ctx))
        build = _builder(cfg, idx, ctx)
        table = build(s, omega)
        if "stability" in cfg.outputs:
            gammas = analysis.stability_table_by_linearity(build, omega)
    ref = None
    if "digits" in cfg.outputs:
        try:
            ref = serieslab.reference_value(cfg.series, ctx).value
        except DomainError:
            ref = None
    rows = []
    for n, k in _path(cfg, table):
        v = table.T(n, k)
        row = ResultRow(n, k, v)
        if ref is not None:
            row.digits = serieslab.digits_metric(v, ref, ctx)
        if gammas is not None:
            row.gamma = gammas[k][n]
        if "eps_est" in cfg.outputs and k > 0:
            try:
                row.eps_est = analysis.a_posteriori_error(table, n, k)
            except InsufficientDataError:
                row.eps_est = None
        rows.append(row)
    return ResultTable(rows, ctx, cfg.name)


# -- output ------------------------------------------------------------------

def _render(x, ctx: Context, digits: int | None = None) -> str:
    if x is None:
        return ""
    if x is SINGULAR:
        return "SINGULAR"
    if ctx.mp is None:
        return repr(float(x)) if digits is None else f"{float(x):.{digits}g}"
    return ctx.mp.nstr(x, digits or ctx.dps, strip_zeros=digits is not None)


def _split(v, ctx: Context) -> tuple[str, str]:
    if v is SINGULAR:
        return "SINGULAR", "SINGULAR"
    if ctx.mp is not None:
        re, im = ctx.mp.re(v), ctx.mp.im(v)
    else:
        re, im = complex(v).real, complex(v).imag
    return _render(re, ctx), _render(im, ctx)


def _digits_text(d) -> str:
    if d is None:
        return ""
    if isinf(d):
        return "-inf" if d < 0 else "inf"
    return f"{d:.2f}"


def _cells(row: ResultRow, ctx: Context, short: bool = False) -> list[str]:
    re, im = _split(row.value, ctx)
    width = 6 if short else None
    if short and row.value is not SINGULAR:
        re, im = (_render(ctx.mp.re(row.value) if ctx.mp else complex(row.value).real, ctx, 16),
                  _render(ctx.mp.im(row.value) if ctx.mp else complex(row.value).imag, ctx, 16))
    return [str(row.n), str(row.k), re, im, _digits_text(row.digits),
            _render(row.gamma, ctx, width), _render(row.eps_est, ctx, width)]


def emit(table: ResultTable, fmt: str = "csv") -> str:
    """Serialize a result table as ``csv``, ``jsonl`` or ``pretty`` text."""
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in table.rows:
            w.writerow(_cells(r, table.ctx))
        return buf.getvalue()
    if fmt == "jsonl":
        lines = [json.dumps(dict(zip(CSV_COLUMNS, _cells(r, table.ctx)))) for r in table.rows]
        return "".join(line + "\n" for line in lines)
    if fmt == "pretty":
        body = [list(CSV_COLUMNS)] + [_cells(r, table.ctx, short=True) for r in table.rows]
        widths = [max(len(row[i]) for row in body) for i in range(len(CSV_COLUMNS))]
        return "".join("  ".join(c.rjust(wd) for c, wd in zip(row, widths)).rstrip() + "\n"
                       for row in body)
    raise ConfigError("run.format", f"unknown format {fmt!r}")


# -- reproduction checks -----------------------------------------------------

def check_expected(cfg: ExperimentConfig, table: ResultTable) -> list[tuple[bool, str]]:
    """Compare ``[[expected]]`` entries of a preset with the computed table.

    Entry keys: ``n``, ``k`` and one of ``value`` (absolute tolerance
    ``atol``), ``rel_error`` (within factor ``factor``), ``gamma`` (relative
    tolerance ``rtol``) or ``digits`` (absolute tolerance ``dtol``).
    """
    ctx = table.ctx
    ref = None
    out = []
    for e in cfg.expected:
        n, k = e["n"], e["k"]
        try:
            row = table.row(n, k)
        except KeyError:
            out.append((False, f"n={n} k={k}: cell not in output"))
            continue
        if "value" in e:
            got = ctx.to_float(abs(row.value - ctx.num(e["value"]))) if row.value is not SINGULAR else float("inf")
            ok = got <= e.get("atol", 0)
            out.append((ok, f"n={n} k={k} value={e['value']} |diff|={got:.3g} atol={e.get('atol', 0)}"))
        elif "rel_error" in e:
            if ref is None:
                ref = serieslab.reference_value(cfg.series, ctx).value
            err = ctx.to_float(abs(row.value - ref) / abs(ref))
            fac = e.get("factor", 10)
            ok = e["rel_error"] / fac <= err <= e["rel_error"] * fac
            out.append((ok, f"n={n} k={k} rel_error expected={e['rel_error']:.3g} got={err:.3g} factor={fac}"))
        elif "gamma" in e:
            got = ctx.to_float(row.gamma)
            rtol = e.get("rtol", 0.01)
            ok = abs(got - e["gamma"]) <= rtol * abs(e["gamma"])
            out.append((ok, f"n={n} k={k} gamma expected={e['gamma']:.4g} got={got:.4g} rtol={rtol}"))
        elif "digits" in e:
            dtol = e.get("dtol", 0.5)
            ok = row.digits is not None and abs(row.digits - e["digits"]) <= dtol
            out.append((ok, f"n={n} k={k} digits expected={e['digits']} got={_digits_text(row.digits)} dtol={dtol}"))
        else:
            raise ConfigError("expected", f"entry {e} has nothing to compare")
    return out


# -- entry point -------------------------------------------------------------

def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="levintype", description="Levin-type sequence transformation experiments")
    sub = p.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run an experiment config")
    r.add_argument("config")
    r.add_argument("overrides", nargs="*", metavar="key=value")
    rp = sub.add_parser("repro", help="run a bundled preset and check its expected values")
    rp.add_argument("preset")
    rp.add_argument("overrides", nargs="*", metavar="key=value")
    sub.add_parser("list-presets", help="list bundled presets")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    out = sys.stdout
    try:
        if args.command == "list-presets":
            for name in preset_names():
                cfg = load_preset(name)
                out.write(f"{name}\t{cfg.description}\n")
            return 0
        cfg = load_config(args.config, args.overrides) if args.command == "run" \
            else load_preset(args.preset, args.overrides)
        table = run(cfg)
        out.write(emit(table, cfg.format))
        if args.command == "repro":
            results = check_expected(cfg, table)
            for ok, msg in results:
                sys.stderr.write(f"{'PASS' if ok else 'FAIL'} {msg}\n")
            if not all(ok for ok, _ in results):
                return 3
        return 0
    except ConfigError as exc:
        sys.stderr.write(f"config error: {exc}\n")
        return 2
    except LevinTypeError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
