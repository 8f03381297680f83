"""Command-line front end.

Subcommands: iterate, fixed-points, classify, scan, transition,
feigenbaum, sharkovsky, basin, julia, mandelbrot.  Every run prints a
one-line JSON summary (including all effective settings, so artifacts
are self-describing) to stdout and writes requested files.  Flags may
be combined with a JSON job file (--job); explicit flags win.

Exit codes: 0 success, 1 validation error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .analysis import (ClassifyConfig, classify_attractor,
                       diagonal_fixed_points)
from .engine import MapSpec, iterate
from .expr import ExprError
from .families import FAMILIES, make_family
from .raster import (BASIN_CONFIG, GridSpec, basin_map, escape_raster)
from .scan import (BracketingError, default_threads, feigenbaum,
                   locate_transition, period_table, sharkovsky_chain,
                   sharkovsky_compare)

COMMANDS = ("iterate", "fixed-points", "classify", "scan", "transition",
            "feigenbaum", "sharkovsky", "basin", "julia", "mandelbrot")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _add_spec_flags(p: _Parser) -> None:
    p.add_argument("--job", help="JSON job file; explicit flags override its fields")
    p.add_argument("--family", choices=sorted(FAMILIES), help="catalog family name")
    p.add_argument("--expr", action="append",
                   help="inline component expression (repeat for m components)")
    p.add_argument("--n", type=int, help="domain dimension for --expr maps")
    p.add_argument("--a", type=float, help="value of parameter a")
    p.add_argument("--b", type=float, help="value of parameter b")
    p.add_argument("--c", help="value of parameter c (complex, e.g. '-0.2+0.7j')")
    p.add_argument("--param", action="append", metavar="NAME=VALUE",
                   help="additional named parameter (repeatable)")
    p.add_argument("--complex", action="store_const", const=True, dest="complex_scalars",
                   help="iterate --expr maps over complex scalars")
    p.add_argument("--scheme", choices=["F", "V", "f", "v"], help="iteration scheme (default F)")
    p.add_argument("--seeds", help="comma-separated seed scalars")
    p.add_argument("--threads", type=int,
                   help="worker threads (default: GENITER_THREADS or cpu count)")


def _add_classify_flags(p: _Parser, tol_flag: str = "--tol") -> None:
    p.add_argument("--transient", type=int, help="discarded leading scalars")
    p.add_argument(tol_flag, type=float, dest="tol", help="classification tolerance")
    p.add_argument("--max-period", type=int, dest="max_period")
    p.add_argument("--budget", type=int, help="max scalars per classification")


def build_parser() -> _Parser:
    top = _Parser(prog="geniter",
                  description="Generalized F/V iteration toolbox")
    sub = top.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("iterate", help="emit a sequence as CSV")
    _add_spec_flags(p)
    p.add_argument("--count", type=int, help="number of terms (seeds included)")
    p.add_argument("--out", help="CSV output path")

    p = sub.add_parser("fixed-points", help="diagonal fixed points of an m=1 map")
    _add_spec_flags(p)
    p.add_argument("--interval", help="search interval lo,hi (default 0,1)")
    p.add_argument("--grid", help="scan grid size (default 10000)")
    p.add_argument("--stability", action="store_const", const=True,
                   help="sample empirical stability classes (slower)")
    p.add_argument("--out", help="JSON output path")

    p = sub.add_parser("classify", help="classify one trajectory's attractor")
    _add_spec_flags(p)
    _add_classify_flags(p)
    p.add_argument("--out", help="JSON output path")

    p = sub.add_parser("scan", help="sweep a parameter, classifying each value")
    _add_spec_flags(p)
    _add_classify_flags(p)
    p.add_argument("--range", dest="a_range", help="parameter range lo,hi")
    p.add_argument("--steps", type=int, help="number of sampled values")
    p.add_argument("--sweep", help="parameter to sweep (default a)")
    p.add_argument("--out", help="CSV output path")

    p = sub.add_parser("transition", help="bisect a classification change")
    _add_spec_flags(p)
    _add_classify_flags(p, tol_flag="--classify-tol")
    p.add_argument("--bracket", help="parameter bracket lo,hi")
    p.add_argument("--sweep", help="parameter to bisect (default a)")
    p.add_argument("--tol", type=float, dest="bisect_tol", help="bracket width target")
    p.add_argument("--out", help="JSON output path")

    p = sub.add_parser("feigenbaum", help="doubling cascade and ratio estimate")
    _add_spec_flags(p)
    _add_classify_flags(p, tol_flag="--classify-tol")
    p.add_argument("--base", type=int, help="base period of the cascade")
    p.add_argument("--doublings", type=int, help="number of doublings to locate (>= 3)")
    p.add_argument("--range", dest="a_range", help="parameter search range lo,hi")
    p.add_argument("--sweep", help="swept parameter (default a)")
    p.add_argument("--tol", type=float, dest="bisect_tol", help="bracket width target")
    p.add_argument("--out", help="JSON output path")

    p = sub.add_parser("sharkovsky", help="generalized Sharkovsky ordering")
    p.add_argument("--job", help="JSON job file")
    p.add_argument("--n", type=int, help="domain dimension")
    p.add_argument("--compare", help="two periods p,q to order")
    p.add_argument("--chain", type=int, help="list the chain up to this limit")

    p = sub.add_parser("basin", help="attraction-basin raster (PGM/CSV)")
    _add_spec_flags(p)
    _add_classify_flags(p)
    p.add_argument("--grid", help="raster size WxH (default 512x512)")
    p.add_argument("--rect", help="region x0,x1,y0,y1 (default 0,1,0,1)")
    p.add_argument("--axes", help="swept coordinates i,j (default 0,1)")
    p.add_argument("--fixed", help="values of the remaining coordinates")
    p.add_argument("--out", help="PGM output path")
    p.add_argument("--csv-out", dest="csv_out", help="CSV output path")

    for name in ("julia", "mandelbrot"):
        p = sub.add_parser(name, help=f"{name} escape-time raster (PGM/CSV)")
        _add_spec_flags(p)
        p.add_argument("--grid", help="raster size WxH (default 512x512)")
        p.add_argument("--rect", help="region re0,re1,im0,im1 (default -2,2,-2,2)")
        p.add_argument("--radius", type=float, help="escape radius (default 1e6)")
        p.add_argument("--max-iter", type=int, dest="max_iter",
                       help="iteration cap (default 1000)")
        p.add_argument("--vary", help="parameter varied over the grid (default c)")
        p.add_argument("--out", help="PGM output path")
        p.add_argument("--csv-out", dest="csv_out", help="CSV output path")
    return top


# ---------------------------------------------------------------------------
# Settings resolution


class Settings:
    """Job-file fields overlaid by explicit flags, with defaults recorded."""

    def __init__(self, ns: argparse.Namespace):
        self.command = ns.command
        job = {}
        if getattr(ns, "job", None):
            with open(ns.job) as fh:
                job = json.load(fh)
            if not isinstance(job, dict):
                raise ValueError("job file must hold a JSON object")
            job.pop("command", None)
        flags = {k: v for k, v in vars(ns).items()
                 if k not in ("command", "job") and v is not None}
        self.values = {**job, **flags}
        self.effective: dict = {}

    def get(self, key, default=None):
        value = self.values.get(key, default)
        self.effective[key] = value
        return value

    def require(self, key, hint=""):
        value = self.get(key)
        if value is None:
            raise ValueError(f"missing required setting '{key}'{hint}")
        return value


def _parse_number(text):
    if isinstance(text, (int, float, complex)):
        return text
    s = str(text).strip()
    try:
        return float(s)
    except ValueError:
        return complex(s.replace(" ", ""))


def _parse_pair(value, name):
    if isinstance(value, (list, tuple)):
        pair = [float(v) for v in value]
    else:
        pair = [float(v) for v in str(value).split(",")]
    if len(pair) != 2:
        raise ValueError(f"{name} must hold two numbers")
    return pair


def _parse_list(value):
    if isinstance(value, (list, tuple)):
        return list(value)
    return [v for v in str(value).split(",") if v != ""]


def _resolve_params(s: Settings) -> dict:
    params: dict = {}
    job_params = s.values.get("params")
    if isinstance(job_params, dict):
        for k, v in job_params.items():
            params[k] = _parse_number(v)
    for name in ("a", "b", "c"):
        v = s.values.get(name)
        if v is not None:
            params[name] = _parse_number(v)
    extra = s.values.get("param")
    if extra:
        for entry in (extra if isinstance(extra, list) else [extra]):
            if "=" not in str(entry):
                raise ValueError(f"--param needs NAME=VALUE, got {entry!r}")
            k, v = str(entry).split("=", 1)
            params[k.strip()] = _parse_number(v)
    s.effective["params"] = {k: str(v) for k, v in params.items()}
    return params


def build_spec(s: Settings, ensure_param: str | None = None,
               placeholder: float | complex = 0.0) -> MapSpec:
    params = _resolve_params(s)
    if ensure_param is not None and ensure_param not in params:
        # swept/varied parameters need no explicit binding
        params[ensure_param] = placeholder
    family = s.get("family")
    exprs = s.values.get("expr")
    if family and exprs:
        raise ValueError("give either --family or --expr, not both")
    if family:
        return make_family(family, **params)
    if exprs:
        exprs = exprs if isinstance(exprs, list) else [exprs]
        n = s.require("n", " (needed with --expr)")
        complex_scalars = bool(s.get("complex_scalars", False))
        if any(isinstance(v, complex) for v in params.values()):
            complex_scalars = True
        s.effective["complex_scalars"] = complex_scalars
        return MapSpec.from_sources(int(n), len(exprs), exprs, params=params,
                                    complex_scalars=complex_scalars,
                                    name="inline")
    raise ValueError("a map is required: --family NAME or --expr SOURCE")


def _resolve_seeds(s: Settings, spec: MapSpec):
    raw = s.require("seeds")
    entries = _parse_list(raw)
    if len(entries) != spec.n:
        raise ValueError(f"expected {spec.n} seeds, got {len(entries)}")
    if spec.complex_scalars:
        return [complex(str(e).replace(" ", "")) if not isinstance(e, (int, float, complex))
                else complex(e) for e in entries]
    return [float(e) for e in entries]


def _resolve_scheme(s: Settings) -> str:
    return str(s.get("scheme", "F")).upper()


def _resolve_config(s: Settings, base: ClassifyConfig = ClassifyConfig()) -> ClassifyConfig:
    cfg = ClassifyConfig(
        transient=int(s.get("transient", base.transient)),
        window=int(s.get("window", base.window)),
        tol=float(s.get("tol", base.tol)),
        max_period=int(s.get("max_period", base.max_period)),
        budget=int(s.get("budget", base.budget)),
        escalation=float(s.get("escalation", base.escalation)),
        near_miss_factor=float(s.get("near_miss_factor", base.near_miss_factor)),
    )
    return cfg


def _resolve_threads(s: Settings) -> int:
    t = s.get("threads")
    return int(t) if t else default_threads()


def _resolve_grid(s: Settings, default_rect) -> GridSpec:
    size = s.get("grid", "512x512")
    if isinstance(size, (list, tuple)):
        w, h = int(size[0]), int(size[1])
    else:
        parts = str(size).lower().replace("x", ",").split(",")
        if len(parts) == 1:
            parts = parts * 2
        w, h = int(parts[0]), int(parts[1])
    rect = s.get("rect", default_rect)
    if isinstance(rect, str):
        rect = [float(v) for v in rect.split(",")]
    rect = [float(v) for v in rect]
    if len(rect) != 4:
        raise ValueError("rect must hold x0,x1,y0,y1")
    axes = s.get("axes", (0, 1))
    if isinstance(axes, str):
        axes = [int(v) for v in axes.split(",")]
    fixed = s.get("fixed", ())
    if isinstance(fixed, str):
        fixed = [float(v) for v in fixed.split(",") if v]
    return GridSpec(width=w, height=h, x_min=rect[0], x_max=rect[1],
                    y_min=rect[2], y_max=rect[3],
                    axes=(int(axes[0]), int(axes[1])),
                    fixed=tuple(float(v) for v in fixed))


# ---------------------------------------------------------------------------
# Subcommands


def cmd_iterate(s: Settings) -> dict:
    spec = build_spec(s)
    scheme = _resolve_scheme(s)
    seeds = _resolve_seeds(s, spec)
    count = int(s.require("count"))
    rec = iterate(spec, scheme, seeds, count)
    out = s.get("out")
    if out:
        rec.to_csv(out)
    summary = {"command": "iterate", "terms": len(rec),
               "truncated": rec.truncated, "out": out}
    if len(rec) <= 32:
        if spec.complex_scalars:
            summary["values"] = [[v.real, v.imag] for v in rec.values.tolist()]
        else:
            summary["values"] = rec.values.tolist()
    return summary


def cmd_fixed_points(s: Settings) -> dict:
    spec = build_spec(s)
    interval = _parse_pair(s.get("interval", (0.0, 1.0)), "interval")
    grid = int(s.get("grid", 10_000))
    with_stability = bool(s.get("stability", False))
    fps = diagonal_fixed_points(spec, (interval[0], interval[1]), grid,
                                with_stability=with_stability,
                                scheme=_resolve_scheme(s))
    result = [{"value": fp.value, "residual": fp.residual,
               "stability": fp.stability_class} for fp in fps]
    out = s.get("out")
    if out:
        with open(out, "w") as fh:
            json.dump(result, fh, sort_keys=True)
    return {"command": "fixed-points", "fixed_points": result, "out": out}


def cmd_classify(s: Settings) -> dict:
    spec = build_spec(s)
    config = _resolve_config(s)
    rep = classify_attractor(spec, _resolve_scheme(s), _resolve_seeds(s, spec), config)
    out = s.get("out")
    if out:
        with open(out, "w") as fh:
            json.dump(rep.to_json_dict(), fh, sort_keys=True)
    return {"command": "classify", "report": rep.to_json_dict(), "out": out}


def cmd_scan(s: Settings) -> dict:
    rng = _parse_pair(s.require("a_range", " (--range lo,hi)"), "range")
    steps = int(s.require("steps"))
    sweep = str(s.get("sweep", "a"))
    spec = build_spec(s, ensure_param=sweep, placeholder=rng[0])
    config = _resolve_config(s)
    table = period_table(spec, _resolve_scheme(s), _resolve_seeds(s, spec),
                         (rng[0], rng[1]), steps, config, sweep=sweep,
                         threads=_resolve_threads(s))
    out = s.get("out")
    if out:
        table.to_csv(out)
    kinds = {}
    for rep in table.reports:
        kinds[rep.kind] = kinds.get(rep.kind, 0) + 1
    return {"command": "scan", "rows": steps, "kinds": kinds, "out": out}


def cmd_transition(s: Settings) -> dict:
    bracket = _parse_pair(s.require("bracket", " (--bracket lo,hi)"), "bracket")
    tol = float(s.get("bisect_tol", 1e-9))
    sweep = str(s.get("sweep", "a"))
    spec = build_spec(s, ensure_param=sweep, placeholder=bracket[0])
    config = _resolve_config(s)
    cv = locate_transition(spec, _resolve_scheme(s), _resolve_seeds(s, spec),
                           (bracket[0], bracket[1]), tol, config, sweep=sweep)
    out = s.get("out")
    if out:
        with open(out, "w") as fh:
            json.dump(cv.to_json_dict(), fh, sort_keys=True)
    return {"command": "transition", "midpoint": cv.midpoint,
            "bracket": list(cv.bracket),
            "lower": cv.lower.summary_key()[0], "lower_period": cv.lower.period,
            "upper": cv.upper.summary_key()[0], "upper_period": cv.upper.period,
            "forced_steps": cv.forced_steps, "out": out}


def cmd_feigenbaum(s: Settings) -> dict:
    rng = _parse_pair(s.require("a_range", " (--range lo,hi)"), "range")
    sweep = str(s.get("sweep", "a"))
    spec = build_spec(s, ensure_param=sweep, placeholder=rng[0])
    config = _resolve_config(s)
    base = int(s.require("base"))
    doublings = int(s.require("doublings"))
    tol = float(s.get("bisect_tol", 1e-9))
    est = feigenbaum(spec, _resolve_scheme(s), _resolve_seeds(s, spec), base,
                     doublings, rng[0], rng[1], tol, config, sweep=sweep)
    out = s.get("out")
    if out:
        with open(out, "w") as fh:
            json.dump(est.to_json_dict(), fh, sort_keys=True)
    return {"command": "feigenbaum", **est.to_json_dict(), "out": out}


def cmd_sharkovsky(s: Settings) -> dict:
    n = int(s.require("n"))
    compare = s.get("compare")
    chain_limit = s.get("chain")
    if compare is not None:
        p, q = (int(v) for v in _parse_list(compare))
        order = sharkovsky_compare(p, q, n)
        if order == "p-first":
            message = f"{p} precedes {q}"
        elif order == "q-first":
            message = f"{q} precedes {p}"
        else:
            message = f"{p} equals {q}"
        return {"command": "sharkovsky", "n": n, "compare": [p, q],
                "order": order, "message": message}
    if chain_limit is not None:
        chain = sharkovsky_chain(n, int(chain_limit))
        return {"command": "sharkovsky", "n": n, "limit": int(chain_limit),
                "chain": chain}
    raise ValueError("sharkovsky needs --compare p,q or --chain LIMIT")


def cmd_basin(s: Settings) -> dict:
    spec = build_spec(s)
    config = _resolve_config(s, BASIN_CONFIG)
    grid = _resolve_grid(s, (0.0, 1.0, 0.0, 1.0))
    ras = basin_map(spec, _resolve_scheme(s), grid=grid, config=config,
                    threads=_resolve_threads(s))
    out = s.get("out")
    csv_out = s.get("csv_out")
    if out:
        ras.to_pgm(out)
    if csv_out:
        ras.to_csv(csv_out)
    hist = {}
    for lab, count in zip(*np.unique(ras.labels, return_counts=True)):
        hist[int(lab)] = int(count)
    return {"command": "basin", "grid": [grid.width, grid.height],
            "fixed_points": list(ras.fixed_points), "label_histogram": hist,
            "out": out, "csv_out": csv_out}


def _cmd_escape(s: Settings, mode: str) -> dict:
    vary = str(s.get("vary", "c"))
    spec = build_spec(s, ensure_param=vary if mode == "mandelbrot" else None,
                      placeholder=0j)
    grid = _resolve_grid(s, (-2.0, 2.0, -2.0, 2.0))
    radius = float(s.get("radius", 1e6))
    max_iter = int(s.get("max_iter", 1000))
    binding = None
    raw = s.values.get("seeds")
    if raw is not None:
        entries = _parse_list(raw)
        binding = [e if (isinstance(e, str) and e.strip().lower() == "cell")
                   else complex(str(e).replace(" ", "")) for e in entries]
    s.effective["seeds"] = raw
    ras = escape_raster(spec, _resolve_scheme(s), mode, grid=grid,
                        seed_binding=binding, escape_radius=radius,
                        max_iter=max_iter, vary_param=vary,
                        threads=_resolve_threads(s))
    out = s.get("out")
    csv_out = s.get("csv_out")
    if out:
        ras.to_pgm(out)
    if csv_out:
        ras.to_csv(csv_out)
    bounded = int(ras.bounded_mask().sum())
    return {"command": mode, "grid": [grid.width, grid.height],
            "escape_radius": radius, "max_iter": max_iter,
            "bounded_cells": bounded, "out": out, "csv_out": csv_out}


DISPATCH = {
    "iterate": cmd_iterate,
    "fixed-points": cmd_fixed_points,
    "classify": cmd_classify,
    "scan": cmd_scan,
    "transition": cmd_transition,
    "feigenbaum": cmd_feigenbaum,
    "sharkovsky": cmd_sharkovsky,
    "basin": cmd_basin,
    "julia": lambda s: _cmd_escape(s, "julia"),
    "mandelbrot": lambda s: _cmd_escape(s, "mandelbrot"),
}


def main(argv=None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    # allow `geniter --job file.json` with the command named inside the job
    if argv and argv[0] == "--job":
        if len(argv) < 2:
            print("geniter: error: --job needs a file", file=sys.stderr)
            return 1
        try:
            with open(argv[1]) as fh:
                job = json.load(fh)
            command = job["command"]
        except (OSError, json.JSONDecodeError, KeyError) as exc:
            print(f"geniter: error: bad job file: {exc}", file=sys.stderr)
            return 1
        argv = [str(command)] + argv
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        settings = Settings(ns)
        summary = DISPATCH[ns.command](settings)
    except (ValueError, ExprError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"geniter: error: {exc}", file=sys.stderr)
        return 1
    except BracketingError as exc:
        print(f"geniter: numerical failure: {exc}", file=sys.stderr)
        return 2
    summary["settings"] = {k: _jsonable(v) for k, v in sorted(settings.effective.items())}
    print(json.dumps(summary, sort_keys=True, default=_jsonable))
    return 0


def _jsonable(v):
    if isinstance(v, complex):
        return [v.real, v.imag]
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating,)):
        return float(v)
    if isinstance(v, tuple):
        return list(v)
    return v


if __name__ == "__main__":
    raise SystemExit(main())
