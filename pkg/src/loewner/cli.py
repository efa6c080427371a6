"""Command line front end.

Every subcommand reads its options from flags, falling back to an optional
``--config`` file of flat ``key = value`` lines (flags win, unknown keys are
rejected), and emits a JSON report carrying the tool version, the command,
the fully resolved configuration, and the result.  Trace-producing commands
can emit CSV or SVG data instead.

Exit codes: 0 on success, 2 for argument and usage errors, 3 for numerical
failures.

Driving terms are given as compact spec strings:

    const:VALUE       constant driving (complex values use i, e.g. const:-1)
    sqrt:COEFF        k(t) = COEFF * sqrt(t), real codomain only
    table:PATH        sampled driving from a CSV file, held constant per cell
    table:PATH:linear same, linearly interpolated

Vector fields are expressions in z (and t where allowed), e.g. ``-z`` or
``(1 - z^2) * (1 + t)``.
"""

from __future__ import annotations

import argparse
import json
import multiprocessing
import os
import sys
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import __version__, chordal, radial
from .coefficients import bieberbach_verify
from .driving import (DrivingTerm, PIECEWISE_CONSTANT, PIECEWISE_LINEAR,
                      brownian_driving, make_constant, make_sqrt)
from .errors import ArgumentError, DrivingError, NumericalError
from .fieldexpr import compile_field
from .generators import berkson_porta, generator_test
from .loewner_range import classify_range

TRACE_POINTS_PER_UNIT = 10_000
SLE_DEFAULT_N = 2048


def parse_complex(text: str) -> complex:
    """Parse a complex literal written with i as the imaginary unit."""
    s = text.strip().replace(" ", "").replace("I", "i").replace("i", "j")
    try:
        return complex(s)
    except ValueError:
        raise ArgumentError(f"cannot parse complex number {text!r}") from None


def parse_seed_range(text: str) -> tuple[int, int]:
    """'a..b' inclusive, or a single seed."""
    body = text.strip()
    lo, sep, hi = body.partition("..")
    try:
        if not sep:
            seed = int(body)
            return seed, seed
        lo_i, hi_i = int(lo), int(hi)
    except ValueError:
        raise ArgumentError(f"cannot parse seed range {text!r}; "
                            "expected N or A..B") from None
    if hi_i < lo_i:
        raise ArgumentError(f"empty seed range {text!r}")
    return lo_i, hi_i


def parse_driving(spec: str, codomain: str) -> DrivingTerm:
    """Build a driving term from a spec string, checked against codomain."""
    kind, _, rest = spec.partition(":")
    kind = kind.strip().lower()
    if kind == "const":
        if codomain == "unimodular":
            return make_constant(parse_complex(rest), codomain)
        try:
            return make_constant(float(rest), codomain)
        except ValueError:
            raise DrivingError(f"bad constant driving value {rest!r}") from None
    if kind == "sqrt":
        if codomain != "real":
            raise DrivingError("sqrt driving is real-valued; "
                               "this command needs a unimodular driving")
        try:
            return make_sqrt(float(rest))
        except ValueError:
            raise DrivingError(f"bad sqrt coefficient {rest!r}") from None
    if kind == "table":
        path, _, interp = rest.partition(":")
        interp = interp.strip().lower()
        if interp in ("", "constant"):
            interpolation = PIECEWISE_CONSTANT
        elif interp == "linear":
            interpolation = PIECEWISE_LINEAR
        else:
            raise DrivingError(f"unknown table interpolation {interp!r}")
        try:
            term = DrivingTerm.from_csv(path.strip(), interpolation)
        except OSError as e:
            raise DrivingError(f"cannot read driving table: {e}") from None
        if term.codomain != codomain:
            raise DrivingError(f"driving table is {term.codomain}-valued, "
                               f"this command needs {codomain}")
        return term
    raise DrivingError(f"unknown driving spec {spec!r}; "
                       "use const:VALUE, sqrt:COEFF, or table:PATH[:linear]")


# ---------------------------------------------------------------------------
# option plumbing

_REQUIRED = object()


@dataclass(frozen=True)
class _Opt:
    name: str
    conv: Callable[[str], object]
    default: object
    help: str


def _choice(*allowed: str) -> Callable[[str], str]:
    def conv(text: str) -> str:
        value = text.strip().lower()
        if value not in allowed:
            raise ArgumentError(f"expected one of {', '.join(allowed)}, "
                                f"got {text!r}")
        return value
    return conv


def _read_config(path: str, known: dict) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as e:
        raise ArgumentError(f"cannot read config file: {e}") from None
    out = {}
    for lineno, line in enumerate(lines, 1):
        body = line.strip()
        if not body or body.startswith("#"):
            continue
        key, sep, value = body.partition("=")
        if not sep:
            raise ArgumentError(f"{path}:{lineno}: expected key = value")
        key = key.strip().lower().replace("_", "-")
        if key not in known:
            raise ArgumentError(f"{path}:{lineno}: unknown option {key!r} "
                                f"for this command")
        out[key] = value.strip()
    return out


def _resolve(args: argparse.Namespace, table: tuple[_Opt, ...]) -> dict:
    byname = {o.name: o for o in table}
    from_file = _read_config(args.config, byname) if args.config else {}
    resolved = {}
    for opt in table:
        raw = getattr(args, opt.name.replace("-", "_"))
        if raw is None:
            raw = from_file.get(opt.name)
        if raw is None:
            if opt.default is _REQUIRED:
                raise ArgumentError(f"missing required option --{opt.name}")
            resolved[opt.name] = opt.default
            continue
        try:
            resolved[opt.name] = opt.conv(raw)
        except ArgumentError:
            raise
        except (ValueError, TypeError) as e:
            raise ArgumentError(
                f"bad value for --{opt.name}: {raw!r} ({e})") from None
    return resolved


def _cfg_jsonable(value):
    if isinstance(value, complex):
        return _fmt_complex(value)
    if isinstance(value, tuple):
        return "..".join(str(v) for v in value)
    return value


def _fmt_complex(w: complex) -> str:
    return f"{w.real:.17g}{w.imag:+.17g}i"


def _c2(prefix: str, w: complex) -> dict:
    return {f"{prefix}_re": float(w.real), f"{prefix}_im": float(w.imag)}


def _write_text(out: str | None, text: str) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _emit_report(command: str, cfg: dict, result: dict,
                 out: str | None) -> None:
    doc = {"tool_version": __version__,
           "command": command,
           "config": {k: _cfg_jsonable(v) for k, v in cfg.items()},
           "result": result}
    _write_text(out, json.dumps(doc, indent=2, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# SVG output

def _svg_polyline(poly: chordal.TracePolyline, fh, size: int = 640,
                  margin: int = 40) -> None:
    """One polyline on a fixed square canvas, axes included, y up."""
    pts = poly.points[poly.valid]
    if pts.size == 0:
        raise NumericalError("no valid trace points to draw")
    xmin = min(float(pts.real.min()), 0.0)
    xmax = max(float(pts.real.max()), 0.0)
    ymin = min(float(pts.imag.min()), 0.0)
    ymax = max(float(pts.imag.max()), 0.0)
    span = max(xmax - xmin, ymax - ymin, 1e-12)
    scale = (size - 2 * margin) / span

    def sx(x: float) -> float:
        return margin + (x - xmin) * scale

    def sy(y: float) -> float:
        return size - margin - (y - ymin) * scale

    coords = " ".join(f"{sx(p.real):.3f},{sy(p.imag):.3f}"
                      for p in poly.points)
    fh.write(f'<svg xmlns="http://www.w3.org/2000/svg" '
             f'viewBox="0 0 {size} {size}">\n')
    fh.write(f'  <line x1="{margin}" y1="{sy(0):.3f}" '
             f'x2="{size - margin}" y2="{sy(0):.3f}" '
             f'stroke="#999" stroke-width="1"/>\n')
    fh.write(f'  <line x1="{sx(0):.3f}" y1="{margin}" '
             f'x2="{sx(0):.3f}" y2="{size - margin}" '
             f'stroke="#999" stroke-width="1"/>\n')
    fh.write(f'  <polyline points="{coords}" fill="none" '
             f'stroke="#1a4f8a" stroke-width="1.5"/>\n')
    fh.write('</svg>\n')


# ---------------------------------------------------------------------------
# subcommand handlers

def _cmd_radial_evolve(cfg: dict) -> None:
    term = parse_driving(cfg["driving"], "unimodular")
    w = radial.evolve(cfg["z"], cfg["s"], cfg["t"], term,
                      rel_tol=cfg["rel-tol"], abs_tol=cfg["abs-tol"])
    result = {**_c2("value", w), "value_abs": float(abs(w))}
    _emit_report("radial-evolve", cfg, result, cfg["out"])


def _trace_summary(poly: chordal.TracePolyline) -> dict:
    invalid = int(poly.valid.size - int(poly.valid.sum()))
    return {"points": len(poly), "invalid": invalid,
            **_c2("terminal", poly.points[-1])}


def _emit_trace(command: str, cfg: dict, poly: chordal.TracePolyline) -> None:
    fmt, out = cfg["format"], cfg["out"]
    if fmt == "csv":
        if out is None:
            poly.to_csv(sys.stdout)
            return
        poly.to_csv(out)
        _emit_report(command, cfg, {**_trace_summary(poly), "path": out}, None)
    elif fmt == "svg":
        if out is None:
            _svg_polyline(poly, sys.stdout)
            return
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            _svg_polyline(poly, fh)
        _emit_report(command, cfg, {**_trace_summary(poly), "path": out}, None)
    else:
        result = {**_trace_summary(poly),
                  "times": [float(x) for x in poly.times],
                  "re": [float(x) for x in poly.points.real],
                  "im": [float(x) for x in poly.points.imag]}
        _emit_report(command, cfg, result, out)


def _cmd_trace(cfg: dict) -> None:
    term = parse_driving(cfg["driving"], "real")
    if cfg["n"] is None:
        cfg["n"] = max(1, round(TRACE_POINTS_PER_UNIT * cfg["t"]))
    poly = chordal.trace(cfg["t"], cfg["n"], term, y0=cfg["y0"])
    _emit_trace("trace", cfg, poly)


def _cmd_sle(cfg: dict) -> None:
    if cfg["n"] is None:
        cfg["n"] = SLE_DEFAULT_N
    poly = chordal.chordal_sle_trace(cfg["kappa"], cfg["seed"], cfg["t"],
                                     cfg["n"], y0=cfg["y0"])
    _emit_trace("sle", cfg, poly)


def _sle_batch_worker(job):
    seed, kappa, T, n, y0, out_dir = job
    term = brownian_driving(seed, kappa, T, n)
    poly = chordal.trace(T, n, term, y0=y0)
    path = os.path.join(out_dir, f"sle_{seed:05d}.csv")
    poly.to_csv(path)
    invalid = int(poly.valid.size - int(poly.valid.sum()))
    return seed, float(term.values[-1]), invalid


def _cmd_sle_batch(cfg: dict) -> None:
    lo, hi = cfg["seeds"]
    if cfg["n"] is None:
        cfg["n"] = SLE_DEFAULT_N
    out_dir = cfg["out-dir"]
    os.makedirs(out_dir, exist_ok=True)
    jobs = [(seed, cfg["kappa"], cfg["t"], cfg["n"], cfg["y0"], out_dir)
            for seed in range(lo, hi + 1)]
    if cfg["jobs"] > 1:
        with multiprocessing.Pool(cfg["jobs"]) as pool:
            rows = pool.map(_sle_batch_worker, jobs)
    else:
        rows = [_sle_batch_worker(job) for job in jobs]
    terminals = np.array([r[1] for r in rows])
    variance = float(terminals.var(ddof=1)) if len(rows) > 1 else 0.0
    result = {"count": len(rows),
              "out_dir": out_dir,
              "invalid_total": int(sum(r[2] for r in rows)),
              "terminal_mean": float(terminals.mean()),
              "terminal_variance": variance,
              "expected_variance": float(cfg["kappa"] * cfg["t"])}
    _emit_report("sle-batch", cfg, result, cfg["out"])


def _compiled_autonomous(src: str):
    H = compile_field(src)
    if H.time_dependent:
        raise ArgumentError("this command needs an autonomous field; "
                            "the expression must not use t")
    return H


def _cmd_check_generator(cfg: dict) -> None:
    H = _compiled_autonomous(cfg["field"])
    verdict = generator_test(H, grid_n=cfg["grid-n"], tol=cfg["tol"])
    result = {"accepted": bool(verdict.accepted),
              "max_violation": float(verdict.max_violation),
              **_c2("witness", verdict.witness)}
    _emit_report("check-generator", cfg, result, cfg["out"])


def _cmd_decompose(cfg: dict) -> None:
    H = _compiled_autonomous(cfg["field"])
    r = berkson_porta(H, boundary_grid=cfg["boundary-grid"],
                      grid_n=cfg["grid-n"], re_tol=cfg["re-tol"])
    result = {**_c2("tau", r.tau), "tau_abs": float(abs(r.tau)),
              "residual": float(r.residual),
              "violation": float(r.violation)}
    _emit_report("decompose", cfg, result, cfg["out"])


def _cmd_coeffs(cfg: dict) -> None:
    term = parse_driving(cfg["driving"], "unimodular")
    r = bieberbach_verify(term, s=cfg["s"], t_max=cfg["t-max"])
    result = {**_c2("a2", r.a2), **_c2("a3", r.a3),
              **_c2("b2", r.b2), **_c2("b3", r.b3),
              "b2_abs": float(abs(r.b2)), "b3_abs": float(abs(r.b3)),
              "bounds_pass": bool(r.bounds_pass),
              "error_budget": float(r.error_budget)}
    _emit_report("coeffs", cfg, result, cfg["out"])


def _cmd_range_classify(cfg: dict) -> None:
    G = compile_field(cfg["field"])
    verdict = classify_range(G, s=cfg["s"])
    result = {"classification": verdict.classification,
              "beta": float(verdict.beta),
              "decay_ratio": float(verdict.decay_ratio),
              "horizon": float(verdict.horizon),
              "samples": [[float(t), float(v)] for t, v in verdict.samples]}
    if verdict.probe is not None:
        result.update(_c2("probe_z", verdict.probe[0]))
        result.update(_c2("probe_v", verdict.probe[1]))
    _emit_report("range-classify", cfg, result, cfg["out"])


# ---------------------------------------------------------------------------
# command tables

_OUT = _Opt("out", str, None, "output file (default: stdout)")
_FORMAT = _Opt("format", _choice("csv", "svg", "json"), "csv",
               "output format: csv, svg, or json")

_COMMANDS: dict[str, tuple[tuple[_Opt, ...], Callable[[dict], None], str]] = {
    "radial-evolve": ((
        _Opt("z", parse_complex, _REQUIRED, "initial point in the unit disc"),
        _Opt("s", float, 0.0, "start time"),
        _Opt("t", float, _REQUIRED, "end time"),
        _Opt("driving", str, _REQUIRED,
             "unimodular driving spec, e.g. const:-1"),
        _Opt("rel-tol", float, radial.DEFAULT_REL_TOL, "relative tolerance"),
        _Opt("abs-tol", float, radial.DEFAULT_ABS_TOL, "absolute tolerance"),
        _OUT,
    ), _cmd_radial_evolve,
        "flow a disc point from time s to time t"),

    "trace": ((
        _Opt("t", float, _REQUIRED, "total time"),
        _Opt("n", int, None,
             f"trace points (default {TRACE_POINTS_PER_UNIT} per unit time)"),
        _Opt("driving", str, _REQUIRED, "real driving spec, e.g. sqrt:1"),
        _Opt("y0", float, None, "seed height above the boundary"),
        _FORMAT,
        _OUT,
    ), _cmd_trace,
        "compute the trace driven by a real driving term"),

    "sle": ((
        _Opt("kappa", float, _REQUIRED, "diffusivity"),
        _Opt("seed", int, _REQUIRED, "random seed"),
        _Opt("t", float, 1.0, "total time"),
        _Opt("n", int, None, f"trace points (default {SLE_DEFAULT_N})"),
        _Opt("y0", float, None, "seed height above the boundary"),
        _FORMAT,
        _OUT,
    ), _cmd_sle,
        "compute one scaled Brownian trace"),

    "sle-batch": ((
        _Opt("kappa", float, _REQUIRED, "diffusivity"),
        _Opt("seeds", parse_seed_range, _REQUIRED,
             "seed range A..B inclusive, or a single seed"),
        _Opt("t", float, 1.0, "total time"),
        _Opt("n", int, None, f"trace points (default {SLE_DEFAULT_N})"),
        _Opt("y0", float, None, "seed height above the boundary"),
        _Opt("jobs", int, 1, "worker processes"),
        _Opt("out-dir", str, _REQUIRED, "directory for per-seed CSV files"),
        _OUT,
    ), _cmd_sle_batch,
        "compute many scaled Brownian traces and summarize"),

    "check-generator": ((
        _Opt("field", str, _REQUIRED,
             "vector field expression in z "
             "(spell --field=EXPR if it starts with -)"),
        _Opt("grid-n", int, 24, "radial grid resolution"),
        _Opt("tol", float, 1e-9, "acceptance tolerance"),
        _OUT,
    ), _cmd_check_generator,
        "test whether a field generates a disc semiflow"),

    "decompose": ((
        _Opt("field", str, _REQUIRED,
             "vector field expression in z "
             "(spell --field=EXPR if it starts with -)"),
        _Opt("boundary-grid", int, 720, "boundary scan resolution"),
        _Opt("grid-n", int, 24, "radial grid resolution"),
        _Opt("re-tol", float, 1e-8, "admissibility tolerance"),
        _OUT,
    ), _cmd_decompose,
        "factor a semiflow field through its fixed point"),

    "coeffs": ((
        _Opt("driving", str, _REQUIRED,
             "unimodular driving spec, e.g. const:-1"),
        _Opt("s", float, 0.0, "chain time"),
        _Opt("t-max", float, None, "quadrature horizon (default s + 40)"),
        _OUT,
    ), _cmd_coeffs,
        "chain coefficients a2, a3 and their normalized bounds"),

    "range-classify": ((
        _Opt("field", str, _REQUIRED,
             "vector field expression in z and t "
             "(spell --field=EXPR if it starts with -)"),
        _Opt("s", float, 0.0, "start time"),
        _OUT,
    ), _cmd_range_classify,
        "classify the evolution range as plane-like or disc-like"),
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="loewner",
        description="numerical Loewner evolution toolkit")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True,
                                metavar="COMMAND")
    for name, (table, handler, doc) in _COMMANDS.items():
        p = sub.add_parser(name, help=doc, description=doc)
        p.add_argument("--config", default=None, metavar="FILE",
                       help="key = value option file; flags take precedence")
        for opt in table:
            default_note = ""
            if opt.default is not _REQUIRED and opt.default is not None:
                default_note = f" (default: {opt.default})"
            p.add_argument(f"--{opt.name}", default=None,
                           metavar=opt.name.replace("-", "_").upper(),
                           help=opt.help + default_note)
        p.set_defaults(_table=table, _handler=handler, _command=name)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = _resolve(args, args._table)
        args._handler(cfg)
    except (ArgumentError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except NumericalError as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
