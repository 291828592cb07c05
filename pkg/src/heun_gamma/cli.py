"""Batch command-line front end.

    heun-gamma <solve|verify|terminate|reductions|special>
               --config cfg.json [--out DIR] [--n INT] [--tol FLOAT]

The JSON config selects an equation, a scheme and options; outputs are a
CSV sample table (z_re,z_im,u_re,u_im,uprime_re,uprime_im,residual) and
JSON reports carrying schema_version "1". Exit codes: 0 success, 2 when a
verify run exceeds its tolerance, 1 on any error (one JSON line with the
reason goes to stderr). Identical configs produce byte-identical outputs.
"""

from __future__ import annotations

import argparse
import cmath
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .equations import ConfluentHeun, special_closed_form
from .errors import HeunGammaError, ParseError, PreconditionError, ValidationError
from .expansion import assemble, determine_c0, evaluate, v_values
from .oracle import compare, residual_power_series
from .recurrence import SCHEME_IDS, detect_reductions, scheme_from_id
from .equations import derive_v_equation
from .termination import find_terminating_q, grid_points, verify_finite_sum

__all__ = ["JobConfig", "parse_config", "run", "main"]

SCHEMA_VERSION = "1"

_TOP_KEYS = {"equation", "scheme", "mu", "lambda", "n", "tol", "grid",
             "stop_index", "reference_point"}
_EQ_KEYS = {"variant", "gamma", "delta", "epsilon", "alpha", "q"}
_GRID_KEYS = {"center", "radius", "count", "points"}


def _complex_from(value, where):
    if (not isinstance(value, (list, tuple)) or len(value) != 2
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool)
                       for v in value)):
        raise ParseError(f"{where}: complex values are two-element arrays [re, im]")
    return complex(value[0], value[1])


def _complex_to(value):
    return [value.real, value.imag]


@dataclass
class JobConfig:
    """Validated job description; round-trips losslessly through JSON."""

    equation: ConfluentHeun
    scheme_id: str
    mu: object                 # "auto" or complex
    rate: complex | None
    n_terms: int
    tol: float
    grid: dict | None
    stop_index: int
    reference_point: complex | None

    def scheme(self):
        return scheme_from_id(self.scheme_id, rate=self.rate)

    def to_dict(self):
        eq = self.equation
        out = {
            "equation": {
                "variant": eq.variant,
                "gamma": _complex_to(eq.gamma),
                "delta": _complex_to(eq.delta),
                "epsilon": _complex_to(eq.epsilon),
                "alpha": _complex_to(eq.alpha),
                "q": _complex_to(eq.q),
            },
            "scheme": self.scheme_id,
            "mu": self.mu if self.mu == "auto" else _complex_to(self.mu),
            "n": self.n_terms,
            "tol": self.tol,
            "stop_index": self.stop_index,
        }
        if self.rate is not None:
            out["lambda"] = _complex_to(self.rate)
        if self.grid is not None:
            out["grid"] = self.grid
        if self.reference_point is not None:
            out["reference_point"] = _complex_to(self.reference_point)
        return out


def parse_config(text):
    """Parse and validate a JSON job configuration.

    Unknown keys are rejected (ParseError); violated scheme preconditions
    surface as ValidationError quoting the condition.
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: line {exc.lineno}, column {exc.colno}: "
                         f"{exc.msg}") from None
    if not isinstance(raw, dict):
        raise ParseError("top level must be an object")
    unknown = set(raw) - _TOP_KEYS
    if unknown:
        raise ParseError(f"unknown keys: {', '.join(sorted(unknown))}")
    if "equation" not in raw or "scheme" not in raw:
        raise ParseError("config requires 'equation' and 'scheme'")

    eq_raw = raw["equation"]
    if not isinstance(eq_raw, dict):
        raise ParseError("'equation' must be an object")
    unknown = set(eq_raw) - _EQ_KEYS
    if unknown:
        raise ParseError(f"equation: unknown keys: {', '.join(sorted(unknown))}")
    missing = _EQ_KEYS - set(eq_raw)
    if missing:
        raise ParseError(f"equation: missing keys: {', '.join(sorted(missing))}")
    variant = eq_raw["variant"]
    if variant not in ("SCHE", "DCHE", "BCHE", "TCHE"):
        raise ParseError(f"equation.variant must be one of SCHE/DCHE/BCHE/TCHE, "
                         f"got {variant!r}")
    params = {k: _complex_from(eq_raw[k], f"equation.{k}")
              for k in ("gamma", "delta", "epsilon", "alpha", "q")}
    try:
        eq = ConfluentHeun(variant, **params)
    except PreconditionError as exc:
        raise ValidationError(str(exc)) from None

    scheme_id = raw["scheme"]
    if scheme_id not in SCHEME_IDS:
        raise ParseError(f"unknown scheme {scheme_id!r}; valid ids: "
                         f"{', '.join(sorted(SCHEME_IDS))}")

    mu = raw.get("mu", "auto")
    if mu != "auto":
        mu = _complex_from(mu, "mu")

    rate = raw.get("lambda")
    if rate is not None:
        rate = _complex_from(rate, "lambda")

    n_terms = raw.get("n", 60)
    if not isinstance(n_terms, int) or isinstance(n_terms, bool) or n_terms < 0:
        raise ParseError("'n' must be a non-negative integer")
    tol = raw.get("tol", 1e-8)
    if not isinstance(tol, (int, float)) or isinstance(tol, bool) or tol <= 0:
        raise ParseError("'tol' must be a positive number")

    grid = raw.get("grid")
    if grid is not None:
        if not isinstance(grid, dict):
            raise ParseError("'grid' must be an object")
        unknown = set(grid) - _GRID_KEYS
        if unknown:
            raise ParseError(f"grid: unknown keys: {', '.join(sorted(unknown))}")
        if "points" in grid:
            if set(grid) != {"points"}:
                raise ParseError("grid: 'points' excludes center/radius/count")
            pts = grid["points"]
            if not isinstance(pts, list) or not pts:
                raise ParseError("grid.points must be a non-empty array")
            for p in pts:
                _complex_from(p, "grid.points[]")
        else:
            if set(grid) - {"center", "radius", "count"}:
                raise ParseError("grid requires center/radius/count or points")
            if "center" in grid:
                _complex_from(grid["center"], "grid.center")
            if "radius" in grid and (not isinstance(grid["radius"], (int, float))
                                     or grid["radius"] <= 0):
                raise ParseError("grid.radius must be positive")
            if "count" in grid and (not isinstance(grid["count"], int)
                                    or grid["count"] < 1):
                raise ParseError("grid.count must be a positive integer")

    stop_index = raw.get("stop_index", 1)
    if not isinstance(stop_index, int) or isinstance(stop_index, bool) or stop_index < 1:
        raise ParseError("'stop_index' must be a positive integer")

    z_ref = raw.get("reference_point")
    if z_ref is not None:
        z_ref = _complex_from(z_ref, "reference_point")

    cfg = JobConfig(equation=eq, scheme_id=scheme_id, mu=mu, rate=rate,
                    n_terms=n_terms, tol=tol, grid=grid, stop_index=stop_index,
                    reference_point=z_ref)
    try:
        cfg.scheme().validate(eq)
    except PreconditionError as exc:
        raise ValidationError(str(exc)) from None
    return cfg


def _fmt(x):
    return repr(float(x))


def _resolve_grid(cfg, series):
    if cfg.grid and "points" in cfg.grid:
        return [_complex_from(p, "grid.points[]") for p in cfg.grid["points"]]
    center = series.z1
    radius = series.radius / 2.0 if math.isfinite(series.radius) else 2.0
    count = 20
    if cfg.grid:
        if "center" in cfg.grid:
            center = _complex_from(cfg.grid["center"], "grid.center")
        if "radius" in cfg.grid:
            radius = float(cfg.grid["radius"])
        if "count" in cfg.grid:
            count = int(cfg.grid["count"])
    return grid_points(center, radius, count)


def _pick_reference(cfg, series, eq):
    if cfg.reference_point is not None:
        determine_c0(series, eq, cfg.reference_point)
        return cfg.reference_point
    base = series.radius if math.isfinite(series.radius) else 2.0
    last = None
    for frac in (0.27, 0.35, 0.19, 0.43):
        for ang in (0.3, 2.1, 4.2, 1.2, 5.3):
            z_ref = series.z1 + base * frac * cmath.exp(1j * ang)
            try:
                determine_c0(series, eq, z_ref)
                return z_ref
            except HeunGammaError as exc:
                last = exc
    raise last


def _series_row(series, eq, z):
    u, up, in_region = evaluate(series, z)
    v, vp = v_values(series, z)
    lam_p = series.scale * (z - series.z1) ** (series.power - 1)
    upp = cmath.exp(-series.weight_value(z)) * (vp - lam_p * v)
    res = abs(eq.residual(z, u, up, upp)) / eq.residual_scale(z, u, up, upp)
    return (f"{_fmt(z.real)},{_fmt(z.imag)},{_fmt(u.real)},{_fmt(u.imag)},"
            f"{_fmt(up.real)},{_fmt(up.imag)},{_fmt(res)}")


def _write_json(path, payload):
    payload = dict(payload)
    payload["schema_version"] = SCHEMA_VERSION
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")


def _series_meta(cfg, series, z_ref):
    return {
        "scheme": cfg.scheme_id,
        "mu": _complex_to(series.mu),
        "n": series.coefficients.order,
        "weight_scale": _complex_to(series.scale),
        "weight_power": series.power,
        "center": _complex_to(series.z1),
        "radius": (series.radius if math.isfinite(series.radius) else "inf"),
        "c0": _complex_to(series.c0),
        "reference_point": _complex_to(z_ref),
        "coefficient_scale_log2": series.coefficients.log2_scale,
    }


def _build_series(cfg):
    eq = cfg.equation
    scheme = cfg.scheme()
    mu = None if cfg.mu == "auto" else cfg.mu
    series = assemble(eq, scheme, mu=mu, n_terms=cfg.n_terms)
    z_ref = _pick_reference(cfg, series, eq)
    return eq, scheme, series, z_ref


def run(command, cfg, out_dir="."):
    """Execute one command; returns the process exit status."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    if command == "solve":
        eq, scheme, series, z_ref = _build_series(cfg)
        pts = _resolve_grid(cfg, series)
        rows = [_series_row(series, eq, z) for z in pts]
        (out / "samples.csv").write_text(
            "z_re,z_im,u_re,u_im,uprime_re,uprime_im,residual\n"
            + "\n".join(rows) + "\n", encoding="utf-8")
        _write_json(out / "solve.json", {"series": _series_meta(cfg, series, z_ref)})
        return 0

    if command == "verify":
        eq, scheme, series, z_ref = _build_series(cfg)
        pts = _resolve_grid(cfg, series)
        max_err = compare(series, eq, pts)
        op = derive_v_equation(eq.operator(), scheme.weight_spec(eq))
        resid = residual_power_series(op, series.mu, series.coefficients, series.z1)
        cscale = max(abs(c) for c in series.coefficients.coefficients)
        max_resid = max(resid) / (cscale * op.scale() + 1e-300)
        passed = max_err <= cfg.tol
        _write_json(out / "verify.json", {
            "series": _series_meta(cfg, series, z_ref),
            "max_error": max_err,
            "max_residual_coefficient": max_resid,
            "tolerance": cfg.tol,
            "passed": passed,
        })
        return 0 if passed else 2

    if command == "terminate":
        eq = cfg.equation
        scheme = cfg.scheme()
        mu = None if cfg.mu == "auto" else cfg.mu
        if mu is None:
            from .recurrence import admissible_exponents
            mu = admissible_exponents(eq, scheme)[0]
        cand = find_terminating_q(eq, scheme, cfg.stop_index, mu)
        _write_json(out / "terminate.json", {
            "scheme": cfg.scheme_id,
            "stop_index": cand.n_stop,
            "mu": _complex_to(cand.mu),
            "alpha": _complex_to(cand.alpha),
            "certified_roots": [{
                "q": _complex_to(r.q),
                "c_next": r.c_next_mag,
                "c_next_next": r.c_next2_mag,
                "finite_sum_residual": r.residual,
            } for r in cand.certified],
            "uncertified_roots": [{
                "q": _complex_to(r.q),
                "c_next": r.c_next_mag,
                "c_next_next": r.c_next2_mag,
                "finite_sum_residual": (r.residual if math.isfinite(r.residual)
                                        else "inf"),
            } for r in cand.uncertified],
        })
        return 0

    if command == "reductions":
        eq = cfg.equation
        scheme = cfg.scheme()
        rep = detect_reductions(eq, scheme)
        _write_json(out / "reductions.json", {
            "scheme": rep.scheme_id,
            "coefficient_functions": list(rep.names),
            "vanishing": list(rep.vanishing),
            "effective_terms": rep.effective_terms,
            "successive": rep.successive,
            "rate_choices": {k: [_complex_to(v) for v in vs]
                             for k, vs in sorted(rep.rate_choices.items())},
        })
        return 0

    if command == "special":
        eq = cfg.equation
        form = special_closed_form(eq)
        payload = {"matched": form is not None}
        if form is not None:
            payload["kind"] = form.kind
            series = None
            try:
                eq2, scheme, series, z_ref = _build_series(cfg)
            except HeunGammaError:
                series = None
            pts = _resolve_grid(cfg, series) if series is not None else \
                grid_points(0.35 + 0j, 0.25, 12)
            rows = []
            worst = 0.0
            for z in pts:
                try:
                    u1 = form.u1(z)
                    u2 = form.u2(z)
                except Exception:
                    continue
                rows.append(f"{_fmt(z.real)},{_fmt(z.imag)},{_fmt(u1.real)},"
                            f"{_fmt(u1.imag)},{_fmt(u2.real)},{_fmt(u2.imag)}")
            (out / "special_samples.csv").write_text(
                "z_re,z_im,u1_re,u1_im,u2_re,u2_im\n" + "\n".join(rows) + "\n",
                encoding="utf-8")
        _write_json(out / "special.json", payload)
        return 0

    raise ParseError(f"unknown command {command!r}")


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="heun-gamma",
        description="Incomplete-Gamma series solutions of the confluent Heun "
                    "equations: solve, verify, terminate, reductions, special.")
    parser.add_argument("command",
                        choices=["solve", "verify", "terminate", "reductions",
                                 "special"])
    parser.add_argument("--config", required=True, help="JSON job configuration")
    parser.add_argument("--out", default=".", help="output directory")
    parser.add_argument("--n", type=int, default=None,
                        help="override the series truncation")
    parser.add_argument("--tol", type=float, default=None,
                        help="override the verification tolerance")
    parser.add_argument("--version", action="version", version=__version__)
    args = parser.parse_args(argv)

    try:
        cfg = parse_config(Path(args.config).read_text(encoding="utf-8"))
        if args.n is not None:
            cfg.n_terms = args.n
        if args.tol is not None:
            cfg.tol = args.tol
        return run(args.command, cfg, args.out)
    except HeunGammaError as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}),
              file=sys.stderr)
        return 1
    except OSError as exc:
        print(json.dumps({"error": "OSError", "message": str(exc)}),
              file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
