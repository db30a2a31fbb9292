"""Command-line front end: ``besselphase <subcommand> ...``.

Exit codes: 0 success, 2 bad arguments or a point outside the requested
method's regime, 3 when ``polya`` finds a violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import oracle, spectral
from .coords import DEFAULT_CONFIG, EvalPoint, Regime, RegimeConfig, classify
from .errors import BesselPhaseError, DomainError, RegimeError
from .expansions import (
    ABE_MAX_TERMS, AE_MAX_TERMS, FE_MAX_TERMS, OBE_MAX_TERMS, ExpansionResult, evaluate_auto,
    expand_abe, expand_ae, expand_fe, expand_obe, from_oracle,
)
from .nicholson import log_modulus_sq

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

ERROR_MAP_HEADER = ["z", "nu", "regime", "m_rel_err", "theta_abs_err", "err_estimate"]
MAX_GRID_POINTS = 10 ** 6
EXIT_OK, EXIT_USAGE, EXIT_VIOLATION = 0, 2, 3

_REGIME_KEYS = ("fe_halfwidth", "core_z", "core_nu", "obe_margin", "abe_margin")
_QUAD_KEYS = ("abs_tol", "rel_tol", "max_levels")


@dataclass(frozen=True)
class OutputSpec:
    format: str = "csv"
    path: str | None = None
    precision: int = 15

    def __post_init__(self):
        if self.format not in ("csv", "json"):
            raise DomainError(f"format must be csv or json, got {self.format!r}")
        if not 6 <= self.precision <= 17:
            raise DomainError(f"precision must be in 6..17, got {self.precision}")


def load_config(path: str | None) -> tuple[RegimeConfig, oracle.QuadratureSpec]:
    """Read ``[regime]`` and ``[quadrature]`` tables from a TOML file."""
    if path is None:
        return DEFAULT_CONFIG, oracle.DEFAULT_QUAD
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except (OSError, tomllib.TOMLDecodeError) as exc:
        raise DomainError(f"cannot read config {path}: {exc}") from exc
    unknown = set(data) - {"regime", "quadrature"}
    if unknown:
        raise DomainError(f"unknown config tables: {sorted(unknown)}")
    regime = data.get("regime", {})
    quad = data.get("quadrature", {})
    for table, keys, name in ((regime, _REGIME_KEYS, "regime"), (quad, _QUAD_KEYS, "quadrature")):
        bad = set(table) - set(keys)
        if bad:
            raise DomainError(f"unknown keys in [{name}]: {sorted(bad)}")
    return RegimeConfig(**regime), oracle.QuadratureSpec(**quad)


# --- output ---------------------------------------------------------------------

def _fmt(value, precision: int):
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        if not math.isfinite(value):
            return str(float(value))
        return float(format(float(value), f".{precision}g"))
    return value


def _csv_cell(value, precision: int) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, f".{precision}g")
    if isinstance(value, dict):
        return ";".join(f"{k}={v}" for k, v in value.items())
    return str(value)


def render(records: list[dict], out: OutputSpec, columns: list[str] | None = None) -> str:
    columns = columns or (list(records[0]) if records else [])
    if out.format == "json":
        cleaned = [{k: _clean(r[k], out.precision) for k in columns} for r in records]
        return json.dumps(cleaned if len(cleaned) != 1 else cleaned[0], indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for r in records:
        writer.writerow([_csv_cell(_fmt(r[k], out.precision), out.precision) for k in columns])
    return buf.getvalue()


def _clean(value, precision):
    if isinstance(value, dict):
        return {k: _clean(v, precision) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v, precision) for v in value]
    return _fmt(value, precision)


def _emit(text: str, out: OutputSpec) -> None:
    if out.path:
        with open(out.path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --- eval -------------------------------------------------------------------------

def _check_method_regime(method: str, p: EvalPoint, cfg: RegimeConfig) -> None:
    z, nu = p.z, p.nu
    if method == "ae" and not z >= max(cfg.core_z, nu * nu):
        raise RegimeError(f"ae needs z >= max(core_z, nu^2) = {max(cfg.core_z, nu * nu):g}")
    if method == "abe" and not (nu > 0 and z / nu - 1.0 >= cfg.abe_margin):
        raise RegimeError(f"abe needs nu > 0 and z/nu - 1 >= {cfg.abe_margin:g}")
    if method == "obe" and not (z > 0 and nu / z - 1.0 >= cfg.obe_margin):
        raise RegimeError(f"obe needs nu/z - 1 >= {cfg.obe_margin:g}")


def evaluate(method: str, p: EvalPoint, nterms: int | None, cfg: RegimeConfig,
             q: oracle.QuadratureSpec) -> ExpansionResult:
    _check_method_regime(method, p, cfg)
    if method == "auto":
        return evaluate_auto(p, cfg, q)
    if method == "oracle":
        return from_oracle(p, q)
    if method == "ae":
        return expand_ae(p, nterms or AE_MAX_TERMS)
    if method == "abe":
        return expand_abe(p, nterms or ABE_MAX_TERMS)
    if method == "fe":
        return expand_fe(p, nterms or FE_MAX_TERMS, cfg)
    if method == "obe":
        return expand_obe(p, nterms or OBE_MAX_TERMS)
    raise DomainError(f"unknown method {method!r}")


def eval_record(p: EvalPoint, method: str, r: ExpansionResult) -> dict:
    # M itself is printed whenever it fits in a double; log_M2 is always there
    m = math.exp(0.5 * r.log_modulus_sq) if r.log_modulus_sq < 1400 else None
    j, y = r.j, r.y
    if j is None and m is not None:
        # cos(theta) = sin(offset), sin(theta) = -cos(offset)
        j, y = m * math.sin(r.phase_offset), -m * math.cos(r.phase_offset)
    return {
        "z": p.z, "nu": p.nu, "method": method, "regime": r.regime.value,
        "J": j, "Y": y, "M": m, "theta": r.phase, "log_M2": r.log_modulus_sq,
        "phase_offset": r.phase_offset, "terms_used": dict(r.terms_used),
        "err_estimate": r.err_estimate, "exponentially_small_phase": r.exponentially_small_phase,
    }


def cmd_eval(args, cfg, q, out) -> int:
    p = EvalPoint(args.z, args.nu)
    r = evaluate(args.method, p, args.nterms, cfg, q)
    _emit(render([eval_record(p, args.method, r)], out), out)
    return EXIT_OK


# --- error map --------------------------------------------------------------------

def _axis(lo: float, hi: float, n: int, spacing: str, name: str) -> np.ndarray:
    if not (math.isfinite(lo) and math.isfinite(hi) and 0 <= lo <= hi):
        raise DomainError(f"{name} range must satisfy 0 <= lo <= hi, got [{lo}, {hi}]")
    if spacing == "log":
        if lo <= 0:
            raise DomainError(f"log spacing needs a positive lower end for {name}")
        return np.geomspace(lo, hi, n)
    return np.linspace(lo, hi, n)


def error_map(z_axis: np.ndarray, nu_axis: np.ndarray, cfg: RegimeConfig,
              q: oracle.QuadratureSpec) -> list[dict]:
    """Rows of the error map, measured against the oracle (one phase curve per order)."""
    rows = []
    for nu in nu_axis:
        z = np.asarray(z_axis, dtype=float)
        ref_lm, ref_lm_err = log_modulus_sq(z, nu, q.abs_tol, q.rel_tol, q.max_levels)
        ref_off, ref_off_err = oracle.phase_offset_curve(z, float(nu), q)
        for zi, lm, lm_err, off, off_err in zip(z, ref_lm, ref_lm_err, ref_off, ref_off_err):
            p = EvalPoint(float(zi), float(nu))
            try:
                r = evaluate_auto(p, cfg, q) if _not_core(p, cfg) else None
            except RegimeError:
                r = None
            if r is None or r.regime is Regime.CORE:
                rows.append({"z": p.z, "nu": p.nu, "regime": Regime.CORE.value, "m_rel_err": 0.0,
                             "theta_abs_err": 0.0,
                             "err_estimate": float(max(lm_err, off_err))})
                continue
            rows.append({
                "z": p.z, "nu": p.nu, "regime": r.regime.value,
                "m_rel_err": abs(math.expm1(r.log_modulus_sq - float(lm))),
                "theta_abs_err": abs(r.phase_offset - float(off)),
                "err_estimate": r.err_estimate,
            })
    return rows


def _not_core(p: EvalPoint, cfg: RegimeConfig) -> bool:
    return classify(p, cfg) is not Regime.CORE


def cmd_error_map(args, cfg, q, out) -> int:
    n = args.grid
    if n < 1 or n * n > MAX_GRID_POINTS:
        raise DomainError(f"grid must be in 1..{int(math.isqrt(MAX_GRID_POINTS))}")
    z_axis = _axis(*args.z_range, n, args.spacing, "z")
    nu_axis = _axis(*args.nu_range, n, args.spacing, "nu")
    if z_axis[0] <= 0:
        raise DomainError("z range must be positive")
    rows = error_map(z_axis, nu_axis, cfg, q)
    _emit(render(rows, out, ERROR_MAP_HEADER), out)
    return EXIT_OK


# --- spectral ---------------------------------------------------------------------

def cmd_count(args, cfg, q, out) -> int:
    disk = spectral.CountMethod(args.disk_method)
    lattice = spectral.LatticeMethod(args.lattice_method)
    report = spectral.count_report(args.lam, disk, lattice)
    _emit(render([report.as_dict()], out), out)
    return EXIT_OK


def cmd_zeros(args, cfg, q, out) -> int:
    if args.count < 1:
        raise DomainError("count must be at least 1")
    records = []
    for k in range(1, args.count + 1):
        rec = spectral.bessel_zero(args.nu, k)
        records.append({"nu": rec.nu, "k": rec.k, "value": rec.value})
    _emit(render(records, out, ["nu", "k", "value"]), out)
    return EXIT_OK


def cmd_polya(args, cfg, q, out) -> int:
    report = spectral.polya_check(args.lambda_max, args.step)
    record = {
        "lambda_max": args.lambda_max, "step": args.step, "checked": report.checked,
        "lattice_violations": len(report.lattice_violations),
        "polya_violations": len(report.polya_violations),
    }
    if out.format == "json":
        record["details"] = report.lattice_violations + report.polya_violations
    _emit(render([record], out), out)
    return EXIT_OK if report.ok else EXIT_VIOLATION


def _lambda_list(args) -> list[float]:
    if args.lambdas:
        return [float(x) for x in args.lambdas]
    start, stop, step = args.range
    if not (start > 0 and step > 0 and stop >= start):
        raise DomainError("range needs 0 < start <= stop and step > 0")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [start + i * step for i in range(count)]


def cmd_remainder_scan(args, cfg, q, out) -> int:
    scan = spectral.weyl_remainder_scan(_lambda_list(args))
    records = [r.as_dict() for r in scan.reports]
    if out.format == "json":
        payload = {"reports": [_clean(r, out.precision) for r in records],
                   "fit": {"exponent": _fmt(scan.exponent, out.precision),
                           "intercept": _fmt(scan.intercept, out.precision),
                           "fitted_points": scan.fitted_points}}
        _emit(json.dumps(payload, indent=2) + "\n", out)
    else:
        _emit(render(records, out), out)
    return EXIT_OK


# --- parser -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["csv", "json"], default="csv")
    common.add_argument("--out", default=None, help="output file (default: stdout)")
    common.add_argument("--precision", type=int, default=15, help="significant digits, 6..17")
    common.add_argument("--config", default=None, help="TOML file with [regime] and [quadrature]")

    parser = argparse.ArgumentParser(prog="besselphase",
                                     description="Bessel modulus and phase evaluation")
    sub = parser.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("eval", parents=[common], help="evaluate M and theta at one point")
    ev.add_argument("--z", type=float, required=True)
    ev.add_argument("--nu", type=float, required=True)
    ev.add_argument("--method", choices=["auto", "oracle", "ae", "abe", "fe", "obe"],
                    default="auto")
    ev.add_argument("--nterms", type=int, default=None)
    ev.set_defaults(func=cmd_eval)

    em = sub.add_parser("error-map", parents=[common], help="expansion errors on a grid")
    em.add_argument("--z-range", type=float, nargs=2, required=True, metavar=("LO", "HI"))
    em.add_argument("--nu-range", type=float, nargs=2, required=True, metavar=("LO", "HI"))
    em.add_argument("--grid", type=int, default=50, help="points per axis")
    em.add_argument("--spacing", choices=["log", "linear"], default="log")
    em.set_defaults(func=cmd_error_map)

    ct = sub.add_parser("count", parents=[common], help="disk and lattice counts at lambda")
    ct.add_argument("--lambda", dest="lam", type=float, required=True)
    ct.add_argument("--disk-method", choices=["PHASE", "ZEROS"], default="PHASE")
    ct.add_argument("--lattice-method", choices=["BSUM", "DIRECT"], default="BSUM")
    ct.set_defaults(func=cmd_count)

    zs = sub.add_parser("zeros", parents=[common], help="first zeros of J_nu")
    zs.add_argument("--nu", type=float, required=True)
    zs.add_argument("--count", type=int, required=True)
    zs.set_defaults(func=cmd_zeros)

    po = sub.add_parser("polya", parents=[common], help="N_disk <= N_D and <= lambda^2/4")
    po.add_argument("--lambda-max", type=float, required=True)
    po.add_argument("--step", type=float, default=0.5)
    po.set_defaults(func=cmd_polya)

    rs = sub.add_parser("remainder-scan", parents=[common], help="Weyl remainder over lambdas")
    grp = rs.add_mutually_exclusive_group(required=True)
    grp.add_argument("--lambdas", type=float, nargs="+")
    grp.add_argument("--range", type=float, nargs=3, metavar=("START", "STOP", "STEP"))
    rs.set_defaults(func=cmd_remainder_scan)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        out = OutputSpec(args.format, args.out, args.precision)
        cfg, q = load_config(args.config)
        return args.func(args, cfg, q, out)
    except (DomainError, RegimeError, ValueError) as exc:
        print(f"besselphase: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BesselPhaseError as exc:
        print(f"besselphase: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
