"""Command-line front end.

Subcommands: ``chi``, ``ratio``, ``bounds``, ``occupation``,
``figure {fig2,fig3,fig4}``.  Output is a CSV table (default) or JSON with
fixed column sets; identical invocations produce byte-identical output
(floats are printed with 17 significant digits, lowercase scientific).

Exit codes: 0 ok, 2 parse/usage, 3 infeasible parameters, 4 resource cap,
5 cross-engine verification mismatch.  Errors emit one machine-readable
JSON line on stderr.

Option precedence for engine/format/jobs/points-per-decade/max-n:
command-line flags, then COBOSE_* environment variables, then the JSON
config file (--config or COBOSE_CONFIG).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._backend import backend_name
from .bounds import TIGHT_SERIES_CAP, lambda1_bounds, purity_bounds
from .chi import chi_recursive, chi_series
from .errors import (
    CoboseError,
    DistributionError,
    FeasibilityError,
    ResourceCapError,
    VerificationError,
)
from .extremal import build_lambda_max, build_lambda_min
from .occupation import mode_occupation_pmf, occupation_fraction_curve
from .schmidt import feasible_lambda1_range, make_distribution

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_INFEASIBLE = 3
EXIT_RESOURCE = 4
EXIT_VERIFY = 5

_VERIFY_RTOL = 1e-9
_ALT_ENGINE = {"grouped": "recursive", "recursive": "grouped", "oracle": "grouped"}


@dataclass
class Settings:
    engine: str = "grouped"
    format: str = "csv"
    out: str | None = None
    jobs: int = 1
    points_per_decade: int = 25
    max_n: int = TIGHT_SERIES_CAP
    verify: bool = False


# ---------------------------------------------------------------------------
# option resolution: flags > environment > config file > defaults
# ---------------------------------------------------------------------------

_CONFIG_KEYS = {
    "engine": str,
    "format": str,
    "jobs": int,
    "points_per_decade": int,
    "max_n": int,
}
_ENV_PREFIX = "COBOSE_"


def _resolve_settings(args: argparse.Namespace) -> Settings:
    st = Settings()
    config_path = getattr(args, "config", None) or os.environ.get(_ENV_PREFIX + "CONFIG")
    if config_path:
        try:
            with open(config_path) as fh:
                raw = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise DistributionError(f"cannot read config file {config_path}: {exc}") from exc
        for key, conv in _CONFIG_KEYS.items():
            if key in raw:
                setattr(st, key, conv(raw[key]))
    for key, conv in _CONFIG_KEYS.items():
        env = os.environ.get(_ENV_PREFIX + key.upper())
        if env is not None:
            setattr(st, key, conv(env))
    for key in _CONFIG_KEYS:
        flag = getattr(args, key, None)
        if flag is not None:
            setattr(st, key, flag)
    st.out = getattr(args, "out", None)
    st.verify = bool(getattr(args, "verify", False))
    if st.engine not in ("grouped", "recursive", "oracle"):
        raise DistributionError(f"unknown engine {st.engine!r}")
    if st.format not in ("csv", "json"):
        raise DistributionError(f"unknown format {st.format!r}")
    if st.jobs < 1:
        raise DistributionError("jobs must be >= 1")
    return st


# ---------------------------------------------------------------------------
# input parsing
# ---------------------------------------------------------------------------


def _parse_values(text: str):
    try:
        return [Fraction(tok.strip()) for tok in text.split(",") if tok.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise DistributionError(f"cannot parse values {text!r}: {exc}") from exc


def _load_distribution_json(source: str) -> dict:
    text = source.strip()
    if not text.startswith("{"):
        try:
            with open(source) as fh:
                text = fh.read()
        except OSError as exc:
            raise DistributionError(f"cannot read distribution file {source}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DistributionError(f"invalid distribution JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise DistributionError("distribution JSON must be an object")
    return doc


def _distribution_from_args(args: argparse.Namespace):
    values = getattr(args, "values", None)
    groups = getattr(args, "groups", None)
    if (values is None) == (groups is None):
        raise DistributionError("provide exactly one of --values or --groups")
    if values is not None:
        return make_distribution(_parse_values(values), normalize=bool(args.normalize))
    doc = _load_distribution_json(groups)
    normalize = bool(doc.get("normalize", False)) or bool(args.normalize)
    tail = doc.get("tail_mass", 0)
    if "values" in doc:
        return make_distribution(doc["values"], tail_mass=tail, normalize=normalize)
    if "groups" in doc:
        pairs = [(g["value"], g.get("mult", 1)) for g in doc["groups"]]
        return make_distribution(pairs, tail_mass=tail, normalize=normalize)
    raise DistributionError('distribution JSON needs a "values" or "groups" key')


def _parse_n_grid(text: str, ppd_default: int) -> list[int]:
    parts = text.split(":")
    if len(parts) not in (2, 3):
        raise DistributionError(f"--n-grid must be lo:hi[:pointsPerDecade], got {text!r}")
    try:
        lo, hi = int(parts[0]), int(parts[1])
        ppd = int(parts[2]) if len(parts) == 3 else ppd_default
    except ValueError as exc:
        raise DistributionError(f"bad --n-grid {text!r}: {exc}") from exc
    if lo < 1 or hi < lo or ppd < 1:
        raise DistributionError(f"bad --n-grid bounds {text!r}")
    ks = np.arange(
        math.ceil(ppd * math.log10(lo)), math.floor(ppd * math.log10(hi)) + 1
    )
    grid = {lo, hi}
    grid.update(int(round(10.0 ** (k / ppd))) for k in ks)
    return sorted(n for n in grid if lo <= n <= hi)


def _n_values(args: argparse.Namespace, st: Settings) -> list[int]:
    n = getattr(args, "n", None)
    grid = getattr(args, "n_grid", None)
    if (n is None) == (grid is None):
        raise DistributionError("provide exactly one of --n or --n-grid")
    if n is not None:
        if n < 0:
            raise DistributionError("--n must be >= 0")
        return [n]
    return _parse_n_grid(grid, st.points_per_decade)


def _parse_float_list(text: str, what: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise DistributionError(f"cannot parse {what} {text!r}: {exc}") from exc


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.16e}"


def _json_cell(c):
    if c is None or isinstance(c, str):
        return c
    if isinstance(c, (int, np.integer)):
        return int(c)
    return float(c)


def _emit(table: dict, st: Settings) -> None:
    if st.format == "csv":
        lines = [",".join(table["columns"])]
        lines.extend(",".join(_fmt(cell) for cell in row) for row in table["rows"])
        text = "\n".join(lines) + "\n"
    else:
        doc = dict(table)
        doc["rows"] = [[_json_cell(c) for c in row] for row in table["rows"]]
        text = json.dumps(doc, sort_keys=True, separators=(",", ": ")) + "\n"
    if st.out:
        with open(st.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _assert_logs_close(primary: np.ndarray, check: np.ndarray, what: str) -> None:
    delta = np.abs(np.expm1(np.asarray(primary) - np.asarray(check)))
    worst = float(np.max(delta)) if delta.size else 0.0
    if worst > _VERIFY_RTOL:
        raise VerificationError(
            f"{what}: engines disagree by {worst:.3e} relative (tolerance {_VERIFY_RTOL})"
        )


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _chi_table(args, st: Settings, with_ratio: bool) -> dict:
    d = _distribution_from_args(args)
    ns = _n_values(args, st)
    top = max(ns) + (1 if with_ratio else 0)
    if top > st.max_n:
        raise ResourceCapError(f"series to n = {top} exceeds cap {st.max_n} (--max-n)")
    cs = chi_series(d, top, engine=st.engine)
    if st.verify:
        alt = chi_series(d, top, engine=_ALT_ENGINE[st.engine])
        _assert_logs_close(cs.log_chi, alt.log_chi, "chi series")
    rows = []
    for n in ns:
        log_chi = float(cs.log_chi[n])
        if cs.exact is not None:
            chi = float(cs.exact[n]) if cs.exact[n] < 10**300 else math.inf
        else:
            chi = math.exp(log_chi) if log_chi < 709.0 else math.inf
        ratio = cs.ratio(n) if with_ratio else None
        rows.append([n, log_chi, chi, ratio])
    return {
        "command": "ratio" if with_ratio else "chi",
        "columns": ["n", "log_chi", "chi", "ratio"],
        "rows": rows,
    }


def cmd_chi(args, st: Settings) -> dict:
    return _chi_table(args, st, with_ratio=False)


def cmd_ratio(args, st: Settings) -> dict:
    return _chi_table(args, st, with_ratio=True)


def _bounds_rows(lambda1: float, purity: float, ns: list[int], st: Settings) -> list[list]:
    top = max(ns) + 1
    lo_c = build_lambda_min(lambda1, purity)
    hi_c = build_lambda_max(lambda1, purity)
    lo = chi_series(lo_c.result, top, engine="grouped")
    hi = chi_series(hi_c.result, top, engine="grouped")
    if st.verify:
        _assert_logs_close(lo.log_chi, chi_recursive(lo_c.result, top).log_chi, "lower series")
        _assert_logs_close(hi.log_chi, chi_recursive(hi_c.result, top).log_chi, "upper series")
    rows = []
    for n in ns:
        p_lo, p_mid, p_cap = purity_bounds(purity, n)
        l_floor, l_mid, l_hi = lambda1_bounds(lambda1, n)
        rows.append(
            [n, lo.ratio(n), hi.ratio(n), p_lo, p_mid, p_cap, l_floor, l_mid, l_hi]
        )
    return rows


def cmd_bounds(args, st: Settings) -> dict:
    if args.lambda1 is None or args.purity is None:
        raise DistributionError("bounds requires --lambda1 and --purity")
    ns = _n_values(args, st)
    if max(ns) + 1 > st.max_n:
        raise ResourceCapError(f"series to n = {max(ns) + 1} exceeds cap {st.max_n} (--max-n)")
    rows = _bounds_rows(args.lambda1, args.purity, ns, st)
    return {
        "command": "bounds",
        "columns": ["n", "tight_lo", "tight_hi", "p_lo", "p_mid", "p_cap", "l1_floor", "l1_mid", "l1_hi"],
        "rows": rows,
    }


def _parse_mode(text: str) -> tuple[int, int]:
    parts = text.split(":")
    try:
        group = int(parts[0])
        pos = int(parts[1]) if len(parts) > 1 else 0
    except (ValueError, IndexError) as exc:
        raise DistributionError(f"--mode must be GROUP[:POSITION], got {text!r}") from exc
    return group, pos


def cmd_occupation(args, st: Settings) -> dict:
    d = _distribution_from_args(args)
    if args.n is None:
        raise DistributionError("occupation requires --n")
    if args.n_grid is not None:
        raise DistributionError("occupation takes a single --n, not --n-grid")
    if args.n > st.max_n:
        raise ResourceCapError(f"n = {args.n} exceeds cap {st.max_n} (--max-n)")
    group, pos = _parse_mode(args.mode)
    try:
        pmf = mode_occupation_pmf(d, args.n, group=group, position=pos, engine="grouped")
    except ValueError as exc:
        raise DistributionError(str(exc)) from exc
    if st.verify:
        alt = mode_occupation_pmf(d, args.n, group=group, position=pos, engine="recursive")
        delta = np.abs(pmf.pmf - alt.pmf)
        scale = np.maximum(np.maximum(pmf.pmf, alt.pmf), 1e-300)
        worst = float(np.max(delta / scale))
        if worst > _VERIFY_RTOL:
            raise VerificationError(f"occupation pmf: engines disagree by {worst:.3e} relative")
    rows = [[m, float(p)] for m, p in enumerate(pmf.pmf)]
    rows.append([pmf.mean, pmf.fraction])  # trailer: mean, fraction
    return {
        "command": "occupation",
        "columns": ["m", "prob"],
        "rows": rows,
        "mean": pmf.mean,
        "fraction": pmf.fraction,
    }


def _fig2_rows(lambda1: float, purity: float) -> list[list]:
    rows = []
    for name, cons in (
        ("max", build_lambda_max(lambda1, purity)),
        ("min", build_lambda_min(lambda1, purity)),
    ):
        for value, mult in cons.result.groups:
            rows.append([name, "coeff", float(value), mult])
        if cons.result.has_tail:
            rows.append([name, "tail", cons.result.tail_mass, 0])
    return rows


def _fig3_curve(lambda1: float, purity: float, ns: list[int]) -> list[list]:
    top = max(ns) + 1
    lo = chi_series(build_lambda_min(lambda1, purity).result, top, engine="grouped")
    hi = chi_series(build_lambda_max(lambda1, purity).result, top, engine="grouped")
    rows = []
    for n in ns:
        p_lo, p_mid, p_cap = purity_bounds(purity, n)
        l_floor, l_mid, l_hi = lambda1_bounds(lambda1, n)
        rows.append(
            [
                purity,
                n,
                lo.ratio(n) - 1.0,
                hi.ratio(n) - 1.0,
                p_lo - 1.0,
                p_mid - 1.0,
                p_cap - 1.0,
                l_floor - 1.0,
                l_mid - 1.0,
                l_hi - 1.0,
            ]
        )
    return rows


def _fig4_curve(lambda1: float, purity: float, ns: list[int]) -> list[list]:
    lo = build_lambda_min(lambda1, purity).result
    hi = build_lambda_max(lambda1, purity).result
    frac_lo = occupation_fraction_curve(lo, ns, group=0)
    frac_hi = occupation_fraction_curve(hi, ns, group=0)
    mult = hi.groups[0][1]
    return [
        [lambda1, n, float(fl), float(fh), mult]
        for n, fl, fh in zip(ns, frac_lo, frac_hi)
    ]


def _run_curves(worker, params: list, jobs: int) -> list[list]:
    if jobs > 1 and len(params) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(worker, params))
    else:
        chunks = [worker(p) for p in params]
    return [row for chunk in chunks for row in chunk]


def cmd_figure(args, st: Settings) -> dict:
    which = args.which
    if which == "fig2":
        lam1 = _parse_float_list(args.lambda1, "--lambda1")[0] if args.lambda1 else 0.31
        purity = _parse_float_list(args.purity, "--purity")[0] if args.purity else 0.205
        return {
            "command": "figure-fig2",
            "columns": ["dist", "component", "value", "mult"],
            "rows": _fig2_rows(lam1, purity),
        }
    if which == "fig3":
        lam1 = _parse_float_list(args.lambda1, "--lambda1")[0] if args.lambda1 else 8e-4
        purities = _parse_float_list(args.purity, "--purity") if args.purity else [1e-5, 1e-6]
        ns = _parse_n_grid(args.n_grid, st.points_per_decade) if args.n_grid else _parse_n_grid(
            f"1:100000:{st.points_per_decade}", st.points_per_decade
        )
        rows = _run_curves(lambda p: _fig3_curve(lam1, p, ns), purities, st.jobs)
        return {
            "command": "figure-fig3",
            "columns": ["purity", "n", "tight_lo", "tight_hi", "p_lo", "p_mid", "p_cap", "l1_floor", "l1_mid", "l1_hi"],
            "rows": rows,
        }
    if which == "fig4":
        purity = _parse_float_list(args.purity, "--purity")[0] if args.purity else 1e-4
        if args.lambda1 is not None:
            lam1s = _parse_float_list(args.lambda1, "--lambda1")
        else:
            root = math.sqrt(purity)
            lam1s = [root, 0.8 * root, 0.4 * root, 0.1 * root, feasible_lambda1_range(purity).lower]
        ns = _parse_n_grid(args.n_grid, st.points_per_decade) if args.n_grid else _parse_n_grid(
            f"1:10000:{st.points_per_decade}", st.points_per_decade
        )
        rows = _run_curves(lambda lam: _fig4_curve(lam, purity, ns), lam1s, st.jobs)
        return {
            "command": "figure-fig4",
            "columns": ["lambda1", "n", "fraction_min", "fraction_max", "max_mult"],
            "rows": rows,
        }
    raise DistributionError(f"unknown figure {which!r}")


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _add_common(sp: argparse.ArgumentParser, dist: bool = False, point: bool = False) -> None:
    if dist:
        sp.add_argument("--values", help="comma-separated Schmidt coefficients (exact decimals)")
        sp.add_argument("--groups", help="distribution JSON (inline or file path)")
        sp.add_argument("--normalize", action="store_true", help="rescale input mass to 1")
    if point:
        sp.add_argument("--lambda1", type=float, help="largest Schmidt coefficient")
        sp.add_argument("--purity", type=float, help="constituent purity P")
    sp.add_argument("--n", type=int, help="single composite number N")
    sp.add_argument("--n-grid", dest="n_grid", help="log grid lo:hi[:pointsPerDecade]")
    sp.add_argument("--engine", choices=["grouped", "recursive", "oracle"], default=None)
    sp.add_argument("--format", choices=["csv", "json"], default=None)
    sp.add_argument("--out", help="write the table to this path instead of stdout")
    sp.add_argument("--verify", action="store_true", help="cross-check with a second engine")
    sp.add_argument("--config", help="JSON config file")
    sp.add_argument("--jobs", type=int, default=None, help="parallel sweep workers")
    sp.add_argument("--max-n", dest="max_n", type=int, default=None, help="series size cap")
    sp.add_argument(
        "--points-per-decade", dest="points_per_decade", type=int, default=None
    )


def _build_parser() -> argparse.ArgumentParser:
    from . import __version__

    parser = argparse.ArgumentParser(
        prog="cobose",
        description="Composite-boson normalization factors, bounds and occupation statistics.",
    )
    parser.add_argument(
        "--version",
        action="version",
        version=f"cobose {__version__} ({backend_name()} kernels)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("chi", help="normalization factor chi_N")
    _add_common(sp, dist=True)
    sp.set_defaults(func=cmd_chi)

    sp = sub.add_parser("ratio", help="normalization ratio chi_{N+1}/chi_N")
    _add_common(sp, dist=True)
    sp.set_defaults(func=cmd_ratio)

    sp = sub.add_parser("bounds", help="tight and single-parameter ratio bounds")
    _add_common(sp, point=True)
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("occupation", help="single-mode counting statistics")
    _add_common(sp, dist=True)
    sp.add_argument("--mode", default="0", help="mode selector GROUP[:POSITION], 0-based")
    sp.set_defaults(func=cmd_occupation)

    sp = sub.add_parser("figure", help="data tables for the standard figures")
    sp.add_argument("which", choices=["fig2", "fig3", "fig4"])
    sp.add_argument("--lambda1", default=None, help="lambda1 (comma list for fig4)")
    sp.add_argument("--purity", default=None, help="purity (comma list for fig3)")
    sp.add_argument("--n-grid", dest="n_grid", default=None)
    sp.add_argument("--format", choices=["csv", "json"], default=None)
    sp.add_argument("--out")
    sp.add_argument("--config")
    sp.add_argument("--jobs", type=int, default=None)
    sp.add_argument("--max-n", dest="max_n", type=int, default=None)
    sp.add_argument("--points-per-decade", dest="points_per_decade", type=int, default=None)
    sp.set_defaults(func=cmd_figure)

    return parser


def _diagnostic(code: int, kind: str, message: str) -> None:
    sys.stderr.write(
        json.dumps(
            {"error": {"code": code, "kind": kind, "message": message}}, sort_keys=True
        )
        + "\n"
    )


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        st = _resolve_settings(args)
        table = args.func(args, st)
        _emit(table, st)
        return EXIT_OK
    except (DistributionError, ValueError) as exc:
        _diagnostic(EXIT_PARSE, "parse", str(exc))
        return EXIT_PARSE
    except FeasibilityError as exc:
        _diagnostic(EXIT_INFEASIBLE, "infeasible", str(exc))
        return EXIT_INFEASIBLE
    except ResourceCapError as exc:
        _diagnostic(EXIT_RESOURCE, "resource-cap", str(exc))
        return EXIT_RESOURCE
    except VerificationError as exc:
        _diagnostic(EXIT_VERIFY, "verify-mismatch", str(exc))
        return EXIT_VERIFY
    except CoboseError as exc:  # internal consistency failures
        _diagnostic(EXIT_VERIFY, "internal", str(exc))
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
