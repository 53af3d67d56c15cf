"""Command-line harness: ``fblec {eval,fig2,fig3,fig4,opt-eps,bounds}``.

All dB <-> linear conversion happens here; the library is linear-scale.
Exit codes: 0 ok, 1 partial (some infeasible cells), 2 usage/domain error,
3 numerical failure.
"""

import argparse
import configparser
import csv
import io
import json
import os
import sys
import tempfile
import warnings

from . import figures
from .capacity import (Method, delay_outage_prob, ec_upper_bound, effective_capacity,
                       grid_optimal_epsilon, optimal_epsilon, theta_upper_bound)
from .errors import ConvergenceError, DomainError, FblecError, NumericalInstability
from .figures import db_to_linear
from .rate import SmallBlocklengthWarning, SystemParams

EXIT_OK, EXIT_PARTIAL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3

EVAL_COLUMNS = ("n", "eps", "theta", "snr_db", "rho", "ec_closed_bpcu", "ec_oracle_bpcu",
                "rel_err", "ec_bound_bpcu", "status", "message")
OPT_EPS_COLUMNS = ("n", "theta", "snr_db", "method", "eps_star", "ec_max_bpcu", "iterations",
                   "bracket_lo", "bracket_hi", "eps_grid", "ec_grid_bpcu", "grid_rel_diff",
                   "status", "message")
BOUNDS_COLUMNS = ("n", "eps", "theta", "ce_bpcu", "ec_bound_bpcu", "theta_bound",
                  "d_max", "delay_outage_prob")

DEFAULTS = {
    "n": "500", "eps": "1e-4", "theta": "0.01", "snr_db": "25", "method": "closed",
    "format": "csv", "mu": ",".join(str(m) for m in figures.FIG4_MUS),
    "rho_max_db": ",".join(str(r) for r in figures.FIG4_RHO_MAX_DB),
}


class UsageError(Exception):
    pass


# --------------------------------------------------------------------------
#  value parsing
# --------------------------------------------------------------------------

def parse_values(text):
    """Parse ``a,b,c``, ``start:stop:step`` (inclusive) or ``log:start:stop:count``."""
    text = str(text).strip()
    try:
        if text.startswith("log:"):
            start, stop, count = text[4:].split(":")
            return figures.SweepSpec("theta", float(start), float(stop), count=int(count),
                                     spacing="log").values()
        if ":" in text:
            start, stop, step = (float(v) for v in text.split(":"))
            return figures.SweepSpec("rho_db", start, stop, step=step).values()
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"cannot parse value list {text!r}: {exc}") from exc


def parse_scalar(text, name):
    values = parse_values(text)
    if len(values) != 1:
        raise UsageError(f"--{name.replace('_', '-')} expects a single value, got {text!r}")
    return values[0]


def parse_n(text):
    v = parse_scalar(text, "n")
    if not float(v).is_integer():
        raise DomainError(f"n must be an integer, got {text!r}")
    return int(v)


# --------------------------------------------------------------------------
#  output
# --------------------------------------------------------------------------

def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def render(rows, columns, fmt):
    buf = io.StringIO()
    if fmt == "json":
        for row in rows:
            buf.write(json.dumps({c: row.get(c) for c in columns}))
            buf.write("\n")
    else:
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([_fmt(row.get(c)) for c in columns])
    return buf.getvalue()


def emit(text, out):
    if out is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(out))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".fblec-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, out)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _exit_code(rows):
    return EXIT_PARTIAL if any(r.get("status") == "infeasible" for r in rows) else EXIT_OK


# --------------------------------------------------------------------------
#  commands
# --------------------------------------------------------------------------

def cmd_eval(opt):
    n, eps, theta = parse_n(opt("n")), parse_scalar(opt("eps"), "eps"), parse_scalar(opt("theta"), "theta")
    snr_db = parse_scalar(opt("snr_db"), "snr_db")
    method = opt("method")
    if opt("check"):
        method = "both"
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", SmallBlocklengthWarning)
        p = SystemParams(n, eps, theta, db_to_linear(snr_db), allow_small_n=bool(opt("allow_small_n")))
    row = dict(n=n, eps=eps, theta=theta, snr_db=snr_db, rho=p.rho, status="ok", message="")
    if caught:
        row.update(status="warning", message=str(caught[0].message))
    if method in ("closed", "both"):
        row["ec_closed_bpcu"] = effective_capacity(p, Method.CLOSED_FORM).ec
    if method in ("oracle", "both"):
        row["ec_oracle_bpcu"] = effective_capacity(p, Method.ORACLE).ec
    if method == "both":
        row["rel_err"] = abs(row["ec_closed_bpcu"] - row["ec_oracle_bpcu"]) / row["ec_oracle_bpcu"]
    if n >= 100:
        row["ec_bound_bpcu"] = ec_upper_bound(n, theta, eps)
    return [row], EVAL_COLUMNS


def cmd_fig2(opt):
    thetas = parse_values(opt("theta")) if opt("theta", raw=True) else figures.FIG2_THETAS
    snr = parse_values(opt("snr_db")) if opt("snr_db", raw=True) else None
    rows = figures.fig2_records(parse_n(opt("n")), parse_scalar(opt("eps"), "eps"), thetas, snr)
    return rows, figures.FIG2_COLUMNS


def cmd_fig3(opt):
    ces = parse_values(opt("ce")) if opt("ce", raw=True) else figures.FIG3_CES
    thetas = parse_values(opt("theta")) if opt("theta", raw=True) else None
    rows = figures.fig3_records(parse_n(opt("n")), parse_scalar(opt("eps"), "eps"), ces, thetas)
    return rows, figures.FIG3_COLUMNS


def cmd_fig4(opt):
    thetas = parse_values(opt("theta")) if opt("theta", raw=True) else None
    rows = figures.fig4_records(parse_n(opt("n")), parse_scalar(opt("eps"), "eps"), thetas,
                                parse_values(opt("mu")), parse_values(opt("rho_max_db")))
    return rows, figures.FIG4_COLUMNS


def cmd_opt_eps(opt):
    n, theta = parse_n(opt("n")), parse_scalar(opt("theta"), "theta")
    snr_db = parse_scalar(opt("snr_db"), "snr_db")
    rho = db_to_linear(snr_db)
    method = Method(opt("method") if opt("method") != "both" else "closed")
    res = optimal_epsilon(n, theta, rho, method)
    row = dict(n=n, theta=theta, snr_db=snr_db, method=method.value, eps_star=res.eps_star,
               ec_max_bpcu=res.ec_max, iterations=res.iterations, bracket_lo=res.bracket[0],
               bracket_hi=res.bracket[1], status="ok", message="")
    if opt("grid"):
        eps_grid, ec_grid, _, _ = grid_optimal_epsilon(n, theta, rho, method)
        row.update(eps_grid=eps_grid, ec_grid_bpcu=ec_grid,
                   grid_rel_diff=abs(res.eps_star - eps_grid) / eps_grid)
    return [row], OPT_EPS_COLUMNS


def cmd_bounds(opt):
    n, eps, theta = parse_n(opt("n")), parse_scalar(opt("eps"), "eps"), parse_scalar(opt("theta"), "theta")
    row = dict(n=n, eps=eps, theta=theta, ec_bound_bpcu=ec_upper_bound(n, theta, eps))
    if opt("ce", raw=True):
        ce = parse_scalar(opt("ce"), "ce")
        row.update(ce_bpcu=ce, theta_bound=theta_upper_bound(n, ce, eps))
        if opt("d_max") is not None:
            row.update(d_max=float(opt("d_max")),
                       delay_outage_prob=delay_outage_prob(theta, ce, float(opt("d_max"))))
    return [row], BOUNDS_COLUMNS


COMMANDS = {
    "eval": (cmd_eval, "evaluate the effective capacity at one operating point"),
    "fig2": (cmd_fig2, "EC vs SNR sweep (closed form, oracle, bounds)"),
    "fig3": (cmd_fig3, "required SNR vs delay exponent for fixed EC"),
    "fig4": (cmd_fig4, "power saving and EC loss vs delay exponent"),
    "opt-eps": (cmd_opt_eps, "error probability that maximizes the EC"),
    "bounds": (cmd_bounds, "high-SNR EC and delay-exponent ceilings"),
}


def build_parser():
    parser = argparse.ArgumentParser(prog="fblec", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--n")
        sp.add_argument("--eps")
        sp.add_argument("--theta", help="value, list a,b,c, range start:stop:step or log:start:stop:count")
        sp.add_argument("--snr-db", dest="snr_db")
        sp.add_argument("--ce")
        sp.add_argument("--mu")
        sp.add_argument("--rho-max-db", dest="rho_max_db")
        sp.add_argument("--d-max", dest="d_max")
        sp.add_argument("--method", choices=("closed", "oracle", "both"))
        sp.add_argument("--format", choices=("csv", "json"))
        sp.add_argument("--out")
        sp.add_argument("--config")
        sp.add_argument("--check", action="store_true", default=None)
        sp.add_argument("--grid", action="store_true", default=None)
        sp.add_argument("--allow-small-n", dest="allow_small_n", action="store_true", default=None)
    return parser


def _load_config(path, command):
    cp = configparser.ConfigParser()
    if not cp.read(path, encoding="utf-8"):
        raise UsageError(f"cannot read config file {path!r}")
    merged = {}
    for section in ("defaults", command):
        if cp.has_section(section):
            merged.update({k.replace("-", "_"): v for k, v in cp.items(section)})
    return merged


def make_options(args):
    """CLI flag > config file > built-in default."""
    config = _load_config(args.config, args.command) if args.config else {}

    def opt(key, raw=False):
        v = getattr(args, key, None)
        if v is None:
            v = config.get(key)
        if v is None and not raw:
            v = DEFAULTS.get(key)
        if key in ("check", "grid", "allow_small_n") and isinstance(v, str):
            v = v.strip().lower() in ("1", "true", "yes", "on")
        return v
    return opt


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        opt = make_options(args)
        func = COMMANDS[args.command][0]
        rows, columns = func(opt)
        emit(render(rows, columns, opt("format")), opt("out"))
        return _exit_code(rows)
    except (UsageError, DomainError) as exc:
        print(f"fblec {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConvergenceError, NumericalInstability, OverflowError) as exc:
        print(f"fblec {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except FblecError as exc:
        print(f"fblec {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
