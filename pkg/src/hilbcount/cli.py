"""Command-line surface: argument parsing, key=value config files, result
caching, and CSV/JSON table emission.

Exit codes: 0 ok, 2 usage error, 3 guard violation (size error), 4 unstable
quadratic count without --allow-unstable.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import asympt, cache, genfun, peyre, quadfield, ratpoints
from .errors import CharacteristicError, SizeError, UnstableCountError
from .fqarith import field_from_order
from .records import fmt_value

CACHE_ENV = "ACL_CACHE_DIR"

_CONFIG_CASTERS = {
    "q": int,
    "n": int,
    "m": int,
    "M": int,
    "M_max": int,
    "m_max": int,
    "deg_cut": int,
    "digits": int,
    "jobs": int,
    "mu": str,
    "cache_dir": str,
    "format": str,
    "plot": lambda s: s.lower() in ("1", "true", "yes"),
    "allow_unstable": lambda s: s.lower() in ("1", "true", "yes"),
}


class UsageError(Exception):
    pass


def parse_config(path: str) -> dict:
    """Flat key=value lines, UTF-8, '#' comments; values typed per flag."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in _CONFIG_CASTERS:
                raise UsageError(f"{path}:{lineno}: unknown config key {key!r}")
            try:
                out[key] = _CONFIG_CASTERS[key](value)
            except ValueError as exc:
                raise UsageError(f"{path}:{lineno}: bad value for {key}: {exc}")
    return out


def _common_flags(p: argparse.ArgumentParser):
    p.add_argument("--q", type=int, help="field size (prime power)")
    p.add_argument("--digits", type=int, default=12, help="printed float digits")
    p.add_argument("--jobs", type=int, default=1, help="worker thread bound")
    p.add_argument("--cache-dir", dest="cache_dir", default=None)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--plot", action="store_true")
    p.add_argument("--config", default=None, help="key=value config file")


def _m_range_flags(p: argparse.ArgumentParser):
    p.add_argument("--M", type=int, dest="M", help="height exponent (first)")
    p.add_argument("--M-max", type=int, dest="M_max", default=None)


def build_parser() -> tuple[argparse.ArgumentParser, list]:
    parser = argparse.ArgumentParser(prog="hilbcount")
    subs = parser.add_subparsers(dest="command", required=True)
    leaves = []

    count = subs.add_parser("count", help="exact point counts")
    count_subs = count.add_subparsers(dest="subcommand", required=True)
    for name in ("rational", "pairs", "quadratic"):
        sp = count_subs.add_parser(name)
        _common_flags(sp)
        _m_range_flags(sp)
        leaves.append(sp)
    leaves[0].add_argument("--n", type=int, help="projective dimension")
    leaves[2].add_argument("--allow-unstable", action="store_true", dest="allow_unstable")

    cyc = subs.add_parser("cycles", help="0-cycle count table")
    _common_flags(cyc)
    cyc.add_argument("--m-max", type=int, dest="m_max", default=8)
    leaves.append(cyc)

    pey = subs.add_parser("peyre", help="leading constants")
    pey_subs = pey.add_subparsers(dest="subcommand", required=True)
    for name in ("pn", "hilb2", "hilbm", "cm"):
        sp = pey_subs.add_parser(name)
        _common_flags(sp)
        sp.add_argument("--n", type=int, default=2)
        sp.add_argument("--m", type=int, default=2)
        sp.add_argument("--mu", default=None)
        sp.add_argument("--deg-cut", type=int, dest="deg_cut", default=8)
        leaves.append(sp)

    ver = subs.add_parser("verify", help="asymptotic lemma checks")
    ver_subs = ver.add_subparsers(dest="subcommand", required=True)
    lem = ver_subs.add_parser("lemmas")
    _common_flags(lem)
    leaves.append(lem)

    return parser, leaves


def _require(args, *names):
    for name in names:
        if getattr(args, name, None) is None:
            raise UsageError(f"--{name.replace('_', '-')} is required")


def _m_range(args):
    _require(args, "M")
    m_max = args.M_max if args.M_max is not None else args.M
    if m_max < args.M:
        raise UsageError("--M-max must be >= --M")
    return range(args.M, m_max + 1)


def _run_count_rational(args):
    _require(args, "q", "n")
    field = field_from_order(args.q)
    cols = ["q", "n", "M", "observed", "predicted", "match"]
    rows = []
    for M in _m_range(args):
        observed = sum(1 for _ in ratpoints.enumerate_exact_height(args.n, field, M))
        predicted = ratpoints.point_count_exact_height(args.n, field, M)
        rows.append([args.q, args.n, M, observed, predicted, observed == predicted])
    return cols, rows


def _run_count_pairs(args):
    _require(args, "q")
    field = field_from_order(args.q)
    cols = ["q", "M", "observed", "closed_form", "match"]
    rows = []
    for M in _m_range(args):
        pc = ratpoints.count_reducible_pairs(field, M)
        rows.append([args.q, M, pc.observed, pc.closed_form, pc.match])
    return cols, rows


def _run_count_quadratic(args):
    _require(args, "q")
    field = field_from_order(args.q)
    cols = ["q", "M", "count", "stable", "main_term", "ratio"]
    rows = []
    for M in _m_range(args):
        qc = quadfield.enumerate_degree2(field, M, jobs=args.jobs)
        if not qc.stable and not args.allow_unstable:
            raise UnstableCountError(
                f"count at M={M} is unstable under bound growth; "
                "pass --allow-unstable to print it anyway"
            )
        rows.append([qc.q, qc.M, qc.count, qc.stable, qc.main_term, qc.ratio])
    return cols, rows


def _run_cycles(args):
    _require(args, "q")
    field = field_from_order(args.q)
    cols = ["m", "sym", "hilb", "primes", "chen7", "chen8", "chen8_valid", "ratio_error"]
    rows = []
    for r in genfun.cycle_table(field, args.m_max):
        rows.append([r.m, r.sym, r.hilb, r.primes, r.chen7, r.chen8, r.chen8_valid, r.ratio_error])
    return cols, rows


def _run_peyre(args):
    _require(args, "q")
    field = field_from_order(args.q)
    params = peyre.GlobalFieldParams(field)
    dps = max(args.digits + 10, 50)
    if args.subcommand == "pn":
        res = peyre.peyre_constant_pn(args.n, params, dps=dps)
    elif args.subcommand == "hilb2":
        res = peyre.peyre_constant_hilb2(params, dps=dps)
    elif args.subcommand == "hilbm":
        res = peyre.peyre_constant_hilbm(args.m, params, mu=args.mu, deg_cut=args.deg_cut, dps=dps)
    else:
        res = peyre.cm_constant(args.m, params, mu=args.mu, deg_cut=args.deg_cut, dps=dps)
    cols = ["value", "residual_bound", "exact_prefactor"]
    return cols, [[res.value, res.residual_bound, res.exact_prefactor]]


def _run_verify_lemmas(args):
    _require(args, "q")
    field = field_from_order(args.q)
    cols = ["lemma", "params", "M", "ratio_or_dev", "pass"]
    rows = []
    for M in (50, 100, 200, 400):
        dev = asympt.technical_lemma_check(field, 2, 1, 5, M)
        rows.append(["technical", "t=2;j=1;m=5", M, dev, dev <= 10])
    for M in (10, 100, 1000):
        ratio = asympt.technical2_check(1, M)
        rows.append(["technical2", "k=1", M, ratio, ratio == Fraction(M * M - 1, M * M)])
    ratio = asympt.technical2_check(3, 100)
    rows.append(["technical2", "k=3", 100, ratio, abs(ratio - 1) <= Fraction(2, 100)])
    for (rv, rw, M) in ((1, 1, 100), (2, 2, 100)):
        ratio = asympt.product_main_term_check(rv, rw, M)
        target = Fraction(M + 1, M) if rv == rw == 1 else Fraction(M * M - 1, M * M)
        rows.append(["product", f"rV={rv};rW={rw}", M, ratio, ratio == target])
    return cols, rows


_RUNNERS = {
    ("count", "rational"): _run_count_rational,
    ("count", "pairs"): _run_count_pairs,
    ("count", "quadratic"): _run_count_quadratic,
    ("cycles", None): _run_cycles,
    ("peyre", "pn"): _run_peyre,
    ("peyre", "hilb2"): _run_peyre,
    ("peyre", "hilbm"): _run_peyre,
    ("peyre", "cm"): _run_peyre,
    ("verify", "lemmas"): _run_verify_lemmas,
}

# ratio columns eligible for --plot emission, per command key
_PLOT_RATIO = {
    ("count", "rational"): ("M", "observed", "predicted"),
    ("count", "pairs"): ("M", "observed", "closed_form"),
    ("count", "quadratic"): ("M", "count", "main_term"),
}

_PLOT_SCRIPT = """\
#!/usr/bin/env python3
# reads the data file written alongside and plots ratio vs M (log-scale M)
import csv
import sys

import matplotlib.pyplot as plt

path = sys.argv[1] if len(sys.argv) > 1 else {data!r}
M, ratio = [], []
with open(path, newline="") as fh:
    for row in csv.DictReader(fh):
        M.append(int(row["M"]))
        ratio.append(float(row["ratio"]))
plt.semilogx(M, ratio, marker="o")
plt.xlabel("M")
plt.ylabel("count / main term")
plt.savefig({out!r}, dpi=150)
print("wrote", {out!r})
"""


def _fingerprint_config(args, key) -> dict:
    skip = {"cache_dir", "format", "plot", "jobs", "config"}
    cfg = {"command": list(k for k in key if k)}
    for name, value in sorted(vars(args).items()):
        if name in skip or name in ("command", "subcommand"):
            continue
        cfg[name] = str(value)
    return cfg


def _emit(columns, rows, fmt, out):
    if fmt == "csv":
        out.write(",".join(columns) + "\n")
        for row in rows:
            out.write(",".join(row) + "\n")
    else:
        out.write(json.dumps([dict(zip(columns, row)) for row in rows], indent=2))
        out.write("\n")


def _emit_plot(key, columns, rows):
    spec = _PLOT_RATIO.get(key)
    if spec is None:
        print("note: --plot is only supported for count subcommands", file=sys.stderr)
        return
    m_col, num_col, den_col = spec
    name = "_".join(k for k in key if k)
    data_path = f"{name}_plot.csv"
    script_path = f"{name}_plot.py"
    with open(data_path, "w", encoding="utf-8") as fh:
        fh.write("M,ratio\n")
        for row in rows:
            rec = dict(zip(columns, row))
            num = Fraction(rec[num_col])
            den = Fraction(rec[den_col])
            fh.write(f"{rec[m_col]},{float(num / den)!r}\n")
    with open(script_path, "w", encoding="utf-8") as fh:
        fh.write(_PLOT_SCRIPT.format(data=data_path, out=f"{name}_plot.png"))
    print(f"wrote {data_path} and {script_path}", file=sys.stderr)


def dispatch(argv, out=None) -> int:
    out = out if out is not None else sys.stdout
    argv = list(argv)
    try:
        config = {}
        if "--config" in argv:
            idx = argv.index("--config")
            if idx + 1 >= len(argv):
                raise UsageError("--config needs a path")
            config = parse_config(argv[idx + 1])
        parser, leaves = build_parser()
        if config:
            for sp in leaves:
                sp.set_defaults(**config)
        try:
            args = parser.parse_args(argv)
        except SystemExit as exc:
            return int(exc.code or 0)
        key = (args.command, getattr(args, "subcommand", None))
        runner = _RUNNERS[key]
        fp_config = _fingerprint_config(args, key)
        cache_dir = args.cache_dir or os.environ.get(CACHE_ENV)
        payload = cache.load(cache_dir, fp_config) if cache_dir else None
        if payload is None:
            columns, raw_rows = runner(args)
            rows = [[fmt_value(v, args.digits) for v in row] for row in raw_rows]
            if cache_dir:
                cache.store(cache_dir, fp_config, {"columns": columns, "rows": rows})
        else:
            columns, rows = payload["columns"], payload["rows"]
        _emit(columns, rows, args.format, out)
        if args.plot:
            _emit_plot(key, columns, rows)
        return 0
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CharacteristicError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SizeError as exc:
        print(f"size guard: {exc}", file=sys.stderr)
        return 3
    except UnstableCountError as exc:
        print(f"unstable: {exc}", file=sys.stderr)
        return 4


def main():
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
