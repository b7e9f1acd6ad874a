"""
Command-line interface.

    etamu-relay ser      --config cfg.json [--out ser.csv] [--svg ser.svg] [--method exact,asymptotic,mc] [--seed N]
    etamu-relay opa      --config cfg.json [--out opa.csv] [--svg opa.svg]
    etamu-relay aof      --config cfg.json [--out aof.csv]
    etamu-relay simulate --config cfg.json [--out mc.csv] [--seed N] [--workers N]
    etamu-relay validate [--no-mc] [--symbols N] [--fault table-h]

CSV goes to ``--out`` (or stdout); notices and reports go to stderr.
Exit codes: 0 success, 1 usage or config error, 2 validation failure,
3 numerical-accuracy failure.
"""
from __future__ import annotations

import argparse
import io
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .config import METHODS, ConfigError, Series, load_config
from .errors import AccuracyError, CapacityError, DomainError, UnsupportedError
from .fading import amount_of_fading, amount_of_fading_from_mgf
from .montecarlo import SimConfig, check_supported, simulate_ser
from .network import PowerAllocation, epa
from .power import optimize_power
from .ser import asymptotic_ser, end_to_end_ser
from .svgplot import log_plot

__all__ = ["main", "SER_COLUMNS", "OPA_COLUMNS", "AOF_COLUMNS"]

EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, EXIT_ACCURACY = 0, 1, 2, 3

SER_COLUMNS = ("series", "snr_db", "ser_exact", "ser_asymptotic", "ser_mc", "mc_stderr", "allocation")
OPA_COLUMNS = (
    "series", "snr_db", "allocation_opa", "kkt_residual", "iterations", "converged", "boundary",
    "ser_asymptotic_epa", "ser_asymptotic_opa", "ser_exact_epa", "ser_exact_opa",
)
AOF_COLUMNS = ("series", "snr_db", "aof", "aof_moment_oracle")


def _num(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def _alloc_str(a: PowerAllocation) -> str:
    return ";".join(repr(float(x)) for x in a.as_array())


def _csv(columns, rows) -> str:
    buf = io.StringIO()
    buf.write(",".join(columns) + "\n")
    for r in rows:
        cells = []
        for c in columns:
            v = r.get(c)
            cells.append(v if isinstance(v, str) else _num(v))
        buf.write(",".join(_quote(x) for x in cells) + "\n")
    return buf.getvalue()


def _quote(s: str) -> str:
    if any(ch in s for ch in ',"\n'):
        return '"' + s.replace('"', '""') + '"'
    return s


def _emit(text: str, path):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _point_seed(seed: int, series_idx: int, point_idx: int) -> int:
    st = np.random.SeedSequence([seed, series_idx, point_idx]).generate_state(2, dtype=np.uint32)
    return int(st[0]) << 32 | int(st[1])


def _allocation_for(s: Series, net):
    if isinstance(s.allocation, PowerAllocation):
        return s.allocation
    if s.allocation == "opa":
        if net.K == 0:
            return epa(0)
        return optimize_power(net, s.mod).allocation
    return epa(net.K)


# ---------------------------------------------------------------------------
# ser / simulate
# ---------------------------------------------------------------------------


def _ser_rows(series_list, methods, seed, workers, err):
    rows = []
    curves = []
    for si, s in enumerate(series_list):
        use = methods if methods is not None else s.methods
        mc_ok = "mc" in use
        if mc_ok:
            try:
                check_supported(s.network)
            except UnsupportedError as exc:
                err.write(f"notice: skipping mc for series {s.label!r}: {exc}\n")
                mc_ok = False

        def analytic(d, s=s, use=use):
            net = s.network.with_snr_db(d)
            net = net.with_allocation(_allocation_for(s, net))
            row = {"series": s.label, "snr_db": d, "allocation": _alloc_str(net.allocation)}
            if "exact" in use:
                row["ser_exact"] = end_to_end_ser(net, s.mod).value
            if "asymptotic" in use:
                row["ser_asymptotic"] = asymptotic_ser(net, s.mod).value
            return row, net

        with ThreadPoolExecutor() as ex:
            done = list(ex.map(analytic, s.snr_db))
        sseed = s.mc_seed if seed is None else seed
        for pi, (row, net) in enumerate(done):
            if mc_ok:
                cfg = SimConfig(s.mc_symbols, _point_seed(sseed, si, pi), s.mc_batch, workers or s.mc_workers)
                r = simulate_ser(net, s.mod, cfg)
                row["ser_mc"], row["mc_stderr"] = r.ser_hat, r.stderr
            rows.append(row)
        for m, col in (("exact", "ser_exact"), ("asymptotic", "ser_asymptotic"), ("mc", "ser_mc")):
            if m in use and (m != "mc" or mc_ok):
                curves.append({"label": f"{s.label} {m}", "x": s.snr_db, "y": [row.get(col) for row, _ in done], "style": m})
    return rows, curves


def cmd_ser(args, err, default_methods=None) -> int:
    cfg = load_config(args.config)
    methods = _parse_methods(args.method) if args.method else default_methods
    rows, curves = _ser_rows(cfg.series, methods, args.seed, getattr(args, "workers", None), err)
    _emit(_csv(SER_COLUMNS, rows), args.out)
    if args.svg:
        _emit(log_plot(curves, title=cfg.description), args.svg)
    return EXIT_OK


def cmd_simulate(args, err) -> int:
    return cmd_ser(args, err, default_methods=("exact", "mc"))


# ---------------------------------------------------------------------------
# opa
# ---------------------------------------------------------------------------


def cmd_opa(args, err) -> int:
    cfg = load_config(args.config)
    rows, curves = [], []
    for s in cfg.series:
        if s.network.K < 1:
            raise ConfigError(f"series {s.label!r}: power optimisation needs at least one relay")

        def point(d, s=s):
            net = s.network.with_snr_db(d)
            rep = optimize_power(net, s.mod)
            e = net.with_allocation(epa(net.K))
            o = net.with_allocation(rep.allocation)
            return {
                "series": s.label,
                "snr_db": d,
                "allocation_opa": _alloc_str(rep.allocation),
                "kkt_residual": rep.kkt_residual,
                "iterations": rep.iterations,
                "converged": rep.converged,
                "boundary": rep.boundary,
                "ser_asymptotic_epa": asymptotic_ser(e, s.mod).value,
                "ser_asymptotic_opa": rep.ser,
                "ser_exact_epa": end_to_end_ser(e, s.mod).value,
                "ser_exact_opa": end_to_end_ser(o, s.mod).value,
            }

        with ThreadPoolExecutor() as ex:
            done = list(ex.map(point, s.snr_db))
        rows += done
        for r in done:
            err.write(
                f"{s.label} @ {r['snr_db']:g} dB: a = [{r['allocation_opa'].replace(';', ', ')}]"
                f"  KKT {r['kkt_residual']:.2e}  SER exact EPA {r['ser_exact_epa']:.4e} -> OPA {r['ser_exact_opa']:.4e}\n"
            )
        curves.append({"label": f"{s.label} EPA", "x": s.snr_db, "y": [r["ser_exact_epa"] for r in done], "style": "asymptotic"})
        curves.append({"label": f"{s.label} OPA", "x": s.snr_db, "y": [r["ser_exact_opa"] for r in done], "style": "exact"})
    _emit(_csv(OPA_COLUMNS, rows), args.out)
    if args.svg:
        _emit(log_plot(curves, title=cfg.description), args.svg)
    return EXIT_OK


# ---------------------------------------------------------------------------
# aof
# ---------------------------------------------------------------------------


def cmd_aof(args, err) -> int:
    cfg = load_config(args.config)
    rows = []
    for s in cfg.series:
        for d in s.snr_db:
            net = s.network.with_snr_db(d)
            net = net.with_allocation(_allocation_for(s, net))
            try:
                closed = amount_of_fading(net)
            except UnsupportedError as exc:
                err.write(f"notice: closed-form AoF unavailable for series {s.label!r}: {exc}\n")
                closed = None
            rows.append({"series": s.label, "snr_db": d, "aof": closed, "aof_moment_oracle": amount_of_fading_from_mgf(net)})
    _emit(_csv(AOF_COLUMNS, rows), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# validate
# ---------------------------------------------------------------------------


def cmd_validate(args, err) -> int:
    from .validate import format_table, run_checks

    checks = run_checks(mc=not args.no_mc, fault=args.fault, symbols=args.symbols, seed=args.seed or 1)
    text = format_table(checks) + "\n"
    _emit(text, args.out)
    failed = [c.name for c in checks if not c.passed]
    if failed:
        err.write("validation failed: " + "; ".join(failed) + "\n")
        return EXIT_VALIDATION
    return EXIT_OK


# ---------------------------------------------------------------------------


def _parse_methods(text: str) -> tuple:
    vals = [x.strip() for x in text.split(",") if x.strip()]
    bad = [v for v in vals if v not in METHODS]
    if bad or not vals:
        raise ConfigError(f"--method: unknown method(s) {bad}; choose from {','.join(METHODS)}")
    return tuple(m for m in METHODS if m in vals)


def _seed(text: str) -> int:
    v = int(text, 0)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="etamu-relay", description="SER analysis of DF relay networks over eta-mu fading.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, svg=True, method=True):
        sp.add_argument("--config", required=True, help="JSON run configuration")
        sp.add_argument("--out", help="CSV output path (default: stdout)")
        if svg:
            sp.add_argument("--svg", help="SVG plot output path")
        if method:
            sp.add_argument("--method", help="comma list drawn from exact,asymptotic,mc")
            sp.add_argument("--seed", type=_seed, help="Monte Carlo seed (overrides the config)")
            sp.add_argument("--workers", type=int, help="Monte Carlo worker threads")

    common(sub.add_parser("ser", help="SER sweep"))
    common(sub.add_parser("simulate", help="Monte Carlo SER sweep"))
    common(sub.add_parser("opa", help="optimal power allocation"), method=False)
    common(sub.add_parser("aof", help="amount of fading"), svg=False, method=False)
    v = sub.add_parser("validate", help="run the oracle validation suite")
    v.add_argument("--no-mc", action="store_true", help="skip the Monte Carlo checks")
    v.add_argument("--symbols", type=int, default=1_000_000, help="Monte Carlo symbols per check")
    v.add_argument("--seed", type=_seed, help="Monte Carlo seed")
    v.add_argument("--fault", default="none", choices=["none", "table-h"], help="inject a known fault (suite self-test)")
    v.add_argument("--out", help="write the report here instead of stdout")
    v.add_argument("--config", help=argparse.SUPPRESS)
    return p


_COMMANDS = {"ser": cmd_ser, "simulate": cmd_simulate, "opa": cmd_opa, "aof": cmd_aof, "validate": cmd_validate}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    err = sys.stderr
    try:
        return _COMMANDS[args.command](args, err)
    except AccuracyError as exc:
        err.write(f"error: numerical accuracy target missed: {exc}\n")
        return EXIT_ACCURACY
    except (ConfigError, DomainError, CapacityError, UnsupportedError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE
    except OSError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
