"""Command-line front end: ``casimir-lab --config run.toml`` or ``--preset NAME``.

Exit status: 0 on success, 2 on an invalid configuration, 3 when a numerical
routine did not converge.
"""
import argparse
from concurrent.futures import ThreadPoolExecutor
import csv
import io
import json
import math
import sys
import warnings

from . import energy as en
from . import thermo
from .config import FORMATS, build_system, graphene_params_of, load_toml, merge, parse_config
from .errors import CasimirError, ConfigError, DomainError
from .presets import PRESETS, preset

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3

SCAN_COLUMNS = ["T_K", "F_total_eV", "dF_implicit", "dF_explicit_l0", "dF_explicit_lge1",
                "S_eV_per_K", "S_err"]
BREAKDOWN_COLUMNS = ["a_um", "T_K", "E0_eV", "F_total_eV", "dF_total", "dF_implicit",
                     "dF_explicit_l0", "dF_explicit_lge1"]
NERNST_COLUMNS = ["case", "a_um", "T_min_K", "T_max_K", "expected_exponent", "fitted_exponent",
                  "exponent_stderr", "log_factor", "S0_kB", "S0_err_kB", "verdict"]


class Table:
    """Ordered columns and rows, plus optional extra sections for JSON."""

    def __init__(self, columns, rows, extra=None):
        self.columns = list(columns)
        self.rows = [list(r) for r in rows]
        self.extra = extra or {}


def _fmt(x):
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return format(x, ".12g")
    return str(x)


def _json_value(x):
    if isinstance(x, float):
        return float(format(x, ".12g")) if math.isfinite(x) else str(x)
    return x


def render(table, fmt):
    """Text of ``table`` in ``fmt`` (csv or json); 12 significant digits."""
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(table.columns)
        for row in table.rows:
            w.writerow([_fmt(v) for v in row])
        return buf.getvalue()
    doc = {"columns": table.columns,
           "rows": [[_json_value(v) for v in row] for row in table.rows]}
    for key, val in table.extra.items():
        doc[key] = val
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


# --- commands --------------------------------------------------------------------

def _points(cfg):
    return [(a, T) for a in cfg.separations for T in cfg.temperatures]


def _energy(cfg, pool):
    unit = "F_eV" if cfg.is_atom else "F_eV_per_um2"

    def row(item):
        a, T = item
        s = build_system(cfg, a)
        F = en.energy_T0(s, cfg.rel_tol) if T == 0 else en.free_energy(s, T, cfg.rel_tol)
        return [a, T, F]

    return Table(["a_um", "T_K", unit], pool.map(row, _points(cfg)))


def _pfa(cfg, pool):
    def row(item):
        a, T = item
        s = build_system(cfg, a)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            f = en.pfa_sphere_force(s, T, cfg.radius, cfg.rel_tol)
        return [a, cfg.radius, T, f]

    return Table(["a_um", "R_um", "T_K", "force_eV_per_um"], pool.map(row, _points(cfg)))


def _breakdown(cfg, pool):
    E0 = {a: en.energy_T0(build_system(cfg, a), cfg.rel_tol) for a in cfg.separations}

    def row(item):
        a, T = item
        b = en.thermal_correction_breakdown(build_system(cfg, a), T, cfg.rel_tol)
        return [a, T, E0[a], E0[a] + b.total_correction, b.total_correction, b.implicit,
                b.explicit_l0, b.explicit_lge1]

    return Table(BREAKDOWN_COLUMNS, pool.map(row, _points(cfg)))


def _scan(cfg, pool):
    a = cfg.separations[0]
    s = build_system(cfg, a)
    E0 = en.energy_T0(s, cfg.rel_tol)
    rows = thermo.low_T_scan(s, cfg.temperatures, cfg.rel_tol, map_fn=pool.map)
    return s, E0, rows


def _scan_table(E0, rows):
    out = []
    for r in rows:
        b = r.breakdown
        out.append([r.T, E0 + b.total_correction, b.implicit, b.explicit_l0, b.explicit_lge1,
                    r.entropy, r.entropy_error])
    return out


def _entropy_scan(cfg, pool):
    _, E0, rows = _scan(cfg, pool)
    return Table(SCAN_COLUMNS, _scan_table(E0, rows))


def _nernst(cfg, pool):
    s, E0, rows = _scan(cfg, pool)
    params = graphene_params_of(cfg)
    case = thermo.classify_case(params) if params is not None else "n/a"
    a = cfg.separations[0]
    rep = thermo.nernst_verdict(rows, case, atom=cfg.is_atom, a=a)
    label = rep.case
    row = [label, a, cfg.temperatures[0], cfg.temperatures[-1], rep.expected_exponent,
           rep.fit.exponent, rep.fit.exponent_stderr, rep.fit.log_factor,
           rep.entropy_limit_estimate, rep.entropy_limit_error, rep.verdict.value]
    scan = Table(SCAN_COLUMNS, _scan_table(E0, rows))
    extra = {"scan": {"columns": scan.columns,
                      "rows": [[_json_value(v) for v in r] for r in scan.rows]}}
    return Table(NERNST_COLUMNS, [row], extra)


COMMANDS = {"energy": _energy, "cp-energy": _energy, "pfa": _pfa, "breakdown": _breakdown,
            "entropy-scan": _entropy_scan, "nernst-check": _nernst}


def run(cfg):
    """Evaluate a validated :class:`~casimir_lab.config.RunConfig`; returns the Table.

    Rows are computed by a pool of ``cfg.threads`` workers and collected in
    input order, so the output does not depend on the thread count.
    """
    with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
        return COMMANDS[cfg.command](cfg, pool)


# --- entry point ------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(
        prog="casimir-lab",
        description="Casimir and Casimir-Polder free energies, entropies and Nernst checks.")
    p.add_argument("--config", help="TOML run configuration")
    p.add_argument("--preset", help=f"start from a preset ({', '.join(sorted(PRESETS))}); "
                                    "--config values override it")
    p.add_argument("--output", help="output file (default: standard output)")
    p.add_argument("--format", choices=FORMATS, help="output format (default csv)")
    p.add_argument("--threads", type=int,
                   help="worker threads (default: CASIMIR_LAB_THREADS or 1)")
    p.add_argument("--tol", type=float, help="relative tolerance (default 1e-6)")
    p.add_argument("--command", help="override the command of the config or preset")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if not args.config and not args.preset:
            raise ConfigError("give --config and/or --preset")
        raw = {}
        if args.preset:
            try:
                raw = preset(args.preset)
            except KeyError as exc:
                raise ConfigError(exc.args[0]) from None
        if args.config:
            raw = merge(raw, load_toml(args.config))
        if args.command:
            raw["command"] = args.command
        cfg = parse_config(raw, threads=args.threads, tol=args.tol, output=args.output,
                           fmt=args.format)
    except (ConfigError, DomainError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        table = run(cfg)
    except DomainError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CasimirError as exc:
        node = getattr(exc, "node", None)
        extra = f" (node {node})" if node else ""
        print(f"numerical failure: {type(exc).__name__}: {exc}{extra}", file=sys.stderr)
        return EXIT_NUMERIC
    text = render(table, cfg.output_format)
    if cfg.output_path:
        with open(cfg.output_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
