"""Command-line entry point: ``sdquant {frame,cs,spectral,conjecture,fit}``.

Exit codes: 0 success, 1 invalid arguments, 2 numeric failure, 3 I/O failure.
``SDQUANT_SEED`` in the environment overrides ``--seed``.
"""
from __future__ import annotations

import argparse
import csv
import os
import sys

import numpy as np

from ..fit import fit_loglog_slope
from ..spectral import concentration_experiment, conjecture_check
from .experiments import ExperimentSpec, decay_fit, m_range, preset, run_experiment
from .io import OutputError, read_csv, records_from_rows, write_csv, write_plot_data

EXIT_OK, EXIT_ARGS, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ARGS, f"{self.prog}: error: {message}\n")


def _m_range(text: str) -> tuple:
    try:
        start, stop, count = text.split(":")
        return m_range(float(start), float(stop), int(count))
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected start:stop:count, got {text!r} ({e})") from None


def _int_list(text: str) -> tuple:
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _seed(args) -> int:
    env = os.environ.get("SDQUANT_SEED")
    if env is not None:
        try:
            return int(env, 0)
        except ValueError:
            raise UsageError(f"SDQUANT_SEED must be an integer, got {env!r}") from None
    return args.seed


def _sweep_flags(p, decoder, m_default, k_default):
    p.add_argument("--k", type=int, default=None, help=f"signal dimension or sparsity (default {k_default})")
    p.add_argument("--delta", type=float, default=None, help="quantizer step (default 0.1)")
    p.add_argument("--order", type=int, default=None, help="Sigma-Delta order r (default 1)")
    p.add_argument("--m-range", type=_m_range, default=None, metavar="START:STOP:COUNT",
                   help=f"log-spaced m values (default {m_default})")
    p.add_argument("--trials", type=int, default=None, help="signals per selection map")
    p.add_argument("--perm-trials", type=int, default=None, help="selection maps per point")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--permute", dest="permute", action="store_true", default=None)
    p.add_argument("--no-permute", dest="permute", action="store_false")
    p.add_argument("--decoder", choices=("sobolev", "consistent", "l1"), default=None,
                   help=f"(default {decoder})")
    p.add_argument("--preset", choices=("fig1", "fig2", "fig3", "fig4"), default=None,
                   help="full-size settings; other flags override them")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--max-iterations", type=int, default=None)
    p.add_argument("--out", default=None, help="CSV output path")
    p.add_argument("--plot-data", default=None, help="two-column log10 (m, worst error) file")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="sdquant", description="Sigma-Delta quantization experiments.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    fr = sub.add_parser("frame", help="harmonic-frame error decay")
    _sweep_flags(fr, "sobolev", "100:500:5", 10)
    fr.add_argument("--mode", choices=("decay", "direct-vs-permuted", "vs-k"), default=None)
    fr.add_argument("--k-values", type=_int_list, default=None, help="k sweep for --mode vs-k")
    fr.add_argument("--omega", default=None,
                    help="last-k (high band), natural-last-k, or comma-separated frequencies")
    fr.add_argument("--raw-columns", action="store_true", help="skip column normalization")

    cs = sub.add_parser("cs", help="partial-DFT sparse recovery error decay")
    _sweep_flags(cs, "l1", "64:512:5", 5)
    cs.add_argument("--n", type=int, default=None, help="signal length N (default 128)")
    cs.add_argument("--raw-columns", action="store_true", help="skip the 1/sqrt(m) scaling")

    sp = sub.add_parser("spectral", help="concentration of sigma(V_l^H F)")
    sp.add_argument("--n", type=int, default=512)
    sp.add_argument("--k", type=int, default=8)
    sp.add_argument("--l", type=int, default=128)
    sp.add_argument("--m", type=int, default=None, help="selected rows (default N)")
    sp.add_argument("--order", type=int, default=1)
    sp.add_argument("--trials", type=int, default=200)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--omega", default="exclude-ones-column",
                    help="exclude-ones-column, include-ones-column, or comma-separated frequencies")
    sp.add_argument("--out", default=None)

    cj = sub.add_parser("conjecture", help="max-norm of singular vectors of D^{-r}")
    cj.add_argument("--order", type=int, default=2)
    cj.add_argument("--m-values", type=_int_list, default=(32, 64, 128, 256, 512, 1024))
    cj.add_argument("--out", default=None)

    ft = sub.add_parser("fit", help="log-log slope of worst-case error in a results CSV")
    ft.add_argument("csv", help="CSV written by frame or cs")
    ft.add_argument("--plot-data", default=None)
    return ap


def _sweep_spec(args, kind_default: str) -> ExperimentSpec:
    over = dict(
        k=args.k, delta=args.delta, order=args.order, m_values=args.m_range,
        trials_signals=args.trials, trials_permutations=args.perm_trials,
        master_seed=_seed(args), decoder=args.decoder, permute=args.permute,
        output_path=args.out, workers=args.workers, max_iterations=args.max_iterations,
        normalize=False if args.raw_columns else None,
    )
    if args.command == "cs":
        over["N"] = args.n
    else:
        if args.omega is not None:
            over["omega"] = args.omega if args.omega in ("last-k", "natural-last-k") else _int_list(args.omega)
        over["k_values"] = args.k_values
        if args.mode is not None:
            over["kind"] = {"decay": "frame-decay", "direct-vs-permuted": "frame-direct-vs-permuted",
                            "vs-k": "frame-vs-k"}[args.mode]
    if args.preset:
        return preset(args.preset, **over)
    base = dict(kind=kind_default, k=10, delta=0.1, order=1, m_values=m_range(100, 500, 5),
                trials_signals=1, trials_permutations=100, decoder="sobolev", permute=True)
    if args.command == "cs":
        base.update(k=5, N=128, m_values=m_range(64, 512, 5), trials_signals=10,
                    trials_permutations=10, decoder="l1")
    elif over.get("kind") == "frame-vs-k":
        base.update(m_values=(512,), k_values=(8, 16, 32, 64), trials_permutations=1,
                    trials_signals=20)
    base.update({k: v for k, v in over.items() if v is not None})
    return ExperimentSpec(**base)


def _report_sweep(spec, records, plot_path):
    modes = sorted({r.permute for r in records})
    points = []
    for permute in modes:
        recs = [r for r in records if r.permute == permute]
        label = "permuted" if permute else "direct"
        for r in recs:
            x = r.k if spec.kind == "frame-vs-k" else r.m
            print(f"{label:9s} m={r.m:5d} k={r.k:3d} worst={r.worst_case_error:.6g} "
                  f"overloaded={r.overload_count} nonconverged={r.nonconverged_count}")
            points.append((x, r.worst_case_error))
        if len(recs) >= 2:
            fit = decay_fit(recs)
            print(f"{label:9s} slope={fit.slope:.4f} r2={fit.r_squared:.4f}")
    if plot_path:
        write_plot_data(plot_path, points)


def cmd_sweep(args, kind_default):
    spec = _sweep_spec(args, kind_default)
    records = run_experiment(spec)
    if spec.output_path:
        write_csv(spec.output_path, spec, records)
    _report_sweep(spec, records, args.plot_data)


def cmd_spectral(args):
    omega = args.omega
    if omega not in ("exclude-ones-column", "include-ones-column"):
        omega = _int_list(omega)
    rep = concentration_experiment(args.n, args.k, args.l, args.m or args.n, args.trials,
                                   omega, seed=_seed(args), r=args.order)
    for key, v in sorted(rep.empirical_quantiles.items()):
        print(f"{key} {v:.6f}")
    print(f"P(sigma_min <= 0.5 sqrt(l)) {rep.frac_min_below(0.5):.4f}")
    print(f"P(sigma_max >= 1.5 sqrt(l)) {rep.frac_max_above(1.5):.4f}")
    if args.out:
        _write_table(args.out, ("trial", "sigma_min_over_sqrt_l", "sigma_max_over_sqrt_l"),
                     [(t, a, b) for t, (a, b) in
                      enumerate(zip(rep.sigma_min_over_sqrt_l, rep.sigma_max_over_sqrt_l))])


def cmd_conjecture(args):
    rep = conjecture_check(args.order, args.m_values)
    for m, v, b in zip(rep.m_values, rep.max_entry_times_sqrt_m, rep.bound_ratio):
        print(f"m={m:5d} max|V|*sqrt(m)={v:.6f} ratio={b:.6f}")
    if len(rep.m_values) >= 2:
        print(f"trend slope {rep.trend().slope:.4f}")
    if args.out:
        _write_table(args.out, ("r", "m", "max_entry_times_sqrt_m", "bound_ratio"),
                     [(rep.r, m, v, b) for m, v, b in
                      zip(rep.m_values, rep.max_entry_times_sqrt_m, rep.bound_ratio)])


def cmd_fit(args):
    rows = read_csv(args.csv)
    records = records_from_rows(rows)
    if not records:
        raise UsageError(f"{args.csv} has no data rows")
    kind = rows[0]["kind"]
    points = []
    for permute in sorted({r.permute for r in records}):
        recs = [r for r in records if r.permute == permute]
        xs = [r.k for r in recs] if kind == "frame-vs-k" else [r.m for r in recs]
        pts = [(x, r.worst_case_error) for x, r in zip(xs, recs)]
        points += pts
        fit = fit_loglog_slope(pts)
        label = "permuted" if permute else "direct"
        print(f"{label} slope={fit.slope:.4f} intercept={fit.intercept:.4f} "
              f"r2={fit.r_squared:.4f} points={fit.points_used}")
    if args.plot_data:
        write_plot_data(args.plot_data, points)


def _write_table(path, header, rows):
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            for row in rows:
                w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    except OSError as e:
        raise OutputError(f"cannot write {path}: {e.strerror or e}") from e


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "frame":
            cmd_sweep(args, "frame-decay")
        elif args.command == "cs":
            cmd_sweep(args, "cs-decay")
        elif args.command == "spectral":
            cmd_spectral(args)
        elif args.command == "conjecture":
            cmd_conjecture(args)
        else:
            cmd_fit(args)
    except OSError as e:
        print(f"sdquant: {e}", file=sys.stderr)
        return EXIT_IO
    except np.linalg.LinAlgError as e:
        print(f"sdquant: numeric failure: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except (UsageError, ValueError) as e:
        print(f"sdquant: {e}", file=sys.stderr)
        return EXIT_ARGS
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
