"""Command-line front end.

Subcommands: cdf, rates, sweep, lambda-star, cutoffs, decision-table.
Every run writes a CSV (LF endings, 9-significant-digit floats) plus a
JSON manifest sidecar with config, arguments, seed and output checksums.
All randomness flows from --seed; omitting it uses the fixed default
rather than OS entropy, so identical invocations are byte-identical.
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from .analytic import cdf_interference, cdf_sum_mc
from .cdma import cutoff_closed_cdma
from .experiments import (
    BACKHAUL_HEADER,
    DECISION_HEADER,
    DENSITY_HEADER,
    LAMBDA_HEADER,
    SweepSpec,
    decision_table,
    lambda_star,
    lambda_star_vs_backhaul,
    sweep_density,
)
from .model import NetworkConfig
from .montecarlo import find_open_cutoff
from .policy import CDMA, TDMA, fair_policy, fixed_lambda_policy
from .runio import new_manifest, write_csv
from .tdma import closed_access_tdma, cutoff_closed_tdma, open_access_tdma_k1

DEFAULT_SEED = 12345


def _parse_grid(spec: str) -> np.ndarray:
    try:
        kind, lo, hi, count = spec.split(":")
        lo, hi, count = float(lo), float(hi), int(count)
    except ValueError as exc:
        raise ValueError(f"bad grid spec {spec!r}, expected kind:lo:hi:count") from exc
    if not (lo < hi and count >= 2):
        raise ValueError("grid needs lo < hi and count >= 2")
    if kind == "log":
        if lo <= 0:
            raise ValueError("log grid needs lo > 0")
        return np.logspace(np.log10(lo), np.log10(hi), count)
    if kind == "lin":
        return np.linspace(lo, hi, count)
    raise ValueError(f"unknown grid kind {kind!r}")


def _parse_int_list(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.split(",") if x.strip())


def _parse_float_list(text: str) -> tuple[float, ...]:
    return tuple(float(x) for x in text.split(",") if x.strip())


def _parse_range(text: str) -> tuple[int, ...]:
    parts = text.split(":")
    if len(parts) == 1:
        return (int(parts[0]),)
    if len(parts) == 2:
        return tuple(range(int(parts[0]), int(parts[1]) + 1))
    if len(parts) == 3:
        return tuple(range(int(parts[0]), int(parts[1]) + 1, int(parts[2])))
    raise ValueError(f"bad N range {text!r}, expected start[:stop[:step]]")


def _load_config(args) -> NetworkConfig:
    cfg = NetworkConfig.from_file(args.config) if args.config else NetworkConfig()
    for item in args.set or []:
        key, _, value = item.partition("=")
        if not value:
            raise ValueError(f"bad --set {item!r}, expected KEY=VALUE")
        cfg = cfg.replace(**{key.strip(): float(value)})
    return cfg


def _add_common(p: argparse.ArgumentParser, reps: int) -> None:
    p.add_argument("--config", help="flat key=value network config file")
    p.add_argument("--set", action="append", metavar="KEY=VAL", help="override a config value")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="master seed (fixed default, not entropy)")
    p.add_argument("--reps", type=lambda s: int(float(s)), default=reps, help="Monte Carlo replications")
    p.add_argument("--workers", type=int, default=1, help="parallel workers (does not affect results)")
    p.add_argument("--out", help="output CSV path (default <command>.csv)")


def _policy_factory(args):
    if getattr(args, "lam", None) is not None:
        return lambda k: fixed_lambda_policy(args.lam, k)
    return fair_policy


def cmd_cdf(args, cfg) -> tuple[list[str], list[list]]:
    grid = _parse_grid(args.grid)
    rng = np.random.default_rng((args.seed, 0))
    f = cdf_interference(grid, cfg)
    rows = []
    for i, fi in zip(grid, f):
        gi, se = cdf_sum_mc(args.k, float(i), cfg, args.reps, rng)
        rows.append([float(i), float(fi), float(fi) ** args.k, gi, se])
    return ["i", "f_i", "f_i_pow_k", "gi_mc", "gi_se"], rows


def cmd_rates(args, cfg) -> tuple[list[str], list[list]]:
    spec = SweepSpec(
        scheme=args.scheme,
        access=(args.access,),
        n_values=_parse_range(args.n),
        k_values=(args.k,),
        reps=args.reps,
        seed=args.seed,
        workers=args.workers,
    )
    return DENSITY_HEADER, sweep_density(spec, cfg, policy_for=_policy_factory(args))


def _fig_preset(fig: int, args, cfg):
    common = dict(reps=args.reps, seed=args.seed, workers=args.workers)
    if fig in (1, 2):
        spec = SweepSpec(
            scheme=TDMA,
            n_values=tuple(range(5, 71, 5)) + tuple(range(46, 56, 2)),
            k_values=(1, 3),
            **common,
        )
        return DENSITY_HEADER, sweep_density(spec, cfg)
    if fig == 3:
        rows = [
            [TDMA, n, lambda_star(cfg, n, TDMA, reps=args.reps, seed=args.seed, workers=args.workers)]
            for n in range(10, 41, 5)
        ]
        return LAMBDA_HEADER, rows
    if fig == 4:
        rows = []
        for lam in np.arange(0.05, 1.0 + 1e-9, 0.05):
            lam = round(float(lam), 2)
            open_cf = open_access_tdma_k1(cfg, fixed_lambda_policy(lam, 1), 30)
            rows.append([TDMA, 30, lam, open_cf.c0, closed_access_tdma(cfg, 30).c0])
        return ["scheme", "n", "lam", "c0_open_cf", "c0_closed_cf"], rows
    if fig == 5:
        rows = lambda_star_vs_backhaul(
            cfg, 30, TDMA, (0.5, 0.75, 1.0, 1.25, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0),
            reps=args.reps, seed=args.seed, workers=args.workers,
        )
        return BACKHAUL_HEADER, rows
    if fig in (6, 7):
        spec = SweepSpec(
            scheme=CDMA,
            n_values=tuple(range(20, 221, 20)) if fig == 6 else tuple(range(20, 161, 20)),
            k_values=(1,),
            **common,
        )
        return DENSITY_HEADER, sweep_density(spec, cfg)
    raise ValueError(f"no preset for figure {fig}")


def cmd_sweep(args, cfg) -> tuple[list[str], list[list]]:
    if args.fig is not None:
        return _fig_preset(args.fig, args, cfg)
    if not args.scheme or not args.n:
        raise ValueError("explicit sweep needs --scheme and --n")
    access = ("open", "closed") if args.access == "both" else (args.access,)
    spec = SweepSpec(
        scheme=args.scheme,
        access=access,
        n_values=_parse_range(args.n),
        k_values=_parse_int_list(args.k_list),
        reps=args.reps,
        seed=args.seed,
        workers=args.workers,
    )
    return DENSITY_HEADER, sweep_density(spec, cfg, policy_for=_policy_factory(args))


def cmd_lambda_star(args, cfg) -> tuple[list[str], list[list]]:
    if args.cb_list:
        rows = lambda_star_vs_backhaul(
            cfg, args.n, args.scheme, _parse_float_list(args.cb_list),
            reps=args.reps, seed=args.seed, grid_step=args.grid_step, workers=args.workers,
        )
        return BACKHAUL_HEADER, rows
    rows = []
    for n in _parse_range(args.n_list or str(args.n)):
        star = lambda_star(
            cfg, n, args.scheme, reps=args.reps, seed=args.seed,
            grid_step=args.grid_step, workers=args.workers,
        )
        rows.append([args.scheme, n, "" if star is None else star])
    return LAMBDA_HEADER, rows


def cmd_cutoffs(args, cfg) -> tuple[list[str], list[list]]:
    rows = [
        [TDMA, "closed", "", cutoff_closed_tdma(cfg)],
        [CDMA, "closed", "", cutoff_closed_cdma(cfg)],
    ]
    if args.printed_variant:
        rows.append([CDMA, "closed-printed-variant", "", cutoff_closed_cdma(cfg, printed_variant=True)])
    if args.open:
        factory = _policy_factory(args)
        for scheme in (TDMA, CDMA):
            nc = cutoff_closed_tdma(cfg) if scheme == TDMA else cutoff_closed_cdma(cfg)
            for k in _parse_int_list(args.k_list):
                no = find_open_cutoff(
                    cfg, factory(k), scheme, reps=args.reps, seed=args.seed,
                    workers=args.workers, n_start=args.n_start, n_max=nc + k + 20,
                )
                rows.append([scheme, "open", k, "exceeds n_max" if no is None else no])
    return ["scheme", "kind", "k", "cutoff"], rows


def cmd_decision_table(args, cfg) -> tuple[list[str], list[list]]:
    return DECISION_HEADER, decision_table(cfg, reps=args.reps, seed=args.seed, workers=args.workers)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="femtocap",
        description="Two-tier femtocell uplink capacity: open vs. closed access",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cdf", help="interference-factor CDF table")
    _add_common(p, reps=10_000)
    p.add_argument("--grid", default="log:1e-4:1e3:200", help="i grid, kind:lo:hi:count")
    p.add_argument("--k", type=int, default=5, help="k for the sum-CDF columns")
    p.set_defaults(func=cmd_cdf)

    p = sub.add_parser("rates", help="rates for one scheme/access/N setting")
    _add_common(p, reps=100_000)
    p.add_argument("--scheme", choices=(TDMA, CDMA), required=True)
    p.add_argument("--access", choices=("open", "closed"), required=True)
    p.add_argument("--n", required=True, help="N or start:stop[:step]")
    p.add_argument("--k", type=int, default=1, help="max users served at the FAP")
    p.add_argument("--lam", type=float, help="fixed home share (default: fair policy)")
    p.set_defaults(func=cmd_rates)

    p = sub.add_parser("sweep", help="density sweeps and figure presets")
    _add_common(p, reps=100_000)
    p.add_argument("--fig", type=int, choices=range(1, 8), help="figure preset")
    p.add_argument("--scheme", choices=(TDMA, CDMA))
    p.add_argument("--access", choices=("open", "closed", "both"), default="both")
    p.add_argument("--n", help="start:stop[:step]")
    p.add_argument("--k-list", default="1", help="comma-separated K values")
    p.add_argument("--lam", type=float, help="fixed home share (default: fair policy)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("lambda-star", help="minimum beneficial home share")
    _add_common(p, reps=50_000)
    p.add_argument("--scheme", choices=(TDMA, CDMA), required=True)
    p.add_argument("--n", type=int, default=30)
    p.add_argument("--n-list", help="N values start:stop[:step]")
    p.add_argument("--cb-list", help="backhaul sweep C_b values (comma-separated)")
    p.add_argument("--grid-step", type=float, default=0.01)
    p.set_defaults(func=cmd_lambda_star)

    p = sub.add_parser("cutoffs", help="closed/open cutoff user loadings")
    _add_common(p, reps=20_000)
    p.add_argument("--open", action="store_true", help="also estimate open-access cutoffs")
    p.add_argument("--k-list", default="1,3")
    p.add_argument("--lam", type=float, help="fixed home share (default: fair policy)")
    p.add_argument("--n-start", type=int, help="start of the open-cutoff scan")
    p.add_argument("--printed-variant", action="store_true",
                   help="include the alternative CDMA cutoff equation for comparison")
    p.set_defaults(func=cmd_cutoffs)

    p = sub.add_parser("decision-table", help="preferred access mode per density regime")
    _add_common(p, reps=20_000)
    p.set_defaults(func=cmd_decision_table)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.time()
    try:
        cfg = _load_config(args)
        header, rows = args.func(args, cfg)
        out = args.out or f"{args.command.replace('-', '_')}.csv"
        manifest = new_manifest(
            command=args.command,
            args={k: v for k, v in vars(args).items() if k not in ("func", "config", "set")},
            cfg=cfg,
            seed=args.seed,
        )
        write_csv(out, header, rows)
        manifest.wall_clock_s = round(time.time() - started, 3)
        manifest.add_output(out)
        manifest.write(out + ".manifest.json")
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {out} ({len(rows)} rows)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
