"""Command-line entry points: gen-table, run, optimize."""

import argparse
import os
import sys

from .config import SpecError, build_spec, env_overrides, parse_pairs
from .control import OptimizerParams, optimize_for_distance
from .modem import DEFAULT_DATA_RATES_GBPS, MODULATIONS, BerTable
from .sim import run_simulation
from .tablegen import TableModel, generate_table


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="thzlink",
        description="Adaptive coding/modulation link simulator and codec tools")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen-table", help="write the synthetic default BER table")
    gen.add_argument("--out", required=True, help="output CSV path")
    gen.add_argument("--d-min", type=float, default=0.5)
    gen.add_argument("--d-max", type=float, default=20.0)
    gen.add_argument("--step", type=float, default=0.5)
    gen.add_argument("--path-loss-exp", type=float, default=2.0)
    gen.add_argument("--absorption-db-per-m", type=float, default=0.3)
    gen.add_argument("--anchor-distance", type=float, default=20.0)
    gen.add_argument("--anchor-ber", type=float, default=0.0579)

    run = sub.add_parser("run", help="run a full simulation scenario")
    run.add_argument("--spec", help="run-spec file (flat key = value lines)")
    run.add_argument("--table", help="BER table CSV (overrides the spec)")
    run.add_argument("--seed", type=int, help="random seed (overrides the spec)")
    run.add_argument("--duration", type=float, help="simulated seconds (overrides the spec)")
    run.add_argument("--out", help="directory for metrics.csv and events.log")

    opt = sub.add_parser("optimize", help="one-shot candidate report for a distance")
    opt.add_argument("--table", required=True, help="BER table CSV")
    opt.add_argument("--distance", type=float, required=True, help="distance in meters")
    opt.add_argument("--t-mdpc", type=int, default=1)
    opt.add_argument("--t-rs", type=int, default=1)
    opt.add_argument("--s-min", type=int, default=3)
    opt.add_argument("--s-max", type=int, default=12)
    opt.add_argument("--m-max", type=int, default=1024)
    return parser


def _cmd_gen_table(args) -> int:
    model = TableModel(d_min_m=args.d_min, d_max_m=args.d_max, d_step_m=args.step,
                       path_loss_exp=args.path_loss_exp,
                       absorption_db_per_m=args.absorption_db_per_m,
                       anchor_distance_m=args.anchor_distance,
                       anchor_ber=args.anchor_ber)
    table = generate_table(model)
    table.to_csv(args.out)
    anchor = table.lookup(model.anchor_distance_m, MODULATIONS[0])
    rows = len(table.distances) * len(MODULATIONS)
    print(f"wrote {args.out}: {rows} rows "
          f"({len(table.distances)} distances x {len(MODULATIONS)} modulations)")
    print(f"anchor: BPSK at {model.anchor_distance_m:g} m -> {anchor:.6g} "
          f"(target {model.anchor_ber:g})")
    return 0


def _cmd_run(args) -> int:
    pairs: dict[str, str] = {}
    if args.spec:
        try:
            with open(args.spec) as fh:
                pairs = parse_pairs(fh.read(), source=args.spec)
        except OSError as exc:
            print(f"error: cannot read spec file: {exc}", file=sys.stderr)
            return 2
    pairs.update(env_overrides())
    if args.table is not None:
        pairs["table_path"] = args.table
    if args.seed is not None:
        pairs["seed"] = str(args.seed)
    if args.duration is not None:
        pairs["duration_s"] = str(args.duration)
    if args.out is not None:
        os.makedirs(args.out, exist_ok=True)
        pairs["metrics_path"] = os.path.join(args.out, "metrics.csv")
        pairs["events_path"] = os.path.join(args.out, "events.log")
    spec = build_spec(pairs)
    try:
        table = BerTable.from_csv(spec.table_path)
    except OSError as exc:
        print(f"error: cannot read table_path: {exc}", file=sys.stderr)
        return 2
    records = run_simulation(spec, table)
    print(f"wrote {spec.metrics_path} ({len(records)} dwell records) "
          f"and {spec.events_path}")
    return 0


def _cmd_optimize(args) -> int:
    table = BerTable.from_csv(args.table)
    params = OptimizerParams(t_mdpc=args.t_mdpc, t_rs=args.t_rs,
                             s_min=args.s_min, s_max=args.s_max, m_max=args.m_max)
    rates = DEFAULT_DATA_RATES_GBPS
    candidates, chosen = optimize_for_distance(table, args.distance, rates, params)
    print(f"distance {args.distance:g} m")
    for mod in MODULATIONS:
        print(f"  p_e[{mod.label}] = {table.lookup(args.distance, mod):.6g}")
    print("candidates:")
    for cand in candidates:
        tag = f"  {cand.scheme:4s} {cand.modulation.label:5s}"
        if not cand.feasible:
            print(f"{tag} infeasible")
            continue
        rate = cand.code_rate
        th = rate * rates[cand.modulation]
        geom = f"s={cand.s}" if cand.s is not None else f"m={cand.m},n={cand.n}"
        print(f"{tag} K={cand.k_bits} R={cand.r_bits} {geom} "
              f"R_F={rate:.6f} TH={th:.4f} Gbps")
    print(f"selected: {chosen.describe()} K={chosen.k_bits} R={chosen.r_bits} "
          f"R_F={chosen.code_rate:.6f} TH={chosen.throughput_gbps:.4f} Gbps")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "gen-table":
            return _cmd_gen_table(args)
        if args.command == "run":
            return _cmd_run(args)
        return _cmd_optimize(args)
    except (SpecError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
