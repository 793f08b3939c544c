"""Command-line front end.

Subcommands:
  simulate    run BLER/complexity campaigns from a declarative JSON file
  analyze-llr emit SISO LLR moment and ordered-mean curves as CSV
  mrip-stats  emit the MRIP error histogram and CCDF as CSV
  decode-one  decode a single noisy block and dump the search trace as JSON

Outputs are pure functions of (arguments, input files, seeds): rerunning a
command reproduces its files byte for byte.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from .analysis import predicted_curves
from .astar import DecoderConfig, astar_decode
from .channel import ChannelParams
from .codes import InnerCodeKind
from .mrip import frame_pipeline, mrip_error_stats
from .sim import SCHEME_NAMES, SimConfig, SimError, build_scheme, run_campaign

SCHEMA_VERSION = 1

_CAMPAIGN_KEYS = {
    "scheme": str, "frame": str, "constraint": str, "lambda": int,
    "stack_policy": str, "stack_capacity": int, "stopping": str,
    "alpha": float, "ebn0_db": list, "max_trials": int,
    "max_block_errors": int, "seed": int, "chunk_size": int,
}
_CAMPAIGN_REQUIRED = ("scheme", "frame", "ebn0_db", "max_trials")
_CAMPAIGN_DEFAULTS = {
    "constraint": "pc_out", "lambda": 4, "stack_policy": "append_bottom",
    "stack_capacity": 60000, "stopping": "none", "alpha": 0.0,
    "max_block_errors": 200, "seed": 0, "chunk_size": 2000,
}

_KIND_BY_NAME = {k.value: k for k in InnerCodeKind}

_RESULT_FIELDS = (
    "schema_version", "scheme", "frame", "constraint", "lambda",
    "stack_policy", "stack_capacity", "stopping", "alpha", "seed",
    "ebn0_db", "trials", "block_errors", "bler", "ml_bound_errors",
    "ml_bound_rate", "edges_per_msg_bit", "comparisons_per_msg_bit",
    "real_ops_per_msg_bit", "nodes_dropped",
)


def _parse_campaign_entry(entry: dict, index: int) -> SimConfig:
    if not isinstance(entry, dict):
        raise SimError(f"campaign {index}: entry must be an object")
    unknown = set(entry) - set(_CAMPAIGN_KEYS)
    if unknown:
        raise SimError(f"campaign {index}: unknown keys {sorted(unknown)}")
    missing = [k for k in _CAMPAIGN_REQUIRED if k not in entry]
    if missing:
        raise SimError(f"campaign {index}: missing keys {missing}")
    merged = {**_CAMPAIGN_DEFAULTS, **entry}
    for key, typ in _CAMPAIGN_KEYS.items():
        if key in merged and typ in (int, float, str) and not isinstance(merged[key], typ):
            if typ is float and isinstance(merged[key], int):
                merged[key] = float(merged[key])
            else:
                raise SimError(f"campaign {index}: key {key!r} must be {typ.__name__}")
    decoder = DecoderConfig(
        lam=merged["lambda"], constraint=merged["constraint"],
        stack_policy=merged["stack_policy"], stack_capacity=merged["stack_capacity"],
        stopping=merged["stopping"], alpha=merged["alpha"],
    )
    return SimConfig(
        scheme=merged["scheme"], frame=merged["frame"], decoder=decoder,
        ebn0_points=tuple(float(p) for p in merged["ebn0_db"]),
        max_trials=merged["max_trials"], max_block_errors=merged["max_block_errors"],
        seed=merged["seed"], chunk_size=merged["chunk_size"],
    )


def load_campaign_file(path: str) -> list[SimConfig]:
    with open(path) as fh:
        text = fh.read()
    doc = json.loads(text)  # json.JSONDecodeError carries line/column
    if not isinstance(doc, dict) or "campaigns" not in doc:
        raise SimError('campaign file must be an object with a "campaigns" list')
    extra = set(doc) - {"campaigns"}
    if extra:
        raise SimError(f"campaign file: unknown top-level keys {sorted(extra)}")
    if not isinstance(doc["campaigns"], list):
        raise SimError('"campaigns" must be a list')
    return [_parse_campaign_entry(e, i) for i, e in enumerate(doc["campaigns"])]


def _csv_path(out_path: str) -> str:
    return out_path.rsplit(".", 1)[0] + ".csv" if "." in out_path else out_path + ".csv"


def cmd_simulate(args) -> int:
    try:
        configs = load_campaign_file(args.campaign)
    except json.JSONDecodeError as exc:
        print(f"error: {args.campaign}: line {exc.lineno} column {exc.colno}: {exc.msg}",
              file=sys.stderr)
        return 2
    except (SimError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    records = []
    for i, cfg in enumerate(configs):
        print(f"[{i + 1}/{len(configs)}] {cfg.scheme} frame={cfg.frame} "
              f"{cfg.decoder.constraint}-{cfg.decoder.lam} "
              f"stack={cfg.decoder.stack_policy}:{cfg.decoder.stack_capacity} "
              f"stopping={cfg.decoder.stopping}", file=sys.stderr)

        def progress(c, point):
            print(f"    {point.ebn0_db:.2f} dB: {point.trials} trials, "
                  f"{point.block_errors} errors", file=sys.stderr)

        stats = run_campaign(cfg, workers=args.workers,
                             progress=progress if args.verbose else None)
        records.extend(stats.to_records(SCHEMA_VERSION))
    with open(args.out, "w") as fh:
        for rec in records:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")
    with open(_csv_path(args.out), "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=_RESULT_FIELDS)
        writer.writeheader()
        for rec in records:
            writer.writerow(rec)
    print(f"wrote {len(records)} records to {args.out} and {_csv_path(args.out)}",
          file=sys.stderr)
    return 0


def cmd_analyze_llr(args) -> int:
    if args.kind == "all":
        kinds = [None] + [k for k in InnerCodeKind]
    elif args.kind == "uncoded":
        kinds = [None]
    elif args.kind in _KIND_BY_NAME:
        kinds = [_KIND_BY_NAME[args.kind]]
    else:
        print(f"error: unknown kind {args.kind!r}", file=sys.stderr)
        return 2
    curves = predicted_curves(kinds, args.es_n0_db, n=args.n,
                              moment_trials=args.trials,
                              mc_trials=args.mc_trials, seed=args.seed)
    moments_path = args.moments_out or (args.out.rsplit(".", 1)[0] + ".moments.csv")
    with open(moments_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["schema_version", "kind", "es_n0_db", "mean", "variance"])
        for name, data in curves.items():
            writer.writerow([SCHEMA_VERSION, name, args.es_n0_db,
                             f"{data['mu']:.8g}", f"{data['sigma_sq']:.8g}"])
    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["schema_version", "kind", "i", "mean_model", "mean_monte_carlo"])
        for name, data in curves.items():
            mc = data["monte_carlo"]
            for i in range(args.n):
                writer.writerow([
                    SCHEMA_VERSION, name, i, f"{data['model'][i]:.8g}",
                    f"{mc[i]:.8g}" if mc is not None else "",
                ])
    print(f"wrote {args.out} and {moments_path}", file=sys.stderr)
    return 0


def cmd_mrip_stats(args) -> int:
    if args.trials <= 0:
        print("error: --trials must be positive", file=sys.stderr)
        return 2
    try:
        sch = build_scheme(args.scheme)
    except SimError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    inner = sch.inner if args.frame == "improved" else None
    if args.frame == "improved" and inner is None:
        print(f"error: scheme {args.scheme!r} has no inner code", file=sys.stderr)
        return 2
    params = ChannelParams(ebn0_db=args.ebn0_db, rate=sch.rate, seed=args.seed)
    stats = mrip_error_stats(sch.generator, inner, params, args.trials,
                             workers=args.workers)
    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["schema_version", "scheme", "frame", "ebn0_db", "j",
                         "p_j_given_mrip", "ccdf"])
        for j in range(sch.k + 1):
            writer.writerow([SCHEMA_VERSION, args.scheme, args.frame, args.ebn0_db,
                             j, f"{stats['pj'][j]:.8g}", f"{stats['ccdf'][j]:.8g}"])
    print(f"wrote {args.out}", file=sys.stderr)
    return 0


def cmd_decode_one(args) -> int:
    try:
        sch = build_scheme(args.scheme)
    except SimError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    inner = sch.inner if args.frame == "improved" else None
    if args.frame == "improved" and inner is None:
        print(f"error: scheme {args.scheme!r} has no inner code", file=sys.stderr)
        return 2
    d_min = args.d_min or sch.d_min
    if args.stopping == "codeword" and d_min == 0:
        print(f"error: d_min unknown for {args.scheme!r}; pass --d-min or use alpha",
              file=sys.stderr)
        return 2
    config = DecoderConfig(
        lam=args.lam, constraint=args.constraint, stack_policy=args.policy,
        stack_capacity=args.capacity, stopping=args.stopping, d_min=d_min,
        alpha=args.alpha, record_goals=True, max_goals=args.max_goals,
    )
    params = ChannelParams(ebn0_db=args.ebn0_db, rate=sch.rate, seed=args.seed)
    frame, cw, _ = frame_pipeline(sch.generator, inner, params, args.trial)
    result = astar_decode(frame.r_perm, frame, config)
    trace = result.trace_dict()
    trace.update({
        "schema_version": SCHEMA_VERSION,
        "scheme": args.scheme,
        "frame": args.frame,
        "ebn0_db": args.ebn0_db,
        "seed": args.seed,
        "trial": args.trial,
        "decoded_correctly": bool(np.array_equal(result.codeword, cw)),
    })
    text = json.dumps(trace, sort_keys=True, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="softdec",
        description="Short-block-code construction and priority-first decoding experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run campaigns from a JSON file")
    p.add_argument("campaign", help="declarative campaign JSON file")
    p.add_argument("out", help="output JSON-lines path (CSV written alongside)")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("analyze-llr", help="SISO LLR moments and ordered-mean curves")
    p.add_argument("out", help="curves CSV path")
    p.add_argument("--kind", default="all",
                   choices=["all", "uncoded"] + sorted(_KIND_BY_NAME))
    p.add_argument("--es-n0-db", type=float, default=3.0)
    p.add_argument("--n", type=int, default=128)
    p.add_argument("--trials", type=int, default=20000,
                   help="trials for moment estimation")
    p.add_argument("--mc-trials", type=int, default=0,
                   help="trials for the Monte Carlo ordered-mean column (0 = skip)")
    p.add_argument("--moments-out", default=None)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_analyze_llr)

    p = sub.add_parser("mrip-stats", help="MRIP error histogram and CCDF")
    p.add_argument("out", help="CSV path")
    p.add_argument("--scheme", required=True, choices=SCHEME_NAMES)
    p.add_argument("--frame", default="conventional",
                   choices=["conventional", "improved"])
    p.add_argument("--ebn0-db", type=float, default=3.0)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_mrip_stats)

    p = sub.add_parser("decode-one", help="decode one noisy block, dump JSON trace")
    p.add_argument("--scheme", required=True, choices=SCHEME_NAMES)
    p.add_argument("--frame", default="conventional",
                   choices=["conventional", "improved"])
    p.add_argument("--ebn0-db", type=float, default=3.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trial", type=int, default=0)
    p.add_argument("--constraint", default="pc_out", choices=["none", "pc", "pc_out"])
    p.add_argument("--lam", "--lambda", dest="lam", type=int, default=4)
    p.add_argument("--policy", default="append_bottom",
                   choices=["ordered", "append_bottom"])
    p.add_argument("--capacity", type=int, default=60000)
    p.add_argument("--stopping", default="none", choices=["none", "codeword", "alpha"])
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--d-min", type=int, default=0)
    p.add_argument("--max-goals", type=int, default=10000)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_decode_one)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
