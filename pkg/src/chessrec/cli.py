"""Command-line orchestration.

Subcommands:
  gen      generate a dataset of simulated games with observations
  bench    run the benchmark protocol and write measurements + tracking runs
  stats    statistical comparison of a measurements file
  report   per-algorithm summary table (text + optional CSV)
  serve    HTTP API (+ static review UI) over a pipeline/tracking store
  monitor  print monitor status; exit code 2 when the accuracy alert fires

Exit codes: 0 success, 1 usage or runtime error, 2 accuracy alert.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from . import board as cb
from .metering import (
    BenchmarkPlan,
    RaplFileMeter,
    SyntheticConstantMeter,
    TraceFileMeter,
    read_measurements,
    run_benchmark,
    time_call,
    write_measurements,
)
from .pipeline import MonitorConfig, PipelineStore
from .recognize import ALGORITHM_ORDER, RecognizerConfig, make_recognizer
from .report import build_report, render_text, write_report_csv
from .simulate import GameGenConfig, NoiseModel, generate_game, load_dataset, save_dataset
from .stats import (
    DegenerateDataError,
    dunn_posthoc,
    kruskal_wallis,
    shapiro_wilk,
    two_proportion_z,
)
from .tracking import RunStore

__all__ = ["main"]

DEFAULT_ALGORITHMS = ",".join(ALGORITHM_ORDER)


class _Parser(argparse.ArgumentParser):
    # usage problems exit 1; exit 2 is reserved for the monitor alert
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _parse_noise(text: str, seed: int, kappa: float) -> NoiseModel:
    parts = [p for p in text.split(",") if p]
    values = [float(p) for p in parts]
    if not 1 <= len(values) <= 3:
        raise ValueError("--noise expects 'bias[,spread[,clamp]]'")
    kwargs = {"bias": values[0], "seed": seed, "type_concentration": kappa}
    if len(values) > 1:
        kwargs["spread"] = values[1]
    if len(values) > 2:
        kwargs["clamp"] = values[2]
    return NoiseModel(**kwargs)


def _parse_algorithms(text: str) -> list:
    return [RecognizerConfig.parse(name) for name in text.split(",") if name.strip()]


def _parse_meter(text: str):
    kind, _, arg = text.partition(":")
    if kind == "constant":
        return SyntheticConstantMeter(float(arg or 10.0))
    if kind == "trace":
        return TraceFileMeter.from_csv(arg)
    if kind == "rapl":
        return RaplFileMeter(arg)
    raise ValueError(f"unknown meter {text!r}; use constant:WATTS, trace:PATH, or rapl:PATH")


def _cmd_gen(args) -> int:
    noise = _parse_noise(args.noise, args.seed, args.kappa)
    records = []
    for i in range(args.games):
        config = GameGenConfig(
            max_plies=args.max_plies,
            capture_weight=args.capture_weight,
            castle_weight=args.castle_weight,
            seed=args.seed + i,
        )
        records.append(generate_game(config, noise))
    paths = save_dataset(records, args.out)
    plies = sum(len(r.plies) for r in records)
    print(f"wrote {len(paths)} games ({plies} plies) to {args.out}")
    return 0


def _cmd_bench(args) -> int:
    dataset = load_dataset(args.dataset)
    algorithms = _parse_algorithms(args.algorithms)
    plan = BenchmarkPlan(
        warmup_duration=args.warmup,
        batch_duration=args.batch,
        cooldown_duration=args.cooldown,
        samples_target=args.samples,
        seed=args.seed,
    )
    meter = _parse_meter(args.meter)
    measurements = run_benchmark(plan, algorithms, dataset, meter)
    write_measurements(measurements, args.out)
    print(f"wrote {len(measurements)} measurements to {args.out}")

    if args.store:
        store = RunStore(Path(args.store) / "tracking")
        for config in algorithms:
            name = config.name
            ours = [m for m in measurements if m.algorithm == name]
            run = store.create_run(
                params={
                    "algorithm": name,
                    "samples": args.samples,
                    "seed": args.seed,
                    "dataset": str(args.dataset),
                    "meter": args.meter,
                },
                tags={"command": "bench"},
            )
            accuracy = sum(1 for m in ours if m.correct) / len(ours)
            latencies = sorted(m.latency_s for m in ours)
            energies = sorted(m.energy_j for m in ours)
            store.log_metric(run.run_id, "accuracy", accuracy)
            store.log_metric(run.run_id, "median_latency_s", latencies[len(latencies) // 2])
            store.log_metric(run.run_id, "median_energy_j", energies[len(energies) // 2])
            store.log_metric(
                run.run_id,
                "median_square_accuracy",
                sorted(m.square_accuracy for m in ours)[len(ours) // 2],
            )
            lines = [m for m in Path(args.out).read_text().splitlines() if m]
            subset = [lines[0]] + [l for l in lines[1:] if l.startswith(name + ",")]
            store.log_artifact(run.run_id, "measurements.csv", ("\n".join(subset) + "\n").encode())
            store.finish_run(run.run_id)
            print(f"tracking run {run.run_id}: {name} accuracy={accuracy:.4f}")
    return 0


def _cmd_stats(args) -> int:
    measurements = read_measurements(args.measurements)
    by_algorithm = {}
    for m in measurements:
        by_algorithm.setdefault(m.algorithm, []).append(m)
    names = sorted(by_algorithm, key=lambda n: (n not in ALGORITHM_ORDER,
                                                ALGORITHM_ORDER.index(n)
                                                if n in ALGORITHM_ORDER else 0, n))
    tests = []
    for metric in ("latency_s", "energy_j"):
        values = {n: [getattr(m, metric) for m in by_algorithm[n]] for n in names}
        for name in names:
            try:
                r = shapiro_wilk(values[name])
                tests.append(
                    {"test": "shapiro_wilk", "metric": metric, "groups": [name],
                     "statistic": r.statistic, "p_value": r.p_value}
                )
            except (ValueError, DegenerateDataError) as exc:
                tests.append(
                    {"test": "shapiro_wilk", "metric": metric, "groups": [name],
                     "error": str(exc)}
                )
        if len(names) >= 2:
            r = kruskal_wallis([values[n] for n in names])
            tests.append(
                {"test": "kruskal_wallis", "metric": metric, "groups": names,
                 "statistic": r.statistic, "p_value": r.p_value,
                 "effect_size": r.effect_size}
            )
            try:
                posthoc = dunn_posthoc([values[n] for n in names], labels=names,
                                       adjust=args.adjust)
                tests.append(
                    {"test": "dunn", "metric": metric, "groups": names,
                     "adjustment": posthoc.adjustment,
                     "p_values": [list(row) for row in posthoc.p_values]}
                )
            except DegenerateDataError as exc:
                tests.append({"test": "dunn", "metric": metric, "groups": names,
                              "error": str(exc)})
    for pair in [p for p in args.pairs.split(",") if p.strip()]:
        a, _, b = pair.partition(":")
        if a not in by_algorithm or b not in by_algorithm:
            tests.append({"test": "two_proportion_z", "metric": "accuracy",
                          "groups": [a, b], "error": "algorithm not in measurements"})
            continue
        sa, na = sum(1 for m in by_algorithm[a] if m.correct), len(by_algorithm[a])
        sb, nb = sum(1 for m in by_algorithm[b] if m.correct), len(by_algorithm[b])
        try:
            r = two_proportion_z(sa, na, sb, nb)
            tests.append({"test": "two_proportion_z", "metric": "accuracy",
                          "groups": [a, b], "statistic": r.statistic, "p_value": r.p_value})
        except DegenerateDataError as exc:
            tests.append({"test": "two_proportion_z", "metric": "accuracy",
                          "groups": [a, b], "error": str(exc)})
    payload = json.dumps({"tests": tests}, indent=1, sort_keys=True)
    if args.out:
        Path(args.out).write_text(payload + "\n", encoding="utf-8")
        print(f"wrote {len(tests)} test results to {args.out}")
    else:
        print(payload)
    return 0


def _cmd_report(args) -> int:
    measurements = read_measurements(args.measurements)
    rows = build_report(measurements)
    print(render_text(rows))
    if args.out:
        write_report_csv(rows, args.out)
        print(f"wrote report CSV to {args.out}")
    return 0


def _ingest_dataset(pipeline_store: PipelineStore, args) -> None:
    dataset = load_dataset(args.dataset)
    config = RecognizerConfig.parse(args.algorithm)
    recognize = make_recognizer(config)
    recorded = 0
    for record in dataset:
        pipeline_store.register_game(record.game_id, cb.to_fen(record.initial_state))
        state = record.initial_state
        for ply_index, ply in enumerate(record.plies):
            if recorded >= args.limit:
                break
            prediction, latency = time_call(lambda: recognize(state, ply.observation))
            prediction = dataclasses.replace(prediction, latency_s=latency)
            pipeline_store.record_inference(
                record.game_id, ply_index, prediction, ply.observation
            )
            state = ply.state_after
            recorded += 1
    print(f"ingested {recorded} inferences from {args.dataset} using {config.name}")


def _cmd_serve(args) -> int:
    import uvicorn

    from .server import create_app

    root = Path(args.store)
    pipeline_store = PipelineStore(root / "pipeline")
    run_store = RunStore(root / "tracking")
    if args.dataset:
        _ingest_dataset(pipeline_store, args)
    monitor = MonitorConfig(
        accuracy_threshold=args.threshold,
        latency_budget_s=args.budget,
        window=args.window,
    )
    static_dir = Path(args.ui) if args.ui else None
    app = create_app(pipeline_store, run_store, monitor_config=monitor, static_dir=static_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def _cmd_monitor(args) -> int:
    store = PipelineStore(Path(args.store) / "pipeline")
    config = MonitorConfig(
        accuracy_threshold=args.threshold,
        latency_budget_s=args.budget,
        window=args.window,
    )
    status = store.monitor_status(config)
    print(json.dumps(status.to_dict(), indent=1, sort_keys=True))
    return 2 if status.alert else 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="chessrec", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a simulated dataset")
    p.add_argument("--games", type=int, default=10)
    p.add_argument("--max-plies", type=int, default=60)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--noise", default="0.05,0.15", help="bias[,spread[,clamp]]")
    p.add_argument("--kappa", type=float, default=3.5, help="type-signal concentration")
    p.add_argument("--capture-weight", type=float, default=1.0)
    p.add_argument("--castle-weight", type=float, default=1.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("bench", help="run the benchmark protocol")
    p.add_argument("--dataset", required=True)
    p.add_argument("--algorithms", default=DEFAULT_ALGORITHMS)
    p.add_argument("--samples", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--warmup", type=float, default=1.0)
    p.add_argument("--batch", type=float, default=60.0)
    p.add_argument("--cooldown", type=float, default=10.0)
    p.add_argument("--meter", default="constant:10")
    p.add_argument("--out", required=True)
    p.add_argument("--store", default=None, help="workspace root for tracking runs")
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("stats", help="statistical comparison of measurements")
    p.add_argument("measurements")
    p.add_argument("--out", default=None)
    p.add_argument("--adjust", default="holm", choices=["holm", "bonferroni", "none"])
    p.add_argument("--pairs", default="ia:cpa,cpa:cps",
                   help="accuracy Z-test pairs, e.g. 'ia:cpa,cpa:cps'")
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("report", help="per-algorithm summary table")
    p.add_argument("measurements")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_report)

    p = sub.add_parser("serve", help="serve the review API and UI")
    p.add_argument("--store", required=True)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--ui", default=None, help="directory of static UI assets")
    p.add_argument("--dataset", default=None, help="ingest predictions from this dataset")
    p.add_argument("--algorithm", default="cps")
    p.add_argument("--limit", type=int, default=200)
    p.add_argument("--threshold", type=float, default=0.90)
    p.add_argument("--budget", type=float, default=2.0)
    p.add_argument("--window", type=int, default=50)
    p.set_defaults(func=_cmd_serve)

    p = sub.add_parser("monitor", help="print monitor status (exit 2 on alert)")
    p.add_argument("--store", required=True)
    p.add_argument("--threshold", type=float, default=0.90)
    p.add_argument("--budget", type=float, default=2.0)
    p.add_argument("--window", type=int, default=50)
    p.set_defaults(func=_cmd_monitor)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SystemExit:
        raise
    except KeyboardInterrupt:
        return 1
    except Exception as exc:  # surface a one-line error, not a traceback
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
