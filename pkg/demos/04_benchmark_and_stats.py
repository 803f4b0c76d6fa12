"""The measurement protocol end to end: warm-up, interleaved timed batches,
energy from a meter, then the statistical comparison (Shapiro-Wilk,
Kruskal-Wallis with eta-squared, Dunn's post-hoc, two-proportion Z).

Run with: python demos/04_benchmark_and_stats.py
"""

from chessrec.metering import BenchmarkPlan, SyntheticConstantMeter, run_benchmark
from chessrec.recognize import RecognizerConfig
from chessrec.report import build_report, render_text
from chessrec.simulate import GameGenConfig, NoiseModel, generate_game
from chessrec.stats import dunn_posthoc, kruskal_wallis, shapiro_wilk, two_proportion_z

noise = NoiseModel(bias=0.05, spread=0.15, seed=5)
dataset = [
    generate_game(GameGenConfig(max_plies=40, capture_weight=6.0, castle_weight=6.0,
                                seed=100 + i), noise)
    for i in range(8)
]

# Desk-scaled protocol: short warm-up, one batch, no cool-down pause needed.
plan = BenchmarkPlan(warmup_duration=0.3, batch_duration=120.0,
                     cooldown_duration=0.0, samples_target=200, seed=3)
names = ["ia", "cpa", "cps", "tk-2"]
algorithms = [RecognizerConfig.parse(n) for n in names]
measurements = run_benchmark(plan, algorithms, dataset, SyntheticConstantMeter(10.0))
print(f"collected {len(measurements)} measurements\n")
print(render_text(build_report(measurements)))

by_algorithm = {n: [m for m in measurements if m.algorithm == n] for n in names}

# Latency distributions are not normal (Shapiro-Wilk agrees), so the
# comparison uses rank-based tests.
print("\nShapiro-Wilk on latency:")
for name in names:
    result = shapiro_wilk([m.latency_s for m in by_algorithm[name]])
    print(f"  {name:>5}: W={result.statistic:.4f} p={result.p_value:.2e}")

latencies = [[m.latency_s for m in by_algorithm[n]] for n in names]
kw = kruskal_wallis(latencies)
print(f"\nKruskal-Wallis on latency: H={kw.statistic:.2f} p={kw.p_value:.3g} "
      f"eta^2={kw.effect_size:.3f}")

posthoc = dunn_posthoc(latencies, labels=names, adjust="holm")
print("\nDunn post-hoc (holm-adjusted p):")
for i, a in enumerate(names):
    for j in range(i + 1, len(names)):
        print(f"  {a} vs {names[j]}: p={posthoc.p_values[i][j]:.3g}")

# Accuracy deltas between algorithm generations, as success proportions.
print("\ntwo-proportion Z on accuracy:")
for a, b in (("ia", "cpa"), ("cpa", "cps")):
    sa = sum(1 for m in by_algorithm[a] if m.correct)
    sb = sum(1 for m in by_algorithm[b] if m.correct)
    n = len(by_algorithm[a])
    result = two_proportion_z(sa, n, sb, len(by_algorithm[b]))
    print(f"  {a} vs {b}: Z={result.statistic:.2f} p={result.p_value:.3g}")
