"""Operation-time data flow: record predictions, have an expert accept or
correct them, trigger the labeling job, and watch the accuracy monitor.
Also logs the experiment to the tracking store and compares runs.

Run with: python demos/05_validation_pipeline.py
"""

import tempfile
from pathlib import Path

from chessrec.pipeline import MonitorConfig, PipelineStore
from chessrec.recognize import cps_recognize
from chessrec.simulate import GameGenConfig, NoiseModel, generate_game
from chessrec.tracking import RunStore

workdir = Path(tempfile.mkdtemp(prefix="chessrec-demo-"))
pipeline = PipelineStore(workdir / "pipeline")
tracking = RunStore(workdir / "tracking")
print("stores under", workdir)

# Simulate operation: one game, cps predictions recorded as pending items.
noise = NoiseModel(bias=0.05, spread=0.15, seed=21)
game = generate_game(GameGenConfig(max_plies=12, capture_weight=4.0, seed=33), noise)
pipeline.register_game(game.game_id)
state = game.initial_state
for i, ply in enumerate(game.plies):
    prediction = cps_recognize(state, ply.observation)
    pipeline.record_inference(game.game_id, i, prediction, ply.observation)
    state = ply.state_after
pending = pipeline.list_items(status="pending")
print(f"recorded {len(pending)} pending validation items")

# The expert reviews each item: accept the right ones, correct the rest.
corrections = 0
state_by_ply = {i: p.state_after.board for i, p in enumerate(game.plies)}
for item in pending:
    truth = state_by_ply[item.ply]
    if item.predicted_placement == truth:
        pipeline.submit_validation(item.item_id)
    else:
        pipeline.submit_validation(item.item_id, corrected_placement=truth)
        corrections += 1
print(f"validated all items; {corrections} needed correction")

# The labeling job turns validated boards into a per-square dataset.
summary = pipeline.run_labeling_job()
print(f"labeling job wrote {summary['rows']} rows to {summary['path']}")

# The monitor watches windowed accuracy against the 90% requirement and
# recognition latency against the 2-second budget.
status = pipeline.monitor_status(MonitorConfig(accuracy_threshold=0.90, window=50))
print(
    f"monitor: accuracy={status.accuracy:.2%} over {status.validated} boards, "
    f"alert={'YES' if status.alert else 'no'}, "
    f"latency violations={status.latency_violations}"
)

# Track the session like an experiment and compare against a baseline run.
baseline = tracking.create_run({"algorithm": "ia"}, tags={"demo": "pipeline"})
tracking.log_metric(baseline.run_id, "accuracy", 0.786)
tracking.finish_run(baseline.run_id)
current = tracking.create_run({"algorithm": "cps"}, tags={"demo": "pipeline"})
tracking.log_metric(current.run_id, "accuracy", status.accuracy)
tracking.log_artifact(current.run_id, "labeled.csv",
                      Path(summary["path"]).read_bytes())
tracking.finish_run(current.run_id)

print("\nrun comparison on 'accuracy':")
for row in tracking.compare_runs([baseline.run_id, current.run_id], "accuracy"):
    print(f"  {row['run_id']}  {row['params']['algorithm']:>4}  {row['value']:.4f}")
