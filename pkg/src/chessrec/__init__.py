"""Chessboard-state recognition over noisy per-square classifiers, with the
surrounding measurement, tracking, and validation machinery.

Subpackages by capability:

- ``board``     chess rules: legal moves, state application, FEN, perft
- ``simulate``  synthetic games and the noisy per-square observer
- ``recognize`` the six recognition strategies and their metrics
- ``metering``  latency timing, power-trace energy integration, benchmark
- ``tracking``  file-backed experiment runs (params, metrics, artifacts)
- ``stats``     Shapiro-Wilk, Kruskal-Wallis, Dunn, two-proportion Z
- ``pipeline``  validation queue, labeling job, accuracy monitor
- ``server``    HTTP API for the review UI
- ``cli``       command-line entry points
"""

from .board import (
    BoardState,
    Color,
    FenError,
    IllegalMoveError,
    InvariantViolation,
    Move,
    MoveKind,
    Piece,
    PieceKind,
    apply_move,
    from_fen,
    legal_moves,
    perft,
    to_fen,
)
from .metering import (
    BenchmarkPlan,
    EnergyMeter,
    Measurement,
    PowerTrace,
    SyntheticConstantMeter,
    TraceFileMeter,
    integrate_energy,
    run_benchmark,
    time_call,
)
from .pipeline import MonitorConfig, PipelineStore, ValidationItem
from .recognize import (
    InvocationCounts,
    Prediction,
    RecognizerConfig,
    cpa_recognize,
    cps_recognize,
    esd_recognize,
    evaluate,
    ia_recognize,
    make_recognizer,
    score_move,
    sd_recognize,
    topk_recognize,
)
from .simulate import (
    GameGenConfig,
    GameRecord,
    NoiseModel,
    Observation,
    generate_game,
    load_dataset,
    observe,
    save_dataset,
)
from .stats import (
    PosthocMatrix,
    TestResult,
    descriptive,
    dunn_posthoc,
    eta_squared,
    kruskal_wallis,
    shapiro_wilk,
    two_proportion_z,
)
from .tracking import Run, RunStore

__version__ = "0.1.0"
