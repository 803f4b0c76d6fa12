"""The six board-state recognition strategies over a noisy observation.

Domain-free:
  sd   - argmax of the 13-class type signal per square.
  esd  - staged ensemble: occupancy gate, then color, then piece kind
         restricted to the detected color.

Domain-aware (need the previous state and its legal moves):
  ia   - pick the origin that looks most emptied, then its most occupied
         legal destination.
  cpa  - joint argmax of combined origin/destination probabilities over
         all legal moves.
  cps  - cpa plus kind-specific factor sets: captures consult the color
         signal at the destination, castling uses its four squares,
         en passant the vacated pawn square.
  tk-k - cps restricted to moves whose origin ranks in the top k
         candidates by emptiness.

Each recognizer counts how many distinct squares it consults per model,
memoized the way a real system would crop and classify each square at
most once per frame.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence

import numpy as np

from . import board as cb
from .board import BoardState, Color, Move, MoveKind, PieceKind
from .simulate import Observation

__all__ = [
    "GameOverError",
    "InvocationCounts",
    "Prediction",
    "RecognizerConfig",
    "score_move",
    "sd_recognize",
    "esd_recognize",
    "ia_recognize",
    "cpa_recognize",
    "cps_recognize",
    "topk_recognize",
    "make_recognizer",
    "evaluate",
    "ALGORITHM_ORDER",
]

# Canonical presentation order for reports.
ALGORITHM_ORDER = ("sd", "esd", "ia", "cpa", "cps", "tk-2", "tk-3", "tk-4", "tk-5")


class GameOverError(ValueError):
    """The previous state has no legal moves; there is nothing to recognize."""


@dataclass(frozen=True)
class InvocationCounts:
    occupancy: int = 0
    color: int = 0
    type: int = 0

    @property
    def total(self) -> int:
        return self.occupancy + self.color + self.type

    def __le__(self, other: "InvocationCounts") -> bool:
        return (
            self.occupancy <= other.occupancy
            and self.color <= other.color
            and self.type <= other.type
        )


@dataclass(frozen=True)
class Prediction:
    predicted_placement: tuple
    predicted_move: Optional[Move] = None
    score: Optional[float] = None
    invocations: InvocationCounts = InvocationCounts()
    latency_s: float = 0.0
    energy_j: float = 0.0

    def __post_init__(self) -> None:
        if (self.score is None) != (self.predicted_move is None):
            raise ValueError("score must accompany predicted_move and vice versa")

    def to_dict(self) -> dict:
        return {
            "placement": cb.board_fen(self.predicted_placement),
            "move": None if self.predicted_move is None else self.predicted_move.uci(),
            "score": self.score,
            "invocations": {
                "occupancy": self.invocations.occupancy,
                "color": self.invocations.color,
                "type": self.invocations.type,
            },
            "latency_s": self.latency_s,
            "energy_j": self.energy_j,
        }


@dataclass(frozen=True)
class RecognizerConfig:
    algorithm: str
    k: Optional[int] = None
    occupancy_threshold: float = 0.5

    def __post_init__(self) -> None:
        if not 0.0 < self.occupancy_threshold < 1.0:
            raise ValueError("occupancy threshold must lie in (0, 1)")
        if self.algorithm == "tk":
            if self.k is None or not 1 <= self.k <= 64:
                raise ValueError("tk requires 1 <= k <= 64")
        elif self.algorithm not in ("sd", "esd", "ia", "cpa", "cps"):
            raise ValueError(f"unknown algorithm {self.algorithm!r}")

    @property
    def name(self) -> str:
        return f"tk-{self.k}" if self.algorithm == "tk" else self.algorithm

    @classmethod
    def parse(cls, name: str) -> "RecognizerConfig":
        name = name.strip().lower()
        if name.startswith("tk-") or name.startswith("tk"):
            digits = name[3:] if name.startswith("tk-") else name[2:]
            if digits:
                return cls(algorithm="tk", k=int(digits))
        return cls(algorithm=name)


class _Probe:
    """Observation access with memoized per-square invocation counting."""

    __slots__ = ("obs", "occ_squares", "color_squares", "type_squares")

    def __init__(self, obs: Observation):
        self.obs = obs
        self.occ_squares = set()
        self.color_squares = set()
        self.type_squares = set()

    def occupied(self, sq: int) -> float:
        self.occ_squares.add(sq)
        return float(self.obs.occupancy[sq])

    def empty(self, sq: int) -> float:
        return 1.0 - self.occupied(sq)

    def color_factor(self, sq: int, mover: Color) -> float:
        self.color_squares.add(sq)
        p_white = float(self.obs.color[sq])
        return p_white if mover is Color.WHITE else 1.0 - p_white

    def types(self, sq: int) -> np.ndarray:
        self.type_squares.add(sq)
        return self.obs.types[sq]

    def counts(self) -> InvocationCounts:
        return InvocationCounts(
            occupancy=len(self.occ_squares),
            color=len(self.color_squares),
            type=len(self.type_squares),
        )


def _factors(move: Move, probe: _Probe, mover: Color, special: bool) -> list:
    """Probability factors whose geometric mean scores the move.

    With ``special`` False every kind uses the plain origin/destination
    pair (the cpa view); True adds the capture color factor, the castling
    four-square set, and the en-passant vacated square.
    """
    origin_empty = probe.empty(move.origin)
    dest_occupied = probe.occupied(move.destination)
    if not special:
        return [origin_empty, dest_occupied]
    if move.kind in (MoveKind.CAPTURE, MoveKind.CAPTURE_PROMOTION):
        return [origin_empty, dest_occupied, probe.color_factor(move.destination, mover)]
    if move.kind is MoveKind.EN_PASSANT:
        captured = move.destination - 8 if mover is Color.WHITE else move.destination + 8
        return [origin_empty, dest_occupied, probe.empty(captured)]
    if move.is_castle:
        return [
            origin_empty,
            probe.empty(move.rook_origin),
            dest_occupied,
            probe.occupied(move.rook_destination),
        ]
    return [origin_empty, dest_occupied]


def _geometric_mean(factors: Sequence[float]) -> float:
    product = 1.0
    for f in factors:
        product *= f
    return product ** (1.0 / len(factors))


def score_move(move: Move, obs: Observation, prev: BoardState) -> float:
    """Combined-probability score of a legal move, using its full factor set."""
    if move not in cb.legal_moves(prev):
        raise cb.IllegalMoveError(f"{move.uci()} is not legal in this position")
    probe = _Probe(obs)
    return _geometric_mean(_factors(move, probe, prev.side_to_move, special=True))


def _promotion_mass(probe: _Probe, move: Move, mover: Color) -> float:
    dist = probe.types(move.destination)
    return float(dist[cb.piece_code(mover, move.promotion)])


def _select_promotion(group: list, probe: _Probe, mover: Color) -> Move:
    """Pick the promotion target by type-signal mass, queen on ties."""
    best = None
    best_key = None
    for m in group:
        key = (_promotion_mass(probe, m, mover), m.promotion is PieceKind.QUEEN)
        if best_key is None or key > best_key:
            best, best_key = m, key
    return best


def _argmax_moves(moves, probe: _Probe, prev: BoardState, special: bool):
    """Best (move, score) under the combined-probability rule.

    Moves arrive sorted, so ties fall to the lexicographically first move;
    an exact score tie between factor sets of different size prefers the
    larger one (a four-square castling read beats a two-square king step
    it ties with). Promotion quartets share their square factors and are
    collapsed to one candidate first.
    """
    mover = prev.side_to_move
    best_move = None
    best_score = -1.0
    best_arity = 0
    i = 0
    while i < len(moves):
        move = moves[i]
        if move.promotion is not None:
            group = [move]
            while (
                i + 1 < len(moves)
                and moves[i + 1].origin == move.origin
                and moves[i + 1].destination == move.destination
            ):
                i += 1
                group.append(moves[i])
            move = _select_promotion(group, probe, mover)
        factors = _factors(move, probe, mover, special)
        score = _geometric_mean(factors)
        if score > best_score or (score == best_score and len(factors) > best_arity):
            best_move, best_score, best_arity = move, score, len(factors)
        i += 1
    return best_move, best_score


def _prediction_for_move(prev, move, score, probe) -> Prediction:
    placement = cb._apply_unchecked(prev, move).board
    return Prediction(
        predicted_placement=placement,
        predicted_move=move,
        score=score,
        invocations=probe.counts(),
    )


def sd_recognize(obs: Observation) -> Prediction:
    """Classify every square independently from the 13-class type signal."""
    probe = _Probe(obs)
    placement = tuple(int(np.argmax(probe.types(sq))) for sq in range(64))
    return Prediction(predicted_placement=placement, invocations=probe.counts())


def esd_recognize(obs: Observation, occupancy_threshold: float = 0.5) -> Prediction:
    """Staged ensemble: occupancy gate, color, then kind within that color."""
    probe = _Probe(obs)
    placement = []
    for sq in range(64):
        if probe.occupied(sq) <= occupancy_threshold:
            placement.append(cb.EMPTY)
            continue
        white = probe.color_factor(sq, Color.WHITE) >= 0.5
        base = 1 if white else 7
        kinds = probe.types(sq)[base:base + 6]
        placement.append(base + int(np.argmax(kinds)))
    return Prediction(predicted_placement=tuple(placement), invocations=probe.counts())


def _legal_or_raise(prev: BoardState):
    moves = cb.legal_moves(prev)
    if not moves:
        raise GameOverError("no legal moves in the previous state")
    return moves


def ia_recognize(prev: BoardState, obs: Observation) -> Prediction:
    """Greedy two-stage inference: most-emptied origin, then its most
    occupied legal destination."""
    moves = _legal_or_raise(prev)
    probe = _Probe(obs)

    candidates = sorted({m.origin for m in moves})
    origin = max(candidates, key=lambda sq: (probe.empty(sq), -sq))
    destinations = sorted({m.destination for m in moves if m.origin == origin})
    dest = max(destinations, key=lambda sq: (probe.occupied(sq), -sq))

    chosen = [m for m in moves if m.origin == origin and m.destination == dest]
    move = chosen[0]
    if len(chosen) > 1:  # promotion quartet; the baseline just assumes a queen
        move = next(m for m in chosen if m.promotion is PieceKind.QUEEN)
    score = _geometric_mean([probe.empty(origin), probe.occupied(dest)])
    return _prediction_for_move(prev, move, score, probe)


def cpa_recognize(prev: BoardState, obs: Observation) -> Prediction:
    """Joint argmax of origin-emptiness x destination-occupancy over all
    legal moves, with no kind-specific treatment."""
    moves = _legal_or_raise(prev)
    probe = _Probe(obs)
    move, score = _argmax_moves(moves, probe, prev, special=False)
    return _prediction_for_move(prev, move, score, probe)


def cps_recognize(prev: BoardState, obs: Observation) -> Prediction:
    """cpa plus special factor sets for captures, castling, and en passant."""
    moves = _legal_or_raise(prev)
    probe = _Probe(obs)
    move, score = _argmax_moves(moves, probe, prev, special=True)
    return _prediction_for_move(prev, move, score, probe)


def topk_recognize(k: int, prev: BoardState, obs: Observation) -> Prediction:
    """cps restricted to the k candidate origins most likely to be empty."""
    if not 1 <= k <= 64:
        raise ValueError("k must lie in 1..64")
    moves = _legal_or_raise(prev)
    probe = _Probe(obs)
    candidates = sorted({m.origin for m in moves})
    ranked = sorted(candidates, key=lambda sq: (-probe.empty(sq), sq))
    keep = set(ranked[:k])
    pruned = [m for m in moves if m.origin in keep]
    move, score = _argmax_moves(pruned, probe, prev, special=True)
    return _prediction_for_move(prev, move, score, probe)


def make_recognizer(config: RecognizerConfig) -> Callable[[BoardState, Observation], Prediction]:
    """Uniform (prev, obs) -> Prediction callable; sd/esd ignore prev."""
    if config.algorithm == "sd":
        return lambda prev, obs: sd_recognize(obs)
    if config.algorithm == "esd":
        tau = config.occupancy_threshold
        return lambda prev, obs: esd_recognize(obs, occupancy_threshold=tau)
    if config.algorithm == "ia":
        return ia_recognize
    if config.algorithm == "cpa":
        return cpa_recognize
    if config.algorithm == "cps":
        return cps_recognize
    k = config.k
    return lambda prev, obs: topk_recognize(k, prev, obs)


def evaluate(
    predictions: Sequence[Prediction],
    truths: Sequence[BoardState],
    true_moves: Optional[Sequence[Move]] = None,
) -> dict:
    """Board accuracy, square accuracy, and invocation medians.

    Board accuracy demands an exact 64-square match; square accuracy is
    per-board fraction correct. Move accuracy is reported when the true
    moves are supplied and any prediction carries a move.
    """
    if len(predictions) != len(truths):
        raise ValueError("predictions and truths must have equal length")
    if not predictions:
        raise ValueError("nothing to evaluate")
    exact = 0
    square_fracs = []
    for pred, truth in zip(predictions, truths):
        matches = sum(
            1 for a, b in zip(pred.predicted_placement, truth.board) if a == b
        )
        square_fracs.append(matches / 64.0)
        if matches == 64:
            exact += 1
    square_fracs_sorted = sorted(square_fracs)
    n = len(square_fracs)
    median_sq = (
        square_fracs_sorted[n // 2]
        if n % 2
        else (square_fracs_sorted[n // 2 - 1] + square_fracs_sorted[n // 2]) / 2.0
    )
    out = {
        "n": n,
        "board_accuracy": exact / n,
        "square_accuracy_mean": sum(square_fracs) / n,
        "square_accuracy_median": median_sq,
        "invocations_median": {
            "occupancy": float(np.median([p.invocations.occupancy for p in predictions])),
            "color": float(np.median([p.invocations.color for p in predictions])),
            "type": float(np.median([p.invocations.type for p in predictions])),
        },
    }
    if true_moves is not None:
        moved = [
            (p.predicted_move, m)
            for p, m in zip(predictions, true_moves)
            if p.predicted_move is not None
        ]
        if moved:
            out["move_accuracy"] = sum(1 for p, m in moved if p == m) / len(moved)
    return out
