"""Synthetic games and noisy per-square observations.

The observer stands in for the three per-square classifiers (occupancy,
color, piece type). Occupancy and color scores are Normal jitter around
a biased mean, clamped away from 0/1; the 13-class type signal is a
Dirichlet draw whose concentration is controlled separately. Zero jitter
collapses every signal to its mean, so the noiseless case is exact.

Everything is a pure function of its seeds: the same (seed, ply_seed)
pair always yields the same observation.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

import numpy as np

from . import board as cb
from .board import BoardState, Color, Move, NUM_CLASSES

__all__ = [
    "NoiseModel",
    "Observation",
    "GamePly",
    "GameRecord",
    "GameGenConfig",
    "observe",
    "generate_game",
    "game_to_dict",
    "game_from_dict",
    "save_game",
    "load_game",
    "save_dataset",
    "load_dataset",
]


@dataclass(frozen=True)
class NoiseModel:
    """Error characteristics of the simulated classifiers.

    bias: expected distance of the mean occupancy/color score from the
        true 0/1 label, in [0, 0.5).
    spread: standard deviation of the score jitter; 0 collapses every
        signal to its mean.
    clamp: emitted probabilities are kept inside [clamp, 1 - clamp].
    type_concentration: sharpness of the piece-type Dirichlet; higher
        values concentrate mass on the true class.
    """

    bias: float = 0.05
    spread: float = 0.15
    clamp: float = 0.01
    type_concentration: float = 3.5
    seed: int = 0

    def __post_init__(self) -> None:
        if not 0.0 <= self.bias < 0.5:
            raise ValueError("bias must lie in [0, 0.5)")
        if self.spread < 0:
            raise ValueError("spread must be non-negative")
        if not 0.0 < self.clamp < 1.0 / (2 * NUM_CLASSES):
            raise ValueError("clamp must be a small positive probability")
        if self.type_concentration <= 0:
            raise ValueError("type concentration must be positive")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")


@dataclass(frozen=True)
class Observation:
    """Per-square probability bundle for one board frame.

    occupancy[sq] is P(occupied); color[sq] is P(white piece), meaningful
    only where a piece actually sits; types[sq] is a distribution over the
    13 square classes (empty + 12 pieces) in board code order.
    """

    occupancy: np.ndarray
    color: np.ndarray
    types: np.ndarray

    def validate(self) -> None:
        if self.occupancy.shape != (64,) or self.color.shape != (64,):
            raise ValueError("occupancy and color must have shape (64,)")
        if self.types.shape != (64, NUM_CLASSES):
            raise ValueError(f"types must have shape (64, {NUM_CLASSES})")
        for arr in (self.occupancy, self.color, self.types):
            if np.any(arr < 0.0) or np.any(arr > 1.0):
                raise ValueError("probabilities must lie in [0, 1]")
        if np.any(np.abs(self.types.sum(axis=1) - 1.0) > 1e-9):
            raise ValueError("each type distribution must sum to 1")

    def to_dict(self) -> dict:
        return {
            "occupancy": [float(v) for v in self.occupancy],
            "color": [float(v) for v in self.color],
            "types": [[float(v) for v in row] for row in self.types],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Observation":
        obs = cls(
            occupancy=np.asarray(data["occupancy"], dtype=float),
            color=np.asarray(data["color"], dtype=float),
            types=np.asarray(data["types"], dtype=float),
        )
        obs.validate()
        return obs


def observe(state: BoardState, noise: NoiseModel, ply_seed: int) -> Observation:
    """Noisy per-square observation of ``state``; pure in (noise.seed, ply_seed)."""
    if ply_seed < 0:
        raise ValueError("ply_seed must be non-negative")
    rng = np.random.default_rng([noise.seed, ply_seed])
    board = np.asarray(state.board, dtype=int)
    occupied = board != cb.EMPTY
    white = occupied & (board <= 6)

    eps, sigma, delta = noise.bias, noise.spread, noise.clamp
    occ_mean = np.where(occupied, 1.0 - eps, eps)
    col_mean = np.where(occupied, np.where(white, 1.0 - eps, eps), 0.5)
    occ = occ_mean + sigma * rng.standard_normal(64)
    col = col_mean + sigma * rng.standard_normal(64)

    alpha = np.ones((64, NUM_CLASSES))
    alpha[np.arange(64), board] += noise.type_concentration
    if sigma > 0:
        draws = rng.gamma(shape=alpha)
        sums = draws.sum(axis=1, keepdims=True)
        sums[sums == 0.0] = 1.0
        types = draws / sums
    else:
        types = alpha / alpha.sum(axis=1, keepdims=True)
    # shrink toward uniform so every class probability stays in [delta, 1-delta]
    types = types * (1.0 - NUM_CLASSES * delta) + delta

    obs = Observation(
        occupancy=np.clip(occ, delta, 1.0 - delta),
        color=np.clip(col, delta, 1.0 - delta),
        types=types,
    )
    obs.validate()
    return obs


@dataclass(frozen=True)
class GamePly:
    move: Move
    state_after: BoardState
    observation: Observation


@dataclass(frozen=True)
class GameRecord:
    game_id: str
    initial_state: BoardState
    plies: tuple

    def states_before(self) -> Iterable[BoardState]:
        """The state preceding each ply, aligned with ``plies``."""
        state = self.initial_state
        for ply in self.plies:
            yield state
            state = ply.state_after


@dataclass(frozen=True)
class GameGenConfig:
    max_plies: int = 60
    capture_weight: float = 1.0
    castle_weight: float = 1.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.max_plies < 1:
            raise ValueError("max_plies must be >= 1")
        if self.capture_weight < 0 or self.castle_weight < 0:
            raise ValueError("sampling weights must be non-negative")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")


def _move_weight(move: Move, config: GameGenConfig) -> float:
    if move.is_capture:
        return config.capture_weight
    if move.is_castle:
        return config.castle_weight
    return 1.0


def generate_game(config: GameGenConfig, noise: NoiseModel) -> GameRecord:
    """Sample a legal game from the initial position, with observations.

    Moves are drawn from the legal set with weights favoring captures or
    castling per the config; the game stops at max_plies, mate, stalemate,
    or once the halfmove clock reaches the 50-move cutoff.
    """
    rng = np.random.default_rng([config.seed, 0x9A3E])
    state = BoardState.initial()
    plies = []
    for ply_index in range(config.max_plies):
        if state.halfmove_clock >= 100:
            break
        moves = cb.legal_moves(state)
        if not moves:
            break
        weights = np.array([_move_weight(m, config) for m in moves])
        total = weights.sum()
        if total <= 0:
            weights = np.ones(len(moves))
            total = float(len(moves))
        choice = int(rng.choice(len(moves), p=weights / total))
        move = moves[choice]
        state = cb._apply_unchecked(state, move)
        observation = observe(state, noise, ply_seed=config.seed * 100_003 + ply_index)
        plies.append(GamePly(move=move, state_after=state, observation=observation))
    return GameRecord(
        game_id=f"g{config.seed:08d}",
        initial_state=BoardState.initial(),
        plies=tuple(plies),
    )


def game_to_dict(record: GameRecord) -> dict:
    return {
        "game_id": record.game_id,
        "initial": cb.to_fen(record.initial_state),
        "plies": [
            {
                "move": ply.move.uci(),
                "state": cb.to_fen(ply.state_after),
                "observation": ply.observation.to_dict(),
            }
            for ply in record.plies
        ],
    }


def game_from_dict(data: dict) -> GameRecord:
    state = cb.from_fen(data["initial"])
    initial = state
    plies = []
    for entry in data["plies"]:
        move = cb.move_from_uci(state, entry["move"])
        state = cb._apply_unchecked(state, move)
        if cb.to_fen(state) != entry["state"]:
            raise ValueError(
                f"game {data['game_id']!r}: stored state diverges at move {entry['move']}"
            )
        plies.append(
            GamePly(
                move=move,
                state_after=state,
                observation=Observation.from_dict(entry["observation"]),
            )
        )
    return GameRecord(game_id=data["game_id"], initial_state=initial, plies=tuple(plies))


def save_game(record: GameRecord, path) -> None:
    Path(path).write_text(
        json.dumps(game_to_dict(record), sort_keys=True, separators=(",", ":")) + "\n",
        encoding="utf-8",
    )


def load_game(path) -> GameRecord:
    return game_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def save_dataset(records: Iterable[GameRecord], directory) -> list:
    """One JSON document per game; returns the written paths."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for record in records:
        path = directory / f"{record.game_id}.json"
        save_game(record, path)
        paths.append(path)
    return paths


def load_dataset(directory) -> list:
    directory = Path(directory)
    return [load_game(p) for p in sorted(directory.glob("*.json"))]
