"""Shared fixtures and observation builders for the test suite."""

from __future__ import annotations

import numpy as np
import pytest

from chessrec import board as cb
from chessrec.simulate import GameGenConfig, NoiseModel, Observation, generate_game

NOISELESS = NoiseModel(bias=0.0, spread=0.0, clamp=0.001, seed=0)


@pytest.fixture
def initial_state():
    return cb.BoardState.initial()


def make_observation(occupancy=None, color=None, type_peaks=None, base_occ=0.5,
                     base_color=0.5, peak_mass=0.9):
    """Hand-built observation: overrides are {square: value} maps;
    type_peaks puts ``peak_mass`` on one class per listed square."""
    occ = np.full(64, base_occ)
    col = np.full(64, base_color)
    types = np.full((64, cb.NUM_CLASSES), 1.0 / cb.NUM_CLASSES)
    for sq, value in (occupancy or {}).items():
        occ[sq] = value
    for sq, value in (color or {}).items():
        col[sq] = value
    for sq, cls in (type_peaks or {}).items():
        row = np.full(cb.NUM_CLASSES, (1.0 - peak_mass) / (cb.NUM_CLASSES - 1))
        row[cls] = peak_mass
        types[sq] = row
    obs = Observation(occupancy=occ, color=col, types=types)
    obs.validate()
    return obs


def random_game_samples(n, *, first_seed=0, noise_seed=100, max_plies=50,
                        capture_weight=1.0, castle_weight=1.0, noise=None):
    """(prev_state, observation, state_after, true_move) tuples from seeded games."""
    noise = noise or NoiseModel(seed=noise_seed)
    samples = []
    seed = first_seed
    while len(samples) < n:
        record = generate_game(
            GameGenConfig(max_plies=max_plies, capture_weight=capture_weight,
                          castle_weight=castle_weight, seed=seed),
            noise,
        )
        state = record.initial_state
        for ply in record.plies:
            samples.append((state, ply.observation, ply.state_after, ply.move))
            state = ply.state_after
        seed += 1
    return samples[:n]


def quiet_positions(n, seed=0):
    """Legal positions whose move list has no capture, castle, or en passant.

    Sparse boards built by rejection sampling: two kings plus a few quiet
    pieces, castling rights cleared.
    """
    rng = np.random.default_rng(seed)
    out = []
    piece_pool = [
        cb.piece_code(color, kind)
        for color in (cb.Color.WHITE, cb.Color.BLACK)
        for kind in (cb.PieceKind.PAWN, cb.PieceKind.KNIGHT, cb.PieceKind.BISHOP,
                     cb.PieceKind.ROOK, cb.PieceKind.QUEEN)
    ]
    while len(out) < n:
        board = [cb.EMPTY] * 64
        squares = rng.permutation(64)
        wk, bk = int(squares[0]), int(squares[1])
        if max(abs((wk & 7) - (bk & 7)), abs((wk >> 3) - (bk >> 3))) <= 1:
            continue
        board[wk] = cb.piece_code(cb.Color.WHITE, cb.PieceKind.KING)
        board[bk] = cb.piece_code(cb.Color.BLACK, cb.PieceKind.KING)
        for sq in squares[2:2 + rng.integers(1, 4)]:
            code = piece_pool[rng.integers(len(piece_pool))]
            if (code - 1) % 6 == cb.PieceKind.PAWN and not 8 <= sq < 56:
                continue
            board[int(sq)] = code
        state = cb.BoardState(board=tuple(board),
                              side_to_move=cb.Color(int(rng.integers(2))))
        try:
            moves = cb.legal_moves(state)
        except cb.InvariantViolation:
            continue
        if not moves:
            continue
        if any(m.is_capture or m.is_castle for m in moves):
            continue
        out.append(state)
    return out
