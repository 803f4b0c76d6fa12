import numpy as np
import pytest

from chessrec import board as cb
from chessrec.board import (
    BoardState,
    Color,
    FenError,
    IllegalMoveError,
    InvariantViolation,
    Move,
    MoveKind,
    PieceKind,
)
from chessrec.simulate import GameGenConfig, generate_game

from conftest import NOISELESS

# Published perft values for the standard initial position.
PERFT_INITIAL = {0: 1, 1: 20, 2: 400, 3: 8902, 4: 197281}


@pytest.mark.parametrize("depth,expected", sorted(PERFT_INITIAL.items()))
def test_perft_initial(initial_state, depth, expected):
    assert cb.perft(initial_state, depth) == expected


@pytest.mark.parametrize(
    "fen,depth,expected",
    [
        # standard stress positions: castling/pins, en passant, promotions
        ("r3k2r/p1ppqpb1/bn2pnp1/3PN3/1p2P3/2N2Q1p/PPPBBPPP/R3K2R w KQkq - 0 1", 2, 2039),
        ("8/2p5/3p4/KP5r/1R3p1k/8/4P1P1/8 w - - 0 1", 3, 2812),
        ("r3k2r/Pppp1ppp/1b3nbN/nP6/BBP1P3/q4N2/Pp1P2PP/R2Q1RK1 w kq - 0 1", 2, 264),
    ],
)
def test_perft_reference_positions(fen, depth, expected):
    assert cb.perft(cb.from_fen(fen), depth) == expected


def test_initial_position_has_twenty_moves(initial_state):
    moves = cb.legal_moves(initial_state)
    assert len(moves) == 20
    assert len(set(moves)) == 20
    assert moves == cb.legal_moves(initial_state)  # deterministic
    keys = [m.sort_key() for m in moves]
    assert keys == sorted(keys)


def test_checkmated_side_has_no_moves():
    # fool's mate
    state = cb.from_fen("rnb1kbnr/pppp1ppp/8/4p3/6Pq/5P2/PPPPP2P/RNBQKBNR w KQkq - 1 3")
    assert cb.legal_moves(state) == []


def test_kingside_castle_generated_with_rook_squares():
    state = cb.from_fen("4k3/8/8/8/8/8/8/4K2R w K - 0 1")
    castles = [m for m in cb.legal_moves(state) if m.kind is MoveKind.CASTLE_KINGSIDE]
    assert len(castles) == 1
    move = castles[0]
    assert (move.origin, move.destination) == (cb.parse_square("e1"), cb.parse_square("g1"))
    assert (move.rook_origin, move.rook_destination) == (
        cb.parse_square("h1"),
        cb.parse_square("f1"),
    )


def test_castle_blocked_by_attack_not_generated():
    # black rook on f8 attacks f1: king may not pass through
    state = cb.from_fen("4kr2/8/8/8/8/8/8/4K2R w K - 0 1")
    assert not any(m.is_castle for m in cb.legal_moves(state))


def test_apply_e2e4(initial_state):
    move = cb.move_from_uci(initial_state, "e2e4")
    after = cb.apply_move(initial_state, move)
    assert after.piece_at(cb.parse_square("e4")).kind is PieceKind.PAWN
    assert after.piece_at(cb.parse_square("e2")) is None
    assert after.en_passant == cb.parse_square("e3")
    assert after.side_to_move is Color.BLACK
    assert after.halfmove_clock == 0
    # input untouched
    assert initial_state.piece_at(cb.parse_square("e2")).kind is PieceKind.PAWN


def test_apply_castle_updates_rook_and_rights():
    state = cb.from_fen("r3k2r/8/8/8/8/8/8/R3K2R w KQkq - 0 1")
    move = cb.move_from_uci(state, "e1g1")
    after = cb.apply_move(state, move)
    assert after.piece_at(cb.parse_square("g1")).kind is PieceKind.KING
    assert after.piece_at(cb.parse_square("f1")).kind is PieceKind.ROOK
    assert after.piece_at(cb.parse_square("h1")) is None
    assert not after.castling & (cb.CASTLE_WK | cb.CASTLE_WQ)
    assert after.castling & cb.CASTLE_BK and after.castling & cb.CASTLE_BQ


def test_quiet_move_preserves_piece_count(initial_state):
    move = cb.move_from_uci(initial_state, "g1f3")
    after = cb.apply_move(initial_state, move)
    assert sum(1 for c in after.board if c) == sum(1 for c in initial_state.board if c)


def test_en_passant_capture_removes_bypassed_pawn():
    state = cb.from_fen("rnbqkbnr/ppp1p1pp/8/3pPp2/8/8/PPPP1PPP/RNBQKBNR w KQkq f6 0 3")
    move = cb.move_from_uci(state, "e5f6")
    assert move.kind is MoveKind.EN_PASSANT
    after = cb.apply_move(state, move)
    assert after.piece_at(cb.parse_square("f5")) is None
    assert after.piece_at(cb.parse_square("f6")).kind is PieceKind.PAWN


def test_promotion_moves_cover_four_targets():
    state = cb.from_fen("4k3/P7/8/8/8/8/8/4K3 w - - 0 1")
    promos = [m for m in cb.legal_moves(state) if m.promotion is not None]
    assert {m.promotion for m in promos} == set(cb.PROMOTION_KINDS)
    after = cb.apply_move(state, next(m for m in promos if m.promotion is PieceKind.QUEEN))
    assert after.piece_at(cb.parse_square("a8")).kind is PieceKind.QUEEN


def test_illegal_move_rejected(initial_state):
    bogus = Move(cb.parse_square("e2"), cb.parse_square("e5"))
    with pytest.raises(IllegalMoveError):
        cb.apply_move(initial_state, bogus)


def test_fen_roundtrip_initial(initial_state):
    assert cb.from_fen(cb.STARTING_FEN) == initial_state
    assert cb.to_fen(initial_state) == cb.STARTING_FEN


@pytest.mark.parametrize(
    "text,fragment",
    [
        ("rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0", "fields"),
        ("rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNX w KQkq - 0 1", "letter"),
        ("rnbqkbnr/ppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1", "rank"),
        ("rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR x KQkq - 0 1", "side"),
        ("rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQqq - 0 1", "castling"),
        ("rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - x 1", "counters"),
    ],
)
def test_fen_parse_errors_name_the_field(text, fragment):
    with pytest.raises(FenError) as exc:
        cb.from_fen(text)
    assert fragment in str(exc.value).lower()


def test_fen_without_kings_is_invariant_violation():
    with pytest.raises(InvariantViolation):
        cb.from_fen("8/8/8/8/8/8/8/8 w - - 0 1")


def test_side_not_to_move_in_check_rejected():
    # white to move while the black king is already attacked by the rook
    with pytest.raises(InvariantViolation):
        cb.from_fen("4k3/4R3/8/8/8/8/8/4K3 w - - 0 1")


def test_roundtrip_and_invariants_over_random_games():
    # roundtrip law plus invariant preservation across 1,000+ generated states
    seen = 0
    seed = 0
    while seen < 1000:
        record = generate_game(
            GameGenConfig(max_plies=60, capture_weight=2.0, castle_weight=4.0, seed=seed),
            NOISELESS,
        )
        state = record.initial_state
        for ply in record.plies:
            state = ply.state_after
            cb.validate_state(state)
            assert cb.from_fen(cb.to_fen(state)) == state
            seen += 1
        seed += 1
    assert seen >= 1000


def test_every_legal_move_yields_valid_state():
    state = cb.from_fen("r3k2r/p1ppqpb1/bn2pnp1/3PN3/1p2P3/2N2Q1p/PPPBBPPP/R3K2R w KQkq - 0 1")
    for move in cb.legal_moves(state):
        cb.validate_state(cb.apply_move(state, move))


def test_square_indexing_bijection():
    for sq in range(64):
        assert cb.square(cb.square_file(sq), cb.square_rank(sq)) == sq
        assert cb.parse_square(cb.square_name(sq)) == sq


def test_piece_codes_cover_thirteen_classes():
    pieces = {cb.Piece.from_code(code) for code in range(1, 13)}
    assert len(pieces) == 12
    assert cb.Piece.from_code(0) is None
    for code in range(1, 13):
        assert cb.Piece.from_code(code).code == code
