"""Chess rules engine: board state, legal move generation, FEN I/O, perft.

Squares are indexed a1=0 .. h8=63, rank-major from white's side
(``index = rank * 8 + file``). All state objects are immutable; every
operation returns a new value, so the module is safe under concurrency.

Draw bookkeeping is limited to the halfmove clock (used to cut off
simulated games); repetition and material draws are not tracked.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator, Optional

__all__ = [
    "Color",
    "PieceKind",
    "Piece",
    "Move",
    "MoveKind",
    "BoardState",
    "InvariantViolation",
    "IllegalMoveError",
    "FenError",
    "STARTING_FEN",
    "square",
    "square_name",
    "parse_square",
    "square_file",
    "square_rank",
    "legal_moves",
    "apply_move",
    "perft",
    "from_fen",
    "to_fen",
    "board_fen",
    "parse_board_fen",
    "move_from_uci",
    "validate_state",
    "is_check",
]

FILE_NAMES = "abcdefgh"
RANK_NAMES = "12345678"

STARTING_FEN = "rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1"


class InvariantViolation(ValueError):
    """A board state violates the structural invariants."""


class IllegalMoveError(ValueError):
    """A move is not legal in the given state."""


class FenError(ValueError):
    """A position string could not be parsed; the message names the field."""


class Color(enum.IntEnum):
    WHITE = 0
    BLACK = 1

    @property
    def other(self) -> "Color":
        return Color(1 - self)


class PieceKind(enum.IntEnum):
    PAWN = 0
    KNIGHT = 1
    BISHOP = 2
    ROOK = 3
    QUEEN = 4
    KING = 5


PROMOTION_KINDS = (PieceKind.KNIGHT, PieceKind.BISHOP, PieceKind.ROOK, PieceKind.QUEEN)

# Square-content codes: 0 = empty, 1..6 = white P N B R Q K, 7..12 = black.
EMPTY = 0
PIECE_SYMBOLS = ".PNBRQKpnbrqk"
NUM_CLASSES = 13  # empty + 12 piece codes; shared by the simulator and recognizers


@dataclass(frozen=True)
class Piece:
    color: Color
    kind: PieceKind

    @property
    def code(self) -> int:
        return 1 + self.color * 6 + self.kind

    @property
    def symbol(self) -> str:
        return PIECE_SYMBOLS[self.code]

    @classmethod
    def from_code(cls, code: int) -> Optional["Piece"]:
        if code == EMPTY:
            return None
        return cls(Color((code - 1) // 6), PieceKind((code - 1) % 6))

    @classmethod
    def from_symbol(cls, symbol: str) -> "Piece":
        idx = PIECE_SYMBOLS.find(symbol)
        if idx <= 0:
            raise FenError(f"invalid piece letter {symbol!r}")
        return cls.from_code(idx)  # type: ignore[return-value]


def piece_code(color: Color, kind: PieceKind) -> int:
    return 1 + color * 6 + kind


def code_color(code: int) -> Color:
    return Color((code - 1) // 6)


def square(file: int, rank: int) -> int:
    return rank * 8 + file


def square_file(sq: int) -> int:
    return sq & 7


def square_rank(sq: int) -> int:
    return sq >> 3


def square_name(sq: int) -> str:
    return FILE_NAMES[sq & 7] + RANK_NAMES[sq >> 3]


def parse_square(name: str) -> int:
    if len(name) != 2 or name[0] not in FILE_NAMES or name[1] not in RANK_NAMES:
        raise FenError(f"invalid square name {name!r}")
    return square(FILE_NAMES.index(name[0]), RANK_NAMES.index(name[1]))


class MoveKind(enum.IntEnum):
    QUIET = 0
    CAPTURE = 1
    EN_PASSANT = 2
    CASTLE_KINGSIDE = 3
    CASTLE_QUEENSIDE = 4
    PROMOTION = 5
    CAPTURE_PROMOTION = 6


_CAPTURE_KINDS = frozenset(
    (MoveKind.CAPTURE, MoveKind.EN_PASSANT, MoveKind.CAPTURE_PROMOTION)
)
_CASTLE_KINDS = frozenset((MoveKind.CASTLE_KINGSIDE, MoveKind.CASTLE_QUEENSIDE))
_PROMOTION_MOVE_KINDS = frozenset((MoveKind.PROMOTION, MoveKind.CAPTURE_PROMOTION))


@dataclass(frozen=True)
class Move:
    origin: int
    destination: int
    kind: MoveKind = MoveKind.QUIET
    promotion: Optional[PieceKind] = None
    rook_origin: Optional[int] = None
    rook_destination: Optional[int] = None

    def __post_init__(self) -> None:
        if self.origin == self.destination:
            raise ValueError("move origin equals destination")
        if self.kind in _CASTLE_KINDS and (
            self.rook_origin is None or self.rook_destination is None
        ):
            raise ValueError("castling move must carry both rook squares")
        if self.kind in _PROMOTION_MOVE_KINDS and self.promotion not in PROMOTION_KINDS:
            raise ValueError("promotion target must be knight, bishop, rook, or queen")

    @property
    def is_capture(self) -> bool:
        return self.kind in _CAPTURE_KINDS

    @property
    def is_castle(self) -> bool:
        return self.kind in _CASTLE_KINDS

    def uci(self) -> str:
        """Coordinate notation, e.g. ``e2e4`` or ``e7e8q``; castling as the king move."""
        text = square_name(self.origin) + square_name(self.destination)
        if self.promotion is not None:
            text += PIECE_SYMBOLS[7 + self.promotion]  # black symbols are lowercase
        return text

    def sort_key(self) -> tuple:
        promo = -1 if self.promotion is None else int(self.promotion)
        return (self.origin, self.destination, promo)


@dataclass(frozen=True)
class BoardState:
    """Full position: placement, side to move, castling rights, en passant, clocks.

    ``board`` holds one content code per square (see ``PIECE_SYMBOLS``).
    ``castling`` is a bitmask: 1 white kingside, 2 white queenside,
    4 black kingside, 8 black queenside.
    """

    board: tuple
    side_to_move: Color = Color.WHITE
    castling: int = 0
    en_passant: Optional[int] = None
    halfmove_clock: int = 0
    fullmove_number: int = 1

    @classmethod
    def initial(cls) -> "BoardState":
        return from_fen(STARTING_FEN)

    def piece_at(self, sq: int) -> Optional[Piece]:
        return Piece.from_code(self.board[sq])

    def placement(self) -> dict:
        """Square index -> Piece (or None for empty), for all 64 squares."""
        return {sq: Piece.from_code(code) for sq, code in enumerate(self.board)}

    def occupied_squares(self, color: Optional[Color] = None) -> Iterator[int]:
        for sq, code in enumerate(self.board):
            if code == EMPTY:
                continue
            if color is None or code_color(code) is color:
                yield sq

    def king_square(self, color: Color) -> int:
        target = piece_code(color, PieceKind.KING)
        for sq, code in enumerate(self.board):
            if code == target:
                return sq
        raise InvariantViolation(f"no {color.name.lower()} king on the board")

    def __str__(self) -> str:
        rows = []
        for rank in range(7, -1, -1):
            row = " ".join(PIECE_SYMBOLS[self.board[square(f, rank)]] for f in range(8))
            rows.append(f"{rank + 1} {row}")
        rows.append("  " + " ".join(FILE_NAMES))
        return "\n".join(rows)


# Castling-rights bits.
CASTLE_WK, CASTLE_WQ, CASTLE_BK, CASTLE_BQ = 1, 2, 4, 8
_RIGHTS_BY_SQUARE = {0: CASTLE_WQ, 7: CASTLE_WK, 56: CASTLE_BQ, 63: CASTLE_BK}

_ROOK_DIRS = ((0, 1), (0, -1), (1, 0), (-1, 0))
_BISHOP_DIRS = ((1, 1), (1, -1), (-1, 1), (-1, -1))


def _build_tables():
    knight, king = [], []
    rook_rays, bishop_rays = [], []
    pawn_attacks = ([], [])
    line_masks = []
    for sq in range(64):
        f, r = sq & 7, sq >> 3
        knight.append(
            tuple(
                square(f + df, r + dr)
                for df, dr in (
                    (1, 2), (2, 1), (2, -1), (1, -2),
                    (-1, -2), (-2, -1), (-2, 1), (-1, 2),
                )
                if 0 <= f + df < 8 and 0 <= r + dr < 8
            )
        )
        king.append(
            tuple(
                square(f + df, r + dr)
                for df in (-1, 0, 1)
                for dr in (-1, 0, 1)
                if (df or dr) and 0 <= f + df < 8 and 0 <= r + dr < 8
            )
        )

        def ray(df, dr):
            out = []
            nf, nr = f + df, r + dr
            while 0 <= nf < 8 and 0 <= nr < 8:
                out.append(square(nf, nr))
                nf += df
                nr += dr
            return tuple(out)

        rook_rays.append(tuple(ray(df, dr) for df, dr in _ROOK_DIRS))
        bishop_rays.append(tuple(ray(df, dr) for df, dr in _BISHOP_DIRS))
        for color, fwd in ((Color.WHITE, 1), (Color.BLACK, -1)):
            pawn_attacks[color].append(
                tuple(
                    square(f + df, r + fwd)
                    for df in (-1, 1)
                    if 0 <= f + df < 8 and 0 <= r + fwd < 8
                )
            )
        mask = 0
        for df, dr in _ROOK_DIRS + _BISHOP_DIRS:
            for t in ray(df, dr):
                mask |= 1 << t
        line_masks.append(mask)
    return (
        tuple(knight),
        tuple(king),
        tuple(rook_rays),
        tuple(bishop_rays),
        (tuple(pawn_attacks[0]), tuple(pawn_attacks[1])),
        tuple(line_masks),
    )


(
    KNIGHT_TARGETS,
    KING_TARGETS,
    ROOK_RAYS,
    BISHOP_RAYS,
    PAWN_ATTACKS,
    LINE_MASKS,
) = _build_tables()


def _attacked(board, sq: int, by: Color) -> bool:
    """True if a piece of color ``by`` attacks ``sq`` on this placement."""
    base = 1 + by * 6
    pawn, knight, bishop, rook, queen, king = range(base, base + 6)
    # A pawn of color `by` attacks sq from the squares a pawn of the other
    # color standing on sq would attack.
    for p in PAWN_ATTACKS[1 - by][sq]:
        if board[p] == pawn:
            return True
    for p in KNIGHT_TARGETS[sq]:
        if board[p] == knight:
            return True
    for p in KING_TARGETS[sq]:
        if board[p] == king:
            return True
    for ray in ROOK_RAYS[sq]:
        for p in ray:
            code = board[p]
            if code:
                if code == rook or code == queen:
                    return True
                break
    for ray in BISHOP_RAYS[sq]:
        for p in ray:
            code = board[p]
            if code:
                if code == bishop or code == queen:
                    return True
                break
    return False


def is_check(state: BoardState) -> bool:
    """True if the side to move is in check."""
    return _attacked(
        state.board, state.king_square(state.side_to_move), state.side_to_move.other
    )


def validate_state(state: BoardState) -> None:
    """Raise InvariantViolation unless ``state`` is structurally sound."""
    board = state.board
    if len(board) != 64:
        raise InvariantViolation("placement must cover exactly 64 squares")
    for color in (Color.WHITE, Color.BLACK):
        kings = board.count(piece_code(color, PieceKind.KING))
        if kings != 1:
            raise InvariantViolation(
                f"expected exactly one {color.name.lower()} king, found {kings}"
            )
    wp, bp = piece_code(Color.WHITE, PieceKind.PAWN), piece_code(Color.BLACK, PieceKind.PAWN)
    for sq in range(0, 8):
        if board[sq] in (wp, bp) or board[56 + sq] in (wp, bp):
            raise InvariantViolation("pawn on a back rank")
    ep = state.en_passant
    if ep is not None:
        expected_rank = 5 if state.side_to_move is Color.WHITE else 2
        if square_rank(ep) != expected_rank:
            raise InvariantViolation(
                f"en-passant square {square_name(ep)} not on rank {expected_rank + 1}"
            )
        if board[ep] != EMPTY:
            raise InvariantViolation("en-passant square is occupied")
        mover = state.side_to_move.other
        pawn_sq = ep - 8 if mover is Color.BLACK else ep + 8
        if board[pawn_sq] != piece_code(mover, PieceKind.PAWN):
            raise InvariantViolation("no pawn behind the en-passant square")
    opponent = state.side_to_move.other
    if _attacked(board, state.king_square(opponent), state.side_to_move):
        raise InvariantViolation("side not to move is in check")


def _pseudo_moves(state: BoardState):
    board = state.board
    us = state.side_to_move
    them = us.other
    base = 1 + us * 6
    moves = []
    add = moves.append

    for origin, code in enumerate(board):
        if code == EMPTY or code_color(code) is not us:
            continue
        kind = (code - 1) % 6
        if kind == PieceKind.PAWN:
            fwd = 8 if us is Color.WHITE else -8
            start_rank = 1 if us is Color.WHITE else 6
            promo_rank = 7 if us is Color.WHITE else 0
            dest = origin + fwd
            if board[dest] == EMPTY:
                if square_rank(dest) == promo_rank:
                    for pk in PROMOTION_KINDS:
                        add(Move(origin, dest, MoveKind.PROMOTION, promotion=pk))
                else:
                    add(Move(origin, dest))
                    if square_rank(origin) == start_rank and board[dest + fwd] == EMPTY:
                        add(Move(origin, dest + fwd))
            for target in PAWN_ATTACKS[us][origin]:
                tcode = board[target]
                if tcode != EMPTY and code_color(tcode) is them:
                    if square_rank(target) == promo_rank:
                        for pk in PROMOTION_KINDS:
                            add(Move(origin, target, MoveKind.CAPTURE_PROMOTION, promotion=pk))
                    else:
                        add(Move(origin, target, MoveKind.CAPTURE))
                elif target == state.en_passant:
                    add(Move(origin, target, MoveKind.EN_PASSANT))
        elif kind == PieceKind.KNIGHT or kind == PieceKind.KING:
            targets = KNIGHT_TARGETS[origin] if kind == PieceKind.KNIGHT else KING_TARGETS[origin]
            for target in targets:
                tcode = board[target]
                if tcode == EMPTY:
                    add(Move(origin, target))
                elif code_color(tcode) is them:
                    add(Move(origin, target, MoveKind.CAPTURE))
        else:
            rays = (
                ROOK_RAYS[origin]
                if kind == PieceKind.ROOK
                else BISHOP_RAYS[origin]
                if kind == PieceKind.BISHOP
                else ROOK_RAYS[origin] + BISHOP_RAYS[origin]
            )
            for ray in rays:
                for target in ray:
                    tcode = board[target]
                    if tcode == EMPTY:
                        add(Move(origin, target))
                    else:
                        if code_color(tcode) is them:
                            add(Move(origin, target, MoveKind.CAPTURE))
                        break

    # Castling: path empty, rook/king in place, no attacked square on the
    # king's path (origin, transit, destination).
    king_code = base + PieceKind.KING
    rook_code = base + PieceKind.ROOK
    home = 0 if us is Color.WHITE else 56
    if state.castling & (CASTLE_WK if us is Color.WHITE else CASTLE_BK):
        if (
            board[home + 4] == king_code
            and board[home + 7] == rook_code
            and board[home + 5] == EMPTY
            and board[home + 6] == EMPTY
            and not _attacked(board, home + 4, them)
            and not _attacked(board, home + 5, them)
            and not _attacked(board, home + 6, them)
        ):
            add(
                Move(
                    home + 4,
                    home + 6,
                    MoveKind.CASTLE_KINGSIDE,
                    rook_origin=home + 7,
                    rook_destination=home + 5,
                )
            )
    if state.castling & (CASTLE_WQ if us is Color.WHITE else CASTLE_BQ):
        if (
            board[home + 4] == king_code
            and board[home] == rook_code
            and board[home + 1] == EMPTY
            and board[home + 2] == EMPTY
            and board[home + 3] == EMPTY
            and not _attacked(board, home + 4, them)
            and not _attacked(board, home + 3, them)
            and not _attacked(board, home + 2, them)
        ):
            add(
                Move(
                    home + 4,
                    home + 2,
                    MoveKind.CASTLE_QUEENSIDE,
                    rook_origin=home,
                    rook_destination=home + 3,
                )
            )
    return moves


def _king_safe_after(state: BoardState, move: Move, king_sq: int) -> bool:
    board = list(state.board)
    us = state.side_to_move
    piece = board[move.origin]
    board[move.origin] = EMPTY
    if move.kind is MoveKind.EN_PASSANT:
        board[move.destination - 8 if us is Color.WHITE else move.destination + 8] = EMPTY
    board[move.destination] = piece
    if move.is_castle:
        board[move.rook_origin] = EMPTY
        board[move.rook_destination] = piece_code(us, PieceKind.ROOK)
    king = move.destination if move.origin == king_sq else king_sq
    return not _attacked(board, king, us.other)


def legal_moves(state: BoardState) -> list:
    """All legal moves for the side to move, sorted by (origin, destination, promotion).

    Raises InvariantViolation for malformed states. The output is
    duplicate-free and deterministic.
    """
    validate_state(state)
    board = state.board
    king_sq = state.king_square(state.side_to_move)
    in_check = _attacked(board, king_sq, state.side_to_move.other)
    king_lines = LINE_MASKS[king_sq]
    out = []
    for move in _pseudo_moves(state):
        # Only moves that can expose the king need the full safety probe:
        # king moves, moves off a king line, en passant, or any move in check.
        if (
            in_check
            or move.origin == king_sq
            or (king_lines >> move.origin) & 1
            or move.kind is MoveKind.EN_PASSANT
        ):
            if not _king_safe_after(state, move, king_sq):
                continue
        out.append(move)
    out.sort(key=Move.sort_key)
    return out


def _apply_unchecked(state: BoardState, move: Move) -> BoardState:
    board = list(state.board)
    us = state.side_to_move
    moving = board[move.origin]
    captured = board[move.destination]
    board[move.origin] = EMPTY
    if move.kind is MoveKind.EN_PASSANT:
        board[move.destination - 8 if us is Color.WHITE else move.destination + 8] = EMPTY
    if move.promotion is not None:
        moving = piece_code(us, move.promotion)
    board[move.destination] = moving
    if move.is_castle:
        board[move.rook_origin] = EMPTY
        board[move.rook_destination] = piece_code(us, PieceKind.ROOK)

    castling = state.castling
    if (moving - 1) % 6 == PieceKind.KING:
        castling &= ~(CASTLE_WK | CASTLE_WQ) if us is Color.WHITE else ~(CASTLE_BK | CASTLE_BQ)
    for sq in (move.origin, move.destination):
        castling &= ~_RIGHTS_BY_SQUARE.get(sq, 0)

    is_pawn = (board[move.destination] - 1) % 6 == PieceKind.PAWN or move.promotion is not None
    en_passant = None
    if is_pawn and move.promotion is None and abs(move.destination - move.origin) == 16:
        en_passant = (move.origin + move.destination) // 2

    resets_clock = is_pawn or captured != EMPTY or move.kind is MoveKind.EN_PASSANT
    return BoardState(
        board=tuple(board),
        side_to_move=us.other,
        castling=castling,
        en_passant=en_passant,
        halfmove_clock=0 if resets_clock else state.halfmove_clock + 1,
        fullmove_number=state.fullmove_number + (1 if us is Color.BLACK else 0),
    )


def apply_move(state: BoardState, move: Move) -> BoardState:
    """Successor state after a legal move; raises IllegalMoveError otherwise."""
    if move not in legal_moves(state):
        raise IllegalMoveError(f"{move.uci()} is not legal here")
    return _apply_unchecked(state, move)


def perft(state: BoardState, depth: int) -> int:
    """Leaf count of the legal-move tree at exactly ``depth`` plies."""
    if depth < 0:
        raise ValueError("depth must be >= 0")
    if depth == 0:
        return 1
    moves = legal_moves(state)
    if depth == 1:
        return len(moves)
    return sum(perft(_apply_unchecked(state, m), depth - 1) for m in moves)


def move_from_uci(state: BoardState, text: str) -> Move:
    """Resolve coordinate notation against the legal moves of ``state``."""
    for move in legal_moves(state):
        if move.uci() == text:
            return move
    raise IllegalMoveError(f"{text!r} is not legal in this position")


def board_fen(board) -> str:
    """Placement field of the position notation for a 64-code board."""
    ranks = []
    for rank in range(7, -1, -1):
        row = ""
        run = 0
        for file in range(8):
            code = board[square(file, rank)]
            if code == EMPTY:
                run += 1
            else:
                if run:
                    row += str(run)
                    run = 0
                row += PIECE_SYMBOLS[code]
        if run:
            row += str(run)
        ranks.append(row)
    return "/".join(ranks)


def parse_board_fen(text: str) -> tuple:
    """Parse the placement field into a 64-code board tuple."""
    ranks = text.split("/")
    if len(ranks) != 8:
        raise FenError(f"placement field must have 8 ranks, got {len(ranks)}")
    board = [EMPTY] * 64
    for i, row in enumerate(ranks):
        rank = 7 - i
        file = 0
        for ch in row:
            if ch.isdigit():
                if ch == "0" or ch == "9":
                    raise FenError(f"invalid run length {ch!r} in rank {rank + 1}")
                file += int(ch)
            else:
                idx = PIECE_SYMBOLS.find(ch)
                if idx <= 0:
                    raise FenError(f"invalid piece letter {ch!r} in rank {rank + 1}")
                if file > 7:
                    raise FenError(f"rank {rank + 1} longer than 8 squares")
                board[square(file, rank)] = idx
                file += 1
        if file != 8:
            raise FenError(f"rank {rank + 1} covers {file} squares, expected 8")
    return tuple(board)


def from_fen(text: str, validate: bool = True) -> BoardState:
    """Parse six-field position notation into a BoardState."""
    fields = text.split()
    if len(fields) != 6:
        raise FenError(f"expected 6 space-separated fields, got {len(fields)}")
    placement, side, castling, ep, halfmove, fullmove = fields

    board = parse_board_fen(placement)

    if side == "w":
        stm = Color.WHITE
    elif side == "b":
        stm = Color.BLACK
    else:
        raise FenError(f"side-to-move field must be 'w' or 'b', got {side!r}")

    rights = 0
    if castling != "-":
        for ch in castling:
            bit = {"K": CASTLE_WK, "Q": CASTLE_WQ, "k": CASTLE_BK, "q": CASTLE_BQ}.get(ch)
            if bit is None or rights & bit:
                raise FenError(f"invalid castling field {castling!r}")
            rights |= bit

    ep_square = None if ep == "-" else parse_square(ep)

    try:
        halfmove_clock = int(halfmove)
        fullmove_number = int(fullmove)
    except ValueError:
        raise FenError(f"move counters must be integers, got {halfmove!r} {fullmove!r}")
    if halfmove_clock < 0 or fullmove_number < 1:
        raise FenError("move counters out of range")

    state = BoardState(
        board=board,
        side_to_move=stm,
        castling=rights,
        en_passant=ep_square,
        halfmove_clock=halfmove_clock,
        fullmove_number=fullmove_number,
    )
    if validate:
        validate_state(state)
    return state


def to_fen(state: BoardState) -> str:
    """Serialize to six-field position notation."""
    rights = "".join(
        ch
        for ch, bit in (("K", CASTLE_WK), ("Q", CASTLE_WQ), ("k", CASTLE_BK), ("q", CASTLE_BQ))
        if state.castling & bit
    )
    return " ".join(
        (
            board_fen(state.board),
            "w" if state.side_to_move is Color.WHITE else "b",
            rights or "-",
            "-" if state.en_passant is None else square_name(state.en_passant),
            str(state.halfmove_clock),
            str(state.fullmove_number),
        )
    )
