"""Walk through the chess rules engine: positions, legal moves, perft.

Run with: python demos/01_rules_engine.py
"""

from chessrec import board as cb

# The engine speaks standard six-field position notation.
state = cb.BoardState.initial()
print(state)
print()
print("position string:", cb.to_fen(state))

# Legal moves come back sorted by (origin, destination, promotion), so the
# order is stable across runs and platforms.
moves = cb.legal_moves(state)
print(f"\n{len(moves)} legal moves from the start:")
print(" ".join(m.uci() for m in moves))

# Applying a move returns a new immutable state.
e4 = cb.move_from_uci(state, "e2e4")
after = cb.apply_move(state, e4)
print("\nafter e2e4 (note the en-passant square):")
print(cb.to_fen(after))

# perft counts the leaves of the legal-move tree and is the standard way
# to convince yourself a move generator is exactly right. These values
# are published and independently verified.
print("\nperft from the initial position:")
for depth in range(1, 5):
    print(f"  depth {depth}: {cb.perft(state, depth):,} leaf nodes")

# Special moves all work: castling carries its rook squares explicitly.
castle_ready = cb.from_fen("r3k2r/8/8/8/8/8/8/R3K2R w KQkq - 0 1")
for move in cb.legal_moves(castle_ready):
    if move.is_castle:
        print(
            f"\ncastling {move.uci()}: king {cb.square_name(move.origin)}->"
            f"{cb.square_name(move.destination)}, rook "
            f"{cb.square_name(move.rook_origin)}->{cb.square_name(move.rook_destination)}"
        )
