/** Board-placement model shared by the queue thumbnails and the editor.
 *
 * Squares are indexed a1=0 .. h8=63 to match the server; the wire format
 * is the placement field of standard position notation (rank 8 first).
 * Class codes are 0 = empty, 1..6 white P N B R Q K, 7..12 black.
 */

export const NUM_CLASSES = 13;

export const CLASS_SYMBOLS = '.PNBRQKpnbrqk';

const GLYPHS = ['', '♙', '♘', '♗', '♖', '♕', '♔', '♟', '♞', '♝', '♜', '♛', '♚'];

export const CLASS_NAMES = [
  'empty',
  'white pawn', 'white knight', 'white bishop', 'white rook', 'white queen', 'white king',
  'black pawn', 'black knight', 'black bishop', 'black rook', 'black queen', 'black king',
];

export function glyph(code: number): string {
  return GLYPHS[code] ?? '?';
}

export function parsePlacement(text: string): number[] {
  const ranks = text.split('/');
  if (ranks.length !== 8) {
    throw new Error(`placement must have 8 ranks, got ${ranks.length}`);
  }
  const board = new Array<number>(64).fill(0);
  ranks.forEach((row, i) => {
    const rank = 7 - i;
    let file = 0;
    for (const ch of row) {
      if (ch >= '1' && ch <= '8') {
        file += Number(ch);
      } else {
        const code = CLASS_SYMBOLS.indexOf(ch);
        if (code <= 0) throw new Error(`invalid piece letter ${ch}`);
        if (file > 7) throw new Error(`rank ${rank + 1} longer than 8 squares`);
        board[rank * 8 + file] = code;
        file += 1;
      }
    }
    if (file !== 8) throw new Error(`rank ${rank + 1} covers ${file} squares`);
  });
  return board;
}

export function renderPlacement(board: readonly number[]): string {
  const parts: string[] = [];
  for (let rank = 7; rank >= 0; rank--) {
    let row = '';
    let run = 0;
    for (let file = 0; file < 8; file++) {
      const code = board[rank * 8 + file];
      if (code === 0) {
        run += 1;
      } else {
        if (run > 0) {
          row += String(run);
          run = 0;
        }
        row += CLASS_SYMBOLS[code];
      }
    }
    if (run > 0) row += String(run);
    parts.push(row);
  }
  return parts.join('/');
}

/** Click-to-cycle: step through the 13 classes, wrapping at both ends. */
export function cycleClass(code: number, delta = 1): number {
  return (code + delta + NUM_CLASSES) % NUM_CLASSES;
}

export function squareName(sq: number): string {
  return 'abcdefgh'[sq % 8] + String(Math.floor(sq / 8) + 1);
}

export function diffSquares(a: readonly number[], b: readonly number[]): number[] {
  const out: number[] = [];
  for (let sq = 0; sq < 64; sq++) {
    if (a[sq] !== b[sq]) out.push(sq);
  }
  return out;
}

/** Confidence of the displayed class at a square, straight from the
 * observation: the type-distribution mass on that class. */
export function cellConfidence(
  types: readonly number[][],
  sq: number,
  code: number,
): number {
  const row = types[sq];
  if (!row) return 0;
  return row[code] ?? 0;
}
