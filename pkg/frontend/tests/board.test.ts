import { describe, expect, it } from 'vitest';

import {
  CLASS_SYMBOLS,
  NUM_CLASSES,
  cellConfidence,
  cycleClass,
  diffSquares,
  glyph,
  parsePlacement,
  renderPlacement,
  squareName,
} from '../src/board.js';

const START = 'rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR';

describe('placement codec', () => {
  it('parses the initial placement with a1 = index 0', () => {
    const board = parsePlacement(START);
    expect(board).toHaveLength(64);
    expect(CLASS_SYMBOLS[board[0]]).toBe('R'); // a1
    expect(CLASS_SYMBOLS[board[4]]).toBe('K'); // e1
    expect(CLASS_SYMBOLS[board[60]]).toBe('k'); // e8
    expect(board[24]).toBe(0); // a4 empty
  });

  it('roundtrips arbitrary placements', () => {
    const texts = [START, '8/8/8/2kq4/8/3KP3/8/8', '4k3/8/8/8/8/8/8/4K2R'];
    for (const text of texts) {
      expect(renderPlacement(parsePlacement(text))).toBe(text);
    }
  });

  it('rejects malformed placements', () => {
    expect(() => parsePlacement('8/8/8')).toThrow(/8 ranks/);
    expect(() => parsePlacement('9/8/8/8/8/8/8/8')).toThrow();
    expect(() => parsePlacement('xxxxxxxx/8/8/8/8/8/8/8')).toThrow(/invalid piece/);
  });
});

describe('editing model', () => {
  it('cycles forward through all 13 classes and wraps', () => {
    let code = 0;
    const seen = new Set<number>();
    for (let i = 0; i < NUM_CLASSES; i++) {
      seen.add(code);
      code = cycleClass(code);
    }
    expect(seen.size).toBe(NUM_CLASSES);
    expect(code).toBe(0);
  });

  it('cycles backward too', () => {
    expect(cycleClass(0, -1)).toBe(NUM_CLASSES - 1);
    expect(cycleClass(5, -1)).toBe(4);
  });

  it('diffs placements square by square', () => {
    const a = parsePlacement(START);
    const b = [...a];
    b[12] = cycleClass(b[12]);
    b[33] = cycleClass(b[33]);
    expect(diffSquares(a, a)).toEqual([]);
    expect(diffSquares(a, b)).toEqual([12, 33]);
  });

  it('names squares like the server does', () => {
    expect(squareName(0)).toBe('a1');
    expect(squareName(63)).toBe('h8');
    expect(squareName(28)).toBe('e4');
  });

  it('reads cell confidence from the type distribution', () => {
    const types = Array.from({ length: 64 }, () => new Array(13).fill(1 / 13));
    types[10][4] = 0.9;
    expect(cellConfidence(types, 10, 4)).toBeCloseTo(0.9);
    expect(cellConfidence(types, 11, 4)).toBeCloseTo(1 / 13);
  });

  it('has a glyph for every piece class', () => {
    for (let code = 1; code < NUM_CLASSES; code++) {
      expect(glyph(code)).not.toBe('');
      expect(glyph(code)).not.toBe('?');
    }
  });
});
