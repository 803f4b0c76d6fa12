import {
  CLASS_NAMES,
  NUM_CLASSES,
  cellConfidence,
  cycleClass,
  diffSquares,
  glyph,
  parsePlacement,
  renderPlacement,
} from './board.js';
import type { ItemDetail, Verdict } from './types.js';

export interface EditorCallbacks {
  onSubmit: (verdict: Verdict) => Promise<void>;
  onClose: () => void;
}

/** Board editor: an 8x8 grid showing the predicted class per square with a
 * confidence shade from the observation. Left click cycles forward through
 * the 13 classes, right click backward; a palette click paints the selected
 * class. Accept is only offered while no cell has been edited, Submit
 * Correction only once at least one has. */
export class BoardEditor {
  readonly root: HTMLElement;
  private readonly original: number[];
  private edited: number[];
  private palette: number | null = null;
  private submitting = false;
  private readonly cells: HTMLButtonElement[] = [];
  private acceptButton!: HTMLButtonElement;
  private correctButton!: HTMLButtonElement;
  private statusLine!: HTMLElement;

  constructor(
    private readonly doc: Document,
    private readonly item: ItemDetail,
    private readonly callbacks: EditorCallbacks,
  ) {
    this.original = parsePlacement(item.predicted_placement);
    this.edited = [...this.original];
    this.root = doc.createElement('section');
    this.root.className = 'editor';
    this.render();
  }

  get editedPlacement(): string {
    return renderPlacement(this.edited);
  }

  get editCount(): number {
    return diffSquares(this.original, this.edited).length;
  }

  private render(): void {
    const doc = this.doc;
    this.root.replaceChildren();

    const title = doc.createElement('h2');
    title.textContent = `${this.item.game_id} ply ${this.item.ply}`;
    this.root.appendChild(title);

    const grid = doc.createElement('div');
    grid.className = 'board-grid';
    this.cells.length = 0;
    for (let rank = 7; rank >= 0; rank--) {
      for (let file = 0; file < 8; file++) {
        const sq = rank * 8 + file;
        const cell = doc.createElement('button');
        cell.className = `cell ${(rank + file) % 2 ? 'light' : 'dark'}`;
        cell.dataset.square = String(sq);
        cell.addEventListener('click', () => this.editCell(sq, +1));
        cell.addEventListener('contextmenu', (event) => {
          event.preventDefault();
          this.editCell(sq, -1);
        });
        grid.appendChild(cell);
        this.cells.push(cell);
      }
    }
    this.root.appendChild(grid);

    const paletteBox = doc.createElement('div');
    paletteBox.className = 'palette';
    for (let code = 0; code < NUM_CLASSES; code++) {
      const swatch = doc.createElement('button');
      swatch.className = 'swatch';
      swatch.title = CLASS_NAMES[code];
      swatch.textContent = code === 0 ? '·' : glyph(code);
      swatch.addEventListener('click', () => {
        this.palette = this.palette === code ? null : code;
        this.refreshPalette(paletteBox);
      });
      paletteBox.appendChild(swatch);
    }
    this.root.appendChild(paletteBox);

    const controls = doc.createElement('div');
    controls.className = 'controls';
    this.acceptButton = doc.createElement('button');
    this.acceptButton.className = 'accept';
    this.acceptButton.textContent = 'Accept (a)';
    this.acceptButton.addEventListener('click', () => void this.submit());
    this.correctButton = doc.createElement('button');
    this.correctButton.className = 'correct';
    this.correctButton.textContent = 'Submit correction';
    this.correctButton.addEventListener('click', () => void this.submit());
    const reset = doc.createElement('button');
    reset.textContent = 'Reset edits';
    reset.addEventListener('click', () => {
      this.edited = [...this.original];
      this.refresh();
    });
    const close = doc.createElement('button');
    close.textContent = 'Back (n)';
    close.addEventListener('click', () => this.callbacks.onClose());
    controls.append(this.acceptButton, this.correctButton, reset, close);
    this.root.appendChild(controls);

    this.statusLine = doc.createElement('p');
    this.statusLine.className = 'editor-status';
    this.root.appendChild(this.statusLine);

    this.refresh();
  }

  private editCell(sq: number, delta: number): void {
    if (this.submitting) return;
    this.edited[sq] =
      this.palette !== null ? this.palette : cycleClass(this.edited[sq], delta);
    this.refresh();
  }

  private refreshPalette(box: HTMLElement): void {
    Array.from(box.children).forEach((child, code) => {
      child.classList.toggle('selected', this.palette === code);
    });
  }

  private refresh(): void {
    const types = this.item.observation.types;
    this.cells.forEach((cell) => {
      const sq = Number(cell.dataset.square);
      const code = this.edited[sq];
      cell.textContent = code === 0 ? '' : glyph(code);
      const confidence = cellConfidence(types, sq, code);
      cell.style.boxShadow = `inset 0 0 0 3px rgba(30, 144, 255, ${confidence.toFixed(3)})`;
      cell.classList.toggle('edited', code !== this.original[sq]);
    });
    const edits = this.editCount;
    this.acceptButton.disabled = this.submitting || edits > 0;
    this.correctButton.disabled = this.submitting || edits === 0;
    this.statusLine.textContent =
      edits === 0
        ? 'No edits; accept if the prediction matches the real board.'
        : `${edits} square${edits === 1 ? '' : 's'} edited.`;
  }

  /** Accept when untouched, submit the corrected placement otherwise.
   * The buttons stay disabled while a request is in flight so a double
   * click cannot double-submit. */
  async submit(): Promise<void> {
    if (this.submitting) return;
    const edits = this.editCount;
    const verdict: Verdict =
      edits === 0
        ? { verdict: 'accepted' }
        : { verdict: 'corrected', placement: this.editedPlacement };
    this.submitting = true;
    this.refresh();
    try {
      await this.callbacks.onSubmit(verdict);
    } catch (err) {
      // optimistic rollback: keep the edits, surface the failure
      this.submitting = false;
      this.refresh();
      this.statusLine.textContent = `Submit failed: ${String(
        err instanceof Error ? err.message : err,
      )}`;
      return;
    }
    this.submitting = false;
  }
}
