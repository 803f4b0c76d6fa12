import { glyph, parsePlacement } from './board.js';
import type { ValidationItem } from './types.js';

export interface QueueCallbacks {
  onOpen: (item: ValidationItem) => void;
}

/** Pending-items list with a small board thumbnail per row. */
export class QueueView {
  readonly root: HTMLElement;

  constructor(private readonly doc: Document, private readonly callbacks: QueueCallbacks) {
    this.root = doc.createElement('section');
    this.root.className = 'queue';
  }

  renderItems(items: ValidationItem[]): void {
    const doc = this.doc;
    this.root.replaceChildren();
    const heading = doc.createElement('h2');
    heading.textContent = `Validation queue (${items.length} pending)`;
    this.root.appendChild(heading);

    if (items.length === 0) {
      const empty = doc.createElement('p');
      empty.className = 'empty-state';
      empty.textContent = 'Nothing to review: the queue is empty.';
      this.root.appendChild(empty);
      return;
    }

    const list = doc.createElement('ul');
    list.className = 'queue-list';
    for (const item of items) {
      const row = doc.createElement('li');
      row.className = 'queue-row';
      row.dataset.itemId = item.item_id;

      const thumb = doc.createElement('pre');
      thumb.className = 'thumb';
      thumb.textContent = this.thumbnail(item.predicted_placement);

      const label = doc.createElement('div');
      const title = doc.createElement('strong');
      title.textContent = `${item.game_id} · ply ${item.ply}`;
      const meta = doc.createElement('small');
      meta.textContent = `recognized in ${item.latency_s.toFixed(3)} s`;
      label.append(title, doc.createElement('br'), meta);

      const open = doc.createElement('button');
      open.textContent = 'Review';
      open.addEventListener('click', () => this.callbacks.onOpen(item));

      row.append(thumb, label, open);
      list.appendChild(row);
    }
    this.root.appendChild(list);
  }

  renderError(message: string, onRetry: () => void): void {
    this.root.replaceChildren();
    const banner = this.doc.createElement('div');
    banner.className = 'error-banner';
    banner.textContent = message;
    const retry = this.doc.createElement('button');
    retry.textContent = 'Retry';
    retry.addEventListener('click', onRetry);
    banner.appendChild(retry);
    this.root.appendChild(banner);
  }

  private thumbnail(placement: string): string {
    const board = parsePlacement(placement);
    const rows: string[] = [];
    for (let rank = 7; rank >= 0; rank--) {
      let row = '';
      for (let file = 0; file < 8; file++) {
        const code = board[rank * 8 + file];
        row += code === 0 ? '·' : glyph(code);
      }
      rows.push(row);
    }
    return rows.join('\n');
  }
}
