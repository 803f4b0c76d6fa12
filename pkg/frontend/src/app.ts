import { ApiClient, ApiError } from './api.js';
import { Dashboard } from './dashboard.js';
import { BoardEditor } from './editor.js';
import { QueueView } from './queue.js';
import type { ValidationItem, Verdict } from './types.js';

/** Top-level app: review tab (queue + editor) and dashboard tab.
 * All server state flows through the ApiClient; the UI itself never
 * mutates anything except via the documented POST endpoints. */
export class App {
  readonly root: HTMLElement;
  readonly queue: QueueView;
  readonly dashboard: Dashboard;
  private editor: BoardEditor | null = null;
  private editorHost: HTMLElement;
  private tabs!: { review: HTMLButtonElement; dashboard: HTMLButtonElement };
  private panels!: { review: HTMLElement; dashboard: HTMLElement };
  private pending: ValidationItem[] = [];

  constructor(
    private readonly doc: Document,
    readonly api: ApiClient,
    dashboardPollMs = 2000,
  ) {
    this.root = doc.createElement('div');
    this.root.className = 'app';
    this.queue = new QueueView(doc, { onOpen: (item) => void this.openEditor(item) });
    this.dashboard = new Dashboard(doc, api, dashboardPollMs);
    this.editorHost = doc.createElement('div');
    this.render();
    this.doc.addEventListener('keydown', (event) => this.onKey(event as KeyboardEvent));
  }

  private render(): void {
    const doc = this.doc;
    const header = doc.createElement('header');
    const title = doc.createElement('h1');
    title.textContent = 'Board review';
    const nav = doc.createElement('nav');
    const reviewTab = doc.createElement('button');
    reviewTab.textContent = 'Review queue';
    reviewTab.className = 'tab active';
    const dashboardTab = doc.createElement('button');
    dashboardTab.textContent = 'Dashboard';
    dashboardTab.className = 'tab';
    nav.append(reviewTab, dashboardTab);
    header.append(title, nav);

    const reviewPanel = doc.createElement('div');
    reviewPanel.className = 'panel';
    reviewPanel.append(this.queue.root, this.editorHost);
    const dashboardPanel = doc.createElement('div');
    dashboardPanel.className = 'panel hidden';
    dashboardPanel.append(this.dashboard.root);

    reviewTab.addEventListener('click', () => this.showTab('review'));
    dashboardTab.addEventListener('click', () => this.showTab('dashboard'));
    this.tabs = { review: reviewTab, dashboard: dashboardTab };
    this.panels = { review: reviewPanel, dashboard: dashboardPanel };

    this.root.append(header, reviewPanel, dashboardPanel);
  }

  showTab(name: 'review' | 'dashboard'): void {
    const isReview = name === 'review';
    this.tabs.review.classList.toggle('active', isReview);
    this.tabs.dashboard.classList.toggle('active', !isReview);
    this.panels.review.classList.toggle('hidden', !isReview);
    this.panels.dashboard.classList.toggle('hidden', isReview);
  }

  async start(): Promise<void> {
    await this.refreshQueue();
    this.dashboard.start();
  }

  async refreshQueue(): Promise<void> {
    try {
      const { items } = await this.api.listValidations('pending');
      this.pending = items;
      this.queue.renderItems(items);
    } catch (err) {
      const message =
        err instanceof ApiError && err.code === 'unreachable'
          ? 'API unreachable; your queue is safe on the server.'
          : `Could not load the queue: ${err instanceof Error ? err.message : err}`;
      this.queue.renderError(message, () => void this.refreshQueue());
    }
  }

  async openEditor(item: ValidationItem): Promise<void> {
    const detail = await this.api.getValidation(item.item_id);
    this.editor = new BoardEditor(this.doc, detail, {
      onSubmit: async (verdict: Verdict) => {
        await this.api.submitVerdict(item.item_id, verdict);
        this.closeEditor();
        await this.refreshQueue();
      },
      onClose: () => this.closeEditor(),
    });
    this.editorHost.replaceChildren(this.editor.root);
    this.queue.root.classList.add('hidden');
  }

  closeEditor(): void {
    this.editor = null;
    this.editorHost.replaceChildren();
    this.queue.root.classList.remove('hidden');
  }

  /** Reviewer shortcuts: 'a' accepts the open item, 'n' goes back and the
   * next queue entry can be opened with Enter on its Review button. */
  private onKey(event: KeyboardEvent): void {
    if (!this.editor) return;
    if (event.key === 'a') {
      void this.editor.submit();
    } else if (event.key === 'n') {
      this.closeEditor();
    }
  }
}

export function boot(doc: Document, base = ''): App {
  const api = new ApiClient(base);
  const app = new App(doc, api);
  doc.body.appendChild(app.root);
  void app.start();
  return app;
}
