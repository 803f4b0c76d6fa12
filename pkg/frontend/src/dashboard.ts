import type { ApiClient } from './api.js';
import type { MonitorStatus, RunSummary } from './types.js';

const METRIC_CHOICES = ['accuracy', 'median_latency_s', 'median_energy_j'];

/** Run comparison table/chart plus the QR-style monitor badge.
 * The badge polls the monitor endpoint every two seconds. */
export class Dashboard {
  readonly root: HTMLElement;
  private badge!: HTMLElement;
  private runsBox!: HTMLElement;
  private metricSelect!: HTMLSelectElement;
  private labelingStatus!: HTMLElement;
  private timer: ReturnType<typeof setInterval> | null = null;

  constructor(
    private readonly doc: Document,
    private readonly api: ApiClient,
    private readonly pollMs = 2000,
  ) {
    this.root = doc.createElement('section');
    this.root.className = 'dashboard';
    this.render();
  }

  private render(): void {
    const doc = this.doc;
    const heading = doc.createElement('h2');
    heading.textContent = 'Runs and monitoring';

    this.badge = doc.createElement('div');
    this.badge.className = 'badge unknown';
    this.badge.textContent = 'monitor: loading';

    const controls = doc.createElement('div');
    controls.className = 'dashboard-controls';
    this.metricSelect = doc.createElement('select');
    for (const key of METRIC_CHOICES) {
      const option = doc.createElement('option');
      option.value = key;
      option.textContent = key;
      this.metricSelect.appendChild(option);
    }
    this.metricSelect.addEventListener('change', () => void this.refreshRuns());
    const labeling = doc.createElement('button');
    labeling.className = 'run-labeling';
    labeling.textContent = 'Run labeling job';
    labeling.addEventListener('click', () => void this.runLabeling());
    controls.append(this.metricSelect, labeling);

    this.labelingStatus = doc.createElement('p');
    this.labelingStatus.className = 'labeling-status';

    this.runsBox = doc.createElement('div');
    this.runsBox.className = 'runs';

    this.root.append(heading, this.badge, controls, this.labelingStatus, this.runsBox);
  }

  start(): void {
    void this.refreshMonitor();
    void this.refreshRuns();
    if (this.pollMs > 0 && this.timer === null) {
      this.timer = setInterval(() => void this.refreshMonitor(), this.pollMs);
    }
  }

  stop(): void {
    if (this.timer !== null) {
      clearInterval(this.timer);
      this.timer = null;
    }
  }

  async refreshMonitor(): Promise<MonitorStatus | null> {
    try {
      const status = await this.api.monitorStatus();
      const threshold = (status.accuracy_threshold * 100).toFixed(0);
      if (status.no_data) {
        this.badge.className = 'badge unknown';
        this.badge.textContent = 'monitor: no validated boards yet';
      } else if (status.alert) {
        this.badge.className = 'badge alert';
        this.badge.textContent =
          `ALERT: windowed accuracy ${(status.accuracy! * 100).toFixed(1)}% ` +
          `below the ${threshold}% requirement`;
      } else {
        this.badge.className = 'badge ok';
        this.badge.textContent =
          `monitor: accuracy ${(status.accuracy! * 100).toFixed(1)}% ` +
          `(>= ${threshold}%), ${status.latency_violations} latency violations`;
      }
      return status;
    } catch {
      this.badge.className = 'badge unknown';
      this.badge.textContent = 'monitor: API unreachable';
      return null;
    }
  }

  async refreshRuns(): Promise<void> {
    const metric = this.metricSelect.value || METRIC_CHOICES[0];
    let runs: RunSummary[];
    try {
      runs = (await this.api.listRuns()).runs;
    } catch {
      this.runsBox.replaceChildren();
      const error = this.doc.createElement('div');
      error.className = 'error-banner';
      error.textContent = 'Could not load runs.';
      this.runsBox.appendChild(error);
      return;
    }
    this.runsBox.replaceChildren();
    if (runs.length === 0) {
      const empty = this.doc.createElement('p');
      empty.className = 'empty-state';
      empty.textContent = 'No tracked runs yet; run a benchmark first.';
      this.runsBox.appendChild(empty);
      return;
    }
    const values = new Map<string, number | null>();
    await Promise.all(
      runs.map(async (run) => {
        try {
          const { series } = await this.api.metricSeries(run.run_id, metric);
          values.set(run.run_id, series.length ? series[series.length - 1].value : null);
        } catch {
          values.set(run.run_id, null);
        }
      }),
    );
    const present = [...values.values()].filter((v): v is number => v !== null);
    const best = metric === 'accuracy' ? Math.max(...present) : Math.min(...present);
    const scale = Math.max(...present.map(Math.abs), 1e-12);

    const table = this.doc.createElement('table');
    table.className = 'runs-table';
    const head = this.doc.createElement('tr');
    for (const column of ['run', 'algorithm', metric, '']) {
      const th = this.doc.createElement('th');
      th.textContent = column;
      head.appendChild(th);
    }
    table.appendChild(head);
    for (const run of runs) {
      const value = values.get(run.run_id) ?? null;
      const tr = this.doc.createElement('tr');
      tr.className = value !== null && value === best ? 'best-run' : '';
      const cells = [
        run.run_id,
        run.params['algorithm'] ?? '-',
        value === null ? 'n/a' : value.toPrecision(4),
      ];
      for (const text of cells) {
        const td = this.doc.createElement('td');
        td.textContent = text;
        tr.appendChild(td);
      }
      const barCell = this.doc.createElement('td');
      barCell.className = 'bar-cell';
      if (value !== null) {
        const bar = this.doc.createElement('div');
        bar.className = 'bar';
        bar.style.width = `${Math.max(2, (Math.abs(value) / scale) * 100).toFixed(1)}%`;
        barCell.appendChild(bar);
      }
      tr.appendChild(barCell);
      table.appendChild(tr);
    }
    this.runsBox.appendChild(table);
  }

  private async runLabeling(): Promise<void> {
    try {
      const summary = await this.api.runLabeling();
      this.labelingStatus.textContent =
        `Labeling job wrote ${summary.rows} rows from ${summary.items} validated boards.`;
    } catch (err) {
      this.labelingStatus.textContent = `Labeling failed: ${
        err instanceof Error ? err.message : String(err)
      }`;
    }
  }
}
