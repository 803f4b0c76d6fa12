import type {
  ItemDetail,
  LabelingSummary,
  MetricPoint,
  MonitorStatus,
  RunSummary,
  ValidationItem,
  Verdict,
} from './types.js';

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

type FetchLike = typeof fetch;

/** Thin typed client over the review API; all server mutation goes
 * through these POST endpoints and nothing else. */
export class ApiClient {
  constructor(
    private readonly base = '',
    private readonly fetchFn: FetchLike = (...args) => fetch(...args),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchFn(this.base + path, init);
    } catch (err) {
      throw new ApiError(0, 'unreachable', `API unreachable: ${String(err)}`);
    }
    const body = await response.json().catch(() => null);
    if (!response.ok) {
      const code = body?.code ?? 'error';
      const message = body?.message ?? `request failed with ${response.status}`;
      throw new ApiError(response.status, code, message);
    }
    return body as T;
  }

  listValidations(status?: string): Promise<{ items: ValidationItem[] }> {
    const query = status ? `?status=${encodeURIComponent(status)}` : '';
    return this.request(`/api/validations${query}`);
  }

  getValidation(itemId: string): Promise<ItemDetail> {
    return this.request(`/api/validations/${encodeURIComponent(itemId)}`);
  }

  submitVerdict(itemId: string, verdict: Verdict): Promise<ValidationItem> {
    return this.request(`/api/validations/${encodeURIComponent(itemId)}`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(verdict),
    });
  }

  runLabeling(): Promise<LabelingSummary> {
    return this.request('/api/labeling/run', { method: 'POST' });
  }

  monitorStatus(): Promise<MonitorStatus> {
    return this.request('/api/monitor/status');
  }

  listRuns(): Promise<{ runs: RunSummary[] }> {
    return this.request('/api/runs');
  }

  metricSeries(runId: string, key: string): Promise<{ series: MetricPoint[] }> {
    return this.request(
      `/api/runs/${encodeURIComponent(runId)}/metrics/${encodeURIComponent(key)}`,
    );
  }
}
