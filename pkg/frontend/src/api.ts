/**
 * Thin client for the procscope HTTP API under /api/v1.
 *
 * All numbers shown anywhere in the UI originate from these responses; the
 * client never recomputes selections or graph metrics locally. The fetch
 * implementation is injectable so tests can count and stub requests.
 */
import type {
  GraphJson,
  GraphViewSettings,
  LogInfo,
  ScopePayload,
  ScopeSummary,
} from './types.js';

export interface ApiError {
  status: number;
  error: string;
  message: string;
  body: unknown;
}

export class Api {
  constructor(
    private readonly base: string = '',
    private readonly fetchFn: typeof fetch = (...args) => fetch(...args),
  ) {}

  private async request(path: string, init?: RequestInit): Promise<Response> {
    const response = await this.fetchFn(`${this.base}/api/v1${path}`, init);
    if (!response.ok) {
      let body: unknown = null;
      try {
        body = await response.json();
      } catch {
        body = null;
      }
      const detail = (body ?? {}) as { error?: string; message?: string };
      throw <ApiError>{
        status: response.status,
        error: detail.error ?? `http-${response.status}`,
        message: detail.message ?? response.statusText,
        body,
      };
    }
    return response;
  }

  async uploadLog(content: string | Blob): Promise<LogInfo> {
    const response = await this.request('/logs', {
      method: 'POST',
      body: content,
      headers: { 'content-type': 'application/json' },
    });
    return response.json();
  }

  async putScopes(logId: string, scopes: ScopePayload[]): Promise<void> {
    await this.request(`/logs/${logId}/scopes`, {
      method: 'PUT',
      body: JSON.stringify(scopes),
      headers: { 'content-type': 'application/json' },
    });
  }

  async enrich(logId: string): Promise<ScopeSummary[]> {
    const response = await this.request(`/logs/${logId}/enrich`, { method: 'POST' });
    return (await response.json()).scopes;
  }

  /** Full-fidelity graph; restyling afterwards needs no further requests. */
  async graph(logId: string): Promise<GraphJson> {
    const response = await this.request(`/logs/${logId}/graph`);
    return response.json();
  }

  async pocel(logId: string): Promise<Blob> {
    return (await this.request(`/logs/${logId}/pocel`)).blob();
  }

  async graphVos(logId: string): Promise<Blob> {
    return (await this.request(`/logs/${logId}/graph.vos`)).blob();
  }

  dotUrl(logId: string, settings: GraphViewSettings): string {
    const query = new URLSearchParams(settings as unknown as Record<string, string>);
    return `${this.base}/api/v1/logs/${logId}/graph.dot?${query}`;
  }
}
