// Thin typed client over the service HTTP API. One method per endpoint;
// every mutating UI action maps to exactly one call here.

import type {
  AmbiguityEntry,
  MetricsResponse,
  ResolutionResponse,
  ReviewListItem,
  ReviewPage,
} from './types.js';

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
    this.name = 'ApiError';
  }
}

export interface ClientOptions {
  fetchImpl?: typeof fetch;
  authToken?: string;
}

export class ApiClient {
  private fetchImpl: typeof fetch;
  private authToken?: string;

  constructor(public baseUrl: string, options: ClientOptions = {}) {
    this.fetchImpl = options.fetchImpl ?? fetch.bind(globalThis);
    this.authToken = options.authToken;
    this.baseUrl = baseUrl.replace(/\/+$/, '');
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const headers: Record<string, string> = { 'content-type': 'application/json' };
    if (this.authToken) {
      headers['authorization'] = `Bearer ${this.authToken}`;
    }
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const text = await response.text();
    if (!response.ok) {
      throw new ApiError(response.status, text || response.statusText);
    }
    return JSON.parse(text) as T;
  }

  listReviews(state = 'pending', cursor?: string, limit?: number): Promise<ReviewPage> {
    const params = new URLSearchParams({ state });
    if (cursor) params.set('cursor', cursor);
    if (limit) params.set('limit', String(limit));
    return this.request<ReviewPage>('GET', `/v1/reviews?${params}`);
  }

  getReview(messageId: string, state: string): Promise<ReviewListItem | undefined> {
    // the API has no single-message GET; refreshing one row rescans the list
    return this.collectReviews(state).then(
      (items) => items.find((m) => m.message_id === messageId),
    );
  }

  async collectReviews(state = 'pending'): Promise<ReviewListItem[]> {
    const items: ReviewListItem[] = [];
    let cursor: string | undefined;
    do {
      const page = await this.listReviews(state, cursor);
      items.push(...page.items);
      cursor = page.next_cursor ?? undefined;
    } while (cursor);
    return items;
  }

  decide(messageId: string, decision: 'accept' | 'discard', actor: string): Promise<ReviewListItem> {
    return this.request<ReviewListItem>(
      'POST', `/v1/reviews/${encodeURIComponent(messageId)}/decision`,
      { decision, actor },
    );
  }

  listAmbiguities(): Promise<{ items: AmbiguityEntry[] }> {
    return this.request<{ items: AmbiguityEntry[] }>('GET', '/v1/ambiguities');
  }

  resolveAmbiguity(queueId: string, nodeId: string | null, actor: string): Promise<ResolutionResponse> {
    const body = nodeId === null ? { reject: true, actor } : { node_id: nodeId, actor };
    return this.request<ResolutionResponse>(
      'POST', `/v1/ambiguities/${encodeURIComponent(queueId)}/resolution`, body,
    );
  }

  metrics(): Promise<MetricsResponse> {
    return this.request<MetricsResponse>('GET', '/v1/metrics');
  }

  metricsRaw(): Promise<string> {
    // raw body so the dashboard can assert byte-for-byte agreement
    return this.fetchImpl(`${this.baseUrl}/v1/metrics`, {
      headers: this.authToken ? { authorization: `Bearer ${this.authToken}` } : {},
    }).then(async (response) => {
      if (!response.ok) throw new ApiError(response.status, response.statusText);
      return response.text();
    });
  }
}

export function resolveBaseUrl(): string {
  const fromWindow = (globalThis as { CW_BASE_URL?: string }).CW_BASE_URL;
  if (fromWindow) return fromWindow;
  if (typeof process !== 'undefined' && process.env && process.env.CW_BASE_URL) {
    return process.env.CW_BASE_URL;
  }
  return 'http://127.0.0.1:8040';
}
