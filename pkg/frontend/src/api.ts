// Thin fetch client for the listing API. Identical concurrent searches
// share one request; StaleGuard lets the caller drop answers that were
// overtaken by a newer query.

import { FilterState, toApiQuery } from './filter-state.js';
import { DamageDetail, SearchResponse } from './types.js';

export class AssessmentPending extends Error {
  constructor(public propertyId: string, public taskIds: string[]) {
    super(`assessment pending for ${propertyId}`);
  }
}

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  private inflight = new Map<string, Promise<SearchResponse>>();

  constructor(
    private baseUrl = '',
    private fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  /** GET /properties; concurrent calls with the same query share a request. */
  search(state: FilterState): Promise<SearchResponse> {
    const query = toApiQuery(state);
    const existing = this.inflight.get(query);
    if (existing) return existing;
    const request = this.getJson<SearchResponse>(`/properties?${query}`).finally(() => {
      this.inflight.delete(query);
    });
    this.inflight.set(query, request);
    return request;
  }

  async damageDetail(propertyId: string): Promise<DamageDetail> {
    const response = await this.fetchFn(
      `${this.baseUrl}/properties/${encodeURIComponent(propertyId)}/damage`,
    );
    if (response.status === 409) {
      const body = await response.json();
      throw new AssessmentPending(propertyId, body.task_ids ?? []);
    }
    if (!response.ok) {
      throw new ApiError(response.status, await describeFailure(response));
    }
    return response.json();
  }

  private async getJson<T>(path: string): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`);
    if (!response.ok) {
      throw new ApiError(response.status, await describeFailure(response));
    }
    return response.json();
  }
}

async function describeFailure(response: Response): Promise<string> {
  try {
    const body = await response.json();
    return body.detail ?? body.error ?? `HTTP ${response.status}`;
  } catch {
    return `HTTP ${response.status}`;
  }
}

/** Monotonic ticket counter: only the newest issued ticket is current. */
export class StaleGuard {
  private seq = 0;

  issue(): number {
    return ++this.seq;
  }

  isCurrent(ticket: number): boolean {
    return ticket === this.seq;
  }
}
