/** Typed client for the gaitbench REST API.
 *
 * GET requests are de-duplicated per URL while in flight; mutations always go
 * through. All numbers shown in the UI come from these responses, never from
 * client-side recomputation.
 */

import type {
  FilterState,
  LoadResponse,
  MatchPayload,
  ParametersPayload,
  TreePayload,
} from './types.js';

export class ApiError extends Error {
  constructor(
    public status: number,
    detail: string,
  ) {
    super(detail);
  }
}

export function filterQuery(filter: FilterState): string {
  const params = new URLSearchParams();
  if (filter.genders.length > 0) params.set('gender', filter.genders.join(','));
  const bounds: [string, string][] = [
    ['age_min', filter.ageMin],
    ['age_max', filter.ageMax],
    ['height_min', filter.heightMin],
    ['height_max', filter.heightMax],
    ['mass_min', filter.massMin],
    ['mass_max', filter.massMax],
  ];
  for (const [key, value] of bounds) {
    if (value.trim() !== '') params.set(key, value.trim());
  }
  const text = params.toString();
  return text === '' ? '' : `?${text}`;
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  private inflight = new Map<string, Promise<unknown>>();

  constructor(
    private baseUrl: string,
    private fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async requestJson<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`, init);
    if (!response.ok) {
      let detail = `HTTP ${response.status}`;
      try {
        const doc = (await response.json()) as { detail?: unknown };
        if (doc && typeof doc.detail === 'string') detail = doc.detail;
      } catch {
        // body was not JSON; keep the generic message
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  private getJson<T>(path: string): Promise<T> {
    const pending = this.inflight.get(path);
    if (pending) return pending as Promise<T>;
    const request = this.requestJson<T>(path).finally(() => {
      this.inflight.delete(path);
    });
    this.inflight.set(path, request);
    return request;
  }

  loadTrial(trialText: string): Promise<LoadResponse> {
    return this.requestJson<LoadResponse>('/patients/load', {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: trialText,
    });
  }

  match(filter: FilterState): Promise<MatchPayload> {
    return this.getJson<MatchPayload>(`/match${filterQuery(filter)}`);
  }

  parameters(categoryId: string, filter: FilterState): Promise<ParametersPayload> {
    return this.getJson<ParametersPayload>(
      `/categories/${encodeURIComponent(categoryId)}/parameters${filterQuery(filter)}`,
    );
  }

  tree(): Promise<TreePayload> {
    return this.getJson<TreePayload>('/tree');
  }

  apply(categoryId: string, subset: number[] | null): Promise<MatchPayload> {
    return this.requestJson<MatchPayload>(
      `/categories/${encodeURIComponent(categoryId)}/apply`,
      {
        method: 'POST',
        headers: { 'content-type': 'application/json' },
        body: JSON.stringify(subset && subset.length > 0 ? { subset } : {}),
      },
    );
  }

  reset(categoryId: string): Promise<TreePayload> {
    return this.requestJson<TreePayload>(
      `/categories/${encodeURIComponent(categoryId)}/reset`,
      { method: 'POST' },
    );
  }

  overrideRange(
    categoryId: string,
    stpId: number,
    min: number,
    max: number,
  ): Promise<TreePayload> {
    return this.requestJson<TreePayload>(
      `/categories/${encodeURIComponent(categoryId)}/ranges/${stpId}`,
      {
        method: 'POST',
        headers: { 'content-type': 'application/json' },
        body: JSON.stringify({ min, max }),
      },
    );
  }
}
