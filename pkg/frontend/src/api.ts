// Typed client for the model-server API. Query strings are built
// deterministically (context axes in model order, numeric levels) so
// identical requests hit identical URLs.

import type {
  AggregateResponse,
  LayoutResponse,
  ModelResponse,
  RiskRef,
  SliceResponse,
  ViolationsResponse,
  WalkResponse,
} from "./types.js";

export type FetchLike = (url: string) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly url: string,
    message: string,
  ) {
    super(`${status} ${url}: ${message}`);
  }
}

export function sigmaQuery(
  sigma: Record<string, number>,
  axisOrder: string[],
): string {
  return axisOrder
    .filter((axis) => axis in sigma)
    .map((axis) => `${encodeURIComponent(axis)}=${sigma[axis]}`)
    .join("&");
}

export class ApiClient {
  constructor(
    private readonly fetchImpl: FetchLike = (url) => fetch(url),
    private readonly baseUrl: string = "",
  ) {}

  private async getJson<T>(url: string): Promise<T> {
    const response = await this.fetchImpl(this.baseUrl + url);
    if (!response.ok) {
      const body = await response.text();
      throw new ApiError(response.status, url, body);
    }
    return (await response.json()) as T;
  }

  getModel(): Promise<ModelResponse> {
    return this.getJson("/api/model");
  }

  getLayout(): Promise<LayoutResponse> {
    return this.getJson("/api/layout");
  }

  getSlice(
    sigma: Record<string, number>,
    axisOrder: string[],
  ): Promise<SliceResponse> {
    return this.getJson(`/api/slice?${sigmaQuery(sigma, axisOrder)}`);
  }

  getAggregate(
    sigma: Record<string, number>,
    axisOrder: string[],
    risk: RiskRef,
  ): Promise<AggregateResponse> {
    const query = sigmaQuery(sigma, axisOrder);
    return this.getJson(
      `/api/aggregate?${query}&risk=${risk.likelihood},${risk.impact}`,
    );
  }

  getWalk(
    vary: string,
    fixed: Record<string, number>,
    axisOrder: string[],
    risk: RiskRef,
  ): Promise<WalkResponse> {
    const query = sigmaQuery(fixed, axisOrder);
    const sep = query ? `&${query}` : "";
    return this.getJson(
      `/api/walk?vary=${encodeURIComponent(vary)}${sep}` +
        `&risk=${risk.likelihood},${risk.impact}`,
    );
  }

  getViolations(state: number[]): Promise<ViolationsResponse> {
    return this.getJson(`/api/violations?state=${state.join(",")}`);
  }

  async putModel(document: unknown): Promise<{ revision: number }> {
    const response = await fetch(this.baseUrl + "/api/model", {
      method: "PUT",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(document),
    });
    if (!response.ok) {
      throw new ApiError(response.status, "/api/model", await response.text());
    }
    return (await response.json()) as { revision: number };
  }
}

/**
 * Latest-wins guard: at most one logical in-flight request per key. When a
 * newer run() supersedes an older one, the older promise resolves to null
 * and its result is dropped.
 */
export class LatestWins {
  private tokens = new Map<string, number>();

  async run<T>(key: string, work: () => Promise<T>): Promise<T | null> {
    const token = (this.tokens.get(key) ?? 0) + 1;
    this.tokens.set(key, token);
    const result = await work();
    return this.tokens.get(key) === token ? result : null;
  }
}
