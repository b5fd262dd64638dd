/**
 * Service client with an injectable transport (tests swap in a mock) and
 * request-token bookkeeping so out-of-order responses are dropped.
 */

import type { BoroughTable, EstimateRequest, EstimateResponse } from "./types.js";

export interface Transport {
  get(path: string): Promise<unknown>;
  post(path: string, body: unknown): Promise<unknown>;
}

export class ServiceError extends Error {
  constructor(message: string, readonly status?: number) {
    super(message);
  }
}

export function fetchTransport(baseUrl: string): Transport {
  const request = async (path: string, init?: RequestInit): Promise<unknown> => {
    const response = await fetch(baseUrl + path, init);
    const payload = await response.json().catch(() => ({}));
    if (!response.ok) {
      const detail = (payload as { detail?: string; error?: string }) ?? {};
      throw new ServiceError(detail.detail ?? detail.error ?? `HTTP ${response.status}`, response.status);
    }
    return payload;
  };
  return {
    get: (path) => request(path),
    post: (path, body) =>
      request(path, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(body),
      }),
  };
}

export class ApiClient {
  constructor(private readonly transport: Transport) {}

  health(): Promise<unknown> {
    return this.transport.get("/health");
  }

  estimate(request: EstimateRequest): Promise<EstimateResponse> {
    return this.transport.post("/estimate", request) as Promise<EstimateResponse>;
  }

  boroughs(metric: string): Promise<BoroughTable> {
    return this.transport.get(`/boroughs?metric=${encodeURIComponent(metric)}`) as Promise<BoroughTable>;
  }
}

/** Outcome of one tracked request: applied, or dropped as stale/failed. */
export type TrackedResult<T> =
  | { kind: "applied"; value: T }
  | { kind: "stale" }
  | { kind: "failed"; error: unknown };

/**
 * Serialises a panel's requests: each call gets a token and only the most
 * recently issued request may apply its answer, so a slow early response
 * can never overwrite a fresh one.
 */
export class LatestRequestGate {
  private token = 0;

  issue(): number {
    return ++this.token;
  }

  isCurrent(token: number): boolean {
    return token === this.token;
  }

  async track<T>(work: () => Promise<T>): Promise<TrackedResult<T>> {
    const token = this.issue();
    try {
      const value = await work();
      return this.isCurrent(token) ? { kind: "applied", value } : { kind: "stale" };
    } catch (error) {
      return this.isCurrent(token) ? { kind: "failed", error } : { kind: "stale" };
    }
  }
}

/** Trailing-edge debounce used by the what-if panel's inputs. */
export function debounce<A extends unknown[]>(fn: (...args: A) => void, waitMs: number): (...args: A) => void {
  let timer: ReturnType<typeof setTimeout> | undefined;
  return (...args: A) => {
    if (timer !== undefined) clearTimeout(timer);
    timer = setTimeout(() => fn(...args), waitMs);
  };
}
