import type {
  Profile,
  RandomResponse,
  TopResponse,
  TransactionsResponse,
} from './types';

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    detail: string,
  ) {
    super(detail);
    this.name = 'ApiError';
  }
}

export interface ProfileBundle {
  profile: Profile;
  transactions: TransactionsResponse;
}

export class ApiClient {
  private inflightLookup: AbortController | null = null;

  constructor(private readonly base: string) {}

  private async getJson<T>(path: string, signal?: AbortSignal): Promise<T> {
    const response = await fetch(`${this.base}${path}`, { signal });
    if (!response.ok) {
      let detail = `HTTP ${response.status}`;
      try {
        const body = (await response.json()) as { detail?: string };
        if (body.detail) {
          detail = body.detail;
        }
      } catch {
        // keep the generic detail
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  /** Profile + transactions for the detail view. Issuing a new lookup
   * aborts a still-running one: at most one is in flight. */
  async lookup(address: string): Promise<ProfileBundle> {
    this.inflightLookup?.abort();
    const controller = new AbortController();
    this.inflightLookup = controller;
    try {
      const encoded = encodeURIComponent(address);
      const [profile, transactions] = await Promise.all([
        this.getJson<Profile>(`/api/address/${encoded}`, controller.signal),
        this.getJson<TransactionsResponse>(
          `/api/address/${encoded}/transactions`,
          controller.signal,
        ),
      ]);
      return { profile, transactions };
    } finally {
      if (this.inflightLookup === controller) {
        this.inflightLookup = null;
      }
    }
  }

  top(n: number): Promise<TopResponse> {
    return this.getJson<TopResponse>(`/api/top?n=${n}`);
  }

  random(n: number, seed?: number): Promise<RandomResponse> {
    const seedPart = seed === undefined ? '' : `&seed=${seed}`;
    return this.getJson<RandomResponse>(`/api/random?n=${n}${seedPart}`);
  }
}

export function isAbortError(error: unknown): boolean {
  return error instanceof DOMException
    ? error.name === 'AbortError'
    : error instanceof Error && error.name === 'AbortError';
}
