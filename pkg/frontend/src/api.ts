/** Minimal client for the review-session protocol.
 *
 * Every request carries the session token; errors surface as
 * `SessionApiError` with the server's error code so the UI can react
 * (BadToken, UnknownCandidate, AlreadyFinalized, CandidatesPending).
 */

import type {
  FinalizeResponse,
  PlotResponse,
  SessionState,
} from './types.js';

export class SessionApiError extends Error {
  constructor(
    readonly code: string,
    readonly status: number,
    readonly pendingCount?: number,
  ) {
    super(`${code} (http ${status})`);
  }
}

export class SessionClient {
  constructor(
    private readonly baseUrl: string,
    private readonly token: string,
    private readonly fetchFn: typeof fetch = fetch,
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`, {
      ...init,
      headers: {
        'Content-Type': 'application/json',
        'X-Session-Token': this.token,
        ...(init?.headers ?? {}),
      },
    });
    const body = await response.json();
    if (!response.ok) {
      throw new SessionApiError(
        body?.error ?? 'UnknownError',
        response.status,
        body?.pending_count,
      );
    }
    return body as T;
  }

  fetchSession(): Promise<SessionState> {
    return this.request<SessionState>('/session');
  }

  fetchPlot(candidateId: number): Promise<PlotResponse> {
    return this.request<PlotResponse>(`/candidates/${candidateId}/plot`);
  }

  submitDecision(candidateId: number, keep: boolean): Promise<SessionState> {
    return this.request<SessionState>('/decisions', {
      method: 'POST',
      body: JSON.stringify({ candidate_id: candidateId, keep }),
    });
  }

  finalize(): Promise<FinalizeResponse> {
    return this.request<FinalizeResponse>('/finalize', {
      method: 'POST',
      body: '{}',
    });
  }
}
