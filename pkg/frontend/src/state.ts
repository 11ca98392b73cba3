/** Pure review-state logic.
 *
 * The server is the single source of truth for statistics; these
 * helpers only manage the client's view: optimistic decision updates
 * reconciled against server responses, pending counts, and the
 * finalize gate (impossible while any candidate is pending).
 */

import type { CandidateEntry, SessionState } from './types.js';

export function pendingCount(state: SessionState): number {
  return state.candidates.filter((c) => c.decision === 'pending').length;
}

export function canFinalize(state: SessionState): boolean {
  return !state.finalized && pendingCount(state) === 0;
}

export function decisionsLocked(state: SessionState): boolean {
  return state.finalized;
}

/** Optimistic local update; the caller reconciles with the server's
 * response via `reconcile`. */
export function withDecision(
  state: SessionState,
  candidateId: number,
  keep: boolean,
): SessionState {
  const candidates = state.candidates.map((c) =>
    c.id === candidateId ? { ...c, decision: keep ? 'keep' : 'discard' } : c,
  ) as CandidateEntry[];
  return {
    ...state,
    candidates,
    pending_count: candidates.filter((c) => c.decision === 'pending').length,
  };
}

/** Server state wins over any optimistic guess. */
export function reconcile(
  _local: SessionState,
  server: SessionState,
): SessionState {
  return server;
}

/** Candidates arrive ordered by ascending p-value; assert rather than
 * re-sort so a server-order bug is visible, not hidden. */
export function isAscendingByP(state: SessionState): boolean {
  const ps = state.candidates.map((c) => c.p_value);
  return ps.every((p, i) => i === 0 || ps[i - 1] <= p);
}

export function progressLabel(state: SessionState): string {
  const total = state.candidates.length;
  const done = total - pendingCount(state);
  return `${done}/${total} decided`;
}
