import { describe, expect, it } from 'vitest';

import {
  canFinalize,
  decisionsLocked,
  isAscendingByP,
  pendingCount,
  progressLabel,
  reconcile,
  withDecision,
} from '../src/state.js';
import type { SessionState } from '../src/types.js';

function state(decisions: Array<'pending' | 'keep' | 'discard'>,
               finalized = false): SessionState {
  return {
    session_id: 's',
    finalized,
    pending_count: decisions.filter((d) => d === 'pending').length,
    candidates: decisions.map((decision, i) => ({
      id: i + 1,
      key: `sq:${i + 1}`,
      kind: 'squared' as const,
      label: `x${i + 1}^2`,
      var_a: i + 1,
      var_b: null,
      p_value: 0.001 * (i + 1),
      test_statistic: 3.5 - i * 0.1,
      decision,
    })),
  };
}

describe('finalize gating', () => {
  it('is blocked while any candidate is pending', () => {
    expect(canFinalize(state(['keep', 'pending']))).toBe(false);
    expect(canFinalize(state(['pending', 'pending']))).toBe(false);
  });

  it('opens once every candidate is decided', () => {
    expect(canFinalize(state(['keep', 'discard']))).toBe(true);
  });

  it('closes again after the session is finalized', () => {
    expect(canFinalize(state(['keep', 'discard'], true))).toBe(false);
    expect(decisionsLocked(state(['keep', 'discard'], true))).toBe(true);
  });

  it('an empty session can finalize immediately', () => {
    expect(canFinalize(state([]))).toBe(true);
  });
});

describe('optimistic decisions', () => {
  it('updates one candidate and the pending count', () => {
    const next = withDecision(state(['pending', 'pending']), 2, true);
    expect(next.candidates[1].decision).toBe('keep');
    expect(next.candidates[0].decision).toBe('pending');
    expect(pendingCount(next)).toBe(1);
  });

  it('overwrites a previous decision before finalize', () => {
    const once = withDecision(state(['pending']), 1, false);
    const twice = withDecision(once, 1, true);
    expect(twice.candidates[0].decision).toBe('keep');
  });

  it('reconcile prefers the server state', () => {
    const local = withDecision(state(['pending']), 1, true);
    const server = state(['discard']);
    expect(reconcile(local, server)).toBe(server);
  });
});

describe('presentation helpers', () => {
  it('accepts the ascending p-value order the server promises', () => {
    expect(isAscendingByP(state(['pending', 'pending', 'pending']))).toBe(true);
    const shuffled = state(['pending', 'pending']);
    shuffled.candidates[0].p_value = 0.9;
    expect(isAscendingByP(shuffled)).toBe(false);
  });

  it('renders progress', () => {
    expect(progressLabel(state(['keep', 'pending', 'discard']))).toBe('2/3 decided');
  });
});
