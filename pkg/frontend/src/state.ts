// Client-side list state. The server is the source of truth; this module
// only reconciles what polling and user actions report back, so decided
// rows leave without a full reload and conflicts refresh in place.

import type { ReviewListItem } from './types.js';

export interface RowNotice {
  messageId: string;
  text: string;
}

export interface ReviewQueueState {
  rows: ReviewListItem[];
  notices: RowNotice[];
}

export function emptyQueue(): ReviewQueueState {
  return { rows: [], notices: [] };
}

export function applyPoll(state: ReviewQueueState, fresh: ReviewListItem[]): ReviewQueueState {
  return {
    rows: fresh.filter((row) => row.state === 'pending'),
    notices: state.notices.filter(
      (n) => fresh.some((row) => row.message_id === n.messageId),
    ),
  };
}

export function applyDecision(state: ReviewQueueState, decided: ReviewListItem): ReviewQueueState {
  // decided rows leave the pending list immediately, no reload needed
  return {
    rows: state.rows.filter((row) => row.message_id !== decided.message_id),
    notices: state.notices.filter((n) => n.messageId !== decided.message_id),
  };
}

export function applyConflict(
  state: ReviewQueueState,
  messageId: string,
  refreshed: ReviewListItem | undefined,
): ReviewQueueState {
  // 409: someone else decided first; surface a notice and refresh the row
  const rows = refreshed && refreshed.state === 'pending'
    ? state.rows.map((row) => (row.message_id === messageId ? refreshed : row))
    : state.rows.filter((row) => row.message_id !== messageId);
  const notice: RowNotice = {
    messageId,
    text: refreshed
      ? `already decided elsewhere (now ${refreshed.state})`
      : 'already decided elsewhere',
  };
  return {
    rows,
    notices: [...state.notices.filter((n) => n.messageId !== messageId), notice],
  };
}

export interface FreshnessState {
  lastUpdated: Date | null;
  stale: boolean;
}

export function markFresh(): FreshnessState {
  return { lastUpdated: new Date(), stale: false };
}

export function markStale(previous: FreshnessState): FreshnessState {
  return { lastUpdated: previous.lastUpdated, stale: true };
}

export const DEFAULT_POLL_MS = 10_000;

export interface Poller {
  stop(): void;
  tick(): Promise<void>;
}

export function startPolling(
  fn: () => Promise<void>,
  periodMs: number = DEFAULT_POLL_MS,
  scheduler: Pick<typeof globalThis, 'setInterval' | 'clearInterval'> = globalThis,
): Poller {
  let inFlight = false;
  const tick = async () => {
    if (inFlight) return; // overlapping ticks are skipped, not queued
    inFlight = true;
    try {
      await fn();
    } finally {
      inFlight = false;
    }
  };
  void tick();
  const handle = scheduler.setInterval(() => { void tick(); }, periodMs);
  return {
    stop: () => scheduler.clearInterval(handle as never),
    tick,
  };
}
