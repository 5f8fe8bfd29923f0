// Browser bootstrap: tabs, polling, and event wiring for the three screens.

import { ApiClient, ApiError, resolveBaseUrl } from './api.js';
import {
  DEFAULT_POLL_MS,
  FreshnessState,
  ReviewQueueState,
  applyConflict,
  applyDecision,
  applyPoll,
  emptyQueue,
  markFresh,
  markStale,
  startPolling,
} from './state.js';
import { renderAmbiguities, renderMetrics, renderRetryBanner, renderReviewQueue } from './views.js';
import type { AmbiguityEntry, MetricsResponse } from './types.js';

const api = new ApiClient(resolveBaseUrl());

let queue: ReviewQueueState = emptyQueue();
let ambiguities: AmbiguityEntry[] = [];
let ambiguityTexts = new Map<string, string>();
let metrics: MetricsResponse | null = null;
let freshness: FreshnessState = { lastUpdated: null, stale: false };

function el(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node;
}

function paint(): void {
  el('review-queue').innerHTML = renderReviewQueue(queue);
  el('ambiguity-list').innerHTML = renderAmbiguities(ambiguities, ambiguityTexts);
  if (metrics) {
    el('metrics').innerHTML = renderMetrics({
      metrics,
      stale: freshness.stale,
      lastUpdated: freshness.lastUpdated,
    });
  }
}

async function refreshAll(): Promise<void> {
  try {
    const [pending, blocked, open, stats] = await Promise.all([
      api.collectReviews('pending'),
      api.collectReviews('blocked'),
      api.listAmbiguities(),
      api.metrics(),
    ]);
    queue = applyPoll(queue, pending);
    ambiguities = open.items;
    ambiguityTexts = new Map(blocked.map((m) => [m.message_id, m.raw_message]));
    metrics = stats;
    freshness = markFresh();
    el('banner').innerHTML = '';
  } catch (error) {
    freshness = markStale(freshness);
    el('banner').innerHTML = renderRetryBanner(String(error));
  }
  paint();
}

async function onDecision(messageId: string, decision: 'accept' | 'discard'): Promise<void> {
  try {
    const decided = await api.decide(messageId, decision, 'console');
    queue = applyDecision(queue, decided);
    metrics = await api.metrics(); // tile updates without waiting for the poll
  } catch (error) {
    if (error instanceof ApiError && error.status === 409) {
      const refreshed = await api.getReview(messageId, 'pending')
        ?? await api.getReview(messageId, 'accepted')
        ?? await api.getReview(messageId, 'discarded');
      queue = applyConflict(queue, messageId, refreshed);
    } else {
      el('banner').innerHTML = renderRetryBanner(String(error));
    }
  }
  paint();
}

async function onResolution(queueId: string, nodeId: string | null): Promise<void> {
  try {
    await api.resolveAmbiguity(queueId, nodeId, 'console');
    ambiguities = ambiguities.filter((entry) => entry.queue_id !== queueId);
  } catch (error) {
    if (error instanceof ApiError && (error.status === 409 || error.status === 404)) {
      ambiguities = ambiguities.filter((entry) => entry.queue_id !== queueId);
    } else {
      el('banner').innerHTML = renderRetryBanner(String(error));
    }
  }
  paint();
  void refreshAll(); // the unblocked message shows up in the review queue
}

function wireEvents(): void {
  document.body.addEventListener('click', (event) => {
    const target = event.target as HTMLElement;
    const action = target.dataset.action;
    if (!action) return;
    if (action === 'accept' || action === 'discard') {
      void onDecision(target.dataset.messageId!, action);
    } else if (action === 'choose') {
      void onResolution(target.dataset.queueId!, target.dataset.nodeId!);
    } else if (action === 'reject') {
      void onResolution(target.dataset.queueId!, null);
    } else if (action === 'tab') {
      document.querySelectorAll('.screen').forEach((screen) => {
        (screen as HTMLElement).hidden = screen.id !== target.dataset.target;
      });
    }
  });
}

export function boot(): void {
  wireEvents();
  startPolling(refreshAll, DEFAULT_POLL_MS);
}

if (typeof document !== 'undefined') {
  document.addEventListener('DOMContentLoaded', boot);
}
