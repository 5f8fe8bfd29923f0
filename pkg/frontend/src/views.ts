// HTML builders for the three screens. Pure string-in, string-out so the
// rendering rules are testable without a browser; app.ts owns the DOM.

import { escapeHtml, formatRate, formatScore, formatTimestamp, mentionExcerpt } from './format.js';
import type { ReviewQueueState } from './state.js';
import type { AmbiguityEntry, MetricsResponse } from './types.js';

const DOMAIN_ORDER = ['healthcare', 'education', 'recruitment', 'other'];

export function renderReviewQueue(state: ReviewQueueState): string {
  if (state.rows.length === 0) {
    return '<p class="empty">No pending messages.</p>';
  }
  const rows = state.rows.map((row) => {
    const notice = state.notices.find((n) => n.messageId === row.message_id);
    return `
    <article class="review-row" data-message-id="${escapeHtml(row.message_id)}">
      <header>
        <span class="domain">${escapeHtml(row.domain)}</span>
        <span class="created">${escapeHtml(formatTimestamp(row.created_at))}</span>
      </header>
      ${notice ? `<p class="notice">${escapeHtml(notice.text)}</p>` : ''}
      <div class="texts">
        <section><h4>Original</h4><p>${escapeHtml(row.raw_message)}</p></section>
        <section><h4>Generated</h4><p>${escapeHtml(row.text)}</p></section>
      </div>
      <footer>
        <button data-action="accept" data-message-id="${escapeHtml(row.message_id)}">Accept</button>
        <button data-action="discard" data-message-id="${escapeHtml(row.message_id)}">Discard</button>
      </footer>
    </article>`;
  });
  return rows.join('\n');
}

export function renderAmbiguities(
  entries: AmbiguityEntry[],
  messageTexts: Map<string, string>,
): string {
  if (entries.length === 0) {
    return '<p class="empty">No open ambiguities.</p>';
  }
  return entries.map((entry) => {
    const text = messageTexts.get(entry.message_id) ?? '';
    const excerpt = mentionExcerpt(entry, text);
    // candidates arrive score-descending from the server and are rendered
    // in that exact order
    const candidates = entry.candidates.map((candidate) => `
      <li>
        <button data-action="choose" data-queue-id="${escapeHtml(entry.queue_id)}"
                data-node-id="${escapeHtml(candidate.node)}">
          ${escapeHtml(candidate.node)}
        </button>
        <span class="score">${formatScore(candidate.score)}</span>
        <span class="features">name ${formatScore(candidate.features.name_sim)} ·
          loc ${formatScore(candidate.features.location_prior)} ·
          recency ${formatScore(candidate.features.recency)}</span>
      </li>`).join('\n');
    return `
    <article class="ambiguity" data-queue-id="${escapeHtml(entry.queue_id)}">
      <p class="excerpt">${escapeHtml(excerpt.before)}<mark>${escapeHtml(excerpt.mention)}</mark>${escapeHtml(excerpt.after)}</p>
      <ul class="candidates">${candidates}</ul>
      <button data-action="reject" data-queue-id="${escapeHtml(entry.queue_id)}">Reject all</button>
    </article>`;
  }).join('\n');
}

export interface MetricsViewData {
  metrics: MetricsResponse;
  stale: boolean;
  lastUpdated: Date | null;
}

export function renderMetrics(view: MetricsViewData): string {
  const names = [
    ...DOMAIN_ORDER.filter((d) => d in view.metrics.domains),
    ...Object.keys(view.metrics.domains).filter((d) => !DOMAIN_ORDER.includes(d)).sort(),
  ];
  const tiles = names.map((name) => {
    const stats = view.metrics.domains[name];
    return `
    <div class="tile" data-domain="${escapeHtml(name)}">
      <h3>${escapeHtml(name)}</h3>
      <p class="rate">${formatRate(stats)}</p>
    </div>`;
  }).join('\n');
  const tableRows = names.map((name) => {
    const stats = view.metrics.domains[name];
    return `<tr data-domain="${escapeHtml(name)}">
      <td>${escapeHtml(name)}</td><td>${stats.accepted}</td><td>${stats.decided}</td>
    </tr>`;
  }).join('\n');
  const staleBanner = view.stale
    ? `<p class="stale">Service unreachable; showing data from ${
        view.lastUpdated ? escapeHtml(formatTimestamp(view.lastUpdated.toISOString())) : 'never'
      }</p>`
    : '';
  return `${staleBanner}
  <div class="tiles">${tiles}</div>
  <table class="decided">
    <thead><tr><th>domain</th><th>accepted</th><th>decided</th></tr></thead>
    <tbody>${tableRows}</tbody>
  </table>`;
}

export function renderRetryBanner(detail: string): string {
  return `<p class="retry">Request failed (${escapeHtml(detail)}); will retry on the next poll.</p>`;
}
