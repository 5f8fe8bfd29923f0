// Display formatting only. Scores render to two decimals without
// reordering; absent rates render as an em dash, never as 0%.

import type { AmbiguityEntry, DomainStats } from './types.js';

export function formatScore(score: number): string {
  return score.toFixed(2);
}

export function formatRate(stats: DomainStats): string {
  if (stats.rate === null || stats.decided === 0) {
    return '—';
  }
  return `${Math.round(stats.rate * 1000) / 10}%`;
}

export function formatTimestamp(iso: string | null): string {
  if (!iso) return '';
  const date = new Date(iso);
  return Number.isNaN(date.getTime()) ? iso : date.toLocaleString();
}

export interface ExcerptParts {
  before: string;
  mention: string;
  after: string;
}

const EXCERPT_RADIUS = 60;

export function mentionExcerpt(entry: AmbiguityEntry, messageText: string): ExcerptParts {
  const { start, end, surface } = entry.mention;
  if (messageText.slice(start, end) === surface) {
    const from = Math.max(0, start - EXCERPT_RADIUS);
    const to = Math.min(messageText.length, end + EXCERPT_RADIUS);
    return {
      before: (from > 0 ? '…' : '') + messageText.slice(from, start),
      mention: surface,
      after: messageText.slice(end, to) + (to < messageText.length ? '…' : ''),
    };
  }
  // span does not line up with the text we have; degrade to surface only
  return { before: '', mention: surface, after: '' };
}

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}
