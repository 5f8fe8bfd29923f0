// Wire shapes mirroring the backend's JSON payloads. The console never
// recomputes scores or rates; it renders exactly what the API sends.

export interface ReviewListItem {
  message_id: string;
  request_id: string;
  domain: string;
  raw_message: string;
  text: string;
  model_id: string;
  state: 'blocked' | 'pending' | 'accepted' | 'discarded';
  created_at: string;
  decided_at: string | null;
  decided_by: string | null;
  blocked_reason: string | null;
  queue_ids: string[];
}

export interface ReviewPage {
  items: ReviewListItem[];
  next_cursor: string | null;
}

export interface CandidateFeatures {
  name_sim: number;
  alias_exact: number;
  kind_match: number;
  location_prior: number;
  recency: number;
}

export interface AmbiguityCandidate {
  node: string;
  score: number;
  features: CandidateFeatures;
}

export interface AmbiguityMention {
  surface: string;
  start: number;
  end: number;
  mention_kind: string;
}

export interface AmbiguityEntry {
  queue_id: string;
  message_id: string;
  mention: AmbiguityMention;
  candidates: AmbiguityCandidate[]; // server sends score-descending order
  created_at: string;
  status: 'open' | 'resolved';
  chosen: string | null;
}

export interface DomainStats {
  accepted: number;
  decided: number;
  rate: number | null;
}

export interface MetricsResponse {
  domains: Record<string, DomainStats>;
  total_decided: number;
}

export interface ResolutionResponse {
  entry: AmbiguityEntry;
  message: ReviewListItem | null;
}
