/** Shapes mirrored from the review service API. */

export interface ScoreSet {
  s_quality: number;
  s_ocr?: number;
  s_tc: number;
  s_motion: number;
  category_similarity?: number;
  s_align?: number;
}

export interface TriageFlags {
  scene_transition: string;
  frame_level: string;
  reduplication: string;
}

export interface QueueItem {
  clip_id: string;
  thumbnail_uri: string | null;
  duration_seconds: number;
  scores: ScoreSet;
  category: string | null;
  caption: string | null;
  triage: TriageFlags | null;
}

export type Decision = 'approved' | 'rejected';

export interface Stats {
  pending: number;
  approved: number;
  rejected: number;
}

/** Runtime guard: the server is trusted but a manifest edit can ship junk. */
export function isQueueItem(value: unknown): value is QueueItem {
  if (typeof value !== 'object' || value === null) return false;
  const item = value as Record<string, unknown>;
  if (typeof item.clip_id !== 'string' || item.clip_id.length === 0) return false;
  if (typeof item.duration_seconds !== 'number') return false;
  const scores = item.scores as Record<string, unknown> | undefined;
  if (typeof scores !== 'object' || scores === null) return false;
  return typeof scores.s_quality === 'number';
}
