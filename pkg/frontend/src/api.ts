import { Decision, QueueItem, Stats, isQueueItem } from './types.js';

export class ApiError extends Error {
  constructor(
    message: string,
    readonly status: number | null = null,
  ) {
    super(message);
    this.name = 'ApiError';
  }
}

async function request(path: string, init?: RequestInit): Promise<unknown> {
  let response: Response;
  try {
    response = await fetch(path, init);
  } catch (err) {
    throw new ApiError(`network failure: ${String(err)}`);
  }
  if (!response.ok) {
    throw new ApiError(`${path} -> ${response.status}`, response.status);
  }
  return response.json();
}

/** Fetch the undecided queue; malformed entries are skipped with a warning. */
export async function fetchQueue(limit?: number): Promise<QueueItem[]> {
  const query = limit !== undefined ? `?limit=${limit}` : '';
  const payload = await request(`/api/queue${query}`);
  if (!Array.isArray(payload)) {
    throw new ApiError('queue payload is not an array');
  }
  const items: QueueItem[] = [];
  for (const entry of payload) {
    if (isQueueItem(entry)) {
      items.push(entry);
    } else {
      console.warn('skipping malformed queue item', entry);
    }
  }
  return items;
}

export async function postDecision(
  clipId: string,
  decision: Decision,
  reviewer: string,
): Promise<void> {
  await request('/api/decision', {
    method: 'POST',
    headers: { 'Content-Type': 'application/json' },
    body: JSON.stringify({ clip_id: clipId, decision, reviewer }),
  });
}

export async function fetchStats(): Promise<Stats> {
  return (await request('/api/stats')) as Stats;
}
