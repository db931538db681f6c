import { QueueItem, Stats } from './types.js';

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function fmt(value: number | undefined): string {
  return value === undefined ? '–' : value.toFixed(3);
}

function triageBadge(name: string, value: string): HTMLElement {
  const badge = el('span', `badge badge-${value}`, `${name}: ${value}`);
  return badge;
}

export function renderCard(item: QueueItem, highlighted: boolean): HTMLElement {
  const card = el('article', highlighted ? 'card current' : 'card');
  card.dataset.clipId = item.clip_id;

  const thumb = el('div', 'thumb');
  if (item.thumbnail_uri) {
    const img = el('img');
    img.src = item.thumbnail_uri;
    img.alt = `clip ${item.clip_id}`;
    thumb.appendChild(img);
  } else {
    thumb.appendChild(el('div', 'thumb-placeholder', 'no thumbnail'));
  }
  card.appendChild(thumb);

  const body = el('div', 'card-body');
  const title = el('h3', 'clip-id', item.clip_id);
  body.appendChild(title);

  const meta = el('div', 'meta');
  meta.appendChild(el('span', 'category', item.category ?? 'uncategorized'));
  meta.appendChild(el('span', undefined, `${item.duration_seconds.toFixed(1)}s`));
  body.appendChild(meta);

  const scores = el('dl', 'scores');
  const rows: Array<[string, number | undefined]> = [
    ['aesthetic', item.scores.s_quality],
    ['temporal', item.scores.s_tc],
    ['motion', item.scores.s_motion],
    ['ocr', item.scores.s_ocr],
    ['alignment', item.scores.s_align],
  ];
  for (const [label, value] of rows) {
    scores.appendChild(el('dt', undefined, label));
    scores.appendChild(el('dd', undefined, fmt(value)));
  }
  body.appendChild(scores);

  if (item.triage) {
    const flags = el('div', 'triage');
    flags.appendChild(triageBadge('transition', item.triage.scene_transition));
    flags.appendChild(triageBadge('frame-level', item.triage.frame_level));
    flags.appendChild(triageBadge('reduplication', item.triage.reduplication));
    body.appendChild(flags);
  }

  body.appendChild(el('p', 'caption', item.caption ?? '(no caption)'));
  card.appendChild(body);
  return card;
}

export function renderQueue(
  container: HTMLElement,
  items: readonly QueueItem[],
  currentIndex: number,
): void {
  container.replaceChildren();
  if (items.length === 0) {
    container.appendChild(el('div', 'all-done', 'All clips reviewed.'));
    return;
  }
  items.forEach((item, index) => {
    container.appendChild(renderCard(item, index === currentIndex));
  });
  const current = container.querySelector('.card.current');
  if (current && typeof current.scrollIntoView === 'function') {
    current.scrollIntoView({ block: 'nearest' });
  }
}

export function renderStats(container: HTMLElement, stats: Stats | null): void {
  container.textContent = stats
    ? `pending ${stats.pending} · approved ${stats.approved} · rejected ${stats.rejected}`
    : '';
}

export function showBanner(container: HTMLElement, message: string, onRetry: () => void): void {
  container.replaceChildren();
  container.appendChild(el('span', undefined, message));
  const retry = el('button', 'retry', 'retry');
  retry.addEventListener('click', onRetry);
  container.appendChild(retry);
  container.classList.add('visible');
}

export function hideBanner(container: HTMLElement): void {
  container.replaceChildren();
  container.classList.remove('visible');
}

export function showToast(container: HTMLElement, message: string): void {
  const toast = el('div', 'toast', message);
  container.appendChild(toast);
  setTimeout(() => toast.remove(), 4000);
}
