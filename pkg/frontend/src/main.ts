import { fetchQueue, fetchStats, postDecision } from './api.js';
import { contextFromEvent, keyToAction } from './keyboard.js';
import { ReviewQueue } from './queue.js';
import { hideBanner, renderQueue, renderStats, showBanner, showToast } from './render.js';
import { Stats } from './types.js';

function main(): void {
  const queueEl = document.getElementById('queue')!;
  const statsEl = document.getElementById('stats')!;
  const bannerEl = document.getElementById('banner')!;
  const toastsEl = document.getElementById('toasts')!;
  const reviewerEl = document.getElementById('reviewer') as HTMLInputElement;

  let stats: Stats | null = null;

  const queue = new ReviewQueue(postDecision, {
    onChange: () => {
      renderQueue(queueEl, queue.all(), queue.currentIndex());
      refreshStats();
    },
    onError: (message) => showToast(toastsEl, message),
  });

  async function refreshStats(): Promise<void> {
    try {
      stats = await fetchStats();
      renderStats(statsEl, stats);
    } catch {
      renderStats(statsEl, null);
    }
  }

  async function loadQueue(): Promise<void> {
    hideBanner(bannerEl);
    try {
      queue.load(await fetchQueue());
    } catch (err) {
      showBanner(
        bannerEl,
        `cannot reach the review service: ${err instanceof Error ? err.message : String(err)}`,
        () => void loadQueue(),
      );
    }
  }

  document.addEventListener('keydown', (event) => {
    const action = keyToAction(contextFromEvent(event));
    if (action === null) return;
    event.preventDefault();
    const reviewer = reviewerEl.value.trim() || 'anonymous';
    switch (action) {
      case 'approve':
        void queue.decide('approved', reviewer);
        break;
      case 'reject':
        void queue.decide('rejected', reviewer);
        break;
      case 'next':
        queue.next();
        break;
      case 'previous':
        queue.previous();
        break;
    }
  });

  document.getElementById('approve-btn')?.addEventListener('click', () => {
    void queue.decide('approved', reviewerEl.value.trim() || 'anonymous');
  });
  document.getElementById('reject-btn')?.addEventListener('click', () => {
    void queue.decide('rejected', reviewerEl.value.trim() || 'anonymous');
  });

  void loadQueue();
}

document.addEventListener('DOMContentLoaded', main);
