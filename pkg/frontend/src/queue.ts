import { Decision, QueueItem } from './types.js';

export interface DecisionPoster {
  (clipId: string, decision: Decision, reviewer: string): Promise<void>;
}

export interface QueueEvents {
  onChange: () => void;
  onError: (message: string) => void;
}

/**
 * Client-side queue state. Items stay in server order; a card leaves the
 * queue only after the server acknowledged its decision, so the UI can never
 * fabricate one. Submissions are serialized so rapid keypresses reach the
 * server in the order they happened.
 */
export class ReviewQueue {
  private items: QueueItem[] = [];
  private cursor = 0;
  private chain: Promise<void> = Promise.resolve();
  private inFlight = 0;

  constructor(
    private readonly post: DecisionPoster,
    private readonly events: QueueEvents,
  ) {}

  load(items: QueueItem[]): void {
    this.items = [...items];
    this.cursor = 0;
    this.events.onChange();
  }

  all(): readonly QueueItem[] {
    return this.items;
  }

  current(): QueueItem | null {
    return this.items[this.cursor] ?? null;
  }

  currentIndex(): number {
    return this.cursor;
  }

  get busy(): boolean {
    return this.inFlight > 0;
  }

  next(): void {
    if (this.cursor < this.items.length - 1) {
      this.cursor += 1;
      this.events.onChange();
    }
  }

  previous(): void {
    if (this.cursor > 0) {
      this.cursor -= 1;
      this.events.onChange();
    }
  }

  /**
   * Submit a decision for the current card. Returns the acknowledgement
   * promise; the card is removed (and focus advances) only on success.
   */
  decide(decision: Decision, reviewer: string): Promise<void> {
    const item = this.current();
    if (item === null) {
      return Promise.resolve();
    }
    const clipId = item.clip_id;
    this.inFlight += 1;
    const submission = this.chain.then(async () => {
      try {
        await this.post(clipId, decision, reviewer);
        this.remove(clipId);
      } catch (err) {
        this.events.onError(
          `decision for ${clipId.slice(0, 10)}… failed: ${err instanceof Error ? err.message : String(err)}`,
        );
      } finally {
        this.inFlight -= 1;
        this.events.onChange();
      }
    });
    this.chain = submission;
    // advance focus immediately so a second keypress targets the next card
    this.next();
    return submission;
  }

  private remove(clipId: string): void {
    const index = this.items.findIndex((item) => item.clip_id === clipId);
    if (index === -1) return;
    this.items.splice(index, 1);
    if (this.cursor > index) {
      this.cursor -= 1;
    }
    if (this.cursor >= this.items.length) {
      this.cursor = Math.max(0, this.items.length - 1);
    }
  }
}
