// Cursor-based event polling. The cursor only advances after a batch has
// been delivered to the handler, so a network failure can never drop an
// event, and the seq guard means a duplicate batch can never render twice.

import type { ApiClient } from "./api.js";
import type { GameEvent } from "./types.js";

export class EventPoller {
  private cursor: number;
  private timer: ReturnType<typeof setTimeout> | null = null;
  private stopped = false;
  private failing = false;
  private inFlight = false;

  constructor(
    private readonly api: ApiClient,
    private readonly sessionId: string,
    private readonly onEvents: (events: GameEvent[]) => void,
    private readonly onConnectionChange?: (failing: boolean) => void,
    startAfter = 0,
  ) {
    this.cursor = startAfter;
  }

  get position(): number {
    return this.cursor;
  }

  get isFailing(): boolean {
    return this.failing;
  }

  /** Fetch once; safe to call concurrently with the interval loop. */
  async pollOnce(): Promise<GameEvent[]> {
    if (this.inFlight) return [];
    this.inFlight = true;
    try {
      const { events } = await this.api.getEvents(this.sessionId, this.cursor);
      const fresh = events
        .filter((e) => e.seq > this.cursor)
        .sort((a, b) => a.seq - b.seq);
      if (fresh.length > 0) {
        this.onEvents(fresh);
        this.cursor = fresh[fresh.length - 1].seq;
      }
      this.setFailing(false);
      return fresh;
    } catch (error) {
      this.setFailing(true); // cursor untouched: retry resumes losslessly
      return [];
    } finally {
      this.inFlight = false;
    }
  }

  start(intervalMs: number): void {
    this.stopped = false;
    const tick = async () => {
      if (this.stopped) return;
      await this.pollOnce();
      if (!this.stopped) {
        this.timer = setTimeout(tick, intervalMs);
      }
    };
    void tick();
  }

  stop(): void {
    this.stopped = true;
    if (this.timer !== null) {
      clearTimeout(this.timer);
      this.timer = null;
    }
  }

  private setFailing(failing: boolean): void {
    if (failing !== this.failing) {
      this.failing = failing;
      this.onConnectionChange?.(failing);
    }
  }
}
