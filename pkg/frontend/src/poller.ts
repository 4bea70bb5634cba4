/** Interval poller for session events; keeps a since-cursor so every event
 * is delivered exactly once, in sequence order. */

import type { ApiClient } from './api.js';
import type { SessionEvent } from './types.js';

export const POLL_INTERVAL_MS = 2000;

export class EventPoller {
  private afterSeq = 0;
  private timer: ReturnType<typeof setTimeout> | null = null;
  private stopped = false;

  constructor(
    private api: ApiClient,
    private session: string,
    private onEvents: (events: SessionEvent[]) => void,
    private intervalMs: number = POLL_INTERVAL_MS,
  ) {}

  start(): void {
    this.stopped = false;
    void this.tick();
  }

  stop(): void {
    this.stopped = true;
    if (this.timer !== null) {
      clearTimeout(this.timer);
      this.timer = null;
    }
  }

  /** One poll cycle; also callable directly from tests. */
  async tick(): Promise<void> {
    try {
      const events = await this.api.events(this.session, this.afterSeq);
      if (events.length > 0) {
        this.afterSeq = events[events.length - 1].seq;
        this.onEvents(events);
      }
    } catch {
      // transient failures: keep polling
    } finally {
      if (!this.stopped) {
        this.timer = setTimeout(() => void this.tick(), this.intervalMs);
      }
    }
  }
}
