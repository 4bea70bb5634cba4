/** Collaboration panel: browse other users' sessions, open a replay view
 * that stays fresh by polling, and attach comments to results. */

import type { ApiClient } from './api.js';
import { EventPoller } from './poller.js';
import { renderReplay } from './render.js';
import type { SessionEvent, SessionSummary } from './types.js';

export class CollaborationPanel {
  readonly root: HTMLElement;
  private listNode: HTMLElement;
  private replayNode: HTMLElement;
  private events: SessionEvent[] = [];
  private poller: EventPoller | null = null;
  private openSession: string | null = null;

  constructor(
    private doc: Document,
    private api: ApiClient,
    private viewer: string,
    private intervalMs?: number,
  ) {
    this.root = doc.createElement('div');
    this.root.className = 'collab-panel';
    this.listNode = doc.createElement('div');
    this.listNode.className = 'session-list';
    this.replayNode = doc.createElement('div');
    this.replayNode.className = 'replay-container';
    this.root.appendChild(this.listNode);
    this.root.appendChild(this.replayNode);
  }

  async refreshSessions(filter?: string): Promise<SessionSummary[]> {
    const sessions = await this.api.listSessions(filter);
    this.listNode.textContent = '';
    for (const summary of sessions) {
      const row = this.doc.createElement('button');
      row.type = 'button';
      row.className = 'session-row';
      row.setAttribute('data-session', summary.session);
      row.textContent =
        `${summary.owner}: ${summary.title || '(no queries yet)'} ` +
        `[${summary.query_count} queries, ${summary.comment_count} comments]`;
      row.addEventListener('click', () => void this.openReplay(summary.session));
      this.listNode.appendChild(row);
    }
    return sessions;
  }

  /** Opens a session's replay and starts polling it for new events. */
  async openReplay(session: string): Promise<void> {
    this.poller?.stop();
    this.openSession = session;
    this.events = [];
    this.poller = new EventPoller(
      this.api,
      session,
      (fresh) => {
        this.events = this.events.concat(fresh);
        this.renderEvents();
      },
      this.intervalMs,
    );
    await this.poller.tick();
  }

  stop(): void {
    this.poller?.stop();
  }

  async comment(text: string, targetSeq: number): Promise<void> {
    if (!this.openSession) return;
    await this.api.postComment(this.openSession, this.viewer, text, targetSeq);
  }

  private renderEvents(): void {
    this.replayNode.textContent = '';
    this.replayNode.appendChild(
      renderReplay(this.doc, this.events, this.viewer),
    );
  }

  get replayContainer(): HTMLElement {
    return this.replayNode;
  }
}
