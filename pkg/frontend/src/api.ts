/** Typed client for the exploration assistant's HTTP API. */

import type {
  AssistantTurn,
  DatasetInfo,
  SessionEvent,
  SessionSummary,
} from './types.js';

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
  ) {
    super(message);
  }
}

async function toJson<T>(res: Response): Promise<T> {
  if (!res.ok) {
    let code = 'http_error';
    let message = `${res.status}`;
    try {
      const body = (await res.json()) as { error?: { code: string; message: string } };
      if (body.error) {
        code = body.error.code;
        message = body.error.message;
      }
    } catch {
      // non-JSON error body: keep the status text
    }
    throw new ApiError(res.status, code, message);
  }
  return (await res.json()) as T;
}

export class ApiClient {
  constructor(private baseUrl: string = '') {}

  private url(path: string): string {
    return `${this.baseUrl}${path}`;
  }

  async datasets(): Promise<DatasetInfo[]> {
    const body = await toJson<{ datasets: DatasetInfo[] }>(
      await fetch(this.url('/api/datasets')),
    );
    return body.datasets;
  }

  async createSession(user: string): Promise<string> {
    const body = await toJson<{ session: string }>(
      await fetch(this.url('/api/sessions'), {
        method: 'POST',
        headers: { 'content-type': 'application/json' },
        body: JSON.stringify({ user }),
      }),
    );
    return body.session;
  }

  async postMessage(
    session: string,
    user: string,
    text: string,
    turnId?: string,
  ): Promise<AssistantTurn> {
    const payload: Record<string, string> = { user, text };
    if (turnId) payload.turn_id = turnId;
    return toJson<AssistantTurn>(
      await fetch(this.url(`/api/sessions/${session}/messages`), {
        method: 'POST',
        headers: { 'content-type': 'application/json' },
        body: JSON.stringify(payload),
      }),
    );
  }

  async listSessions(filter?: string): Promise<SessionSummary[]> {
    const query = filter ? `?filter=${encodeURIComponent(filter)}` : '';
    const body = await toJson<{ sessions: SessionSummary[] }>(
      await fetch(this.url(`/api/sessions${query}`)),
    );
    return body.sessions;
  }

  async events(session: string, since = 0): Promise<SessionEvent[]> {
    const body = await toJson<{ events: SessionEvent[] }>(
      await fetch(this.url(`/api/sessions/${session}/events?since=${since}`)),
    );
    return body.events;
  }

  async postComment(
    session: string,
    user: string,
    text: string,
    targetSeq?: number,
  ): Promise<number> {
    const payload: Record<string, unknown> = { user, text };
    if (targetSeq !== undefined) payload.target_seq = targetSeq;
    const body = await toJson<{ seq: number }>(
      await fetch(this.url(`/api/sessions/${session}/comments`), {
        method: 'POST',
        headers: { 'content-type': 'application/json' },
        body: JSON.stringify(payload),
      }),
    );
    return body.seq;
  }
}
