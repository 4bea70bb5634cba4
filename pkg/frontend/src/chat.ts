/** Chat view: message list plus input box bound to one session. */

import type { ApiClient } from './api.js';
import { renderTurn, renderUserBubble } from './render.js';

export class ChatView {
  readonly root: HTMLElement;
  private list: HTMLElement;
  private input: HTMLInputElement;
  private turnCounter = 0;

  constructor(
    private doc: Document,
    private api: ApiClient,
    private session: string,
    private user: string,
  ) {
    this.root = doc.createElement('div');
    this.root.className = 'chat-view';
    this.list = doc.createElement('div');
    this.list.className = 'message-list';
    this.root.appendChild(this.list);

    const form = doc.createElement('form');
    form.className = 'chat-form';
    this.input = doc.createElement('input');
    this.input.className = 'chat-input';
    this.input.placeholder = 'Ask about the data...';
    const button = doc.createElement('button');
    button.type = 'submit';
    button.textContent = 'Send';
    form.appendChild(this.input);
    form.appendChild(button);
    form.addEventListener('submit', (evt) => {
      evt.preventDefault();
      const text = this.input.value.trim();
      if (text) {
        this.input.value = '';
        void this.send(text);
      }
    });
    this.root.appendChild(form);
  }

  /** Sends one utterance; a unique turn id makes retries idempotent. */
  async send(text: string): Promise<void> {
    this.list.appendChild(renderUserBubble(this.doc, this.user, text));
    this.turnCounter += 1;
    const turnId = `${this.session}-${this.user}-${this.turnCounter}`;
    const turn = await this.api.postMessage(this.session, this.user, text, turnId);
    const bubble = renderTurn(this.doc, turn, (suggestion) => void this.send(suggestion));
    this.list.appendChild(bubble);
  }

  get messageList(): HTMLElement {
    return this.list;
  }
}
