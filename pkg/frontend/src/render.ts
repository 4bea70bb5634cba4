/** Chat bubbles and replay views, built solely from API payloads so a page
 * reload reconstructs identical views from GET /events. */

import { renderResult } from './charts.js';
import type { AssistantTurn, ResultPayload, SessionEvent } from './types.js';

export type SuggestionHandler = (value: string) => void;

function el<K extends keyof HTMLElementTagNameMap>(
  doc: Document,
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = doc.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function renderUserBubble(doc: Document, user: string, text: string): HTMLElement {
  const bubble = el(doc, 'div', 'bubble user-bubble');
  bubble.appendChild(el(doc, 'span', 'bubble-user', user));
  bubble.appendChild(el(doc, 'p', 'bubble-text', text));
  return bubble;
}

/** Clarification answers offer clickable suggestion chips parsed from the
 * assistant's "Which x do you mean: a, b, or c?" wording. */
export function suggestionsFrom(text: string): string[] {
  const colon = text.indexOf(':');
  if (colon < 0 || !text.trimEnd().endsWith('?')) return [];
  const list = text.slice(colon + 1).replace(/\?\s*$/, '');
  return list
    .split(',')
    .map((part) => part.replace(/^\s*or\s+/, '').trim())
    .filter((part) => part.length > 0);
}

export function renderTurn(
  doc: Document,
  turn: AssistantTurn,
  onSuggestion?: SuggestionHandler,
): HTMLElement {
  const bubble = el(doc, 'div', `bubble assistant-bubble turn-${turn.kind}`);
  bubble.appendChild(el(doc, 'p', 'bubble-text', turn.text));

  if (turn.kind === 'answer' && turn.result) {
    bubble.appendChild(renderResult(doc, turn.result));
  }
  if (turn.kind === 'clarification') {
    const chips = el(doc, 'div', 'suggestion-chips');
    for (const suggestion of suggestionsFrom(turn.text)) {
      const chip = el(doc, 'button', 'chip', suggestion);
      chip.type = 'button';
      chip.addEventListener('click', () => onSuggestion?.(suggestion));
      chips.appendChild(chip);
    }
    bubble.appendChild(chips);
  }
  return bubble;
}

/** Replay view of a session's event log; comments by the viewer are marked
 * distinctly from other users'. */
export function renderReplay(
  doc: Document,
  events: SessionEvent[],
  viewer: string,
  onComment?: (targetSeq: number) => void,
): HTMLElement {
  const root = el(doc, 'div', 'replay');
  for (const event of events) {
    if (event.kind === 'user_query') {
      root.appendChild(renderUserBubble(doc, event.actor, String(event.payload.text ?? '')));
    } else if (event.kind === 'assistant_turn') {
      const payload = event.payload as {
        kind: AssistantTurn['kind'];
        text: string;
        result: ResultPayload | null;
      };
      const turn: AssistantTurn = {
        kind: payload.kind,
        text: payload.text,
        result: payload.result,
        resolution: null,
      };
      const bubble = renderTurn(doc, turn);
      bubble.setAttribute('data-seq', String(event.seq));
      root.appendChild(bubble);
    } else if (event.kind === 'execution') {
      const node = el(doc, 'div', 'execution-note');
      node.setAttribute('data-seq', String(event.seq));
      if (onComment) {
        const button = el(doc, 'button', 'comment-button', 'comment');
        button.type = 'button';
        button.addEventListener('click', () => onComment(event.seq));
        node.appendChild(button);
      }
      root.appendChild(node);
    } else if (event.kind === 'comment') {
      const own = event.actor === viewer;
      const note = el(doc, 'div', `comment ${own ? 'comment-own' : 'comment-other'}`);
      note.appendChild(el(doc, 'span', 'comment-author', event.actor));
      note.appendChild(el(doc, 'span', 'comment-text', String(event.payload.text ?? '')));
      const target = event.payload.target_seq;
      if (target !== undefined) {
        note.setAttribute('data-target-seq', String(target));
      }
      root.appendChild(note);
    }
  }
  return root;
}
