import { describe, expect, it } from 'vitest';

import { renderReplay, renderTurn, suggestionsFrom } from '../src/render.js';
import type { AssistantTurn, SessionEvent } from '../src/types.js';

const answerTurn: AssistantTurn = {
  kind: 'answer',
  text: 'Most accidents happened under: Normal (95 of 193 records).',
  result: { shape: 'scalar', value: 1, label: 'Normal', count: 95, total: 193 },
  resolution: null,
};

describe('turn rendering', () => {
  it('renders the four turn kinds with distinct classes', () => {
    const kinds: AssistantTurn['kind'][] = ['answer', 'clarification', 'no_match', 'error'];
    for (const kind of kinds) {
      const turn: AssistantTurn = { kind, text: 'x', result: null, resolution: null };
      expect(renderTurn(document, turn).className).toContain(`turn-${kind}`);
    }
  });

  it('answer turns embed the rendered result', () => {
    const bubble = renderTurn(document, answerTurn);
    expect(bubble.querySelector('.scalar-card')).not.toBeNull();
    expect(bubble.textContent).toContain('Normal');
  });

  it('parses clarification suggestions from the question wording', () => {
    expect(
      suggestionsFrom('Which attribute do you mean: weather, month, or road category?'),
    ).toEqual(['weather', 'month', 'road category']);
    expect(suggestionsFrom('No colon here')).toEqual([]);
  });

  it('clarification chips are clickable and send the chosen value', () => {
    const turn: AssistantTurn = {
      kind: 'clarification',
      text: 'Which attribute do you mean: weather, month, or road category?',
      result: null,
      resolution: null,
    };
    const clicked: string[] = [];
    const bubble = renderTurn(document, turn, (value) => clicked.push(value));
    const chips = [...bubble.querySelectorAll('.chip')] as HTMLButtonElement[];
    expect(chips.map((c) => c.textContent)).toEqual(['weather', 'month', 'road category']);
    chips[0].click();
    chips[2].click();
    expect(clicked).toEqual(['weather', 'road category']);
  });
});

describe('replay rendering', () => {
  const base = { schema: 1, session: 's1', ts: '2024-01-01T00:00:00Z' };
  const events: SessionEvent[] = [
    { ...base, seq: 1, actor: 'alice', kind: 'user_query', payload: { text: 'hi data' } },
    { ...base, seq: 2, actor: 'alice', kind: 'resolution', payload: {} },
    { ...base, seq: 3, actor: 'alice', kind: 'execution', payload: {} },
    {
      ...base,
      seq: 4,
      actor: 'alice',
      kind: 'assistant_turn',
      payload: { kind: 'answer', text: 'an answer', result: null },
    },
    {
      ...base,
      seq: 5,
      actor: 'bob',
      kind: 'comment',
      payload: { text: 'nice one', target_seq: 3 },
    },
    {
      ...base,
      seq: 6,
      actor: 'alice',
      kind: 'comment',
      payload: { text: 'thanks', target_seq: 3 },
    },
  ];

  it('distinguishes own comments from other users', () => {
    const view = renderReplay(document, events, 'alice');
    const comments = [...view.querySelectorAll('.comment')];
    expect(comments.length).toBe(2);
    expect(comments[0].className).toContain('comment-other');
    expect(comments[0].textContent).toContain('bob');
    expect(comments[0].textContent).toContain('nice one');
    expect(comments[1].className).toContain('comment-own');
  });

  it('rebuilds the full conversation from events alone', () => {
    const view = renderReplay(document, events, 'alice');
    expect(view.querySelector('.user-bubble')?.textContent).toContain('hi data');
    expect(view.querySelector('.turn-answer')?.textContent).toContain('an answer');
    expect(view.querySelector('[data-target-seq="3"]')).not.toBeNull();
  });

  it('offers a comment button on result events', () => {
    const targets: number[] = [];
    const view = renderReplay(document, events, 'alice', (seq) => targets.push(seq));
    const button = view.querySelector('.comment-button') as HTMLButtonElement;
    button.click();
    expect(targets).toEqual([3]);
  });
});
