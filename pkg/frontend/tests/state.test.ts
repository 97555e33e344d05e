import { describe, expect, it } from 'vitest';

import type {
  Decision,
  EncounterOutcome,
  Hierarchy,
  PendingQuery,
  SessionSummary,
} from '../src/api.js';
import {
  describeDecision,
  initialState,
  promptText,
  reduce,
  wireAnswer,
  type UiSessionState,
} from '../src/state.js';

const session: SessionSummary = {
  session_id: 'abc123',
  window: 50,
  stride: 15,
  iteration: 0,
  objects: 0,
  theta: 0,
};

function query(kind: 'same_genus' | 'different', objectId = 0): PendingQuery {
  return {
    query_id: 7,
    kind,
    object_id: objectId,
    sequence_id: 'clip-02',
    object_distance: 3.25,
    object_preview: [],
    encounter_preview: [],
  };
}

function decision(partial: Partial<Decision>): Decision {
  return {
    kind: 'new_object',
    matched_object: null,
    created_object: 0,
    predicted_same_genus: false,
    predicted_different: true,
    supervised: false,
    iteration: 1,
    theta: 0,
    ...partial,
  };
}

const decided = (d: Decision): EncounterOutcome => ({
  state: 'decided',
  decision: d,
  query: null,
});

const parked = (q: PendingQuery): EncounterOutcome => ({
  state: 'pending',
  decision: null,
  query: q,
});

describe('reducer replay', () => {
  it('walks a full teaching exchange from server responses only', () => {
    let state: UiSessionState = reduce(initialState, {
      type: 'session_started',
      session,
    });
    expect(state.session?.session_id).toBe('abc123');
    expect(state.thetaHistory).toEqual([0]);

    // First encounter: empty memory, immediate unsupervised decision.
    state = reduce(state, {
      type: 'encounter_outcome',
      sequenceId: 'clip-01',
      outcome: decided(decision({ created_object: 0, iteration: 1 })),
    });
    expect(state.pending).toBeNull();
    expect(state.log).toHaveLength(1);
    expect(state.log[0].text).toBe('new object #0 founded');
    expect(state.log[0].supervised).toBe(false);

    // Second encounter parks the same-genus question.
    state = reduce(state, {
      type: 'encounter_outcome',
      sequenceId: 'clip-02',
      outcome: parked(query('same_genus')),
    });
    expect(state.pending?.kind).toBe('same_genus');
    expect(state.log).toHaveLength(1);

    // Same genus confirmed: the follow-up question arrives.
    state = reduce(state, {
      type: 'answer_outcome',
      outcome: parked(query('different')),
    });
    expect(state.pending?.kind).toBe('different');

    // Different individual: a supervised decision resolves the exchange.
    state = reduce(state, {
      type: 'answer_outcome',
      outcome: decided(
        decision({
          kind: 'new_object_same_genus',
          matched_object: 0,
          created_object: 1,
          supervised: true,
          iteration: 2,
          theta: 1.5,
        }),
      ),
    });
    expect(state.pending).toBeNull();
    expect(state.log).toHaveLength(2);
    expect(state.log[1].sequenceId).toBe('clip-02');
    expect(state.log[1].text).toBe(
      'new object #1 founded, same genus as #0',
    );
    expect(state.thetaHistory).toEqual([0, 0, 1.5]);
    expect(state.session?.iteration).toBe(2);
    expect(state.session?.theta).toBe(1.5);
  });

  it('updates the object count when a hierarchy arrives', () => {
    const hierarchy: Hierarchy = {
      root: 'thing',
      groups: [
        {
          members: [
            { object_id: 0, visual_object_count: 3 },
            { object_id: 1, visual_object_count: 2 },
          ],
          genus_visual_object_count: 1,
          genus: [{ sequence_id: 'clip-01', start: 0, end: 49 }],
        },
      ],
      isolated: [{ object_id: 2, visual_object_count: 1 }],
    };
    let state = reduce(initialState, { type: 'session_started', session });
    state = reduce(state, { type: 'hierarchy_loaded', hierarchy });
    expect(state.hierarchy).toEqual(hierarchy);
    expect(state.session?.objects).toBe(3);
  });

  it('records merge decisions against the pending sequence', () => {
    let state = reduce(initialState, { type: 'session_started', session });
    state = reduce(state, {
      type: 'encounter_outcome',
      sequenceId: 'clip-02',
      outcome: parked(query('same_genus', 4)),
    });
    state = reduce(state, {
      type: 'answer_outcome',
      outcome: decided(
        decision({
          kind: 'merged_into_existing',
          matched_object: 4,
          created_object: null,
          supervised: true,
          iteration: 1,
        }),
      ),
    });
    expect(state.log[0].sequenceId).toBe('clip-02');
    expect(state.log[0].text).toBe('merged into object #4');
  });

  it('keeps and clears error messages without touching the rest', () => {
    let state = reduce(initialState, { type: 'session_started', session });
    state = reduce(state, {
      type: 'request_failed',
      message: '409: a question is pending',
    });
    expect(state.error).toBe('409: a question is pending');
    expect(state.session?.session_id).toBe('abc123');
    state = reduce(state, { type: 'error_cleared' });
    expect(state.error).toBeNull();
  });

  it('starting a new session resets everything', () => {
    let state = reduce(initialState, { type: 'session_started', session });
    state = reduce(state, {
      type: 'encounter_outcome',
      sequenceId: 'clip-01',
      outcome: decided(decision({})),
    });
    state = reduce(state, {
      type: 'session_started',
      session: { ...session, session_id: 'next', theta: 0.5 },
    });
    expect(state.log).toEqual([]);
    expect(state.thetaHistory).toEqual([0.5]);
    expect(state.pending).toBeNull();
  });
});

describe('question wording', () => {
  it('asks the friendly phrasings', () => {
    expect(promptText('same_genus')).toBe('Same kind of object?');
    expect(promptText('different')).toBe(
      'Is this the same individual object you saw before?',
    );
  });

  it('passes same-genus clicks through unchanged', () => {
    expect(wireAnswer('same_genus', true)).toBe(true);
    expect(wireAnswer('same_genus', false)).toBe(false);
  });

  it('inverts the same-individual click into the Different answer', () => {
    // Clicking "yes, same individual" means NOT different, and vice versa.
    expect(wireAnswer('different', true)).toBe(false);
    expect(wireAnswer('different', false)).toBe(true);
  });
});

describe('decision wording', () => {
  it('covers all three decision kinds', () => {
    expect(describeDecision(decision({}))).toBe('new object #0 founded');
    expect(
      describeDecision(
        decision({
          kind: 'new_object_same_genus',
          created_object: 3,
          matched_object: 1,
        }),
      ),
    ).toBe('new object #3 founded, same genus as #1');
    expect(
      describeDecision(
        decision({ kind: 'merged_into_existing', matched_object: 2 }),
      ),
    ).toBe('merged into object #2');
  });
});
