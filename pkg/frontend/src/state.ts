/**
 * Pure UI session state. Every transition consumes a confirmed service
 * response; nothing here guesses ahead of the server (optimistic updates
 * are deliberately impossible: the reducer only accepts response payloads).
 */

import type {
  Decision,
  EncounterOutcome,
  Hierarchy,
  PendingQuery,
  QueryKind,
  SessionSummary,
} from './api.js';

export interface LogEntry {
  iteration: number;
  sequenceId: string;
  text: string;
  supervised: boolean;
  theta: number;
}

export interface UiSessionState {
  session: SessionSummary | null;
  pending: PendingQuery | null;
  hierarchy: Hierarchy | null;
  log: LogEntry[];
  thetaHistory: number[];
  error: string | null;
}

export const initialState: UiSessionState = {
  session: null,
  pending: null,
  hierarchy: null,
  log: [],
  thetaHistory: [],
  error: null,
};

export type UiEvent =
  | { type: 'session_started'; session: SessionSummary }
  | { type: 'encounter_outcome'; sequenceId: string; outcome: EncounterOutcome }
  | { type: 'answer_outcome'; outcome: EncounterOutcome }
  | { type: 'hierarchy_loaded'; hierarchy: Hierarchy }
  | { type: 'request_failed'; message: string }
  | { type: 'error_cleared' };

export function describeDecision(decision: Decision): string {
  switch (decision.kind) {
    case 'new_object':
      return `new object #${decision.created_object} founded`;
    case 'new_object_same_genus':
      return (
        `new object #${decision.created_object} founded, ` +
        `same genus as #${decision.matched_object}`
      );
    case 'merged_into_existing':
      return `merged into object #${decision.matched_object}`;
  }
}

function withDecision(
  state: UiSessionState,
  sequenceId: string,
  decision: Decision,
): UiSessionState {
  const entry: LogEntry = {
    iteration: decision.iteration,
    sequenceId,
    text: describeDecision(decision),
    supervised: decision.supervised,
    theta: decision.theta,
  };
  return {
    ...state,
    session: state.session
      ? { ...state.session, iteration: decision.iteration, theta: decision.theta }
      : null,
    pending: null,
    log: [...state.log, entry],
    thetaHistory: [...state.thetaHistory, decision.theta],
    error: null,
  };
}

export function reduce(state: UiSessionState, event: UiEvent): UiSessionState {
  switch (event.type) {
    case 'session_started':
      return {
        ...initialState,
        session: event.session,
        thetaHistory: [event.session.theta],
      };
    case 'encounter_outcome': {
      const { outcome } = event;
      if (outcome.state === 'pending' && outcome.query) {
        return { ...state, pending: outcome.query, error: null };
      }
      if (outcome.decision) {
        return withDecision(state, event.sequenceId, outcome.decision);
      }
      return state;
    }
    case 'answer_outcome': {
      const { outcome } = event;
      const sequenceId = state.pending?.sequence_id ?? '?';
      if (outcome.state === 'pending' && outcome.query) {
        return { ...state, pending: outcome.query, error: null };
      }
      if (outcome.decision) {
        return withDecision(state, sequenceId, outcome.decision);
      }
      return state;
    }
    case 'hierarchy_loaded': {
      const objects =
        event.hierarchy.groups.reduce((n, g) => n + g.members.length, 0) +
        event.hierarchy.isolated.length;
      return {
        ...state,
        hierarchy: event.hierarchy,
        session: state.session ? { ...state.session, objects } : null,
      };
    }
    case 'request_failed':
      return { ...state, error: event.message };
    case 'error_cleared':
      return { ...state, error: null };
  }
}

/**
 * Question wording. The service's follow-up question asks whether the
 * encounter shows a *different* individual; a raw "different?" double
 * negates poorly for humans, so the prompt asks "is this the same
 * individual?" and wireAnswer inverts the click for the 'different' kind.
 */
export function promptText(kind: QueryKind): string {
  return kind === 'same_genus'
    ? 'Same kind of object?'
    : 'Is this the same individual object you saw before?';
}

export function wireAnswer(kind: QueryKind, yes: boolean): boolean {
  return kind === 'different' ? !yes : yes;
}
