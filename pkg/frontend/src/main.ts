/**
 * Teaching console wiring: forms at the top drive the TeachingClient, every
 * confirmed response flows through the reducer, and render() repaints the
 * whole view from state. Buttons are disabled while a request is in flight,
 * so a prompt can never be answered twice.
 */

import { ApiError, TeachingClient } from './api.js';
import type { PendingQuery, VisualObjectPreview } from './api.js';
import {
  initialState,
  promptText,
  reduce,
  wireAnswer,
  type UiEvent,
  type UiSessionState,
} from './state.js';
import { parseVsem1 } from './vsem1.js';
import { hierarchyModel, renderTree } from './tree.js';
import { renderSparkline } from './sparkline.js';

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

const baseUrlInput = el<HTMLInputElement>('base-url');
const windowInput = el<HTMLInputElement>('window');
const strideInput = el<HTMLInputElement>('stride');
const startButton = el<HTMLButtonElement>('start-session');
const sessionStatus = el<HTMLElement>('session-status');
const errorBanner = el<HTMLElement>('error-banner');

const sequenceInput = el<HTMLInputElement>('sequence-id');
const manifestInput = el<HTMLInputElement>('manifest-path');
const submitManifestButton = el<HTMLButtonElement>('submit-manifest');
const payloadInput = el<HTMLInputElement>('payload-file');
const submitPayloadButton = el<HTMLButtonElement>('submit-payload');

const promptCard = el<HTMLElement>('prompt-card');
const promptTitle = el<HTMLElement>('prompt-title');
const promptQuestion = el<HTMLElement>('prompt-question');
const objectPreview = el<HTMLElement>('object-preview');
const encounterPreview = el<HTMLElement>('encounter-preview');
const yesButton = el<HTMLButtonElement>('answer-yes');
const noButton = el<HTMLButtonElement>('answer-no');

const treeContainer = el<HTMLElement>('tree-container');
const refreshButton = el<HTMLButtonElement>('refresh-hierarchy');
const snapshotButton = el<HTMLButtonElement>('download-snapshot');
const thetaNow = el<HTMLElement>('theta-now');
const thetaSparkline = el<HTMLElement>('theta-sparkline');
const decisionLog = el<HTMLOListElement>('decision-log');

let state: UiSessionState = initialState;
let client: TeachingClient | null = null;
let busy = false;

function dispatch(event: UiEvent): void {
  state = reduce(state, event);
  render();
}

function failureMessage(err: unknown): string {
  if (err instanceof ApiError) {
    return err.status > 0 ? `${err.status}: ${err.message}` : err.message;
  }
  return String(err);
}

/** Serialize user actions: one request in flight, buttons disabled meanwhile. */
async function perform(action: () => Promise<void>): Promise<void> {
  if (busy) return;
  busy = true;
  render();
  try {
    await action();
  } catch (err) {
    dispatch({ type: 'request_failed', message: failureMessage(err) });
  } finally {
    busy = false;
    render();
  }
}

async function refreshHierarchy(): Promise<void> {
  if (!client || !state.session) return;
  const hierarchy = await client.hierarchy(state.session.session_id);
  dispatch({ type: 'hierarchy_loaded', hierarchy });
}

startButton.addEventListener('click', () => {
  void perform(async () => {
    const fresh = new TeachingClient(baseUrlInput.value.replace(/\/+$/, ''));
    const session = await fresh.createSession(
      Number(windowInput.value),
      Number(strideInput.value),
    );
    client = fresh;
    dispatch({ type: 'session_started', session });
    await refreshHierarchy();
  });
});

submitManifestButton.addEventListener('click', () => {
  void perform(async () => {
    if (!client || !state.session) throw new Error('start a session first');
    const outcome = await client.submitFromManifest(
      state.session.session_id,
      sequenceInput.value.trim(),
      manifestInput.value.trim(),
    );
    dispatch({
      type: 'encounter_outcome',
      sequenceId: sequenceInput.value.trim(),
      outcome,
    });
    if (outcome.state === 'decided') await refreshHierarchy();
  });
});

submitPayloadButton.addEventListener('click', () => {
  void perform(async () => {
    if (!client || !state.session) throw new Error('start a session first');
    const file = payloadInput.files?.[0];
    if (!file) throw new Error('choose a .vsem payload file first');
    const payload = parseVsem1(await file.arrayBuffer());
    const sequenceId =
      sequenceInput.value.trim() || file.name.replace(/\.[^.]*$/, '');
    const outcome = await client.submitFrames(
      state.session.session_id,
      sequenceId,
      payload.frames,
    );
    dispatch({ type: 'encounter_outcome', sequenceId, outcome });
    if (outcome.state === 'decided') await refreshHierarchy();
  });
});

function sendAnswer(yes: boolean): void {
  void perform(async () => {
    if (!client || !state.session || !state.pending) return;
    const outcome = await client.answer(
      state.session.session_id,
      wireAnswer(state.pending.kind, yes),
    );
    dispatch({ type: 'answer_outcome', outcome });
    if (outcome.state === 'decided') await refreshHierarchy();
  });
}

yesButton.addEventListener('click', () => sendAnswer(true));
noButton.addEventListener('click', () => sendAnswer(false));

refreshButton.addEventListener('click', () => {
  void perform(refreshHierarchy);
});

snapshotButton.addEventListener('click', () => {
  void perform(async () => {
    if (!client || !state.session) throw new Error('start a session first');
    const { snapshot } = await client.snapshot(state.session.session_id);
    const blob = new Blob([JSON.stringify(snapshot, null, 2) + '\n'], {
      type: 'application/json',
    });
    const link = document.createElement('a');
    link.href = URL.createObjectURL(blob);
    link.download = `vsem-session-${state.session.session_id}.json`;
    link.click();
    URL.revokeObjectURL(link.href);
  });
});

function previewList(target: HTMLElement, views: VisualObjectPreview[]): void {
  target.textContent = '';
  for (const view of views) {
    const item = document.createElement('li');
    item.textContent = `${view.sequence_id} [${view.start}..${view.end}]`;
    target.appendChild(item);
  }
}

function renderPrompt(pending: PendingQuery | null): void {
  promptCard.hidden = pending === null;
  if (!pending) return;
  promptTitle.textContent =
    `"${pending.sequence_id}" vs object #${pending.object_id} ` +
    `(distance ${pending.object_distance.toFixed(3)})`;
  promptQuestion.textContent = promptText(pending.kind);
  previewList(objectPreview, pending.object_preview);
  previewList(encounterPreview, pending.encounter_preview);
}

function render(): void {
  const hasSession = state.session !== null;
  sessionStatus.textContent = state.session
    ? `session ${state.session.session_id} | window ${state.session.window} ` +
      `stride ${state.session.stride} | iteration ${state.session.iteration} | ` +
      `${state.session.objects} objects`
    : 'no session';

  errorBanner.hidden = state.error === null;
  errorBanner.textContent = state.error ?? '';

  const awaitingAnswer = state.pending !== null;
  startButton.disabled = busy;
  submitManifestButton.disabled = busy || !hasSession || awaitingAnswer;
  submitPayloadButton.disabled = busy || !hasSession || awaitingAnswer;
  refreshButton.disabled = busy || !hasSession;
  snapshotButton.disabled = busy || !hasSession;
  yesButton.disabled = busy || !awaitingAnswer;
  noButton.disabled = busy || !awaitingAnswer;

  renderPrompt(state.pending);

  treeContainer.textContent = '';
  if (state.hierarchy) {
    treeContainer.appendChild(renderTree(hierarchyModel(state.hierarchy)));
  }

  const theta = state.thetaHistory[state.thetaHistory.length - 1];
  thetaNow.textContent = theta === undefined ? '-' : theta.toFixed(4);
  thetaSparkline.textContent = '';
  thetaSparkline.appendChild(renderSparkline(state.thetaHistory));

  decisionLog.textContent = '';
  for (const entry of [...state.log].reverse()) {
    const item = document.createElement('li');
    const tag = entry.supervised ? 'taught' : 'auto';
    item.textContent =
      `#${entry.iteration} ${entry.sequenceId}: ${entry.text} ` +
      `[${tag}, theta ${entry.theta.toFixed(4)}]`;
    decisionLog.appendChild(item);
  }
}

render();
