/**
 * Session state and its pure transitions.
 *
 * The question form must only ever offer the selected profile's allowed
 * question types (the backend enforces the same rule on /ask); everything
 * here is derived from API documents, never computed in the UI.
 */

import type { Answer, Profile, QuestionSpec } from "./types.js";

export interface ViewState {
  visibleLabels: Set<string>;
  detailRadius: number | null;
  camera: { x: number; y: number; zoom: number };
}

export interface SessionState {
  profile: Profile | null;
  model: string | null;
  instance: string | null;
  qtype: string | null;
  answer: Answer | null;
  traceStep: number;
  view: ViewState;
}

export function initialState(): SessionState {
  return {
    profile: null,
    model: null,
    instance: null,
    qtype: null,
    answer: null,
    traceStep: 0,
    view: {
      visibleLabels: new Set(),
      detailRadius: null,
      camera: { x: 0, y: 0, zoom: 1 },
    },
  };
}

/** The question types this profile may pick, in catalogue order. */
export function allowedQuestionSpecs(
  catalogue: QuestionSpec[],
  profile: Profile | null,
): QuestionSpec[] {
  if (!profile) return [];
  const allowed = new Set(profile.allowed_qtypes);
  return catalogue.filter((spec) => allowed.has(spec.qtype));
}

export function selectProfile(state: SessionState, profile: Profile,
                              catalogue: QuestionSpec[]): SessionState {
  const stillAllowed = state.qtype !== null
    && allowedQuestionSpecs(catalogue, profile).some((s) => s.qtype === state.qtype);
  return {
    ...state,
    profile,
    qtype: stillAllowed ? state.qtype : null,
    answer: null,
    traceStep: 0,
    view: { ...state.view, detailRadius: profile.detail_radius },
  };
}

export function selectModel(state: SessionState, model: string): SessionState {
  return { ...state, model, instance: null, answer: null, traceStep: 0 };
}

export function selectInstance(state: SessionState, instance: string | null): SessionState {
  return { ...state, instance, answer: null, traceStep: 0 };
}

export function selectQtype(state: SessionState, qtype: string): SessionState {
  return { ...state, qtype, answer: null, traceStep: 0 };
}

export function receiveAnswer(state: SessionState, answer: Answer): SessionState {
  return { ...state, answer, traceStep: 0 };
}

export function stepTrace(state: SessionState, delta: number, stepCount: number): SessionState {
  if (stepCount === 0) return { ...state, traceStep: 0 };
  const next = Math.min(Math.max(state.traceStep + delta, 0), stepCount - 1);
  return { ...state, traceStep: next };
}

export function toggleLabel(state: SessionState, label: string): SessionState {
  const visibleLabels = new Set(state.view.visibleLabels);
  if (visibleLabels.has(label)) {
    visibleLabels.delete(label);
  } else {
    visibleLabels.add(label);
  }
  return { ...state, view: { ...state.view, visibleLabels } };
}
