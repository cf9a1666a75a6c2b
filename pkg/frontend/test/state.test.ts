import { describe, expect, it } from "vitest";

import {
  allowedQuestionSpecs, initialState, receiveAnswer, selectInstance,
  selectModel, selectProfile, selectQtype, stepTrace, toggleLabel,
} from "../src/state.js";
import type { Answer, Profile, QuestionSpec } from "../src/types.js";
import { fixture } from "./helpers.js";

const profiles = fixture<Profile[]>("profiles");
const catalogue = fixture<QuestionSpec[]>("questions");
const legal = profiles.find((p) => p.name === "legal_support") as Profile;
const expert = profiles.find((p) => p.name === "model_expert") as Profile;

describe("session state", () => {
  it("switching profile drops a now-forbidden question and its answer", () => {
    let state = selectProfile(initialState(), legal, catalogue);
    state = selectQtype(state, "Why");
    state = receiveAnswer(state, fixture<Answer>("answer_why"));
    state = selectProfile(state, expert, catalogue);
    expect(state.qtype).toBeNull();
    expect(state.answer).toBeNull();
    expect(state.view.detailRadius).toBe(expert.detail_radius);
  });

  it("keeps the question type when both profiles allow it", () => {
    let state = selectProfile(initialState(), legal, catalogue);
    state = selectQtype(state, "Input");
    state = selectProfile(state, expert, catalogue);
    expect(state.qtype).toBe("Input");
  });

  it("changing model clears the instance; changing either clears the answer", () => {
    let state = selectProfile(initialState(), legal, catalogue);
    state = selectModel(state, "tax_interest");
    state = selectInstance(state, "late");
    state = receiveAnswer(state, fixture<Answer>("answer_why"));
    state = selectModel(state, "other");
    expect(state.instance).toBeNull();
    expect(state.answer).toBeNull();
  });

  it("trace stepping clamps to the available steps", () => {
    let state = receiveAnswer(initialState(), fixture<Answer>("answer_why_trace"));
    expect(state.traceStep).toBe(0);
    state = stepTrace(state, -1, 2);
    expect(state.traceStep).toBe(0);
    state = stepTrace(state, +1, 2);
    expect(state.traceStep).toBe(1);
    state = stepTrace(state, +1, 2);
    expect(state.traceStep).toBe(1);
  });

  it("label toggling flips visibility filters", () => {
    let state = initialState();
    state = toggleLabel(state, "Rule");
    expect(state.view.visibleLabels.has("Rule")).toBe(true);
    state = toggleLabel(state, "Rule");
    expect(state.view.visibleLabels.has("Rule")).toBe(false);
  });

  it("no profile means no questions on offer", () => {
    expect(allowedQuestionSpecs(catalogue, null)).toEqual([]);
  });
});
