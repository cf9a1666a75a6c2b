/**
 * UI contract tests against recorded API fixtures: what the backend said is
 * exactly what the panels offer and draw. These cover the release criteria
 * for the browser client.
 */
import { describe, expect, it } from "vitest";

import { buildScene } from "../src/graphview.js";
import { allowedQuestionSpecs } from "../src/state.js";
import { traceSteps, walkerView } from "../src/trace.js";
import type { Answer, CheckReport, Profile, QuestionSpec } from "../src/types.js";
import { fixture } from "./helpers.js";

const profiles = fixture<Profile[]>("profiles");
const catalogue = fixture<QuestionSpec[]>("questions");

describe("question picker", () => {
  it("offers exactly the allowed qtypes for both built-in profiles", () => {
    expect(profiles.map((p) => p.name).sort()).toEqual(
      ["legal_support", "model_expert"]);
    for (const profile of profiles) {
      const offered = allowedQuestionSpecs(catalogue, profile)
        .map((spec) => spec.qtype);
      expect(offered).toEqual(profile.allowed_qtypes);
    }
  });

  it("keeps Whether away from legal support and Why away from model experts", () => {
    const legal = profiles.find((p) => p.name === "legal_support") as Profile;
    const expert = profiles.find((p) => p.name === "model_expert") as Profile;
    const legalQtypes = allowedQuestionSpecs(catalogue, legal).map((s) => s.qtype);
    const expertQtypes = allowedQuestionSpecs(catalogue, expert).map((s) => s.qtype);
    expect(legalQtypes).not.toContain("Whether");
    expect(legalQtypes).toContain("Why");
    expect(expertQtypes).toContain("Whether");
    expect(expertQtypes).not.toContain("Why");
  });

  it("catalogue carries all ten qtypes with parameter schemas", () => {
    expect(catalogue.map((spec) => spec.qtype)).toEqual([
      "What", "WhatIf", "Why", "WhyNot", "HowTo",
      "Input", "Output", "How", "Visualisation", "Whether"]);
    for (const spec of catalogue) {
      expect(spec.parameters.type).toBe("object");
    }
  });
});

describe("trace walker", () => {
  const answer = fixture<Answer>("answer_why_trace");

  it("renders as many graph elements as the answer's graph view", () => {
    const steps = traceSteps(answer);
    expect(steps.length).toBeGreaterThan(0);
    const expected = answer.graph_view.nodes.length + answer.graph_view.edges.length;
    for (let index = 0; index < steps.length; index += 1) {
      const view = walkerView(answer, index);
      expect(view.scene.items.length).toBe(expected);
      expect(view.scene.nodeCount).toBe(answer.graph_view.nodes.length);
      expect(view.scene.edgeCount).toBe(answer.graph_view.edges.length);
    }
  });

  it("walks the recorded derivation order and emphasises the current rule", () => {
    const steps = traceSteps(answer);
    expect(steps.map((step) => step.rule)).toEqual(
      ["payment_overdue_when_late", "tax_interest_due"]);
    const first = walkerView(answer, 0);
    expect(first.emphasis?.has("rule:payment_overdue_when_late")).toBe(true);
    expect(first.emphasis?.has("rule:tax_interest_due")).toBe(false);
    const last = walkerView(answer, 99); // clamped to the final step
    expect(last.step?.rule).toBe("tax_interest_due");
    expect(last.emphasis?.has("var:owes_tax_interest")).toBe(true);
  });
});

describe("check dashboard", () => {
  const report = fixture<CheckReport>("check_io_paths_crippled");

  it("highlights exactly the two underivable variables", () => {
    const scene = buildScene(report.graph_view);
    const highlighted = scene.items
      .filter((item) => item.kind === "node" && item.highlighted)
      .map((item) => item.id)
      .sort();
    expect(highlighted).toEqual(
      ["var:interest_period_end", "var:interest_period_start"]);
  });

  it("shows the backend's verdict and fail rows untouched", () => {
    expect(report.verdict).toBe("fail");
    const failures = report.table.filter((row) => row.status === "fail")
      .map((row) => row.element).sort();
    expect(failures).toEqual(["interest_period_end", "interest_period_start"]);
  });
});

describe("answers carry everything the panels show", () => {
  it("why answer: text, conditions table, citations, highlighted view", () => {
    const answer = fixture<Answer>("answer_why");
    expect(answer.text).toContain("tax_interest_due");
    expect(answer.citations[0].uri).toContain("wetten.overheid.nl");
    const scene = buildScene(answer.graph_view);
    const highlighted = scene.items.filter(
      (item) => item.kind === "node" && item.highlighted).map((i) => i.id);
    expect(highlighted).toContain("rule:tax_interest_due");
    expect(highlighted).toContain("var:owes_tax_interest");
  });

  it("what-if answer: the diff table is shown as-is", () => {
    const answer = fixture<Answer>("answer_whatif");
    const table = answer.tables[0];
    expect(table.columns).toEqual(["variable", "old value", "new value", "changed"]);
    const decision = table.rows.find((row) => row[0] === "owes_tax_interest");
    expect(decision).toEqual(["owes_tax_interest", "true", "false", "yes"]);
  });
});
