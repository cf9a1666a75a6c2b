/**
 * Trace walker: step through a Why-trace answer one derivation at a time.
 *
 * Steps come straight from the answer's "Derivation steps" table (the
 * backend's ordering); the walker only groups what is already there. The
 * rendered graph is always the answer's full graph view, with the current
 * step's rule and its incident edges emphasised.
 */

import { buildScene, Scene, stepEmphasis } from "./graphview.js";
import type { Answer } from "./types.js";

export interface WalkStep {
  index: number;
  rule: string;
  variable: string;
  value: string;
  conditions: string;
}

export function traceSteps(answer: Answer): WalkStep[] {
  const table = answer.tables.find((t) => t.title === "Derivation steps");
  if (!table) return [];
  const column = (name: string) => table.columns.indexOf(name);
  const rule = column("rule");
  const variable = column("variable");
  const value = column("value");
  const conditions = column("conditions");
  return table.rows.map((row, index) => ({
    index,
    rule: row[rule],
    variable: row[variable],
    value: row[value],
    conditions: row[conditions],
  }));
}

export interface WalkerView {
  scene: Scene;
  emphasis: Set<string> | undefined;
  step: WalkStep | null;
  stepCount: number;
}

/** What the walker shows at one step; the scene always covers the whole
 * answer graph so the rendered element count equals the graph view's. */
export function walkerView(answer: Answer, stepIndex: number): WalkerView {
  const steps = traceSteps(answer);
  const scene = buildScene(answer.graph_view);
  if (steps.length === 0) {
    return { scene, emphasis: undefined, step: null, stepCount: 0 };
  }
  const bounded = Math.min(Math.max(stepIndex, 0), steps.length - 1);
  const step = steps[bounded];
  return {
    scene,
    emphasis: stepEmphasis(answer.graph_view, step.rule),
    step,
    stepCount: steps.length,
  };
}
