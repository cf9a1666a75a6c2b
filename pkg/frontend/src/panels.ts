/**
 * DOM wiring: the model browser, check dashboard, question panel, what-if
 * panel, and trace walker. All data arrives through api.ts; these functions
 * only arrange documents on screen.
 */

import { api, ApiRequestError } from "./api.js";
import { collectParameters, fieldsFromSchema, FormField } from "./forms.js";
import { buildScene, renderSvg } from "./graphview.js";
import {
  SessionState, allowedQuestionSpecs, receiveAnswer, selectInstance,
  selectModel, selectProfile, selectQtype, stepTrace,
} from "./state.js";
import { traceSteps, walkerView } from "./trace.js";
import type {
  Answer, CheckReport, GraphView, InstanceDoc, Profile, QuestionSpec,
} from "./types.js";

const GRAPH_WIDTH = 960;
const GRAPH_HEIGHT = 520;

export interface AppContext {
  state: SessionState;
  profiles: Profile[];
  catalogue: QuestionSpec[];
  refresh: () => void;
}

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K, className?: string, text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function reportError(error: unknown): void {
  const box = document.getElementById("status");
  if (!box) return;
  box.className = "status error";
  if (error instanceof ApiRequestError) {
    const lines = [error.body.error];
    for (const diagnostic of error.body.diagnostics ?? []) {
      lines.push(`${diagnostic.line}:${diagnostic.column} ${diagnostic.message}`);
    }
    box.textContent = lines.join("\n");
  } else {
    box.textContent = String(error);
  }
}

export function clearError(): void {
  const box = document.getElementById("status");
  if (box) {
    box.className = "status";
    box.textContent = "";
  }
}

// --- header: profile / model / instance selectors ------------------------------

export async function renderHeader(ctx: AppContext, root: HTMLElement): Promise<void> {
  root.textContent = "";
  const profileSelect = el("select");
  for (const profile of ctx.profiles) {
    const option = el("option", undefined, profile.name);
    option.value = profile.name;
    if (ctx.state.profile?.name === profile.name) option.selected = true;
    profileSelect.appendChild(option);
  }
  profileSelect.addEventListener("change", () => {
    const profile = ctx.profiles.find((p) => p.name === profileSelect.value);
    if (profile) {
      ctx.state = Object.assign(ctx.state, selectProfile(ctx.state, profile, ctx.catalogue));
      ctx.refresh();
    }
  });
  root.appendChild(labelled("Profile", profileSelect));

  const models = await api.models();
  const modelSelect = el("select");
  modelSelect.appendChild(el("option", undefined, "(choose a model)"));
  for (const model of models) {
    const option = el("option", undefined, `${model.name} (v${model.version})`);
    option.value = model.name;
    if (ctx.state.model === model.name) option.selected = true;
    modelSelect.appendChild(option);
  }
  modelSelect.addEventListener("change", () => {
    ctx.state = Object.assign(ctx.state, selectModel(ctx.state, modelSelect.value));
    ctx.refresh();
  });
  root.appendChild(labelled("Model", modelSelect));

  const instances = await api.instances();
  const instanceSelect = el("select");
  instanceSelect.appendChild(el("option", undefined, "(no instance)"));
  for (const instance of instances) {
    if (ctx.state.model && instance.model !== ctx.state.model) continue;
    const option = el("option", undefined, `${instance.id} [${instance.status}]`);
    option.value = instance.id;
    if (ctx.state.instance === instance.id) option.selected = true;
    instanceSelect.appendChild(option);
  }
  instanceSelect.addEventListener("change", () => {
    ctx.state = Object.assign(
      ctx.state, selectInstance(ctx.state, instanceSelect.value || null));
    ctx.refresh();
  });
  root.appendChild(labelled("Decision instance", instanceSelect));
}

function labelled(text: string, control: HTMLElement): HTMLElement {
  const wrap = el("label", "field");
  wrap.appendChild(el("span", "field-name", text));
  wrap.appendChild(control);
  return wrap;
}

// --- model browser ---------------------------------------------------------------

export function renderModelBrowser(ctx: AppContext, root: HTMLElement): void {
  root.textContent = "";
  root.appendChild(el("h2", undefined, "Model views"));
  if (!ctx.state.model) {
    root.appendChild(el("p", "hint", "Choose a model to explore its structure."));
    return;
  }
  const bar = el("div", "toolbar");
  const canvas = el("div", "graph-holder");
  for (const view of ["object", "rule", "service", "full"]) {
    const button = el("button", undefined, view);
    button.addEventListener("click", async () => {
      try {
        clearError();
        const graph = await api.modelGraph(
          ctx.state.model as string, view,
          ctx.state.instance ?? undefined);
        drawGraph(canvas, graph, ctx, { layered: false });
      } catch (error) {
        reportError(error);
      }
    });
    bar.appendChild(button);
  }
  root.appendChild(bar);
  root.appendChild(canvas);
}

function drawGraph(canvas: HTMLElement, graph: GraphView, ctx: AppContext,
                   options: { layered: boolean; emphasis?: Set<string> }): void {
  const scene = buildScene(graph, ctx.state.view.visibleLabels);
  renderSvg(canvas, graph, scene, {
    width: GRAPH_WIDTH,
    height: GRAPH_HEIGHT,
    layered: options.layered,
    emphasis: options.emphasis,
    onNodeClick: async (id) => {
      // clicking a node narrows to its neighbourhood via a filtered request
      const name = id.split(":", 2)[1];
      try {
        const answer = await api.ask(ctx.state.profile?.name ?? "model_expert", {
          qtype: "Visualisation",
          model: ctx.state.model,
          parameters: { view: "full", focus: name, radius: 2 },
        });
        drawGraph(canvas, answer.graph_view, ctx, options);
      } catch (error) {
        reportError(error);
      }
    },
  });
}

// --- check dashboard (model experts) ------------------------------------------------

const CHECKS = ["messages_used", "io_paths", "variables_used",
                "variables_assigned", "logical"];

export function renderCheckDashboard(ctx: AppContext, root: HTMLElement): void {
  root.textContent = "";
  if (ctx.state.profile?.name !== "model_expert") {
    root.hidden = true;
    return;
  }
  root.hidden = false;
  root.appendChild(el("h2", undefined, "Verification checks"));
  if (!ctx.state.model) {
    root.appendChild(el("p", "hint", "Choose a model to verify."));
    return;
  }
  const bar = el("div", "toolbar");
  const result = el("div", "check-result");
  for (const check of CHECKS) {
    const button = el("button", undefined, check);
    button.addEventListener("click", async () => {
      try {
        clearError();
        const report = await api.runCheck(ctx.state.model as string, check);
        renderCheckReport(ctx, result, report);
      } catch (error) {
        reportError(error);
      }
    });
    bar.appendChild(button);
  }
  root.appendChild(bar);
  root.appendChild(result);
}

export function renderCheckReport(ctx: AppContext, root: HTMLElement,
                                  report: CheckReport): void {
  root.textContent = "";
  root.appendChild(el("p", `verdict verdict-${report.verdict}`, report.text));
  root.appendChild(renderTable(["element", "kind", "status", "detail"],
    report.table.map((row) => [row.element, row.kind, row.status, row.detail]),
    (cells) => (cells[2] === "fail" ? "row-fail" : cells[2] === "warn" ? "row-warn" : "")));
  const canvas = el("div", "graph-holder");
  root.appendChild(canvas);
  drawGraph(canvas, report.graph_view, ctx, { layered: false });
}

function renderTable(columns: string[], rows: string[][],
                     rowClass?: (cells: string[]) => string): HTMLElement {
  const table = el("table", "data");
  const head = el("tr");
  for (const column of columns) head.appendChild(el("th", undefined, column));
  table.appendChild(head);
  for (const cells of rows) {
    const tr = el("tr", rowClass ? rowClass(cells) : undefined);
    for (const cell of cells) tr.appendChild(el("td", undefined, cell));
    table.appendChild(tr);
  }
  return table;
}

// --- question panel -------------------------------------------------------------------

export function renderQuestionPanel(ctx: AppContext, root: HTMLElement): void {
  root.textContent = "";
  root.appendChild(el("h2", undefined, "Ask a question"));
  const specs = allowedQuestionSpecs(ctx.catalogue, ctx.state.profile);
  if (specs.length === 0) {
    root.appendChild(el("p", "hint", "Pick a profile first."));
    return;
  }
  const picker = el("select");
  picker.id = "qtype-picker";
  picker.appendChild(el("option", undefined, "(question type)"));
  for (const spec of specs) {
    const option = el("option", undefined, `${spec.qtype} - ${spec.description}`);
    option.value = spec.qtype;
    if (ctx.state.qtype === spec.qtype) option.selected = true;
    picker.appendChild(option);
  }
  picker.addEventListener("change", () => {
    ctx.state = Object.assign(ctx.state, selectQtype(ctx.state, picker.value));
    ctx.refresh();
  });
  root.appendChild(labelled("Question", picker));

  const spec = specs.find((s) => s.qtype === ctx.state.qtype);
  if (!spec) return;

  const form = el("form", "question-form");
  const rawValues: Record<string, string> = {};
  let targetInput: HTMLInputElement | null = null;
  if (spec.target_required) {
    targetInput = el("input") as HTMLInputElement;
    targetInput.placeholder = "variable name";
    form.appendChild(labelled("Target variable", targetInput));
  }
  const fields: FormField[] = fieldsFromSchema(spec.parameters);
  for (const field of fields) {
    const control = fieldControl(field, rawValues);
    form.appendChild(labelled(
      field.name + (field.required ? " *" : ""), control));
    if (field.description) form.appendChild(el("p", "hint", field.description));
  }
  const submit = el("button", undefined, "Ask");
  submit.type = "submit";
  form.appendChild(submit);
  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    try {
      clearError();
      const parameters = collectParameters(fields, rawValues);
      const answer = await api.ask(ctx.state.profile!.name, {
        qtype: spec.qtype,
        model: ctx.state.model,
        instance: spec.needs_instance ? ctx.state.instance : ctx.state.instance,
        target: targetInput?.value || null,
        parameters,
      });
      ctx.state = Object.assign(ctx.state, receiveAnswer(ctx.state, answer));
      ctx.refresh();
    } catch (error) {
      reportError(error);
    }
  });
  root.appendChild(form);
}

function fieldControl(field: FormField, rawValues: Record<string, string>): HTMLElement {
  if (field.kind === "enum") {
    const select = el("select");
    select.appendChild(el("option", undefined, ""));
    for (const value of field.enumValues ?? []) {
      const option = el("option", undefined, value);
      option.value = value;
      select.appendChild(option);
    }
    select.addEventListener("change", () => { rawValues[field.name] = select.value; });
    return select;
  }
  if (field.kind === "boolean") {
    const select = el("select");
    for (const value of ["", "true", "false"]) {
      const option = el("option", undefined, value);
      option.value = value;
      select.appendChild(option);
    }
    select.addEventListener("change", () => { rawValues[field.name] = select.value; });
    return select;
  }
  const input = el("input") as HTMLInputElement;
  input.placeholder = field.kind === "map" ? '{"variable": value}' : field.kind;
  if (field.defaultValue !== undefined) input.value = JSON.stringify(field.defaultValue);
  input.addEventListener("input", () => { rawValues[field.name] = input.value; });
  return input;
}

// --- answer display + trace walker ------------------------------------------------------

export function renderAnswer(ctx: AppContext, root: HTMLElement): void {
  root.textContent = "";
  const answer = ctx.state.answer;
  if (!answer) return;
  root.appendChild(el("h2", undefined, `Answer: ${answer.question.qtype}`));
  if (answer.text) {
    const text = el("pre", "answer-text");
    text.textContent = answer.text;
    root.appendChild(text);
  }
  if (answer.citations.length > 0) {
    const list = el("ul", "citations");
    for (const citation of answer.citations) {
      const item = el("li");
      const link = el("a", undefined, citation.label);
      link.setAttribute("href", citation.uri);
      link.setAttribute("target", "_blank");
      item.appendChild(link);
      list.appendChild(item);
    }
    root.appendChild(labelledBlock("Law sources", list));
  }
  for (const table of answer.tables) {
    root.appendChild(labelledBlock(table.title,
      renderTable(table.columns, table.rows)));
  }

  const steps = traceSteps(answer);
  const canvas = el("div", "graph-holder");
  canvas.id = "answer-graph";
  if (steps.length > 0) {
    root.appendChild(renderWalkerControls(ctx, canvas));
  }
  root.appendChild(canvas);
  drawAnswerGraph(ctx, canvas);
}

function labelledBlock(title: string, content: HTMLElement): HTMLElement {
  const block = el("section", "block");
  block.appendChild(el("h3", undefined, title));
  block.appendChild(content);
  return block;
}

function renderWalkerControls(ctx: AppContext, canvas: HTMLElement): HTMLElement {
  const bar = el("div", "toolbar walker");
  const caption = el("span", "walker-caption");
  const back = el("button", undefined, "< previous step");
  const forward = el("button", undefined, "next step >");
  const update = () => {
    const answer = ctx.state.answer as Answer;
    const view = walkerView(answer, ctx.state.traceStep);
    caption.textContent = view.step
      ? `step ${view.step.index + 1}/${view.stepCount}: rule ${view.step.rule} ` +
        `sets ${view.step.variable} = ${view.step.value}`
      : "";
    drawAnswerGraph(ctx, canvas);
  };
  back.addEventListener("click", () => {
    const count = traceSteps(ctx.state.answer as Answer).length;
    ctx.state = Object.assign(ctx.state, stepTrace(ctx.state, -1, count));
    update();
  });
  forward.addEventListener("click", () => {
    const count = traceSteps(ctx.state.answer as Answer).length;
    ctx.state = Object.assign(ctx.state, stepTrace(ctx.state, +1, count));
    update();
  });
  bar.appendChild(back);
  bar.appendChild(caption);
  bar.appendChild(forward);
  queueMicrotask(update);
  return bar;
}

function drawAnswerGraph(ctx: AppContext, canvas: HTMLElement): void {
  const answer = ctx.state.answer;
  if (!answer) return;
  const steps = traceSteps(answer);
  if (steps.length > 0) {
    const view = walkerView(answer, ctx.state.traceStep);
    renderSvg(canvas, answer.graph_view, view.scene, {
      width: GRAPH_WIDTH,
      height: GRAPH_HEIGHT,
      layered: true,  // trace reads left to right: inputs to decision
      emphasis: view.emphasis,
    });
  } else {
    drawGraph(canvas, answer.graph_view, ctx, { layered: false });
  }
}

// --- what-if panel --------------------------------------------------------------------

export async function renderWhatIfPanel(ctx: AppContext, root: HTMLElement): Promise<void> {
  root.textContent = "";
  const allowed = ctx.state.profile?.allowed_qtypes.includes("WhatIf");
  if (!allowed || !ctx.state.instance || !ctx.state.model) {
    root.hidden = true;
    return;
  }
  root.hidden = false;
  root.appendChild(el("h2", undefined, "What if the inputs were different?"));
  let instance: InstanceDoc;
  try {
    instance = await api.instance(ctx.state.instance);
  } catch (error) {
    reportError(error);
    return;
  }
  const form = el("form", "question-form");
  const edited: Record<string, HTMLInputElement> = {};
  for (const [name, value] of Object.entries(instance.inputs)) {
    const input = el("input") as HTMLInputElement;
    input.value = typeof value === "string" ? value : JSON.stringify(value);
    edited[name] = input;
    form.appendChild(labelled(name, input));
  }
  const submit = el("button", undefined, "Re-evaluate");
  submit.type = "submit";
  form.appendChild(submit);
  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    const overrides: Record<string, unknown> = {};
    for (const [name, input] of Object.entries(edited)) {
      const original = instance.inputs[name];
      const originalText = typeof original === "string"
        ? original : JSON.stringify(original);
      if (input.value === originalText) continue;
      try {
        overrides[name] = JSON.parse(input.value);
      } catch {
        overrides[name] = input.value;
      }
    }
    if (Object.keys(overrides).length === 0) {
      reportError(new Error("change at least one input value"));
      return;
    }
    try {
      clearError();
      const answer = await api.ask(ctx.state.profile!.name, {
        qtype: "WhatIf",
        model: ctx.state.model,
        instance: ctx.state.instance,
        parameters: { overrides },
      });
      ctx.state = Object.assign(ctx.state, receiveAnswer(ctx.state, answer));
      ctx.refresh();
    } catch (error) {
      reportError(error);
    }
  });
  root.appendChild(form);
}
