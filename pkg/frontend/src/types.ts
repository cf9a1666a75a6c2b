/**
 * Wire-format types for the /v1 API. These mirror the backend's JSON
 * documents exactly; the UI never computes domain values of its own.
 */

export type Scalar = string | number | boolean;

export interface GraphNode {
  id: string;
  label: string;
  properties: Record<string, Scalar>;
}

export interface GraphEdge {
  id: string;
  from: string;
  to: string;
  label: string;
  properties: Record<string, Scalar>;
}

export interface GraphView {
  nodes: GraphNode[];
  edges: GraphEdge[];
}

export interface AnswerTable {
  title: string;
  columns: string[];
  rows: string[][];
}

export interface Citation {
  label: string;
  uri: string;
}

export interface QuestionDoc {
  qtype: string;
  model: string | null;
  instance: string | null;
  target: string | null;
  parameters: Record<string, unknown>;
}

export interface Answer {
  question: QuestionDoc;
  text: string;
  tables: AnswerTable[];
  graph_view: GraphView;
  citations: Citation[];
}

export interface CheckRow {
  element: string;
  kind: string;
  status: "pass" | "fail" | "warn";
  detail: string;
}

export interface CheckReport {
  check: string;
  verdict: "pass" | "fail";
  text: string;
  table: CheckRow[];
  graph_view: GraphView;
}

export interface QuestionSpec {
  qtype: string;
  category: "decision" | "system";
  description: string;
  needs_instance: boolean;
  target_required: boolean;
  parameters: ParameterSchema;
}

export interface ParameterSchema {
  type: "object";
  properties: Record<string, PropertySchema>;
  required?: string[];
  additionalProperties?: boolean;
}

export interface PropertySchema {
  type?: string;
  description?: string;
  enum?: string[];
  default?: unknown;
  minProperties?: number;
  minimum?: number;
}

export interface Profile {
  name: string;
  allowed_qtypes: string[];
  detail_radius: number | null;
  vocabulary: "plain" | "technical";
}

export interface ModelSummary {
  name: string;
  version: string | null;
  revision: number | null;
}

export interface ModelDetail extends ModelSummary {
  objects: string[];
  rules: string[];
  services: string[];
  source: string;
}

export interface InstanceSummary {
  id: string;
  model: string | null;
  status: string | null;
}

export interface InstanceDoc {
  model: string;
  inputs: Record<string, Scalar>;
  derived: Record<string, Scalar>;
  trace: TraceStepDoc[];
  status: "complete" | "partial";
  id?: string;
}

export interface TraceStepDoc {
  rule: string;
  conditions: { atom: string; satisfied: boolean }[];
  consumed: Record<string, Scalar>;
  produced: { variable: string; value: Scalar };
}

export interface ApiError {
  error: string;
  diagnostics?: { severity: string; message: string; line: number; column: number }[];
}
