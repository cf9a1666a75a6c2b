/**
 * Schema-driven parameter forms: turn a question's JSON-Schema parameter
 * description (from GET /v1/questions) into flat field descriptors, and
 * collect typed values back out of the filled-in form.
 */

import type { ParameterSchema, QuestionSpec } from "./types.js";

export type FieldKind = "string" | "number" | "boolean" | "enum" | "map";

export interface FormField {
  name: string;
  kind: FieldKind;
  required: boolean;
  description?: string;
  enumValues?: string[];
  defaultValue?: unknown;
}

/** Flatten a parameter schema into form fields; objects become JSON maps. */
export function fieldsFromSchema(schema: ParameterSchema): FormField[] {
  const required = new Set(schema.required ?? []);
  const fields: FormField[] = [];
  for (const [name, prop] of Object.entries(schema.properties ?? {})) {
    const base = {
      name,
      required: required.has(name),
      description: prop.description,
      defaultValue: prop.default,
    };
    if (prop.enum) {
      fields.push({ ...base, kind: "enum", enumValues: prop.enum });
    } else if (prop.type === "boolean") {
      fields.push({ ...base, kind: "boolean" });
    } else if (prop.type === "integer" || prop.type === "number") {
      fields.push({ ...base, kind: "number" });
    } else if (prop.type === "object") {
      fields.push({ ...base, kind: "map" });
    } else if (prop.type === "string") {
      fields.push({ ...base, kind: "string" });
    } else {
      // untyped parameters (e.g. "any value") edit as JSON-ish strings
      fields.push({ ...base, kind: "string" });
    }
  }
  return fields;
}

/** The extra inputs a question needs besides its parameters. */
export function questionNeeds(spec: QuestionSpec): { instance: boolean; target: boolean } {
  return { instance: spec.needs_instance, target: spec.target_required };
}

/**
 * Parse one raw form value according to its field kind. Strings that look
 * like JSON scalars (true, 42, "quoted") are passed through as typed values
 * so untyped parameters round-trip sensibly.
 */
export function parseFieldValue(field: FormField, raw: string): unknown {
  const trimmed = raw.trim();
  if (trimmed === "") return undefined;
  switch (field.kind) {
    case "boolean":
      return trimmed === "true";
    case "number": {
      const value = Number(trimmed);
      if (Number.isNaN(value)) throw new Error(`${field.name}: not a number`);
      return value;
    }
    case "map": {
      const parsed = JSON.parse(trimmed);
      if (typeof parsed !== "object" || parsed === null || Array.isArray(parsed)) {
        throw new Error(`${field.name}: expected a JSON object`);
      }
      return parsed;
    }
    case "enum":
      return trimmed;
    default:
      try {
        return JSON.parse(trimmed);
      } catch {
        return trimmed; // plain text
      }
  }
}

/** Collect non-empty field values into the question's parameters object. */
export function collectParameters(
  fields: FormField[],
  rawValues: Record<string, string>,
): Record<string, unknown> {
  const parameters: Record<string, unknown> = {};
  for (const field of fields) {
    const raw = rawValues[field.name] ?? "";
    const value = parseFieldValue(field, raw);
    if (value === undefined) {
      if (field.required) throw new Error(`${field.name} is required`);
      continue;
    }
    parameters[field.name] = value;
  }
  return parameters;
}
