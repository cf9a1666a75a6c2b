/** Thin fetch client for the /v1 API; every view goes through here. */

import type {
  Answer, ApiError, CheckReport, GraphView, InstanceDoc, InstanceSummary,
  ModelDetail, ModelSummary, Profile, QuestionDoc, QuestionSpec, Scalar,
} from "./types.js";

export class ApiRequestError extends Error {
  constructor(public status: number, public body: ApiError) {
    super(body.error ?? `request failed with ${status}`);
  }
}

async function request<T>(path: string, init?: RequestInit): Promise<T> {
  const response = await fetch(path, init);
  const body = await response.json();
  if (!response.ok) {
    throw new ApiRequestError(response.status, body as ApiError);
  }
  return body as T;
}

function post<T>(path: string, payload: unknown): Promise<T> {
  return request<T>(path, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(payload),
  });
}

export const api = {
  profiles: () => request<Profile[]>("/v1/profiles"),
  questions: () => request<QuestionSpec[]>("/v1/questions"),
  models: () => request<ModelSummary[]>("/v1/models"),
  model: (name: string) => request<ModelDetail>(`/v1/models/${name}`),
  modelGraph: (name: string, view: string, instance?: string) => {
    const params = new URLSearchParams({ view });
    if (instance) params.set("instance", instance);
    return request<GraphView>(`/v1/models/${name}/graph?${params}`);
  },
  instances: () => request<InstanceSummary[]>("/v1/instances"),
  instance: (id: string) => request<InstanceDoc>(`/v1/instances/${id}`),
  createInstance: (model: string, inputs: Record<string, Scalar>, id?: string) =>
    post<InstanceDoc>(`/v1/models/${model}/instances`, { inputs, id }),
  runCheck: (model: string, check: string, service?: string) =>
    post<CheckReport>(`/v1/models/${model}/checks/${check}`,
      service ? { service } : {}),
  ask: (profile: string, question: Partial<QuestionDoc> & { qtype: string }) =>
    post<Answer>("/v1/ask", { profile, question }),
};

export type Api = typeof api;
