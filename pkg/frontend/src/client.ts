/**
 * Thin typed client for the benchrank HTTP API.
 *
 * Every method maps to exactly one endpoint; errors carry the server's
 * detail message (and violation list for inconsistent sessions) so the
 * wizard can render them inline.
 */

import type {
  EvaluationDoc,
  ExplanationDoc,
  GapAnswer,
  IngestReportDoc,
  InspectDoc,
  ModelDoc,
  Override,
  ProfileBody,
  SessionDoc,
  Violation,
} from "./types.js";

export class ApiError extends Error {
  readonly status: number;
  readonly violations: Violation[];

  constructor(status: number, message: string, violations: Violation[] = []) {
    super(message);
    this.status = status;
    this.violations = violations;
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  private readonly base: string;
  private readonly fetchImpl: FetchLike;

  constructor(base = "", fetchImpl: FetchLike = (i, init) => fetch(i, init)) {
    this.base = base.replace(/\/$/, "");
    this.fetchImpl = fetchImpl;
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(`${this.base}/api/v1${path}`, {
      headers: { "content-type": "application/json" },
      ...init,
    });
    const text = await response.text();
    if (!response.ok) {
      let detail = text || response.statusText;
      let violations: Violation[] = [];
      try {
        const body = JSON.parse(text);
        detail = typeof body.detail === "string" ? body.detail : JSON.stringify(body.detail);
        violations = body.violations ?? [];
      } catch {
        // non-JSON error body: keep the raw text
      }
      throw new ApiError(response.status, detail, violations);
    }
    return JSON.parse(text) as T;
  }

  listModels(): Promise<{ models: string[] }> {
    return this.request("/models");
  }

  getModel(modelId: string): Promise<ModelDoc> {
    return this.request(`/models/${encodeURIComponent(modelId)}`);
  }

  putModel(modelId: string, doc: ModelDoc): Promise<ModelDoc> {
    return this.request(`/models/${encodeURIComponent(modelId)}`, {
      method: "PUT",
      body: JSON.stringify(doc),
    });
  }

  inspectModel(modelId: string): Promise<InspectDoc> {
    return this.request(`/models/${encodeURIComponent(modelId)}/inspect`);
  }

  ingestRecords(doc: unknown): Promise<IngestReportDoc> {
    return this.request("/records", { method: "POST", body: JSON.stringify(doc) });
  }

  evaluate(modelId: string, profiles: ProfileBody[] = [], useRecords = true): Promise<EvaluationDoc> {
    return this.request("/evaluate", {
      method: "POST",
      body: JSON.stringify({ model_id: modelId, profiles, use_records: useRecords }),
    });
  }

  explain(
    modelId: string,
    alternativeId: string,
    reference: "worst" | "ideal",
    profiles: ProfileBody[] = [],
  ): Promise<ExplanationDoc> {
    return this.request("/explain", {
      method: "POST",
      body: JSON.stringify({
        model_id: modelId,
        alternative_id: alternativeId,
        reference,
        profiles,
        use_records: true,
      }),
    });
  }

  whatIf(modelId: string, overrides: Override[], profiles: ProfileBody[] = []): Promise<EvaluationDoc> {
    return this.request("/whatif", {
      method: "POST",
      body: JSON.stringify({
        model_id: modelId,
        overrides,
        profiles,
        use_records: true,
      }),
    });
  }

  createUtilitySession(metricId: string, elements: number[], good: number): Promise<SessionDoc> {
    return this.request("/sessions", {
      method: "POST",
      body: JSON.stringify({ kind: "utility", metric_id: metricId, elements, good }),
    });
  }

  createCapacitySession(nodeId: string, children: string[], includePairs = true): Promise<SessionDoc> {
    return this.request("/sessions", {
      method: "POST",
      body: JSON.stringify({
        kind: "capacity",
        node_id: nodeId,
        children,
        include_pairs: includePairs,
      }),
    });
  }

  getSession(sessionId: string): Promise<SessionDoc> {
    return this.request(`/sessions/${encodeURIComponent(sessionId)}`);
  }

  submitAnswers(
    sessionId: string,
    version: number,
    answers: { ranking?: string[][]; gaps?: GapAnswer[] },
  ): Promise<SessionDoc> {
    return this.request(`/sessions/${encodeURIComponent(sessionId)}/answers`, {
      method: "POST",
      body: JSON.stringify({ version, ...answers }),
    });
  }

  finalizeSession(
    sessionId: string,
    version: number,
    modelId: string,
    nodeId?: string,
  ): Promise<{ session: SessionDoc; model: ModelDoc }> {
    return this.request(`/sessions/${encodeURIComponent(sessionId)}/finalize`, {
      method: "POST",
      body: JSON.stringify({ version, model_id: modelId, node_id: nodeId ?? null }),
    });
  }
}
