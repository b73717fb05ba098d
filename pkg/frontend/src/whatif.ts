/**
 * What-if exploration: transient parameter overrides over a stored model.
 *
 * Overrides live only in this state object and in the requests it sends to
 * the what-if endpoint; nothing persists server-side, and discarding them
 * restores server truth by construction. Obviously invalid edits (negative
 * weights, broken sums, non-monotone curves) are rejected here before any
 * request goes out.
 */

import type { ChoquetDoc, EvaluationDoc, Override, ProfileBody, UtilityDoc } from "./types.js";

/** The slice of the API what-if needs; ApiClient satisfies it. */
export interface WhatIfApi {
  whatIf(
    modelId: string,
    overrides: Override[],
    profiles?: ProfileBody[],
  ): Promise<EvaluationDoc>;
}

const SUM_TOL = 1e-9;

export function validateChoquet(doc: ChoquetDoc): string | null {
  const weights = [
    ...Object.values(doc.singletons),
    ...doc.min_pairs.map((p) => p.weight),
    ...doc.max_pairs.map((p) => p.weight),
  ];
  if (weights.some((w) => !Number.isFinite(w) || w < 0)) {
    return "all coefficients must be nonnegative numbers";
  }
  const total = weights.reduce((a, b) => a + b, 0);
  if (Math.abs(total - 1) > SUM_TOL) {
    return `coefficients sum to ${total}, expected 1`;
  }
  for (const entry of [...doc.min_pairs, ...doc.max_pairs]) {
    const [a, b] = entry.pair;
    if (a === b) return `pair (${a}, ${b}) references the same child twice`;
    if (!(a in doc.singletons) || !(b in doc.singletons)) {
      return `pair (${a}, ${b}) references an unknown child`;
    }
  }
  return null;
}

export function validateUtility(doc: UtilityDoc): string | null {
  const points = doc.breakpoints;
  if (points.length < 2) return "need at least two breakpoints";
  const sign = doc.direction === "higher_is_better" ? 1 : -1;
  for (let i = 1; i < points.length; i++) {
    const [vPrev, uPrev] = points[i - 1]!;
    const [v, u] = points[i]!;
    if (sign * v <= sign * vPrev) return "breakpoints must be strictly ordered by preference";
    if (u <= uPrev) return "utilities must be strictly increasing";
  }
  if (points.some(([, u]) => u < 0)) return "utilities cannot be negative";
  const bad = points[doc.bad_index];
  const good = points[doc.good_index];
  if (!bad || bad[1] !== 0) return "the Bad anchor must map to utility 0";
  if (!good || good[1] !== 1) return "the Good anchor must map to utility 1";
  return null;
}

export class WhatIfState {
  private readonly client: WhatIfApi;
  readonly modelId: string;
  private readonly overrides = new Map<string, Override>();
  private lastResult: EvaluationDoc | null = null;

  constructor(client: WhatIfApi, modelId: string) {
    this.client = client;
    this.modelId = modelId;
  }

  /** Unsaved overrides present? Views flag the ranking as transient when true. */
  get dirty(): boolean {
    return this.overrides.size > 0;
  }

  get overrideNodes(): string[] {
    return [...this.overrides.keys()].sort();
  }

  get result(): EvaluationDoc | null {
    return this.lastResult;
  }

  setChoquetOverride(nodeId: string, choquet: ChoquetDoc): void {
    const problem = validateChoquet(choquet);
    if (problem) throw new Error(`invalid aggregation override: ${problem}`);
    this.overrides.set(nodeId, { node_id: nodeId, choquet });
  }

  setUtilityOverride(nodeId: string, utility: UtilityDoc): void {
    const problem = validateUtility(utility);
    if (problem) throw new Error(`invalid utility override: ${problem}`);
    this.overrides.set(nodeId, { node_id: nodeId, utility });
  }

  clearOverride(nodeId: string): void {
    this.overrides.delete(nodeId);
  }

  /** Drop every transient edit; the next refresh shows stored truth again. */
  discardAll(): void {
    this.overrides.clear();
  }

  /** Re-evaluate with the current overrides (none = stored view, verbatim). */
  async refresh(profiles: ProfileBody[] = []): Promise<EvaluationDoc> {
    this.lastResult = await this.client.whatIf(
      this.modelId,
      [...this.overrides.values()],
      profiles,
    );
    return this.lastResult;
  }
}
