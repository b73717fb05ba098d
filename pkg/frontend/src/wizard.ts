/**
 * Elicitation flow state machine.
 *
 * Mirrors server session state and walks the decision maker through it:
 * first the ranking of fictitious alternatives (capacity sessions only),
 * then one intensity question per adjacent pair, then review and finalize.
 * All derivation happens server-side; the wizard only ships answers and
 * renders the consistency feedback that comes back.
 */

import type { GapAnswer, ModelDoc, SessionDoc, Violation } from "./types.js";

/** The slice of the API the wizard needs; ApiClient satisfies it. */
export interface SessionApi {
  createUtilitySession(metricId: string, elements: number[], good: number): Promise<SessionDoc>;
  createCapacitySession(
    nodeId: string,
    children: string[],
    includePairs?: boolean,
  ): Promise<SessionDoc>;
  getSession(sessionId: string): Promise<SessionDoc>;
  submitAnswers(
    sessionId: string,
    version: number,
    answers: { ranking?: string[][]; gaps?: GapAnswer[] },
  ): Promise<SessionDoc>;
  finalizeSession(
    sessionId: string,
    version: number,
    modelId: string,
    nodeId?: string,
  ): Promise<{ session: SessionDoc; model: ModelDoc }>;
}

export type WizardStage = "ranking" | "gaps" | "review" | "finalized";

export interface GapQuestion {
  /** index into the session's gap list */
  index: number;
  /** display name of the worse item of the pair */
  from: string;
  /** display name of the better item of the pair */
  to: string;
  prompt: string;
}

/** Human-readable name of a fictitious alternative (its Good-side children). */
export function patternLabel(pattern: string[], children: string[]): string {
  if (pattern.length === 0) return "all-Bad";
  if (pattern.length === children.length) return "all-Good";
  return `Good on ${[...pattern].sort().join(", ")}`;
}

function rankedItemNames(session: SessionDoc): string[] {
  if (session.kind === "utility") {
    return (session.elements ?? []).map((e) => String(e));
  }
  const children = session.children ?? [];
  return (session.ranking ?? []).map((p) => patternLabel(p, children));
}

export class ElicitationWizard {
  private readonly client: SessionApi;
  private current: SessionDoc;
  private rankingConfirmed: boolean;

  constructor(client: SessionApi, session: SessionDoc) {
    this.client = client;
    this.current = session;
    // utility sessions arrive pre-ranked (the DM supplied ordered elements)
    this.rankingConfirmed = session.kind === "utility";
  }

  static async startUtility(
    client: SessionApi,
    metricId: string,
    elements: number[],
    good: number,
  ): Promise<ElicitationWizard> {
    return new ElicitationWizard(client, await client.createUtilitySession(metricId, elements, good));
  }

  static async startCapacity(
    client: SessionApi,
    nodeId: string,
    children: string[],
    includePairs = true,
  ): Promise<ElicitationWizard> {
    return new ElicitationWizard(
      client,
      await client.createCapacitySession(nodeId, children, includePairs),
    );
  }

  get session(): SessionDoc {
    return this.current;
  }

  get violations(): Violation[] {
    return this.current.violations;
  }

  get stage(): WizardStage {
    if (this.current.finalized) return "finalized";
    if (!this.rankingConfirmed) return "ranking";
    if (this.current.gaps.some((g) => g === null)) return "gaps";
    return "review";
  }

  get totalSteps(): number {
    return this.current.gaps.length;
  }

  get answeredSteps(): number {
    return this.current.gaps.filter((g) => g !== null).length;
  }

  /** The proposed (or submitted) worst-to-best order, as display names. */
  get rankedItems(): string[] {
    return rankedItemNames(this.current);
  }

  /** The next unanswered intensity question, or null when none remain. */
  get currentQuestion(): GapQuestion | null {
    const index = this.current.gaps.findIndex((g) => g === null);
    if (index < 0) return null;
    const names = this.rankedItems;
    const from = names[index] ?? `item ${index}`;
    const to = names[index + 1] ?? `item ${index + 1}`;
    return {
      index,
      from,
      to,
      prompt: `How large is the gain in satisfaction from "${from}" to "${to}"?`,
    };
  }

  /** Capacity sessions: submit the worst-to-best order of the alternatives. */
  async submitRanking(ranking: string[][]): Promise<void> {
    if (this.current.kind !== "capacity") {
      throw new Error("only capacity sessions take a ranking");
    }
    this.current = await this.client.submitAnswers(this.current.id, this.current.version, {
      ranking,
    });
    this.rankingConfirmed = true;
  }

  /** Keep the server-proposed ranking as-is and move on to the gap questions. */
  confirmProposedRanking(): void {
    this.rankingConfirmed = true;
  }

  /** Answer the current question; the server replies with fresh feedback. */
  async answerGap(answer: Exclude<GapAnswer, null>): Promise<void> {
    const question = this.currentQuestion;
    if (!question) throw new Error("no open question");
    await this.setGap(question.index, answer);
  }

  /** Revise any gap (answered or not) by index. */
  async setGap(index: number, answer: GapAnswer): Promise<void> {
    if (index < 0 || index >= this.current.gaps.length) {
      throw new Error(`gap index ${index} out of range`);
    }
    const gaps = [...this.current.gaps];
    gaps[index] = answer;
    this.current = await this.client.submitAnswers(this.current.id, this.current.version, {
      gaps,
    });
  }

  get canFinalize(): boolean {
    return (
      this.stage === "review" &&
      this.current.complete &&
      this.current.violations.length === 0
    );
  }

  /**
   * Persist the derived parameters into a model node. The server derives;
   * we only receive the updated model back for display.
   */
  async finalize(modelId: string, nodeId?: string): Promise<ModelDoc> {
    if (!this.canFinalize) {
      throw new Error("session is incomplete or inconsistent; finalize is disabled");
    }
    const result = await this.client.finalizeSession(
      this.current.id,
      this.current.version,
      modelId,
      nodeId,
    );
    this.current = result.session;
    return result.model;
  }

  /** Re-read server truth (e.g. after a 409 stale-version conflict). */
  async reload(): Promise<void> {
    this.current = await this.client.getSession(this.current.id);
  }
}
