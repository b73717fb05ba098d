/**
 * Application bootstrap: tabs for evaluation, model inspection, elicitation
 * and what-if exploration, all speaking to the API that serves this page.
 */

import { ApiClient, ApiError } from "./client.js";
import { INTENSITY_NAMES, type GapAnswer, type ModelDoc } from "./types.js";
import { ElicitationWizard } from "./wizard.js";
import { WhatIfState, validateChoquet } from "./whatif.js";
import {
  escapeHtml,
  evaluationTableHtml,
  explanationHtml,
  modelInspectionHtml,
  sessionProgressHtml,
  violationsHtml,
} from "./views.js";

const client = new ApiClient("");

const app = document.getElementById("app");
if (!app) throw new Error("missing #app element");

interface AppState {
  modelId: string | null;
  wizard: ElicitationWizard | null;
  whatIf: WhatIfState | null;
  reference: "worst" | "ideal";
}

const state: AppState = { modelId: null, wizard: null, whatIf: null, reference: "worst" };

function el(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node;
}

function showError(err: unknown): void {
  const box = el("errors");
  const message = err instanceof Error ? err.message : String(err);
  const extra =
    err instanceof ApiError && err.violations.length ? violationsHtml(err.violations) : "";
  box.innerHTML = `<p class="error">${escapeHtml(message)}</p>${extra}`;
}

function clearError(): void {
  el("errors").innerHTML = "";
}

function nodeDepths(model: ModelDoc): Record<string, number> {
  const children: Record<string, string[]> = {};
  for (const node of model.nodes) {
    children[node.id] = node.choquet ? Object.keys(node.choquet.singletons).sort() : [];
  }
  const depths: Record<string, number> = {};
  const walk = (id: string, depth: number): void => {
    depths[id] = depth;
    for (const child of children[id] ?? []) walk(child, depth + 1);
  };
  walk(model.root, 0);
  return depths;
}

async function refreshModels(): Promise<void> {
  const { models } = await client.listModels();
  const select = el("model-select") as HTMLSelectElement;
  select.innerHTML = models
    .map((m) => `<option value="${escapeHtml(m)}">${escapeHtml(m)}</option>`)
    .join("");
  if (models.length && !state.modelId) {
    state.modelId = models[0] ?? null;
  }
  if (state.modelId) select.value = state.modelId;
}

async function renderEvaluation(): Promise<void> {
  if (!state.modelId) return;
  const doc = await client.evaluate(state.modelId);
  el("evaluation").innerHTML = evaluationTableHtml(doc);
}

async function renderInspection(): Promise<void> {
  if (!state.modelId) return;
  const doc = await client.inspectModel(state.modelId);
  el("inspection").innerHTML = modelInspectionHtml(doc);
}

async function renderExplanation(): Promise<void> {
  if (!state.modelId) return;
  const alternative = (el("explain-alternative") as HTMLInputElement).value.trim();
  if (!alternative) return;
  const [doc, model] = await Promise.all([
    client.explain(state.modelId, alternative, state.reference),
    client.getModel(state.modelId),
  ]);
  el("explanation").innerHTML = explanationHtml(doc, nodeDepths(model));
}

function renderWizard(): void {
  const wizard = state.wizard;
  const panel = el("wizard");
  if (!wizard) {
    panel.innerHTML = `<p>no active session</p>`;
    return;
  }
  const session = wizard.session;
  const pieces: string[] = [sessionProgressHtml(session)];
  if (wizard.stage === "ranking") {
    const items = wizard.rankedItems
      .map((name, i) => `<li data-index="${i}">${escapeHtml(name)}</li>`)
      .join("");
    pieces.push(
      `<p>server-proposed order (worst to best); confirm or edit the ranking:</p>` +
        `<ol class="ranking">${items}</ol>` +
        `<button id="confirm-ranking">confirm order</button>`,
    );
  } else if (wizard.stage === "gaps") {
    const question = wizard.currentQuestion;
    if (question) {
      const allowTie = session.kind === "capacity";
      const options = [...INTENSITY_NAMES, ...(allowTie ? ["Tie"] : [])]
        .map((name) => `<button class="gap-answer" data-answer="${name}">${name}</button>`)
        .join(" ");
      pieces.push(`<p class="question">${escapeHtml(question.prompt)}</p><div>${options}</div>`);
    }
  } else if (wizard.stage === "review") {
    pieces.push(
      `<p>all questions answered.</p>`,
      violationsHtml(wizard.violations),
      `<button id="finalize" ${wizard.canFinalize ? "" : "disabled"}>finalize into model</button>`,
    );
  } else {
    pieces.push(`<p class="finalized">session finalized; parameters stored.</p>`);
  }
  if (wizard.stage !== "review") pieces.push(violationsHtml(wizard.violations));
  panel.innerHTML = pieces.join("\n");

  const confirm = document.getElementById("confirm-ranking");
  confirm?.addEventListener("click", () => {
    wizard.confirmProposedRanking();
    renderWizard();
  });
  for (const button of panel.querySelectorAll<HTMLButtonElement>(".gap-answer")) {
    button.addEventListener("click", async () => {
      clearError();
      try {
        await wizard.answerGap(button.dataset.answer as Exclude<GapAnswer, null>);
      } catch (err) {
        showError(err);
        await wizard.reload();
      }
      renderWizard();
    });
  }
  document.getElementById("finalize")?.addEventListener("click", async () => {
    clearError();
    try {
      if (!state.modelId) throw new Error("pick a model first");
      await wizard.finalize(state.modelId);
      renderWizard();
      await Promise.all([renderInspection(), renderEvaluation()]);
    } catch (err) {
      showError(err);
    }
  });
}

async function startUtilitySession(): Promise<void> {
  const metric = (el("session-metric") as HTMLInputElement).value.trim();
  const elements = (el("session-elements") as HTMLInputElement).value
    .split(",")
    .map((x) => Number(x.trim()))
    .filter((x) => Number.isFinite(x));
  const good = Number((el("session-good") as HTMLInputElement).value);
  state.wizard = await ElicitationWizard.startUtility(client, metric, elements, good);
  renderWizard();
}

async function startCapacitySession(): Promise<void> {
  const node = (el("session-node") as HTMLInputElement).value.trim();
  const children = (el("session-children") as HTMLInputElement).value
    .split(",")
    .map((x) => x.trim())
    .filter(Boolean);
  state.wizard = await ElicitationWizard.startCapacity(client, node, children);
  renderWizard();
}

async function renderWhatIf(): Promise<void> {
  if (!state.modelId) return;
  if (!state.whatIf || state.whatIf.modelId !== state.modelId) {
    state.whatIf = new WhatIfState(client, state.modelId);
  }
  const doc = await state.whatIf.refresh();
  el("whatif-result").innerHTML = evaluationTableHtml(doc, state.whatIf.dirty);
  el("whatif-status").textContent = state.whatIf.dirty
    ? `transient overrides on: ${state.whatIf.overrideNodes.join(", ")}`
    : "no overrides (stored view)";
}

async function applyWhatIfOverride(): Promise<void> {
  if (!state.whatIf) return;
  const nodeId = (el("whatif-node") as HTMLInputElement).value.trim();
  const raw = (el("whatif-choquet") as HTMLTextAreaElement).value;
  const parsed = JSON.parse(raw);
  const problem = validateChoquet(parsed);
  if (problem) throw new Error(`invalid aggregation override: ${problem}`);
  state.whatIf.setChoquetOverride(nodeId, parsed);
  await renderWhatIf();
}

function wire(): void {
  (el("model-select") as HTMLSelectElement).addEventListener("change", async (event) => {
    state.modelId = (event.target as HTMLSelectElement).value;
    state.whatIf = null;
    clearError();
    await Promise.all([renderEvaluation(), renderInspection()]).catch(showError);
  });
  el("start-utility").addEventListener("click", () => {
    clearError();
    startUtilitySession().catch(showError);
  });
  el("start-capacity").addEventListener("click", () => {
    clearError();
    startCapacitySession().catch(showError);
  });
  el("explain-run").addEventListener("click", () => {
    clearError();
    renderExplanation().catch(showError);
  });
  (el("explain-reference") as HTMLSelectElement).addEventListener("change", (event) => {
    state.reference = (event.target as HTMLSelectElement).value as "worst" | "ideal";
  });
  el("whatif-apply").addEventListener("click", () => {
    clearError();
    applyWhatIfOverride().catch(showError);
  });
  el("whatif-discard").addEventListener("click", () => {
    clearError();
    state.whatIf?.discardAll();
    renderWhatIf().catch(showError);
  });
  for (const tab of document.querySelectorAll<HTMLElement>("[data-tab]")) {
    tab.addEventListener("click", () => {
      for (const panel of document.querySelectorAll<HTMLElement>(".tab-panel")) {
        panel.hidden = panel.id !== tab.dataset.tab;
      }
    });
  }
}

async function boot(): Promise<void> {
  wire();
  await refreshModels();
  await Promise.all([renderEvaluation(), renderInspection()]);
  await renderWhatIf();
}

boot().catch(showError);
