/**
 * HTML fragment builders: evaluation tables, violation lists, session panels.
 * String templates only; main.ts owns all DOM wiring.
 */

import {
  aggregationPieSvg,
  contributionBarsSvg,
  escapeXml,
  importanceGaugeSvg,
  interactionGaugeSvg,
  utilityCurveSvg,
  type ContributionEntry,
} from "./charts.js";
import type {
  EvaluationDoc,
  ExplanationDoc,
  InspectDoc,
  SessionDoc,
  Violation,
} from "./types.js";

export const escapeHtml = escapeXml;

const score = (x: number): string => x.toFixed(4);

export function evaluationTableHtml(doc: EvaluationDoc, transient = false): string {
  const header = ["rank", "alternative", ...doc.columns]
    .map((c) => `<th>${escapeHtml(c)}</th>`)
    .join("");
  const rows = doc.ranking
    .map((row) => {
      const cells = doc.columns
        .map((node) => `<td>${score(row.scores[node] ?? NaN)}</td>`)
        .join("");
      return (
        `<tr><td>${row.rank}</td>` +
        `<td class="alternative">${escapeHtml(row.alternative_id)}</td>${cells}</tr>`
      );
    })
    .join("");
  const warnings = doc.warnings
    .map((w) => `<p class="warning">${escapeHtml(w)}</p>`)
    .join("");
  const badge = transient ? `<p class="transient-badge">unsaved what-if view</p>` : "";
  return `${badge}<table class="evaluation"><thead><tr>${header}</tr></thead><tbody>${rows}</tbody></table>${warnings}`;
}

export function violationsHtml(violations: Violation[]): string {
  if (!violations.length) return `<p class="consistent">answers are consistent</p>`;
  const items = violations
    .map(
      (v) =>
        `<li class="violation" data-code="${escapeHtml(v.code)}">` +
        `<strong>${escapeHtml(v.code)}</strong>: ${escapeHtml(v.message)}</li>`,
    )
    .join("");
  return `<ul class="violations">${items}</ul>`;
}

export function sessionProgressHtml(session: SessionDoc): string {
  const answered = session.gaps.filter((g) => g !== null).length;
  return (
    `<p class="progress">question ${Math.min(answered + 1, session.gaps.length)} ` +
    `of ${session.gaps.length}${session.complete ? " (complete)" : ""}</p>`
  );
}

export function modelInspectionHtml(doc: InspectDoc): string {
  const curves = Object.entries(doc.criteria)
    .map(
      ([nodeId, criterion]) =>
        `<figure><figcaption>${escapeHtml(criterion.label)} ` +
        `<code>${escapeHtml(criterion.metric_id)}</code></figcaption>` +
        utilityCurveSvg(criterion) +
        `</figure>`,
    )
    .join("");
  const gaugeBlocks = Object.entries(doc.aggregations)
    .map(([nodeId, agg]) => {
      const importance = Object.entries(agg.importance)
        .sort((a, b) => b[1] - a[1])
        .map(([child, value]) => importanceGaugeSvg(child, value))
        .join("");
      const interaction = agg.interaction
        .map((entry) => interactionGaugeSvg(entry.pair, entry.value))
        .join("");
      const pie = aggregationPieSvg({
        singletons: agg.singletons,
        min_pairs: agg.min_pairs,
        max_pairs: agg.max_pairs,
      });
      return (
        `<section class="aggregation-panel"><h3>${escapeHtml(agg.label)}</h3>` +
        `<div class="gauges"><h4>importance</h4>${importance}` +
        `<h4>interaction</h4>${interaction}</div>` +
        `<figure><figcaption>aggregation terms</figcaption>${pie}</figure></section>`
      );
    })
    .join("");
  return `<div class="inspection">${gaugeBlocks}<div class="curves">${curves}</div></div>`;
}

export function explanationHtml(doc: ExplanationDoc, nodeDepths: Record<string, number>): string {
  const entries: ContributionEntry[] = Object.keys(doc.contributions)
    .sort((a, b) => (nodeDepths[a] ?? 0) - (nodeDepths[b] ?? 0) || a.localeCompare(b))
    .map((node) => ({
      node,
      contribution: doc.contributions[node] ?? 0,
      percentage: doc.percentages[node] ?? null,
      depth: nodeDepths[node] ?? 0,
    }));
  return (
    `<h3>${escapeHtml(doc.alternative_id)} vs ${escapeHtml(doc.reference)}</h3>` +
    `<p>root contribution: ${doc.root_contribution.toFixed(6)}</p>` +
    contributionBarsSvg(entries)
  );
}
