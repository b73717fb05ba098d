/**
 * SVG builders for the model views: utility curves, importance and
 * interaction gauges, the aggregation pie and contribution bars.
 *
 * Pure string functions over server-supplied numbers; no DOM access, so the
 * whole file unit-tests in plain node.
 */

import type { ChoquetDoc, InspectCriterion } from "./types.js";

export function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

const fmt = (x: number): string => (Math.round(x * 1000) / 1000).toString();

/** Piecewise-linear utility curve with Bad/Good anchor markers. */
export function utilityCurveSvg(
  criterion: InspectCriterion,
  width = 320,
  height = 180,
): string {
  const pad = 28;
  const points = criterion.breakpoints;
  const xs = points.map(([v]) => v);
  const us = points.map(([, u]) => u);
  const xMin = Math.min(...xs);
  const xMax = Math.max(...xs);
  const uMax = Math.max(1, ...us);
  const toX = (v: number): number =>
    pad + ((v - xMin) / (xMax - xMin || 1)) * (width - 2 * pad);
  const toY = (u: number): number =>
    height - pad - (u / uMax) * (height - 2 * pad);
  const polyline = points.map(([v, u]) => `${fmt(toX(v))},${fmt(toY(u))}`).join(" ");
  const anchors = [
    { value: criterion.bad_value, utility: 0, name: "Bad" },
    { value: criterion.good_value, utility: 1, name: "Good" },
  ]
    .map(
      (a) =>
        `<circle cx="${fmt(toX(a.value))}" cy="${fmt(toY(a.utility))}" r="4" class="anchor"/>` +
        `<text x="${fmt(toX(a.value))}" y="${fmt(toY(a.utility) - 8)}" class="anchor-label">${a.name}</text>`,
    )
    .join("");
  const markers = points
    .map(([v, u]) => `<circle cx="${fmt(toX(v))}" cy="${fmt(toY(u))}" r="2.5" class="breakpoint"/>`)
    .join("");
  return (
    `<svg viewBox="0 0 ${width} ${height}" class="utility-curve" role="img" ` +
    `aria-label="utility curve for ${escapeXml(criterion.metric_id)}">` +
    `<line x1="${pad}" y1="${height - pad}" x2="${width - pad}" y2="${height - pad}" class="axis"/>` +
    `<line x1="${pad}" y1="${pad}" x2="${pad}" y2="${height - pad}" class="axis"/>` +
    `<polyline points="${polyline}" fill="none" class="curve"/>` +
    markers +
    anchors +
    `</svg>`
  );
}

/** Horizontal 0..1 gauge for one child's importance share. */
export function importanceGaugeSvg(name: string, value: number, width = 260): string {
  const clamped = Math.max(0, Math.min(1, value));
  const barWidth = clamped * (width - 120);
  return (
    `<svg viewBox="0 0 ${width} 22" class="gauge importance" role="img" ` +
    `aria-label="importance of ${escapeXml(name)}: ${fmt(value)}">` +
    `<text x="0" y="15" class="gauge-name">${escapeXml(name)}</text>` +
    `<rect x="100" y="5" width="${width - 120}" height="12" class="gauge-track"/>` +
    `<rect x="100" y="5" width="${fmt(barWidth)}" height="12" class="gauge-fill"/>` +
    `<text x="${width - 14}" y="15" class="gauge-value">${fmt(value)}</text>` +
    `</svg>`
  );
}

/**
 * Diverging -1..1 gauge for a pair's interaction index: bars left of center
 * mean redundancy, right of center complementarity.
 */
export function interactionGaugeSvg(pair: [string, string], value: number, width = 260): string {
  const clamped = Math.max(-1, Math.min(1, value));
  const center = 100 + (width - 120) / 2;
  const half = (width - 120) / 2;
  const barWidth = Math.abs(clamped) * half;
  const x = clamped < 0 ? center - barWidth : center;
  const cls = clamped < 0 ? "redundancy" : "complementarity";
  const label = `${pair[0]} and ${pair[1]}`;
  return (
    `<svg viewBox="0 0 ${width} 22" class="gauge interaction" role="img" ` +
    `aria-label="interaction of ${escapeXml(label)}: ${fmt(value)}">` +
    `<text x="0" y="15" class="gauge-name">${escapeXml(label)}</text>` +
    `<rect x="100" y="5" width="${width - 120}" height="12" class="gauge-track"/>` +
    `<rect x="${fmt(x)}" y="5" width="${fmt(barWidth)}" height="12" class="gauge-fill ${cls}"/>` +
    `<line x1="${fmt(center)}" y1="3" x2="${fmt(center)}" y2="19" class="gauge-center"/>` +
    `<text x="${width - 14}" y="15" class="gauge-value">${fmt(value)}</text>` +
    `</svg>`
  );
}

interface PieSlice {
  label: string;
  weight: number;
  kind: "singleton" | "min" | "max";
}

function pieSlices(choquet: ChoquetDoc): PieSlice[] {
  const slices: PieSlice[] = [];
  for (const [child, weight] of Object.entries(choquet.singletons)) {
    if (weight > 0) slices.push({ label: child, weight, kind: "singleton" });
  }
  for (const entry of choquet.min_pairs) {
    if (entry.weight > 0)
      slices.push({ label: `min(${entry.pair.join(", ")})`, weight: entry.weight, kind: "min" });
  }
  for (const entry of choquet.max_pairs) {
    if (entry.weight > 0)
      slices.push({ label: `max(${entry.pair.join(", ")})`, weight: entry.weight, kind: "max" });
  }
  return slices;
}

/** Pie chart of the aggregation terms: one slice per nonzero coefficient. */
export function aggregationPieSvg(choquet: ChoquetDoc, size = 220): string {
  const slices = pieSlices(choquet);
  const total = slices.reduce((a, s) => a + s.weight, 0) || 1;
  const cx = size / 2;
  const cy = size / 2;
  const r = size / 2 - 10;
  let angle = -Math.PI / 2;
  const paths = slices.map((slice) => {
    const span = (slice.weight / total) * 2 * Math.PI;
    const x1 = cx + r * Math.cos(angle);
    const y1 = cy + r * Math.sin(angle);
    angle += span;
    const x2 = cx + r * Math.cos(angle);
    const y2 = cy + r * Math.sin(angle);
    const large = span > Math.PI ? 1 : 0;
    // a single full-circle slice degenerates as an arc; draw a circle instead
    if (span >= 2 * Math.PI - 1e-9) {
      return `<circle cx="${cx}" cy="${cy}" r="${r}" class="slice ${slice.kind}"><title>${escapeXml(slice.label)}: ${fmt(slice.weight)}</title></circle>`;
    }
    return (
      `<path d="M ${cx} ${cy} L ${fmt(x1)} ${fmt(y1)} A ${r} ${r} 0 ${large} 1 ${fmt(x2)} ${fmt(y2)} Z" ` +
      `class="slice ${slice.kind}"><title>${escapeXml(slice.label)}: ${fmt(slice.weight)}</title></path>`
    );
  });
  return (
    `<svg viewBox="0 0 ${size} ${size}" class="aggregation-pie" role="img" ` +
    `aria-label="aggregation terms">` +
    paths.join("") +
    `</svg>`
  );
}

export interface ContributionEntry {
  node: string;
  contribution: number;
  /** percentage of the root contribution; null when the root moved by zero */
  percentage: number | null;
  depth: number;
}

/** Signed horizontal bars, one per node, nested by hierarchy depth. */
export function contributionBarsSvg(entries: ContributionEntry[], width = 420): string {
  const rowHeight = 26;
  const height = entries.length * rowHeight + 10;
  const maxAbs = Math.max(1e-12, ...entries.map((e) => Math.abs(e.contribution)));
  const zero = 190 + (width - 240) / 2;
  const half = (width - 240) / 2;
  const rows = entries.map((entry, i) => {
    const y = 5 + i * rowHeight;
    const barWidth = (Math.abs(entry.contribution) / maxAbs) * half;
    const x = entry.contribution < 0 ? zero - barWidth : zero;
    const cls = entry.contribution < 0 ? "negative" : "positive";
    const share = entry.percentage === null ? "-" : `${fmt(entry.percentage)}%`;
    const indent = 4 + entry.depth * 12;
    return (
      `<text x="${indent}" y="${y + 15}" class="bar-name">${escapeXml(entry.node)}</text>` +
      `<rect x="${fmt(x)}" y="${y + 4}" width="${fmt(barWidth)}" height="14" class="bar ${cls}"/>` +
      `<text x="${width - 4}" y="${y + 15}" text-anchor="end" class="bar-value">${share}</text>`
    );
  });
  return (
    `<svg viewBox="0 0 ${width} ${height}" class="contribution-bars" role="img" ` +
    `aria-label="per-node contributions">` +
    `<line x1="${fmt(zero)}" y1="0" x2="${fmt(zero)}" y2="${height}" class="zero-line"/>` +
    rows.join("") +
    `</svg>`
  );
}
