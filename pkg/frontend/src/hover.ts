/**
 * On-demand detail pop-up: markdown assembled from the data the server
 * attaches to each diagnostic, so no extra round-trip is needed.
 */

import type { FindingData } from "./types";

export function buildHoverMarkdown(message: string, data: FindingData): string {
  const parts = [
    `**${message}**`,
    "",
    data.explanation,
    "",
    "Noncompliant:",
    "```minijava-cf",
    data.noncompliant_example,
    "```",
    "Compliant:",
    "```minijava-cf",
    data.compliant_example,
    "```",
    `_${data.rule_id} · ${data.kind} · ${data.certainty} (${data.strategy})_`,
  ];
  if (data.suppressed) {
    parts.push("", `_suppressed (${data.suppression_reason ?? "unknown"})_`);
  }
  return parts.join("\n");
}
