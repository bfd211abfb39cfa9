"use strict";
/**
 * On-demand detail pop-up: markdown assembled from the data the server
 * attaches to each diagnostic, so no extra round-trip is needed.
 */
Object.defineProperty(exports, "__esModule", { value: true });
exports.buildHoverMarkdown = buildHoverMarkdown;
function buildHoverMarkdown(message, data) {
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
//# sourceMappingURL=hover.js.map