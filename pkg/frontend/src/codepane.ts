/**
 * Pseudocode pane rows: the flattened listing from the started summary with
 * exactly one row highlighted (the statement of the current snapshot).
 */

import type { StartedSummary } from "./protocol.js";

export interface CodeRow {
  statement: string;
  text: string;
  highlighted: boolean;
}

export function codeRows(
  summary: StartedSummary | null,
  highlighted: string | null,
): CodeRow[] {
  if (!summary) {
    return [];
  }
  return summary.listing.map((row) => ({
    statement: row.statement,
    text: "  ".repeat(row.indent) + row.source,
    highlighted: row.statement === highlighted,
  }));
}
