/**
 * Array-bar geometry: pure functions from a snapshot to renderable bars.
 * Heights are percentages of the tallest element; index-valued bindings
 * (storeIndex, k, lo, hi) label the bar they point at, and the pivot value
 * labels its bar within the active range.
 */

import type { SnapshotPayload, StartedSummary } from "./protocol.js";

const INDEX_BINDINGS = ["lo", "hi", "k", "storeIndex"];

export interface Bar {
  value: number;
  heightPct: number;
  labels: string[];
}

export interface BarView {
  bars: Bar[];
  notice: string | null;
  sortedBadge: boolean;
}

export function barView(
  snapshot: SnapshotPayload | null,
  summary: StartedSummary | null,
): BarView {
  const data = snapshot ? snapshot.data : summary ? summary.input : [];
  if (data.length === 0) {
    return { bars: [], notice: "empty array", sortedBadge: false };
  }
  const max = Math.max(...data, 1);
  const labels: string[][] = data.map(() => []);
  if (snapshot) {
    for (const name of INDEX_BINDINGS) {
      const index = snapshot.bindings[name];
      if (typeof index === "number" && index >= 0 && index < data.length) {
        labels[index].push(name);
      }
    }
    const pivot = snapshot.bindings["pivot"];
    if (typeof pivot === "number") {
      const lo = snapshot.bindings["lo"] ?? 0;
      const at = data[lo] === pivot ? lo : data.indexOf(pivot);
      if (at >= 0) {
        labels[at].push("pivot");
      }
    }
  }
  const bars = data.map((value, i) => ({
    value,
    heightPct: Math.round((value / max) * 100),
    labels: labels[i],
  }));
  const isFinal =
    snapshot !== null && summary !== null && snapshot.step === summary.steps - 1;
  return { bars, notice: null, sortedBadge: isFinal };
}
