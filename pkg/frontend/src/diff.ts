// Word-level diff for the repair confirmation view.

export type DiffOp = "same" | "del" | "ins";

export interface DiffSegment {
  op: DiffOp;
  text: string;
}

function tokens(text: string): string[] {
  return text.split(/(\s+)/).filter((t) => t.length > 0);
}

/** Minimal word diff: common prefix + common suffix + a changed middle. */
export function diffWords(before: string, after: string): DiffSegment[] {
  if (before === after) return [{ op: "same", text: before }];
  const a = tokens(before);
  const b = tokens(after);
  let start = 0;
  while (start < a.length && start < b.length && a[start] === b[start]) start++;
  let endA = a.length;
  let endB = b.length;
  while (endA > start && endB > start && a[endA - 1] === b[endB - 1]) {
    endA--;
    endB--;
  }
  const segments: DiffSegment[] = [];
  if (start > 0) segments.push({ op: "same", text: a.slice(0, start).join("") });
  if (endA > start) segments.push({ op: "del", text: a.slice(start, endA).join("") });
  if (endB > start) segments.push({ op: "ins", text: b.slice(start, endB).join("") });
  if (endA < a.length) segments.push({ op: "same", text: a.slice(endA).join("") });
  return segments;
}

export function describeDiff(segments: DiffSegment[]): string {
  const removed = segments.filter((s) => s.op === "del").map((s) => s.text.trim());
  const added = segments.filter((s) => s.op === "ins").map((s) => s.text.trim());
  if (!removed.length && !added.length) return "no change";
  return `${removed.join(" ") || "∅"} → ${added.join(" ") || "∅"}`;
}
