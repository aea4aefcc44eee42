// Thin DOM layer: renders session state and forwards user intents to the
// WorkbenchSession core. No compliance logic lives here.
import { ApiClient, ApiError } from "./api.js";
import { describeDiff } from "./diff.js";
import { WorkbenchSession, type Card } from "./session.js";

const api = new ApiClient("");
const session = new WorkbenchSession(api);

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  ...children: (Node | string)[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  node.append(...children);
  return node;
}

function byId<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function banner(message: string, kind: "error" | "info" = "error"): void {
  const box = byId<HTMLDivElement>("banner");
  box.textContent = message;
  box.className = message ? `banner ${kind}` : "banner hidden";
}

async function guard(work: () => Promise<void>): Promise<void> {
  try {
    banner("");
    await work();
  } catch (err) {
    banner(err instanceof ApiError ? `${err.code}: ${err.detail}` : String(err));
  } finally {
    render();
  }
}

function badge(card: Card): HTMLElement {
  const report = card.report;
  const cls = report.compliant ? "badge ok" : "badge bad";
  const label = report.compliant ? "compliant" : "non-compliant";
  return el("span", { class: cls }, label);
}

function cardMeta(card: Card): HTMLElement {
  const report = card.report;
  const verb = report.primary_verb ? report.primary_verb.lemma : "—";
  const levels = report.matched_levels.join(", ") || "—";
  return el(
    "div",
    { class: "meta" },
    el("span", {}, `target ${report.target_subpoint}`),
    el("span", {}, `verb: ${verb}`),
    el("span", {}, `level: ${levels}`),
    el("span", {}, `table domain: ${report.table_domain ?? "—"}`),
    el("span", {}, `verb domain: ${report.level_domain ?? "—"}`),
  );
}

function trayCard(card: Card): HTMLElement {
  const verdict = session.canAccept(card.ref);
  const accept = el("button", verdict.ok ? {} : { disabled: "", title: verdict.reason ?? "" }, "accept");
  accept.onclick = () => guard(() => session.applyReview({ kind: "accept", ref: card.ref }));
  const reject = el("button", {}, "reject");
  reject.onclick = () => guard(() => session.applyReview({ kind: "reject", ref: card.ref }));
  const repair = el("button", {}, "repair…");
  repair.onclick = () => guard(() => session.applyReview({ kind: "repair", ref: card.ref }));
  const edit = el("button", {}, "edit…");
  edit.onclick = () => {
    const text = window.prompt("Edit question text", card.question.text);
    if (text !== null) void guard(() => session.applyReview({ kind: "edit", ref: card.ref, text }));
  };
  const retarget = el("button", {}, "retarget…");
  retarget.onclick = () => {
    const subpoint = window.prompt(
      `Target subpoint (${session.catalogSubpoints().join(", ")})`,
      card.report.target_subpoint,
    );
    if (subpoint !== null) {
      void guard(() => session.applyReview({ kind: "retarget", ref: card.ref, subpoint }));
    }
  };
  return el(
    "div",
    { class: "card" },
    el("div", { class: "card-head" }, badge(card), el("code", {}, card.question.id)),
    el("p", {}, card.question.text),
    cardMeta(card),
    el("div", { class: "actions" }, accept, repair, edit, retarget, reject),
  );
}

function draftCard(card: Card): HTMLElement {
  const drop = el("button", {}, "remove");
  drop.onclick = () => guard(() => session.applyReview({ kind: "reject", ref: card.ref }));
  const edit = el("button", {}, "edit…");
  edit.onclick = () => {
    const text = window.prompt("Edit question text (returns to review tray)", card.question.text);
    if (text !== null) void guard(() => session.applyReview({ kind: "edit", ref: card.ref, text }));
  };
  return el(
    "div",
    { class: "card accepted" },
    el("div", { class: "card-head" }, badge(card), el("code", {}, card.question.id)),
    el("p", {}, card.question.text),
    cardMeta(card),
    el("div", { class: "actions" }, edit, drop),
  );
}

function renderMatrix(): HTMLElement {
  const state = session.getState();
  const matrix = state.matrix;
  if (!matrix) return el("p", { class: "muted" }, "load a course to see coverage");
  const table = el("table", { class: "matrix" });
  table.append(el("tr", {}, el("th", {}, "subpoint"), el("th", {}, "compliant questions")));
  for (const subpoint of session.outcomeOptions()) {
    table.append(
      el(
        "tr",
        {},
        el("td", {}, subpoint),
        el("td", {}, String(matrix.by_subpoint[subpoint] ?? 0)),
      ),
    );
  }
  const footer = el(
    "p",
    {},
    `total ${matrix.total}`,
    matrix.uncovered.length ? ` · uncovered: ${matrix.uncovered.join(", ")}` : " · full coverage",
  );
  return el("div", {}, table, footer);
}

function renderRepairDialog(): void {
  const host = byId<HTMLDivElement>("repair-dialog");
  const pending = session.getState().pendingRepair;
  if (!pending) {
    host.className = "hidden";
    host.replaceChildren();
    return;
  }
  host.className = "dialog";
  const diffBox = el("div", { class: "diff" });
  for (const segment of pending.segments) {
    diffBox.append(el("span", { class: `diff-${segment.op}` }, segment.text));
  }
  const confirm = el("button", {}, "apply repair");
  confirm.onclick = () => guard(() => session.confirmRepair());
  const cancel = el("button", {}, "keep original");
  cancel.onclick = () =>
    guard(async () => {
      session.cancelRepair();
    });
  host.replaceChildren(
    el("h3", {}, `repair: ${describeDiff(pending.segments)}`),
    diffBox,
    el("div", { class: "actions" }, confirm, cancel),
  );
}

function download(name: string, text: string): void {
  const url = URL.createObjectURL(new Blob([text], { type: "application/json" }));
  const link = el("a", { href: url, download: name });
  link.click();
  URL.revokeObjectURL(url);
}

function render(): void {
  const state = session.getState();
  byId<HTMLDivElement>("course-info").replaceChildren(
    state.course
      ? el(
          "p",
          {},
          el("strong", {}, state.course.code),
          ` — ${state.course.title} · outcomes: ${state.course.outcomes.join(", ")}`,
        )
      : el("p", { class: "muted" }, "no course loaded"),
  );

  const picker = byId<HTMLSelectElement>("subpoint");
  const options = [...session.outcomeOptions()];
  for (const id of session.catalogSubpoints()) {
    if (!options.includes(id)) options.push(id);
  }
  picker.replaceChildren(
    ...options.map((id, i) =>
      el("option", { value: id }, i < session.outcomeOptions().length ? `${id} (course)` : id),
    ),
  );

  byId<HTMLButtonElement>("generate").toggleAttribute("disabled", state.pendingGeneration || !state.course);
  byId<HTMLDivElement>("pending").className = state.pendingGeneration ? "" : "hidden";

  byId<HTMLDivElement>("tray").replaceChildren(...state.tray.map(trayCard));
  byId<HTMLDivElement>("draft-bank").replaceChildren(...state.draftBank.map(draftCard));
  byId<HTMLDivElement>("needs-rewrite").replaceChildren(
    ...state.rejectedCandidates.map((r) =>
      el("div", { class: "card bad" }, el("p", {}, r.raw), el("p", { class: "muted" }, r.report.diagnostics.join("; "))),
    ),
  );
  byId<HTMLDivElement>("matrix").replaceChildren(renderMatrix());
  byId<HTMLButtonElement>("export").toggleAttribute(
    "disabled",
    state.draftBank.length === 0 || state.pendingRepair !== null,
  );
  byId<HTMLSpanElement>("dirty").textContent = state.dirty ? "unsaved changes" : "";
  renderRepairDialog();
}

function wire(): void {
  byId<HTMLInputElement>("course-file").onchange = (event) => {
    const input = event.target as HTMLInputElement;
    const file = input.files?.[0];
    if (!file) return;
    void guard(async () => {
      const doc = JSON.parse(await file.text());
      await session.loadCourse(doc);
    });
  };

  byId<HTMLButtonElement>("generate").onclick = () =>
    guard(async () => {
      const subpoint = byId<HTMLSelectElement>("subpoint").value;
      const topic = byId<HTMLInputElement>("topic").value || "course material";
      const count = Number(byId<HTMLInputElement>("count").value);
      await session.requestGeneration(subpoint, topic, count);
    });

  byId<HTMLButtonElement>("add-draft").onclick = () =>
    guard(async () => {
      const text = byId<HTMLInputElement>("draft-text").value.trim();
      const subpoint = byId<HTMLSelectElement>("subpoint").value;
      if (!text) throw new Error("enter question text first");
      await session.addDraft(text, subpoint);
      byId<HTMLInputElement>("draft-text").value = "";
    });

  byId<HTMLButtonElement>("export").onclick = () =>
    guard(async () => {
      const exported = await session.exportSession();
      download("bank.jsonl", exported.bankText);
      download("report.json", exported.reportText);
      banner("exported bank.jsonl and report.json", "info");
    });

  render();
}

if (typeof document !== "undefined") {
  wire();
}
