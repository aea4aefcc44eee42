// End-to-end: the session core drives the live qgen service through the
// full instructor loop, then the exported files are re-checked with the CLI.
import { spawnSync } from "node:child_process";
import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { beforeEach, describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";
import { WorkbenchSession } from "../src/session.js";
import type { CourseDoc } from "../src/types.js";
import { SERVICE_BASE } from "./config.js";

const COIS492: CourseDoc = {
  schema: "course.v1",
  code: "COIS492",
  title: "Web Design & Development",
  topics: ["HTML tables", "CSS layout"],
  outcomes: ["6.2", "4.1", "2.2"],
};

function newSession(): WorkbenchSession {
  return new WorkbenchSession(new ApiClient(SERVICE_BASE));
}

function runCli(args: string[]): { status: number; stdout: string; stderr: string } {
  const result = spawnSync("python3", ["-m", "qgen", ...args], { encoding: "utf-8" });
  return { status: result.status ?? -1, stdout: result.stdout, stderr: result.stderr };
}

describe("course loading", () => {
  it("restricts the outcome picker to the course outcomes", async () => {
    const session = newSession();
    await session.loadCourse(COIS492);
    expect(session.outcomeOptions()).toEqual(["6.2", "4.1", "2.2"]);
    expect(session.catalogSubpoints()).toHaveLength(17);
    expect(session.getState().matrix?.total).toBe(0);
    expect(session.getState().matrix?.uncovered).toEqual(["6.2", "4.1", "2.2"]);
  });

  it("surfaces service schema errors verbatim", async () => {
    const session = newSession();
    await expect(session.loadCourse({})).rejects.toMatchObject({
      code: "SchemaError",
      status: 400,
    });
  });

  it("reloading an unchanged course yields identical state", async () => {
    const session = newSession();
    await session.loadCourse(COIS492);
    const first = JSON.stringify(session.getState());
    await session.loadCourse(COIS492);
    expect(JSON.stringify(session.getState())).toBe(first);
  });

  it("reports unreachable services distinctly", async () => {
    const session = new WorkbenchSession(new ApiClient("http://127.0.0.1:1"));
    await expect(session.loadCourse(COIS492)).rejects.toMatchObject({
      code: "ServiceUnreachable",
    });
  });
});

describe("generation guards", () => {
  let session: WorkbenchSession;

  beforeEach(async () => {
    session = newSession();
    await session.loadCourse(COIS492);
  });

  it("blocks non-positive counts client-side", async () => {
    await expect(session.requestGeneration("2.1", "HTML tables", 0)).rejects.toThrow(
      /positive integer/,
    );
  });

  it("blocks a second request while one is pending", async () => {
    const first = session.requestGeneration("2.1", "HTML tables", 1);
    await expect(session.requestGeneration("2.1", "HTML tables", 1)).rejects.toThrow(
      /already in flight/,
    );
    await first;
    expect(session.getState().pendingGeneration).toBe(false);
  });
});

describe("instructor loop end-to-end", () => {
  it("generate → repair via diff → accept all → export → CLI revalidation", async () => {
    const session = newSession();
    await session.loadCourse(COIS492);

    // generate three questions for 2.1 against the offline client
    const cards = await session.requestGeneration("2.1", "HTML tables", 3);
    expect(cards).toHaveLength(3);
    for (const card of cards) {
      expect(card.report.compliant).toBe(true);
      expect(card.report.target_subpoint).toBe("2.1");
    }

    // inject a non-compliant card: instructor draft with a wrong-row verb
    const injected = await session.addDraft("Explain the page layout process", "2.1");
    expect(injected.report.compliant).toBe(false);
    expect(session.canAccept(injected.ref).ok).toBe(false);
    await expect(
      session.applyReview({ kind: "accept", ref: injected.ref }),
    ).rejects.toThrow(/cannot accept/);

    // repair flows through an explicit diff confirmation
    await session.applyReview({ kind: "repair", ref: injected.ref });
    const pending = session.getState().pendingRepair;
    expect(pending).not.toBeNull();
    expect(pending?.before).toBe("Explain the page layout process");
    expect(pending?.after).toBe("Assemble the page layout process");
    expect(pending?.segments).toEqual([
      { op: "del", text: "Explain" },
      { op: "ins", text: "Assemble" },
      { op: "same", text: " the page layout process" },
    ]);

    // exporting with an unresolved repair is refused
    await expect(session.exportSession("wb-blocked")).rejects.toThrow(/pending repair/);

    await session.confirmRepair();
    const repaired = session
      .getState()
      .tray.find((c) => c.ref === injected.ref);
    expect(repaired?.question.text).toBe("Assemble the page layout process");
    expect(repaired?.question.source).toBe("repaired");
    expect(repaired?.report.compliant).toBe(true);

    // one more question for a covered outcome so the matrix is non-trivial
    const [coveredCard] = await session.requestGeneration("4.1", "professional ethics", 1);
    expect(coveredCard?.report.compliant).toBe(true);

    // accept every tray card; matrix refreshes after each accept
    for (const card of [...session.getState().tray]) {
      await session.applyReview({ kind: "accept", ref: card.ref });
    }
    expect(session.getState().tray).toHaveLength(0);
    expect(session.getState().draftBank).toHaveLength(5);

    const uiMatrix = session.getState().matrix;
    expect(uiMatrix?.by_subpoint).toEqual({ "4.1": 1 });
    expect(uiMatrix?.total).toBe(1);
    expect(uiMatrix?.uncovered).toEqual(["6.2", "2.2"]);

    // export produces bank.v1 + report.v1 through the service
    const exported = await session.exportSession("wb-e2e");
    expect(session.getState().dirty).toBe(false);
    expect(exported.bankText.trim().split("\n")).toHaveLength(5);
    expect(exported.reportDoc.matrix).toEqual(uiMatrix);

    // exporting again without changes yields identical files
    const again = await session.exportSession("wb-e2e");
    expect(again.bankText).toBe(exported.bankText);
    expect(again.reportText).toBe(exported.reportText);

    // re-validate the exported bank with the CLI: exit 0, same matrix
    const dir = mkdtempSync(join(tmpdir(), "qgen-export-"));
    const bankPath = join(dir, "bank.jsonl");
    const coursePath = join(dir, "course.json");
    const reportPath = join(dir, "report.json");
    writeFileSync(bankPath, exported.bankText);
    writeFileSync(coursePath, JSON.stringify(COIS492));

    const validated = runCli(["validate", "--bank", bankPath, "--course", coursePath]);
    expect(validated.stderr).toBe("");
    expect(validated.status).toBe(0);

    const reported = runCli([
      "report", "--bank", bankPath, "--course", coursePath, "--out", reportPath,
    ]);
    expect(reported.status).toBe(0);
    const cliReport = JSON.parse(readFileSync(reportPath, "utf-8"));
    expect(cliReport.matrix).toEqual(uiMatrix);
  });

  it("reject discards a card without touching the matrix", async () => {
    const session = newSession();
    await session.loadCourse(COIS492);
    const [card] = await session.requestGeneration("2.2", "HTML forms", 1);
    const before = JSON.stringify(session.getState().matrix);
    await session.applyReview({ kind: "reject", ref: card!.ref });
    expect(session.getState().tray).toHaveLength(0);
    expect(JSON.stringify(session.getState().matrix)).toBe(before);
  });

  it("editing an accepted question demotes it for re-review", async () => {
    const session = newSession();
    await session.loadCourse(COIS492);
    const [card] = await session.requestGeneration("2.2", "HTML forms", 1);
    await session.applyReview({ kind: "accept", ref: card!.ref });
    expect(session.getState().matrix?.by_subpoint).toEqual({ "2.2": 1 });

    await session.applyReview({
      kind: "edit",
      ref: card!.ref,
      text: "Summarize the HTML form lifecycle",
    });
    expect(session.getState().draftBank).toHaveLength(0);
    expect(session.getState().matrix?.by_subpoint).toEqual({});
    const demoted = session.getState().tray[0];
    expect(demoted?.report.compliant).toBe(false); // "summarize" is not approved
    expect(session.canAccept(demoted!.ref).ok).toBe(false);
  });

  it("retarget revalidates against the new subpoint", async () => {
    const session = newSession();
    await session.loadCourse(COIS492);
    const card = await session.addDraft("Explain the audit trail", "2.2");
    expect(card.report.compliant).toBe(false);
    await session.applyReview({ kind: "retarget", ref: card.ref, subpoint: "4.3" });
    const updated = session.getState().tray.find((c) => c.ref === card.ref);
    expect(updated?.report.target_subpoint).toBe("4.3");
    expect(updated?.report.compliant).toBe(true);
  });

  it("refuses to export an empty draft bank", async () => {
    const session = newSession();
    await session.loadCourse(COIS492);
    await expect(session.exportSession("wb-empty")).rejects.toThrow(/empty/);
  });
});

describe("api error mapping", () => {
  it("wraps service errors with their code", async () => {
    const api = new ApiClient(SERVICE_BASE);
    try {
      await api.validate("Write it", "9.9");
      expect.unreachable("expected UnknownSubpoint");
    } catch (err) {
      expect(err).toBeInstanceOf(ApiError);
      expect((err as ApiError).code).toBe("UnknownSubpoint");
      expect((err as ApiError).status).toBe(404);
    }
  });
});
