import { ApiClient } from "./api.js";
import { diffWords, type DiffSegment } from "./diff.js";
import type {
  CourseDoc,
  MatrixRecord,
  QuestionRecord,
  ReportDoc,
  ReportRecord,
  TaxonomyDoc,
} from "./types.js";

export interface Card {
  ref: string;
  question: QuestionRecord;
  report: ReportRecord;
}

export type ReviewAction =
  | { kind: "accept"; ref: string }
  | { kind: "reject"; ref: string }
  | { kind: "edit"; ref: string; text: string }
  | { kind: "repair"; ref: string }
  | { kind: "retarget"; ref: string; subpoint: string };

export interface PendingRepair {
  ref: string;
  before: string;
  after: string;
  changed: boolean;
  segments: DiffSegment[];
  report: ReportRecord;
}

export interface SessionState {
  taxonomy: TaxonomyDoc | null;
  course: CourseDoc | null;
  tray: Card[];
  draftBank: Card[];
  rejectedCandidates: { raw: string; report: ReportRecord }[];
  pendingGeneration: boolean;
  pendingRepair: PendingRepair | null;
  matrix: MatrixRecord | null;
  dirty: boolean;
  lastModified: string | null;
}

export interface ExportedSession {
  bankId: string;
  bankText: string;
  reportDoc: ReportDoc;
  reportText: string;
}

/**
 * Drives the instructor review loop against the qgen service. All
 * compliance verdicts come from the service; nothing is judged locally, so
 * a card's badge is always a fresh server answer.
 */
export class WorkbenchSession {
  private state: SessionState = emptyState();
  private refCounter = 0;
  private draftCounter = 0;

  constructor(
    private readonly api: ApiClient,
    private readonly now: () => string = () => new Date().toISOString(),
  ) {}

  getState(): Readonly<SessionState> {
    return this.state;
  }

  /** Course outcomes drive the picker; the full catalog stays browsable. */
  outcomeOptions(): string[] {
    return this.state.course ? [...this.state.course.outcomes] : [];
  }

  catalogSubpoints(): string[] {
    return this.state.taxonomy ? this.state.taxonomy.subpoints.map((s) => s.id) : [];
  }

  async loadCourse(doc: unknown): Promise<void> {
    const taxonomy = await this.api.getTaxonomy();
    const course = await this.api.parseCourse(doc);
    this.state = { ...emptyState(), taxonomy, course };
    await this.refreshMatrix();
    this.state.dirty = false;
  }

  private requireCourse(): CourseDoc {
    if (!this.state.course) throw new Error("no course loaded");
    return this.state.course;
  }

  private nextRef(): string {
    this.refCounter += 1;
    return `card-${this.refCounter}`;
  }

  async requestGeneration(subpoint: string, topic: string, count: number): Promise<Card[]> {
    const course = this.requireCourse();
    if (!Number.isInteger(count) || count < 1) {
      throw new Error("count must be a positive integer");
    }
    if (this.state.pendingGeneration) {
      throw new Error("a generation request is already in flight");
    }
    this.state = { ...this.state, pendingGeneration: true };
    try {
      const result = await this.api.generate({
        course_code: course.code,
        topic,
        subpoint,
        count,
      });
      const cards: Card[] = [];
      for (const question of result.questions) {
        const report = await this.api.validate(question.text, subpoint, question.id);
        cards.push({ ref: this.nextRef(), question, report });
      }
      this.state = {
        ...this.state,
        tray: [...this.state.tray, ...cards],
        rejectedCandidates: [...this.state.rejectedCandidates, ...result.rejected],
      };
      this.touch();
      return cards;
    } finally {
      this.state = { ...this.state, pendingGeneration: false };
    }
  }

  /** Instructor-authored question entering the same review tray. */
  async addDraft(text: string, subpoint: string): Promise<Card> {
    this.requireCourse();
    this.draftCounter += 1;
    const id = `wb-${this.draftCounter}`;
    const report = await this.api.validate(text, subpoint, id);
    const card: Card = {
      ref: this.nextRef(),
      question: {
        id,
        text,
        targets: [subpoint],
        source: "human",
        created_at: null,
      },
      report,
    };
    this.state = { ...this.state, tray: [...this.state.tray, card] };
    this.touch();
    return card;
  }

  private findCard(ref: string): { card: Card; where: "tray" | "draft" } {
    const inTray = this.state.tray.find((c) => c.ref === ref);
    if (inTray) return { card: inTray, where: "tray" };
    const inDraft = this.state.draftBank.find((c) => c.ref === ref);
    if (inDraft) return { card: inDraft, where: "draft" };
    throw new Error(`no card ${ref} in this session`);
  }

  canAccept(ref: string): { ok: boolean; reason?: string } {
    const { card, where } = this.findCard(ref);
    if (where === "draft") return { ok: false, reason: "already accepted" };
    if (!card.report.compliant) {
      const detail = card.report.diagnostics[0] ?? "question is not compliant";
      return { ok: false, reason: detail };
    }
    return { ok: true };
  }

  async applyReview(action: ReviewAction): Promise<void> {
    switch (action.kind) {
      case "accept":
        return this.accept(action.ref);
      case "reject":
        return this.reject(action.ref);
      case "edit":
        return this.revise(action.ref, { text: action.text });
      case "retarget":
        return this.revise(action.ref, { subpoint: action.subpoint });
      case "repair":
        return this.stageRepair(action.ref);
    }
  }

  private async accept(ref: string): Promise<void> {
    const verdict = this.canAccept(ref);
    if (!verdict.ok) {
      throw new Error(`cannot accept ${ref}: ${verdict.reason}`);
    }
    const { card } = this.findCard(ref);
    if (card.question.created_at === null) {
      card.question = { ...card.question, created_at: this.now() };
    }
    this.state = {
      ...this.state,
      tray: this.state.tray.filter((c) => c.ref !== ref),
      draftBank: [...this.state.draftBank, card],
    };
    this.touch();
    await this.refreshMatrix();
  }

  private async reject(ref: string): Promise<void> {
    const { where } = this.findCard(ref);
    this.state = {
      ...this.state,
      tray: this.state.tray.filter((c) => c.ref !== ref),
      draftBank: this.state.draftBank.filter((c) => c.ref !== ref),
    };
    this.touch();
    if (where === "draft") await this.refreshMatrix();
  }

  /** Edit or retarget: revalidate first; accepted cards drop back to the tray. */
  private async revise(ref: string, change: { text?: string; subpoint?: string }): Promise<void> {
    const { card, where } = this.findCard(ref);
    const text = change.text ?? card.question.text;
    const subpoint = change.subpoint ?? card.question.targets[0];
    if (!subpoint) throw new Error(`card ${ref} has no target subpoint`);
    const report = await this.api.validate(text, subpoint, card.question.id);
    card.question = { ...card.question, text, targets: [subpoint] };
    card.report = report;
    if (where === "draft") {
      this.state = {
        ...this.state,
        draftBank: this.state.draftBank.filter((c) => c.ref !== ref),
        tray: [...this.state.tray, card],
      };
    }
    this.touch();
    if (where === "draft") await this.refreshMatrix();
  }

  private async stageRepair(ref: string): Promise<void> {
    const { card } = this.findCard(ref);
    const subpoint = card.question.targets[0];
    if (!subpoint) throw new Error(`card ${ref} has no target subpoint`);
    const repair = await this.api.repair(card.question.text, subpoint);
    this.state = {
      ...this.state,
      pendingRepair: {
        ref,
        before: card.question.text,
        after: repair.text,
        changed: repair.changed,
        segments: diffWords(card.question.text, repair.text),
        report: repair.report,
      },
    };
  }

  /** Applies the staged repair after explicit confirmation. */
  async confirmRepair(): Promise<void> {
    const pending = this.state.pendingRepair;
    if (!pending) throw new Error("no repair awaiting confirmation");
    const { card, where } = this.findCard(pending.ref);
    card.question = {
      ...card.question,
      text: pending.after,
      source: pending.changed ? "repaired" : card.question.source,
    };
    card.report = pending.report;
    this.state = { ...this.state, pendingRepair: null };
    this.touch();
    if (where === "draft") await this.refreshMatrix();
  }

  cancelRepair(): void {
    this.state = { ...this.state, pendingRepair: null };
  }

  private async refreshMatrix(): Promise<void> {
    const course = this.requireCourse();
    const questions = this.state.draftBank.map((c) => c.question);
    const matrix = await this.api.matrix(course, questions);
    this.state = { ...this.state, matrix };
  }

  async exportSession(bankId = "workbench"): Promise<ExportedSession> {
    const course = this.requireCourse();
    if (this.state.pendingRepair) {
      throw new Error("resolve the pending repair before exporting");
    }
    if (this.state.draftBank.length === 0) {
      throw new Error("draft bank is empty; nothing to export");
    }
    const questions = this.state.draftBank.map((c) => c.question);
    await this.api.replaceBank(bankId, questions);
    const bankText = await this.api.bankFile(bankId);
    const reportDoc = await this.api.report(
      course,
      questions,
      this.state.lastModified ?? this.now(),
    );
    this.state = { ...this.state, dirty: false };
    return {
      bankId,
      bankText,
      reportDoc,
      reportText: JSON.stringify(reportDoc, null, 2) + "\n",
    };
  }

  private touch(): void {
    this.state = { ...this.state, dirty: true, lastModified: this.now() };
  }
}

function emptyState(): SessionState {
  return {
    taxonomy: null,
    course: null,
    tray: [],
    draftBank: [],
    rejectedCandidates: [],
    pendingGeneration: false,
    pendingRepair: null,
    matrix: null,
    dirty: false,
    lastModified: null,
  };
}
