import type {
  CourseDoc,
  GenerationResponse,
  MatrixRecord,
  QuestionRecord,
  RepairResponse,
  ReportDoc,
  ReportRecord,
  TaxonomyDoc,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly code: string,
    readonly detail: string,
    readonly status: number,
  ) {
    super(`${code}: ${detail}`);
  }
}

async function asApiError(res: Response): Promise<ApiError> {
  let code = "HttpError";
  let detail = `${res.status} ${res.statusText}`;
  try {
    const body = await res.json();
    if (body && typeof body.error === "string") {
      code = body.error;
      detail = String(body.detail ?? detail);
    }
  } catch {
    // non-JSON error body; keep the status line
  }
  return new ApiError(code, detail, res.status);
}

export class ApiClient {
  constructor(readonly base: string = "") {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let res: Response;
    try {
      res = await fetch(`${this.base}${path}`, init);
    } catch (err) {
      throw new ApiError("ServiceUnreachable", String(err), 0);
    }
    if (!res.ok) throw await asApiError(res);
    return res.json() as Promise<T>;
  }

  private post<T>(path: string, payload: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    });
  }

  getTaxonomy(): Promise<TaxonomyDoc> {
    return this.request<TaxonomyDoc>("/api/taxonomy");
  }

  parseCourse(doc: unknown): Promise<CourseDoc> {
    return this.post<CourseDoc>("/api/courses/parse", { course: doc });
  }

  validate(text: string, subpoint: string, id?: string): Promise<ReportRecord> {
    return this.post<ReportRecord>("/api/validate", { text, subpoint, id });
  }

  repair(text: string, subpoint: string): Promise<RepairResponse> {
    return this.post<RepairResponse>("/api/repair", { text, subpoint });
  }

  generate(req: {
    course_code: string;
    topic: string;
    subpoint: string;
    count: number;
    client?: "offline" | "http";
    seed?: number;
  }): Promise<GenerationResponse> {
    return this.post<GenerationResponse>("/api/generate", { client: "offline", ...req });
  }

  report(
    course: CourseDoc,
    questions: QuestionRecord[],
    generatedAt?: string,
  ): Promise<ReportDoc> {
    return this.post<ReportDoc>("/api/report", {
      course,
      questions,
      generated_at: generatedAt,
    });
  }

  async matrix(course: CourseDoc, questions: QuestionRecord[]): Promise<MatrixRecord> {
    const doc = await this.report(course, questions);
    return doc.matrix;
  }

  replaceBank(bankId: string, questions: QuestionRecord[]): Promise<{ id: string; count: number }> {
    return this.post(`/api/banks/${bankId}`, { questions, mode: "replace" });
  }

  async bankFile(bankId: string): Promise<string> {
    const res = await fetch(`${this.base}/api/banks/${bankId}?format=jsonl`);
    if (!res.ok) throw await asApiError(res);
    return res.text();
  }
}
