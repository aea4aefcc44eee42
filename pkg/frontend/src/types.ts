// Payload shapes of the qgen HTTP JSON API.

export interface QuestionRecord {
  id: string;
  text: string;
  targets: string[];
  source: "human" | "generated" | "repaired";
  topic?: string;
  created_at: string | null;
}

export interface VerbHitRecord {
  surface: string;
  lemma: string;
  index: number;
  char_offset: number;
  levels: string[];
  affective: boolean;
}

export interface ReportRecord {
  question_id: string;
  target_subpoint: string;
  compliant: boolean;
  primary_verb: VerbHitRecord | null;
  all_hits: VerbHitRecord[];
  matched_levels: string[];
  table_domain: string | null;
  level_domain: string | null;
  suggestions: string[];
  diagnostics: string[];
}

export interface SubpointRecord {
  id: string;
  description: string;
  so: number;
  bloom_levels: string[];
  any_level: boolean;
  ncaaa_domain: string;
  verbs: string[];
}

export interface TaxonomyDoc {
  levels: { name: string; ordinal: number; ncaaa_domain: string }[];
  domains: string[];
  subpoints: SubpointRecord[];
  so_table: { so: number; title: string; ncaaa_domain: string; level_labels: string[] }[];
  verbs: { lemma: string; levels: string[]; affective: boolean; forms: string[] }[];
}

export interface CourseDoc {
  schema: "course.v1";
  code: string;
  title: string;
  topics: string[];
  outcomes: string[];
}

export interface MatrixRecord {
  by_subpoint: Record<string, number>;
  by_bloom_level: Record<string, number>;
  by_table_domain: Record<string, number>;
  by_level_domain: Record<string, number>;
  uncovered: string[];
  total: number;
}

export interface GenerationResponse {
  questions: QuestionRecord[];
  rejected: { raw: string; report: ReportRecord }[];
  attempts_used: number;
  prompt_transcript: string[];
  diagnostics: string[];
}

export interface RepairResponse {
  text: string;
  changed: boolean;
  report: ReportRecord;
}

export interface ReportDoc {
  schema: "report.v1";
  course: Omit<CourseDoc, "schema">;
  reports: ReportRecord[];
  matrix: MatrixRecord;
  generated_at: string;
}
