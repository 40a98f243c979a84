// Wire types of the annotation service API. The UI renders these verbatim;
// it never derives validation issues or graph geometry on its own.

export interface LoginResponse {
  token: string;
  annotator_id: string;
  expires_at: string;
}

export interface TreebankInfo {
  id: string;
  name: string;
  language: string;
  created_at: string;
  n_sentences: number;
}

export interface TokenData {
  id: number;
  form: string;
  lemma: string | null;
  upos: string | null;
  xpos: string | null;
  feats: Record<string, string>;
  head: number | null;
  deprel: string | null;
  deps: [number, string][];
  misc: [string, string | null][];
}

export interface MwtData {
  first_id: number;
  last_id: number;
  form: string;
  misc: [string, string | null][];
}

export interface SentenceData {
  sent_id: string;
  text: string;
  comments: string[];
  tokens: TokenData[];
  mwts: MwtData[];
}

export interface IssueData {
  code: string;
  severity: "error" | "warning";
  token_id: number | null;
  message: string;
}

export interface RecordData {
  treebank_id: string;
  sent_id: string;
  annotator_id: string;
  status: "New" | "Draft" | "Complete";
  note: string;
  revision: number;
  updated_at: string | null;
  sentence: SentenceData;
  issues: IssueData[];
}

export interface SentenceListItem {
  sent_id: string;
  text: string;
  status: string;
  updated_at: string | null;
}

export interface Page<T> {
  page: number;
  page_size: number;
  total: number;
  items: T[];
}

export interface DiagramNode {
  token_id: number;
  x: number;
  y: number;
  label: string;
  sublabel: string | null;
}

export interface DiagramEdge {
  head_id: number;
  dep_id: number;
  deprel: string | null;
  height: number;
  anchors: [number, number][];
}

export interface DiagramData {
  mode: string;
  width: number;
  height: number;
  nodes: DiagramNode[];
  edges: DiagramEdge[];
}

export interface SearchHit {
  sent_id: string;
  token_id: number | null;
  snippet: string;
  start: number;
  end: number;
}

export interface FieldAgreementData {
  raw_agreement: number;
  kappa: number | null;
}

export interface AgreementReportData {
  annotator_a: string;
  annotator_b: string;
  n_sentences_compared: number;
  n_sentences_skipped_tokenization: number;
  n_tokens: number;
  per_field: Record<string, FieldAgreementData>;
  uas: number;
  las: number;
}

export interface MatrixPair {
  a: string;
  b: string;
  report: AgreementReportData;
}

export interface VocabularyData {
  upos: string[];
  deprel: string[];
  feats: Record<string, string[]>;
}

export interface ErrorEnvelope {
  code: string;
  message: string;
  details: Record<string, unknown>;
}

export const GRAPH_MODES = [
  "compact_horizontal",
  "arcs_horizontal",
  "tree_vertical",
] as const;
export type GraphMode = (typeof GRAPH_MODES)[number];
