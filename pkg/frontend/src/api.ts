import type {
  AgreementReportData,
  DiagramData,
  ErrorEnvelope,
  GraphMode,
  LoginResponse,
  MatrixPair,
  Page,
  RecordData,
  SearchHit,
  SentenceData,
  SentenceListItem,
  TreebankInfo,
  VocabularyData,
} from "./types";

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
    public details: Record<string, unknown> = {},
  ) {
    super(message);
  }
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  token: string | null = null;
  annotatorId: string | null = null;
  private fetchImpl: FetchLike;

  constructor(
    public baseUrl: string = "",
    fetchImpl?: FetchLike,
  ) {
    this.fetchImpl = fetchImpl ?? ((url, init) => fetch(url, init));
  }

  private async request<T>(
    method: string,
    path: string,
    options: { body?: unknown; query?: Record<string, string | number | undefined> } = {},
  ): Promise<T> {
    let url = this.baseUrl + path;
    if (options.query) {
      const params = new URLSearchParams();
      for (const [key, value] of Object.entries(options.query)) {
        if (value !== undefined) params.set(key, String(value));
      }
      const qs = params.toString();
      if (qs) url += `?${qs}`;
    }
    const headers: Record<string, string> = {};
    if (this.token) headers["Authorization"] = `Bearer ${this.token}`;
    const init: RequestInit = { method, headers };
    if (options.body !== undefined) {
      headers["Content-Type"] = "application/json";
      init.body = JSON.stringify(options.body);
    }
    const resp = await this.fetchImpl(url, init);
    if (!resp.ok) {
      let envelope: ErrorEnvelope;
      try {
        envelope = (await resp.json()) as ErrorEnvelope;
      } catch {
        envelope = { code: "HTTP_" + resp.status, message: resp.statusText, details: {} };
      }
      throw new ApiError(resp.status, envelope.code, envelope.message, envelope.details);
    }
    const contentType = resp.headers.get("content-type") ?? "";
    if (contentType.startsWith("text/plain")) {
      return (await resp.text()) as unknown as T;
    }
    return (await resp.json()) as T;
  }

  async login(annotatorId: string, password: string): Promise<LoginResponse> {
    const out = await this.request<LoginResponse>("POST", "/auth/login", {
      body: { annotator_id: annotatorId, password },
    });
    this.token = out.token;
    this.annotatorId = out.annotator_id;
    return out;
  }

  listTreebanks(): Promise<{ items: TreebankInfo[] }> {
    return this.request("GET", "/treebanks");
  }

  importTreebank(id: string, name: string, language: string, conllu: string): Promise<TreebankInfo> {
    return this.request("POST", "/treebanks", { body: { id, name, language, conllu } });
  }

  listSentences(
    treebank: string,
    opts: { status?: string; page?: number; page_size?: number } = {},
  ): Promise<Page<SentenceListItem>> {
    return this.request("GET", `/treebanks/${treebank}/sentences`, { query: { ...opts } });
  }

  getSentence(treebank: string, sentId: string, annotator?: string): Promise<RecordData> {
    return this.request("GET", `/treebanks/${treebank}/sentences/${sentId}`, {
      query: { annotator },
    });
  }

  putSentence(
    treebank: string,
    sentId: string,
    body: { sentence: SentenceData; status: string; note: string; expected_revision: number },
  ): Promise<RecordData> {
    return this.request("PUT", `/treebanks/${treebank}/sentences/${sentId}`, { body });
  }

  layout(treebank: string, sentId: string, mode: GraphMode): Promise<DiagramData> {
    return this.request("GET", `/treebanks/${treebank}/sentences/${sentId}/layout`, {
      query: { mode },
    });
  }

  split(
    treebank: string,
    sentId: string,
    tokenId: number,
    parts: string[],
    expectedRevision?: number,
  ): Promise<RecordData> {
    return this.request("POST", `/treebanks/${treebank}/sentences/${sentId}/split`, {
      body: { token_id: tokenId, parts, expected_revision: expectedRevision ?? null },
    });
  }

  join(
    treebank: string,
    sentId: string,
    firstId: number,
    lastId: number,
    form?: string,
    expectedRevision?: number,
  ): Promise<RecordData> {
    return this.request("POST", `/treebanks/${treebank}/sentences/${sentId}/join`, {
      body: {
        first_id: firstId,
        last_id: lastId,
        form: form ?? null,
        expected_revision: expectedRevision ?? null,
      },
    });
  }

  search(
    treebank: string,
    q: string,
    opts: { page?: number; page_size?: number; annotator?: string; status?: string } = {},
  ): Promise<Page<SearchHit>> {
    return this.request("GET", `/treebanks/${treebank}/search`, { query: { q, ...opts } });
  }

  agreement(treebank: string, a: string, b: string, fields?: string): Promise<AgreementReportData> {
    return this.request("GET", `/treebanks/${treebank}/agreement`, { query: { a, b, fields } });
  }

  agreementMatrix(treebank: string, fields?: string): Promise<{ pairs: MatrixPair[] }> {
    return this.request("GET", `/treebanks/${treebank}/agreement-matrix`, { query: { fields } });
  }

  exportConllu(treebank: string, annotator?: string): Promise<string> {
    return this.request("GET", `/treebanks/${treebank}/export`, { query: { annotator } });
  }

  vocabulary(treebank: string): Promise<VocabularyData> {
    return this.request("GET", `/treebanks/${treebank}/vocabulary`);
  }
}
