/** Typed client for the annotation HTTP API.
 *
 * The UI is a thin client: every number it displays comes from these
 * endpoints unchanged. fetch is injectable for tests.
 */

import type {
  AgreementReport,
  SchemaInfo,
  SentenceDetail,
  SentenceSummary,
  SubmissionBody,
} from "./model.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    detail: string,
  ) {
    super(detail);
    this.name = "ApiError";
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly base: string = "",
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchImpl(this.base + path, init);
    } catch (err) {
      throw new ApiError(0, `cannot reach the server: ${String(err)}`);
    }
    if (!response.ok) {
      let detail = `${response.status}`;
      try {
        const body = (await response.json()) as { detail?: unknown };
        if (body && body.detail !== undefined) {
          detail = typeof body.detail === "string" ? body.detail : JSON.stringify(body.detail);
        }
      } catch {
        /* non-JSON error body; keep the status */
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  listSentences(): Promise<SentenceSummary[]> {
    return this.request<SentenceSummary[]>("/api/sentences");
  }

  getSentence(id: number): Promise<SentenceDetail> {
    return this.request<SentenceDetail>(`/api/sentences/${id}`);
  }

  submitAnnotation(body: SubmissionBody): Promise<{ status: string; id: number }> {
    return this.request("/api/annotations", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  getAgreement(annotatorIds: string[]): Promise<AgreementReport> {
    const joined = encodeURIComponent(annotatorIds.join(","));
    return this.request<AgreementReport>(`/api/agreement?annotators=${joined}`);
  }

  getSchema(): Promise<SchemaInfo> {
    return this.request<SchemaInfo>("/api/schema");
  }

  exportUrl(): string {
    return `${this.base}/api/export`;
  }
}
