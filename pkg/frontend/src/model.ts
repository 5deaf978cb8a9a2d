/** Domain types mirroring the HTTP API, plus the local editing model.
 *
 * Everything here is pure data-in/data-out so it can be tested without a
 * DOM; the UI layer owns all rendering.
 */

export interface AnnotationPair {
  tag: string;
  token: string;
}

export interface SentenceSummary {
  id: number;
  sentence: string;
  annotations: AnnotationPair[];
  is_synthesis: boolean;
  paragraph_id?: string;
  synthesis_type?: string | null;
  annotators: string[];
}

export interface SentenceDetail extends SentenceSummary {
  annotator_tags: Record<string, string[]>;
  annotator_is_synthesis: Record<string, boolean>;
}

export interface TermInfo {
  name: string;
  key: number;
  definition: string;
}

export interface SchemaInfo {
  terms: TermInfo[];
  not_action: string;
  refined_terms: string[];
  synthesis_types: string[];
}

export interface AgreementReport {
  annotators: string[];
  n_sentences: number;
  n_tokens: number;
  sentence_classification: number | null;
  action_terms: number | null;
  per_term: Record<string, number | null>;
  note: string | null;
}

/** One sentence being edited locally: tags are parallel to tokens. */
export interface LocalRecord {
  id: number;
  sentence: string;
  tokens: string[];
  tags: string[];
  is_synthesis: boolean;
}

export function tokensOf(sentence: string): string[] {
  return sentence.length === 0 ? [] : sentence.split(" ");
}

/** Start editing a fetched record; the annotator's own version wins over
 * the base annotation when present. */
export function fromDetail(detail: SentenceDetail, annotatorId: string): LocalRecord {
  const tokens = tokensOf(detail.sentence);
  const own = detail.annotator_tags[annotatorId];
  const tags =
    own !== undefined && own.length === tokens.length
      ? [...own]
      : detail.annotations.map((a) => a.tag);
  const ownSynthesis = detail.annotator_is_synthesis[annotatorId];
  return {
    id: detail.id,
    sentence: detail.sentence,
    tokens,
    tags,
    is_synthesis: ownSynthesis !== undefined ? ownSynthesis : detail.is_synthesis,
  };
}

/** A record is renderable only if tokens and tags line up with the text. */
export function isWellFormed(detail: SentenceDetail): boolean {
  const tokens = tokensOf(detail.sentence);
  return (
    detail.sentence.length > 0 &&
    detail.annotations.length === tokens.length &&
    detail.annotations.every((a, i) => a.token === tokens[i])
  );
}

/** Tag every token in [start, end] (inclusive). Returns a new record, or
 * null when the range is out of bounds — callers show feedback and keep
 * the old state. */
export function tagSpan(
  record: LocalRecord,
  start: number,
  end: number,
  tag: string,
): LocalRecord | null {
  if (start < 0 || end >= record.tokens.length || start > end) {
    return null;
  }
  const tags = [...record.tags];
  for (let i = start; i <= end; i++) {
    tags[i] = tag;
  }
  return { ...record, tags };
}

export function clearSpan(
  record: LocalRecord,
  start: number,
  end: number,
  notAction: string,
): LocalRecord | null {
  return tagSpan(record, start, end, notAction);
}

/** Digit key -> action term, in the canonical order served by the API.
 * "0" clears (NotAction); anything else is not a tagging key. */
export function termForKey(schema: SchemaInfo, key: string): string | null {
  if (key === "0") {
    return schema.not_action;
  }
  const term = schema.terms.find((t) => String(t.key) === key);
  return term ? term.name : null;
}

/** Local validation mirroring the server's rules; submission is blocked
 * until this returns no problems. */
export function validateRecord(record: LocalRecord, schema: SchemaInfo): string[] {
  const problems: string[] = [];
  if (record.sentence.trim().length === 0) {
    problems.push("sentence is empty");
  }
  const expected = tokensOf(record.sentence);
  if (record.tokens.length !== expected.length) {
    problems.push(
      `token count ${record.tokens.length} does not match the sentence (${expected.length})`,
    );
  }
  if (record.tags.length !== record.tokens.length) {
    problems.push("one tag per token required");
  }
  const known = new Set<string>([schema.not_action, ...schema.terms.map((t) => t.name)]);
  for (const tag of record.tags) {
    if (!known.has(tag)) {
      problems.push(`unknown action term "${tag}"`);
      break;
    }
  }
  if (!record.is_synthesis && record.tags.some((t) => t !== schema.not_action)) {
    problems.push("non-synthesis sentences cannot carry action tags");
  }
  return problems;
}

/** Body for POST /api/annotations. */
export interface SubmissionBody {
  id: number;
  annotator_id: string;
  annotations: AnnotationPair[];
  sentence: string;
  is_synthesis: boolean;
}

export function toSubmission(record: LocalRecord, annotatorId: string): SubmissionBody {
  return {
    id: record.id,
    annotator_id: annotatorId,
    annotations: record.tokens.map((token, i) => ({
      tag: record.tags[i] ?? "",
      token,
    })),
    sentence: record.sentence,
    is_synthesis: record.is_synthesis,
  };
}
