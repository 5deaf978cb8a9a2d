/** Draft persistence: unsubmitted edits survive reloads and server outages.
 *
 * Backed by any Storage-shaped key/value store (window.localStorage in the
 * browser, a Map-based fake in tests). Drafts are namespaced per annotator
 * so concurrent annotators on one machine stay isolated.
 */

import type { LocalRecord } from "./model.js";

export interface KVStore {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
  removeItem(key: string): void;
}

export class DraftStore {
  constructor(
    private readonly store: KVStore,
    private readonly annotatorId: string,
  ) {}

  private key(sentenceId: number): string {
    return `ulsa-draft:${this.annotatorId}:${sentenceId}`;
  }

  save(record: LocalRecord): void {
    this.store.setItem(this.key(record.id), JSON.stringify(record));
  }

  load(sentenceId: number): LocalRecord | null {
    const raw = this.store.getItem(this.key(sentenceId));
    if (raw === null) {
      return null;
    }
    try {
      const parsed = JSON.parse(raw) as LocalRecord;
      if (
        typeof parsed.id !== "number" ||
        !Array.isArray(parsed.tokens) ||
        !Array.isArray(parsed.tags)
      ) {
        return null;
      }
      return parsed;
    } catch {
      return null;
    }
  }

  clear(sentenceId: number): void {
    this.store.removeItem(this.key(sentenceId));
  }
}
