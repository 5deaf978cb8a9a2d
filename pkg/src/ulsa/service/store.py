"""Dataset store behind the annotation API.

The base dataset file stays the single source of truth.  Annotator work is
kept per (annotator, sentence) under an ``annotator_tags`` extension key in
the same JSON file, so the working file remains loadable as an ordinary
dataset (unknown keys are ignored by the non-strict loader).  Writes are
serialized by a lock and persisted with write-to-temp + atomic rename;
reads serve an immutable in-memory snapshot.
"""

from __future__ import annotations

import json
import os
import tempfile
import threading

from ..actions import ACTION_TERMS, CLASS_ORDER
from ..dataset import AnnotatedSentence, record_to_sentence, sentence_to_record
from ..errors import ParseError, SchemaError
from .. import analysis


class AnnotationStore:
    def __init__(self, path):
        self.path = os.fspath(path)
        self._lock = threading.Lock()
        try:
            with open(self.path, encoding="utf-8") as fh:
                raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{self.path}: invalid JSON: {exc}") from exc
        if not isinstance(raw, list):
            raise ParseError(f"{self.path}: expected a JSON array of records")

        self.base: list[AnnotatedSentence] = [
            record_to_sentence(record, index) for index, record in enumerate(raw)
        ]
        self._overlays: list[dict[str, dict]] = []
        self._seq = 0
        for index, record in enumerate(raw):
            overlay = record.get("annotator_tags", {})
            if not isinstance(overlay, dict):
                raise SchemaError("'annotator_tags' must be an object", index)
            clean: dict[str, dict] = {}
            for annotator, entry in overlay.items():
                tags = entry.get("tags")
                n_tokens = len(self.base[index].annotations)
                if not isinstance(tags, list) or len(tags) != n_tokens:
                    raise SchemaError(
                        f"annotator {annotator!r}: overlay tag count mismatch", index
                    )
                clean[annotator] = {
                    "tags": [str(t) for t in tags],
                    "is_synthesis": bool(entry.get("is_synthesis", True)),
                    "seq": int(entry.get("seq", 0)),
                }
                self._seq = max(self._seq, clean[annotator]["seq"])
            self._overlays.append(clean)

    # -- read side ---------------------------------------------------------

    def __len__(self) -> int:
        return len(self.base)

    def summaries(self) -> list[dict]:
        return [self._summary(i) for i in range(len(self.base))]

    def _summary(self, index: int) -> dict:
        s = self.base[index]
        record = sentence_to_record(s)
        record.setdefault("is_synthesis", s.is_synthesis)
        record.setdefault("paragraph_id", s.paragraph_id)
        record.setdefault("synthesis_type", None)
        record["id"] = index
        record["annotators"] = sorted(self._overlays[index])
        return record

    def detail(self, index: int) -> dict:
        if not 0 <= index < len(self.base):
            raise KeyError(index)
        record = self._summary(index)
        overlay = self._overlays[index]
        record["annotator_tags"] = {a: list(e["tags"]) for a, e in overlay.items()}
        record["annotator_is_synthesis"] = {
            a: e["is_synthesis"] for a, e in overlay.items()
        }
        return record

    def annotators(self) -> list[str]:
        seen = set()
        for overlay in self._overlays:
            seen.update(overlay)
        return sorted(seen)

    # -- write side --------------------------------------------------------

    def submit(self, index: int, annotator_id: str, record: dict) -> None:
        """Validate and persist one annotator's version of a sentence."""
        if not 0 <= index < len(self.base):
            raise KeyError(index)
        candidate = record_to_sentence(record, index)
        base = self.base[index]
        if candidate.tokens != base.tokens:
            raise SchemaError("submitted tokens do not match the stored sentence", index)
        with self._lock:
            self._seq += 1
            self._overlays[index][annotator_id] = {
                "tags": [t.value for t in candidate.tags],
                "is_synthesis": candidate.is_synthesis,
                "seq": self._seq,
            }
            self._write_locked()

    def _write_locked(self) -> None:
        records = []
        for index, s in enumerate(self.base):
            record = sentence_to_record(s)
            if self._overlays[index]:
                record["annotator_tags"] = self._overlays[index]
            records.append(record)
        payload = json.dumps(records, ensure_ascii=False, indent=1)
        directory = os.path.dirname(os.path.abspath(self.path)) or "."
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=".store-")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(payload + "\n")
            os.replace(tmp, self.path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    # -- derived views -----------------------------------------------------

    def export(self, annotator: str | None = None) -> list[dict]:
        """Dataset in the published format.

        With ``annotator``, that annotator's tags replace the base tags where
        present; otherwise the most recent write per sentence wins, falling
        back to the base annotation.
        """
        out = []
        for index, s in enumerate(self.base):
            overlay = self._overlays[index]
            entry = None
            if annotator is not None:
                entry = overlay.get(annotator)
            elif overlay:
                entry = max(overlay.values(), key=lambda e: e["seq"])
            if entry is None:
                out.append(sentence_to_record(s, published_only=True))
            else:
                out.append(
                    {
                        "annotations": [
                            {"tag": tag, "token": token}
                            for tag, token in zip(entry["tags"], s.tokens)
                        ],
                        "sentence": s.sentence,
                    }
                )
        return out

    def agreement(self, annotator_ids: list[str]) -> dict:
        """Fleiss' kappa over the sentences all named annotators completed.

        Sentence classification is scored over synthesis/non-synthesis votes;
        action-term tagging over per-token 9-way tags; per-term values use
        term vs. not-term binary tables.
        """
        ids = list(dict.fromkeys(annotator_ids))
        if len(ids) < 2:
            raise ValueError("agreement needs at least 2 annotators")
        shared = [
            i
            for i in range(len(self.base))
            if all(a in self._overlays[i] for a in ids)
        ]
        report = {
            "annotators": ids,
            "n_sentences": len(shared),
            "n_tokens": 0,
            "sentence_classification": None,
            "action_terms": None,
            "per_term": {t.value: None for t in ACTION_TERMS},
            "note": None,
        }
        if not shared:
            report["note"] = "no sentences annotated by every requested annotator"
            return report

        synth_rows = []
        tag_rows: list[list[str]] = []
        for i in shared:
            overlay = self._overlays[i]
            votes = [overlay[a]["is_synthesis"] for a in ids]
            synth_rows.append([sum(votes), len(votes) - sum(votes)])
            for position in range(len(self.base[i].annotations)):
                tag_rows.append([overlay[a]["tags"][position] for a in ids])
        report["n_tokens"] = len(tag_rows)

        report["sentence_classification"] = _kappa_or_none(synth_rows)
        class_names = [t.value for t in CLASS_ORDER]
        table = [
            [sum(1 for tag in row if tag == name) for name in class_names]
            for row in tag_rows
        ]
        report["action_terms"] = _kappa_or_none(table)
        per_term = analysis.per_term_tables(tag_rows, [t.value for t in ACTION_TERMS])
        for term, binary in per_term.items():
            report["per_term"][term] = _kappa_or_none(binary)
        return report


def _kappa_or_none(table) -> float | None:
    try:
        return analysis.fleiss_kappa(table)
    except Exception:
        return None
