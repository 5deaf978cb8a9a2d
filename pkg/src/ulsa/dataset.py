"""Loading, validation, splitting, and summary statistics for the annotated
sentence dataset.

The on-disk format is a JSON array of records::

    {"annotations": [{"tag": "...", "token": "..."}, ...],
     "sentence": "space-joined tokens"}

with optional extension keys ``is_synthesis``, ``paragraph_id``, and
``synthesis_type``.  Multi-word action phrases appear as consecutive tokens
sharing a tag, and are counted as a single action everywhere ("phrase-level"
counting).
"""

from __future__ import annotations

import json
import os
import random
import tempfile
from collections import Counter
from dataclasses import dataclass, replace

from .actions import ActionTerm, SynthesisType, parse_synthesis_type
from .errors import InvalidRatio, ParseError, SchemaError

_EXTENSION_KEYS = {"is_synthesis", "paragraph_id", "synthesis_type"}


@dataclass(frozen=True)
class AnnotatedToken:
    token: str
    tag: ActionTerm

    def __post_init__(self):
        if not self.token:
            raise ValueError("annotated token must be non-empty")


@dataclass(frozen=True)
class AnnotatedSentence:
    sentence: str
    annotations: tuple[AnnotatedToken, ...]
    is_synthesis: bool = True
    paragraph_id: str = ""
    synthesis_type: SynthesisType = SynthesisType.UNKNOWN

    @property
    def tokens(self) -> list[str]:
        return [a.token for a in self.annotations]

    @property
    def tags(self) -> list[ActionTerm]:
        return [a.tag for a in self.annotations]

    def action_phrase_count(self) -> int:
        """Number of annotated actions, counting a consecutive same-tag run
        (a multi-word phrase) once."""
        return sum(1 for _ in iter_action_runs(self.tags))

    def action_token_count(self) -> int:
        return sum(1 for t in self.tags if t is not ActionTerm.NOT_ACTION)


def iter_action_runs(tags: list[ActionTerm]):
    """Yield (tag, start, length) for each maximal run of equal non-NotAction
    tags.  Works on refined tag lists too (comparison is by tag value)."""
    i = 0
    n = len(tags)
    while i < n:
        if tags[i] == ActionTerm.NOT_ACTION:
            i += 1
            continue
        j = i + 1
        while j < n and tags[j] == tags[i]:
            j += 1
        yield tags[i], i, j - i
        i = j


@dataclass
class DatasetStats:
    paragraph_count: int
    paragraphs_per_type: dict[SynthesisType, int]
    total_sentences: int
    synthesis_sentences: int
    action_token_count: int
    per_term: dict[ActionTerm, int]
    sentences_per_paragraph: dict[int, int]
    synthesis_sentences_per_paragraph: dict[int, int]
    tokens_per_sentence: dict[int, int]
    action_tokens_per_sentence: dict[int, int]


def _align_partial(sentence: str, annotations: list, index: int) -> list:
    """Align a partial annotations list against the space-split sentence.

    Records may list only the tagged tokens; the rest of the sentence fills
    in as NotAction.  Annotation order must follow sentence order, and each
    annotated token must actually occur (after the previous match).
    """
    words = sentence.split(" ")
    if any(not w for w in words):
        raise SchemaError("sentence is not single-space joined", index)
    out = []
    pos = 0
    for a in annotations:
        try:
            at = words.index(a.token, pos)
        except ValueError:
            raise SchemaError(
                "space-joined tokens do not reproduce the sentence", index
            ) from None
        out.extend(
            AnnotatedToken(token=w, tag=ActionTerm.NOT_ACTION) for w in words[pos:at]
        )
        out.append(a)
        pos = at + 1
    out.extend(AnnotatedToken(token=w, tag=ActionTerm.NOT_ACTION) for w in words[pos:])
    return out


def record_to_sentence(record: dict, index: int = 0, strict: bool = False) -> AnnotatedSentence:
    """Validate one raw record; SchemaError messages carry ``index``.

    Annotations either cover every token of the sentence or list a subset in
    sentence order (unlisted tokens default to NotAction).
    """
    if not isinstance(record, dict):
        raise SchemaError("record is not an object", index)
    if strict:
        unknown = set(record) - {"annotations", "sentence"} - _EXTENSION_KEYS
        if unknown:
            raise SchemaError(f"unknown keys {sorted(unknown)}", index)
    if "sentence" not in record:
        raise SchemaError("missing 'sentence' field", index)
    if "annotations" not in record:
        raise SchemaError("missing 'annotations' field", index)
    sentence = record["sentence"]
    raw_annotations = record["annotations"]
    if not isinstance(sentence, str) or not sentence:
        raise SchemaError("'sentence' must be a non-empty string", index)
    if not isinstance(raw_annotations, list):
        raise SchemaError("'annotations' must be a list", index)

    annotations = []
    for item in raw_annotations:
        if not isinstance(item, dict) or "tag" not in item or "token" not in item:
            raise SchemaError("annotation items need 'tag' and 'token'", index)
        try:
            tag = ActionTerm(item["tag"])
        except ValueError:
            raise SchemaError(f"unknown tag {item['tag']!r}", index) from None
        token = item["token"]
        if not isinstance(token, str) or not token:
            raise SchemaError("annotation token must be a non-empty string", index)
        annotations.append(AnnotatedToken(token=token, tag=tag))

    if " ".join(a.token for a in annotations) != sentence:
        annotations = _align_partial(sentence, annotations, index)

    has_action = any(a.tag is not ActionTerm.NOT_ACTION for a in annotations)
    is_synthesis = record.get("is_synthesis", True)
    if not isinstance(is_synthesis, bool):
        raise SchemaError("'is_synthesis' must be a boolean", index)
    if has_action and not is_synthesis:
        raise SchemaError("sentence with action tags marked non-synthesis", index)
    synthesis_type = SynthesisType.UNKNOWN
    if "synthesis_type" in record:
        try:
            synthesis_type = parse_synthesis_type(record["synthesis_type"])
        except (ValueError, TypeError, AttributeError):
            raise SchemaError(
                f"unknown synthesis type {record['synthesis_type']!r}", index
            ) from None
    paragraph_id = record.get("paragraph_id", "")
    if not isinstance(paragraph_id, str):
        raise SchemaError("'paragraph_id' must be a string", index)
    return AnnotatedSentence(
        sentence=sentence,
        annotations=tuple(annotations),
        is_synthesis=is_synthesis,
        paragraph_id=paragraph_id,
        synthesis_type=synthesis_type,
    )


def load_dataset(path, strict: bool = False) -> list[AnnotatedSentence]:
    """Load and validate a dataset file, preserving record order.

    ``strict`` rejects records carrying keys outside the published format and
    its documented extension keys; the default mode ignores unknown keys.
    """
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from None
    if not isinstance(data, list):
        raise SchemaError("dataset file must contain a JSON array")
    return [record_to_sentence(rec, i, strict) for i, rec in enumerate(data)]


def sentence_to_record(s: AnnotatedSentence, published_only: bool = False) -> dict:
    """Serialize to the published record shape (field order: annotations,
    sentence); extension keys appended unless ``published_only``."""
    record: dict = {
        "annotations": [{"tag": a.tag.value, "token": a.token} for a in s.annotations],
        "sentence": s.sentence,
    }
    if not published_only:
        record["is_synthesis"] = s.is_synthesis
        if s.paragraph_id:
            record["paragraph_id"] = s.paragraph_id
        if s.synthesis_type is not SynthesisType.UNKNOWN:
            record["synthesis_type"] = s.synthesis_type.value
    return record


def save_dataset(ds: list[AnnotatedSentence], path, published_only: bool = False) -> None:
    """Write the dataset atomically; ``load_dataset(save_dataset(ds)) == ds``."""
    payload = json.dumps(
        [sentence_to_record(s, published_only) for s in ds],
        ensure_ascii=False,
        indent=1,
    )
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(payload)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def dataset_stats(ds: list[AnnotatedSentence]) -> DatasetStats:
    """Exact counts over a validated dataset.

    Actions are counted phrase-level (a consecutive same-tag run is one
    action); the per-sentence action histogram counts individual action
    tokens.
    """
    per_term: Counter = Counter()
    paragraphs: dict[str, SynthesisType] = {}
    sentences_per_paragraph: Counter = Counter()
    synth_per_paragraph: Counter = Counter()
    tokens_per_sentence: Counter = Counter()
    action_tokens_per_sentence: Counter = Counter()
    synthesis_sentences = 0

    para_sentence_counts: Counter = Counter()
    para_synth_counts: Counter = Counter()
    for s in ds:
        if s.is_synthesis:
            synthesis_sentences += 1
        for tag, _start, _length in iter_action_runs(s.tags):
            per_term[tag] += 1
        tokens_per_sentence[len(s.annotations)] += 1
        action_tokens_per_sentence[s.action_token_count()] += 1
        if s.paragraph_id:
            paragraphs[s.paragraph_id] = s.synthesis_type
            para_sentence_counts[s.paragraph_id] += 1
            if s.is_synthesis:
                para_synth_counts[s.paragraph_id] += 1
    for pid, count in para_sentence_counts.items():
        sentences_per_paragraph[count] += 1
        synth_per_paragraph[para_synth_counts.get(pid, 0)] += 1

    per_type: Counter = Counter(paragraphs.values())
    return DatasetStats(
        paragraph_count=len(paragraphs),
        paragraphs_per_type={t: per_type.get(t, 0) for t in SynthesisType},
        total_sentences=len(ds),
        synthesis_sentences=synthesis_sentences,
        action_token_count=sum(per_term.values()),
        per_term={t: per_term.get(t, 0) for t in ActionTerm if t is not ActionTerm.NOT_ACTION},
        sentences_per_paragraph=dict(sentences_per_paragraph),
        synthesis_sentences_per_paragraph=dict(synth_per_paragraph),
        tokens_per_sentence=dict(tokens_per_sentence),
        action_tokens_per_sentence=dict(action_tokens_per_sentence),
    )


def token_level_action_count(ds: list[AnnotatedSentence]) -> dict[ActionTerm, int]:
    """Fallback counting mode: every annotated token counts individually."""
    per_term: Counter = Counter()
    for s in ds:
        for tag in s.tags:
            if tag is not ActionTerm.NOT_ACTION:
                per_term[tag] += 1
    return {t: per_term.get(t, 0) for t in ActionTerm if t is not ActionTerm.NOT_ACTION}


def split_dataset(
    ds: list[AnnotatedSentence],
    ratios: tuple[float, float, float] = (0.70, 0.20, 0.10),
    seed: int = 0,
) -> tuple[list[AnnotatedSentence], list[AnnotatedSentence], list[AnnotatedSentence]]:
    """Deterministic shuffled (train, test, validation) partition.

    Test and validation sizes are floor allocations of their ratios; the
    remainder goes to train.  The same seed always yields the same partition.
    """
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise InvalidRatio(f"ratios {ratios} must sum to 1")
    if any(r < 0 for r in ratios):
        raise InvalidRatio(f"ratios {ratios} must be nonnegative")
    order = list(range(len(ds)))
    random.Random(seed).shuffle(order)
    n = len(ds)
    n_test = int(n * ratios[1])
    n_val = int(n * ratios[2])
    n_train = n - n_test - n_val
    shuffled = [ds[i] for i in order]
    train = shuffled[:n_train]
    test = shuffled[n_train : n_train + n_test]
    validation = shuffled[n_train + n_test :]
    return train, test, validation


def with_tags(s: AnnotatedSentence, tags: list[ActionTerm]) -> AnnotatedSentence:
    """Copy of ``s`` with its tags replaced (used for prediction records)."""
    if len(tags) != len(s.annotations):
        raise ValueError("tag list does not match token count")
    annotations = tuple(
        AnnotatedToken(token=a.token, tag=tag) for a, tag in zip(s.annotations, tags)
    )
    has_action = any(t is not ActionTerm.NOT_ACTION for t in tags)
    return replace(s, annotations=annotations, is_synthesis=s.is_synthesis or has_action)
