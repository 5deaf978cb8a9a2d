"""Per-paragraph synthesis flowcharts.

Mixing tags are first refined into dispersion/solution variants from the
wording of the sentence; the actions of a paragraph are then read off in
linear order (sentence order, token order) and encoded as a 10x10 matrix
counting action -> action transitions.  Flattened row-major, each paragraph
becomes a 100-vector ready for clustering.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .actions import (
    REFINED_INDEX,
    REFINED_ORDER,
    ActionTerm,
    RefinedActionTerm,
    SynthesisType,
)
from .corpus import TokenizedSentence
from .dataset import AnnotatedSentence, iter_action_runs
from .errors import LengthMismatch, ParseError

N_AXIS = len(REFINED_ORDER)


@dataclass(frozen=True)
class RefinementRules:
    """Prefix-stem dictionaries controlling Mixing refinement.

    A token matches a dictionary when its lowercased surface starts with any
    listed stem.  ``liquids`` flags a liquid environment anywhere in the
    sentence, which is what turns grinding/milling into dispersion mixing.
    """

    dispersion: tuple[str, ...]
    grind_mill: tuple[str, ...]
    solution: tuple[str, ...]
    liquids: tuple[str, ...]

    @staticmethod
    def _load_stems(name: str, path=None) -> tuple[str, ...]:
        if path is None:
            text = resources.files("ulsa.resources").joinpath(name).read_text("utf-8")
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        stems = []
        for raw in text.splitlines():
            line = raw.strip().lower()
            if line and not line.startswith("#"):
                stems.append(line)
        return tuple(stems)

    @classmethod
    def load(
        cls, dispersion=None, grind_mill=None, solution=None, liquids=None
    ) -> "RefinementRules":
        return cls(
            dispersion=cls._load_stems("dispersion.txt", dispersion),
            grind_mill=cls._load_stems("grind_mill.txt", grind_mill),
            solution=cls._load_stems("solution.txt", solution),
            liquids=cls._load_stems("liquids.txt", liquids),
        )


def _matches(word: str, stems: tuple[str, ...]) -> bool:
    return any(word.startswith(stem) for stem in stems)


def _surfaces(sentence: TokenizedSentence | list[str]) -> list[str]:
    if isinstance(sentence, TokenizedSentence):
        return [t.surface for t in sentence.tokens]
    return list(sentence)


def refine_mixing(
    sentence: TokenizedSentence | list[str],
    tags: list[ActionTerm],
    rules: RefinementRules | None = None,
) -> list[RefinedActionTerm]:
    """Split Mixing into Dispersion/Solution Mixing from sentence wording.

    Dispersion: the token is an explicit dispersion word, or a grinding or
    milling word with a liquid-environment word somewhere in the sentence.
    Solution: the token is a dissolution-family word.  All other tags pass
    through unchanged, so the output stays aligned with the tokens.
    """
    if rules is None:
        rules = default_rules()
    words = [s.lower() for s in _surfaces(sentence)]
    if len(words) != len(tags):
        raise LengthMismatch(f"{len(words)} tokens vs {len(tags)} tags")
    liquid_present = any(_matches(w, rules.liquids) for w in words)

    refined: list[RefinedActionTerm] = []
    for word, tag in zip(words, tags):
        if tag != ActionTerm.MIXING:
            refined.append(RefinedActionTerm(ActionTerm(tag).value))
            continue
        if _matches(word, rules.dispersion):
            refined.append(RefinedActionTerm.DISPERSION_MIXING)
        elif _matches(word, rules.grind_mill) and liquid_present:
            refined.append(RefinedActionTerm.DISPERSION_MIXING)
        elif _matches(word, rules.solution):
            refined.append(RefinedActionTerm.SOLUTION_MIXING)
        else:
            refined.append(RefinedActionTerm.MIXING)
    return refined


_DEFAULT_RULES: list[RefinementRules] = []


def default_rules() -> RefinementRules:
    if not _DEFAULT_RULES:
        _DEFAULT_RULES.append(RefinementRules.load())
    return _DEFAULT_RULES[0]


@dataclass
class ActionSequence:
    paragraph_id: str
    synthesis_type: SynthesisType | None
    actions: list[RefinedActionTerm]

    def __post_init__(self):
        if any(a == RefinedActionTerm.NOT_ACTION for a in self.actions):
            raise ValueError("action sequence may not contain NotAction")


def paragraph_actions(
    sentences: list[tuple[TokenizedSentence | list[str], list[RefinedActionTerm]]],
    paragraph_id: str = "",
    synthesis_type: SynthesisType | None = None,
) -> ActionSequence:
    """Merge per-sentence refined tags into one linear action sequence.

    Within a sentence, adjacent tokens sharing a tag are one multi-word
    phrase and collapse to a single action; sentence boundaries never
    collapse, so repeated steps across sentences stay distinct.
    """
    actions: list[RefinedActionTerm] = []
    for _, tags in sentences:
        for tag, _, _ in iter_action_runs(tags):
            actions.append(RefinedActionTerm(tag))
    return ActionSequence(paragraph_id, synthesis_type, actions)


def to_adjacency(seq: ActionSequence) -> np.ndarray:
    """10x10 transition counts; cell (i, j) counts action_i -> action_j."""
    matrix = np.zeros((N_AXIS, N_AXIS), dtype=np.int64)
    for a, b in zip(seq.actions, seq.actions[1:]):
        matrix[REFINED_INDEX[a], REFINED_INDEX[b]] += 1
    return matrix


def flatten(matrix: np.ndarray) -> np.ndarray:
    """Row-major 100-vector; index (i, j) -> 10 i + j."""
    if matrix.shape != (N_AXIS, N_AXIS):
        raise ValueError(f"expected {(N_AXIS, N_AXIS)} matrix, got {matrix.shape}")
    return matrix.reshape(N_AXIS * N_AXIS).copy()


def reshape_vector(vector: np.ndarray) -> np.ndarray:
    if vector.shape != (N_AXIS * N_AXIS,):
        raise ValueError(f"expected {N_AXIS * N_AXIS}-vector, got {vector.shape}")
    return vector.reshape(N_AXIS, N_AXIS).copy()


def dataset_sequences(
    sentences: list[AnnotatedSentence], rules: RefinementRules | None = None
) -> list[ActionSequence]:
    """Gold-tag action sequences per paragraph, in first-seen order.

    Sentences without a paragraph id are skipped (they cannot be grouped).
    """
    by_paragraph: dict[str, list[AnnotatedSentence]] = {}
    for s in sentences:
        if not s.paragraph_id:
            continue
        by_paragraph.setdefault(str(s.paragraph_id), []).append(s)
    sequences = []
    for pid, group in by_paragraph.items():
        stype = next(
            (
                s.synthesis_type
                for s in group
                if s.synthesis_type is not SynthesisType.UNKNOWN
            ),
            None,
        )
        refined = [
            (s.tokens, refine_mixing(list(s.tokens), list(s.tags), rules))
            for s in group
        ]
        sequences.append(paragraph_actions(refined, pid, stype))
    return sequences


def csv_header() -> list[str]:
    cells = [
        f"{a.value}→{b.value}" for a in REFINED_ORDER for b in REFINED_ORDER
    ]
    return ["paragraph_id", "synthesis_type"] + cells


def write_flowchart_csv(path, sequences: list[ActionSequence]) -> None:
    """One row per paragraph: id, synthesis type, 100 transition counts."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(csv_header())
        for seq in sequences:
            vector = flatten(to_adjacency(seq))
            stype = seq.synthesis_type.value if seq.synthesis_type else ""
            writer.writerow([seq.paragraph_id, stype] + [int(v) for v in vector])


def read_flowchart_csv(path):
    """Inverse of write_flowchart_csv: (ids, types, N x 100 count matrix)."""
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}: empty flowchart CSV") from None
        if header != csv_header():
            raise ParseError(f"{path}: unexpected flowchart CSV header")
        ids, types, rows = [], [], []
        for lineno, row in enumerate(reader, start=2):
            if len(row) != 2 + N_AXIS * N_AXIS:
                raise ParseError(f"{path}:{lineno}: expected {2 + N_AXIS * N_AXIS} fields")
            ids.append(row[0])
            types.append(SynthesisType(row[1]) if row[1] else None)
            try:
                rows.append([float(v) for v in row[2:]])
            except ValueError:
                raise ParseError(f"{path}:{lineno}: non-numeric cell") from None
    matrix = np.array(rows, dtype=np.float64).reshape(len(rows), N_AXIS * N_AXIS)
    return ids, types, matrix


def write_sequences(path, sequences: list[ActionSequence]) -> None:
    """Human-readable dump: one paragraph per line, actions space-separated."""
    with open(path, "w", encoding="utf-8") as fh:
        for seq in sequences:
            fh.write(" ".join(a.value for a in seq.actions) + "\n")
