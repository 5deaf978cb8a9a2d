"""Evaluation of tag sequences against gold annotations.

A sentence counts as correct only when its entire predicted tag sequence
matches gold.  Sentence-level precision divides the fully-correct sentences
(that predict at least one action) by sentences with >= 1 predicted action;
recall divides by sentences with >= 1 gold action.  Token-level micro
metrics ignore the NotAction class.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..actions import CLASS_INDEX, CLASS_ORDER, ActionTerm
from ..dataset import AnnotatedSentence
from ..errors import LengthMismatch


def f1_score(precision: float, recall: float) -> float:
    if precision + recall == 0.0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


@dataclass(frozen=True)
class Metrics:
    precision: float
    recall: float
    f1: float
    support: int = 0

    @classmethod
    def from_counts(cls, tp: int, pred_total: int, gold_total: int) -> "Metrics":
        p = tp / pred_total if pred_total else 0.0
        r = tp / gold_total if gold_total else 0.0
        return cls(p, r, f1_score(p, r), gold_total)


@dataclass
class EvalReport:
    sentence: Metrics
    sentence_by_type: dict[str, Metrics]
    token_micro: Metrics
    token_by_term: dict[ActionTerm, Metrics]
    confusion: np.ndarray  # (9, 9), rows gold, columns predicted
    n_sentences: int
    labels: tuple[ActionTerm, ...] = field(default=CLASS_ORDER)

    def to_dict(self) -> dict:
        def metrics_dict(m: Metrics) -> dict:
            return {
                "precision": m.precision,
                "recall": m.recall,
                "f1": m.f1,
                "support": m.support,
            }

        return {
            "n_sentences": self.n_sentences,
            "sentence": metrics_dict(self.sentence),
            "sentence_by_type": {
                k: metrics_dict(v) for k, v in sorted(self.sentence_by_type.items())
            },
            "token_micro": metrics_dict(self.token_micro),
            "token_by_term": {
                term.value: metrics_dict(self.token_by_term[term])
                for term in CLASS_ORDER
                if term in self.token_by_term
            },
            "confusion_labels": [t.value for t in self.labels],
            "confusion": self.confusion.tolist(),
        }


def _gold_tags(gold) -> tuple[list[ActionTerm], str | None]:
    if isinstance(gold, AnnotatedSentence):
        stype = gold.synthesis_type
        name = stype.value if stype is not None and stype.value != "Unknown" else None
        return list(gold.tags), name
    return list(gold), None


def _sentence_counts(pairs):
    pred_with_action = 0
    gold_with_action = 0
    correct_pred = 0
    correct_gold = 0
    for pred, gold_tags in pairs:
        has_pred = any(t != ActionTerm.NOT_ACTION for t in pred)
        has_gold = any(t != ActionTerm.NOT_ACTION for t in gold_tags)
        exact = pred == gold_tags
        pred_with_action += has_pred
        gold_with_action += has_gold
        correct_pred += exact and has_pred
        correct_gold += exact and has_gold
    p = correct_pred / pred_with_action if pred_with_action else 0.0
    r = correct_gold / gold_with_action if gold_with_action else 0.0
    return Metrics(p, r, f1_score(p, r), gold_with_action)


def evaluate(predictions: list[list[ActionTerm]], gold: list) -> EvalReport:
    """Score aligned prediction/gold tag sequences.

    ``gold`` entries are AnnotatedSentence (enables per-type breakdown) or
    plain tag lists.  Raises LengthMismatch on any misalignment.
    """
    if len(predictions) != len(gold):
        raise LengthMismatch(
            f"{len(predictions)} predictions vs {len(gold)} gold sentences"
        )
    pairs = []
    types = []
    for index, (pred, g) in enumerate(zip(predictions, gold)):
        gold_tags, stype = _gold_tags(g)
        if len(pred) != len(gold_tags):
            raise LengthMismatch(
                f"sentence {index}: {len(pred)} predicted tags vs {len(gold_tags)} gold"
            )
        pairs.append(([ActionTerm(t) for t in pred], [ActionTerm(t) for t in gold_tags]))
        types.append(stype)

    sentence = _sentence_counts(pairs)
    by_type: dict[str, Metrics] = {}
    for stype in sorted({t for t in types if t is not None}):
        subset = [pair for pair, t in zip(pairs, types) if t == stype]
        by_type[stype] = _sentence_counts(subset)

    k = len(CLASS_ORDER)
    confusion = np.zeros((k, k), dtype=np.int64)
    for pred, gold_tags in pairs:
        for p_tag, g_tag in zip(pred, gold_tags):
            confusion[CLASS_INDEX[g_tag], CLASS_INDEX[p_tag]] += 1

    token_by_term: dict[ActionTerm, Metrics] = {}
    micro_tp = micro_pred = micro_gold = 0
    for term in CLASS_ORDER:
        if term is ActionTerm.NOT_ACTION:
            continue
        i = CLASS_INDEX[term]
        tp = int(confusion[i, i])
        pred_total = int(confusion[:, i].sum())
        gold_total = int(confusion[i, :].sum())
        token_by_term[term] = Metrics.from_counts(tp, pred_total, gold_total)
        micro_tp += tp
        micro_pred += pred_total
        micro_gold += gold_total
    token_micro = Metrics.from_counts(micro_tp, micro_pred, micro_gold)

    return EvalReport(
        sentence=sentence,
        sentence_by_type=by_type,
        token_micro=token_micro,
        token_by_term=token_by_term,
        confusion=confusion,
        n_sentences=len(pairs),
    )


def token_accuracy(predictions: list[list[ActionTerm]], gold: list) -> float:
    """Fraction of tokens tagged identically to gold, over all 9 classes."""
    total = correct = 0
    if len(predictions) != len(gold):
        raise LengthMismatch(
            f"{len(predictions)} predictions vs {len(gold)} gold sentences"
        )
    for pred, g in zip(predictions, gold):
        gold_tags, _ = _gold_tags(g)
        if len(pred) != len(gold_tags):
            raise LengthMismatch("tag sequence length mismatch")
        total += len(pred)
        correct += sum(p == g_ for p, g_ in zip(pred, gold_tags))
    return correct / total if total else 0.0
