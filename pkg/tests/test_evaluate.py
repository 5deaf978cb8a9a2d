"""Sentence- and token-level scoring protocol.

Micro metrics are cross-checked by an independent recount implemented here
from the confusion-matrix definition, not by reusing the module's loops.
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import annotated
from ulsa.actions import ActionTerm, CLASS_ORDER, SynthesisType
from ulsa.errors import LengthMismatch
from ulsa.tagger.evaluate import evaluate, f1_score, token_accuracy

A = ActionTerm
N = ActionTerm.NOT_ACTION


def test_f1_harmonic_mean():
    assert f1_score(1.0, 1.0) == 1.0
    assert f1_score(0.5, 0.5) == 0.5
    assert f1_score(1.0, 0.5) == pytest.approx(2 / 3)
    assert f1_score(0.0, 0.0) == 0.0


def test_perfect_predictions():
    gold = [[A.MIXING, N], [N, A.HEATING]]
    report = evaluate([list(g) for g in gold], gold)
    assert report.sentence.precision == 1.0
    assert report.sentence.recall == 1.0
    assert report.sentence.f1 == 1.0
    assert report.token_micro.f1 == 1.0


def test_all_not_action_has_zero_recall():
    gold = [[A.MIXING], [A.HEATING, N]]
    report = evaluate([[N], [N, N]], gold)
    assert report.sentence.recall == 0.0
    assert report.token_micro.recall == 0.0


def test_three_sentence_fixture():
    """1 fully correct with actions, 1 with one wrong tag, 1 correct with no
    actions anywhere.  Sentences with a predicted action: 2, correct among
    them: 1 -> P = 1/2; same for gold -> R = 1/2.  The empty sentence joins
    neither denominator."""
    gold = [
        [A.MIXING, N, A.HEATING],
        [N, A.COOLING],
        [N, N, N],
    ]
    predictions = [
        [A.MIXING, N, A.HEATING],
        [N, A.PURIFICATION],   # one wrong tag
        [N, N, N],
    ]
    report = evaluate(predictions, gold)
    assert report.sentence.precision == pytest.approx(0.5)
    assert report.sentence.recall == pytest.approx(0.5)


def test_correct_empty_sentence_outside_both_denominators():
    report = evaluate([[N]], [[N]])
    assert report.sentence.precision == 0.0
    assert report.sentence.recall == 0.0


def test_spurious_prediction_hits_precision_only():
    # gold has no actions; prediction invents one
    report = evaluate([[A.MIXING]], [[N]])
    assert report.sentence.precision == 0.0
    assert report.sentence.recall == 0.0  # no gold sentences with actions


def test_token_micro_hand_count():
    # gold:  Mixing  N        Heating | pred: Mixing  Heating  N
    # TP(Mixing)=1; FP: Heating predicted where gold N; FN: Heating missed.
    report = evaluate([[A.MIXING, A.HEATING, N]], [[A.MIXING, N, A.HEATING]])
    assert report.token_micro.precision == pytest.approx(0.5)
    assert report.token_micro.recall == pytest.approx(0.5)
    assert report.token_by_term[A.MIXING].f1 == 1.0
    assert report.token_by_term[A.HEATING].f1 == 0.0


def test_confusion_matrix_layout():
    report = evaluate([[A.HEATING]], [[A.MIXING]])
    i = CLASS_ORDER.index(A.MIXING)
    j = CLASS_ORDER.index(A.HEATING)
    assert report.confusion.shape == (9, 9)
    assert report.confusion[i, j] == 1
    assert report.confusion.sum() == 1


def test_per_type_breakdown():
    gold = [
        annotated([("mixed", A.MIXING)], synthesis_type=SynthesisType.SOLID_STATE),
        annotated([("fired", A.HEATING)], synthesis_type=SynthesisType.SOLID_STATE),
        annotated([("washed", A.PURIFICATION)], synthesis_type=SynthesisType.HYDROTHERMAL),
    ]
    predictions = [[A.MIXING], [N], [A.PURIFICATION]]
    report = evaluate(predictions, gold)
    assert report.sentence_by_type["SolidState"].recall == pytest.approx(0.5)
    assert report.sentence_by_type["Hydrothermal"].recall == 1.0


def test_length_mismatches_rejected():
    with pytest.raises(LengthMismatch):
        evaluate([[N]], [[N], [N]])
    with pytest.raises(LengthMismatch):
        evaluate([[N, N]], [[N]])
    with pytest.raises(LengthMismatch):
        token_accuracy([[N, N]], [[N]])


def test_token_accuracy_counts_all_classes():
    assert token_accuracy([[N, A.MIXING]], [[N, A.MIXING]]) == 1.0
    assert token_accuracy([[N, N]], [[N, A.MIXING]]) == 0.5
    assert token_accuracy([], []) == 0.0


def test_report_serializes():
    report = evaluate([[A.MIXING]], [[A.MIXING]])
    payload = report.to_dict()
    assert payload["sentence"]["f1"] == 1.0
    assert payload["confusion_labels"][0] == "Starting"
    assert len(payload["confusion"]) == 9


_TAGS = st.sampled_from([N, A.MIXING, A.HEATING, A.PURIFICATION])


@given(
    st.lists(st.lists(_TAGS, min_size=1, max_size=6), min_size=1, max_size=8),
    st.randoms(use_true_random=False),
)
@settings(max_examples=80)
def test_micro_metrics_match_independent_recount(gold, rnd):
    predictions = [
        [rnd.choice([N, A.MIXING, A.HEATING, A.PURIFICATION]) for _ in sent]
        for sent in gold
    ]
    report = evaluate(predictions, [list(s) for s in gold])

    tp = pred_total = gold_total = 0
    for p_sent, g_sent in zip(predictions, gold):
        for p, g in zip(p_sent, g_sent):
            if p is not N:
                pred_total += 1
            if g is not N:
                gold_total += 1
            if p is g is not N:
                tp += 1
    expect_p = tp / pred_total if pred_total else 0.0
    expect_r = tp / gold_total if gold_total else 0.0
    assert report.token_micro.precision == pytest.approx(expect_p)
    assert report.token_micro.recall == pytest.approx(expect_r)
    assert int(report.confusion.sum()) == sum(len(s) for s in gold)
