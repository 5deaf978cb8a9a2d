"""Small builders shared across test modules."""

from __future__ import annotations

import numpy as np

from ulsa.actions import ActionTerm
from ulsa.dataset import AnnotatedSentence, AnnotatedToken
from ulsa.embeddings import EmbeddingTable, Vocab


def annotated(pairs, is_synthesis=True, paragraph_id="", synthesis_type=None):
    """AnnotatedSentence from (token, tag) pairs; tags may be strings."""
    from ulsa.actions import SynthesisType

    annotations = tuple(
        AnnotatedToken(token=tok, tag=ActionTerm(tag)) for tok, tag in pairs
    )
    return AnnotatedSentence(
        sentence=" ".join(tok for tok, _ in pairs),
        annotations=annotations,
        is_synthesis=is_synthesis,
        paragraph_id=paragraph_id,
        synthesis_type=synthesis_type or SynthesisType.UNKNOWN,
    )


def toy_table(tokens, dim=8, seed=0, counts=None):
    """EmbeddingTable with random input vectors over an explicit vocabulary.

    Embedding quality is irrelevant for recurrence/checkpoint tests; what
    matters is a deterministic token -> vector map.
    """
    special = ["<NUM>", "<CHEM>", "<UNK>"]
    all_tokens = list(tokens) + [s for s in special if s not in tokens]
    if counts is None:
        counts = [10] * len(all_tokens)
    elif isinstance(counts, dict):
        counts = [counts.get(t, 10 if t not in special else 0) for t in all_tokens]
    vocab = Vocab(
        tokens=list(all_tokens),
        counts=list(counts),
        min_count=1,
    )
    rng = np.random.Generator(np.random.PCG64(seed))
    return EmbeddingTable(
        vocab=vocab,
        input_vectors=rng.normal(scale=0.3, size=(len(all_tokens), dim)),
        output_vectors=np.zeros((len(all_tokens), dim)),
    )


def run_cli(argv) -> int:
    from ulsa import cli

    return cli.main([str(a) for a in argv])
