"""2-d embedding maps: frequent tokens projected by PCA and labeled with the
tagger's prediction, the static counterpart of an embedding-cloud figure."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..actions import ActionTerm
from ..corpus import KEYWORDS
from ..embeddings import EmbeddingTable
from ..errors import DegenerateInput
from .pca import pca_fit


@dataclass(frozen=True)
class ProjectedToken:
    token: str
    x: float
    y: float
    label: ActionTerm


def project_embeddings_2d(
    table: EmbeddingTable,
    min_frequency: int = 10,
    labels: dict[str, ActionTerm] | None = None,
    model=None,
) -> list[ProjectedToken]:
    """PCA-to-2D of vectors for tokens seen more than ``min_frequency`` times.

    Point labels come from ``labels`` (token -> term) when given, otherwise
    from tagging each token as a one-token sentence with ``model``, otherwise
    NotAction.  The placeholder keywords never qualify.
    """
    vocab = table.vocab
    chosen = [
        (token, i)
        for i, (token, count) in enumerate(zip(vocab.tokens, vocab.counts))
        if count > min_frequency and token not in KEYWORDS
    ]
    if len(chosen) < 2:
        raise DegenerateInput(
            f"only {len(chosen)} tokens above frequency {min_frequency}; need >= 2"
        )
    vectors = np.stack([table.input_vectors[i] for _, i in chosen])
    result = pca_fit(vectors, 2)

    points = []
    for (token, _), (x, y) in zip(chosen, result.projections):
        if labels is not None and token in labels:
            label = labels[token]
        elif model is not None:
            from ..tagger.bilstm import predict

            label = predict(model, [token])[0]
        else:
            label = ActionTerm.NOT_ACTION
        points.append(ProjectedToken(token, float(x), float(y), ActionTerm(label)))
    return points


def majority_predicted_labels(model, sentences) -> dict[str, ActionTerm]:
    """Token -> most frequent predicted term across a dataset's sentences.

    Ties break toward the lexicographically smaller term name; tokens are
    keyed by their normalized form, matching the embedding vocabulary.
    """
    from ..corpus import normalize_token
    from ..tagger.bilstm import predict

    votes: dict[str, dict[ActionTerm, int]] = {}
    for s in sentences:
        tokens = s.tokens if hasattr(s, "tokens") else list(s)
        surfaces = [t if isinstance(t, str) else t.surface for t in tokens]
        for surface, tag in zip(surfaces, predict(model, surfaces)):
            key = normalize_token(surface)
            votes.setdefault(key, {})[tag] = votes.setdefault(key, {}).get(tag, 0) + 1
    majority = {}
    for token, counts in votes.items():
        majority[token] = min(counts, key=lambda t: (-counts[t], t.value))
    return majority


__all__ = ["ProjectedToken", "project_embeddings_2d", "majority_predicted_labels"]
