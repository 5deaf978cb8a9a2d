"""Vocabulary, SGNS training, and embedding persistence tests.

The gradient oracle is central finite differences over pair_loss; the noise
sampler is checked against the exact unigram^power probabilities.
"""

import math

import numpy as np
import pytest

from ulsa.corpus import tokenize
from ulsa.embeddings import (
    EmbeddingTable,
    SgnsConfig,
    Vocab,
    _noise_cdf,
    build_vocab,
    cosine_similarity,
    load_embeddings,
    nearest_neighbors,
    pair_gradients,
    pair_loss,
    sample_negatives,
    save_embeddings,
    train_sgns,
)
from ulsa.errors import EmptyCorpus, ParseError, ZeroVector


def _corpus(sentences):
    return [tokenize(s) for s in sentences]


# -------------------------------------------------------------------- vocab


def test_build_vocab_threshold_boundary():
    corpus = _corpus(["mixed " * 5, "stirred " * 4])
    vocab = build_vocab(corpus, min_count=5)
    assert "mixed" in vocab
    assert "stirred" not in vocab


def test_unk_absorbs_dropped_counts():
    corpus = _corpus(["mixed " * 5, "stirred " * 4])
    vocab = build_vocab(corpus, min_count=5)
    assert vocab.counts[vocab.unk_id] == 4


def test_keywords_always_present():
    vocab = build_vocab(_corpus(["mixed mixed mixed mixed mixed"]), min_count=5)
    for kw in ("<NUM>", "<CHEM>", "<UNK>"):
        assert kw in vocab


def test_vocab_ids_dense_and_deterministic():
    corpus = _corpus(["b b b a a a c c c"])
    v1 = build_vocab(corpus, min_count=1)
    v2 = build_vocab(corpus, min_count=1)
    assert v1.tokens == v2.tokens
    assert [v1.id_of(t) for t in v1.tokens] == list(range(len(v1)))


def test_empty_corpus_rejected():
    with pytest.raises(EmptyCorpus):
        build_vocab([])


def test_id_of_unknown_resolves_to_unk():
    vocab = build_vocab(_corpus(["mixed mixed mixed mixed mixed"]))
    assert vocab.id_of("zzz") == vocab.unk_id


# ---------------------------------------------------------- pair gradients


def _fd_check(center, ctx, negs, h=1e-5):
    """Max relative error of analytic pair gradients vs central differences."""
    _, d_center, d_ctx, d_negs = pair_gradients(center, ctx, negs)
    worst = 0.0

    def against(vec, grad, rebuild):
        nonlocal worst
        for i in range(vec.size):
            orig = vec[i]
            vec[i] = orig + h
            hi = pair_loss(*rebuild())
            vec[i] = orig - h
            lo = pair_loss(*rebuild())
            vec[i] = orig
            numeric = (hi - lo) / (2 * h)
            denom = max(abs(grad[i]) + abs(numeric), 1e-8)
            worst = max(worst, abs(grad[i] - numeric) / denom)

    against(center, d_center, lambda: (center, ctx, negs))
    against(ctx, d_ctx, lambda: (center, ctx, negs))
    for k in range(negs.shape[0]):
        against(negs[k], d_negs[k], lambda: (center, ctx, negs))
    return worst


def test_pair_gradients_match_finite_differences():
    rng = np.random.Generator(np.random.PCG64(3))
    center = rng.normal(scale=0.5, size=7)
    ctx = rng.normal(scale=0.5, size=7)
    negs = rng.normal(scale=0.5, size=(5, 7))
    assert _fd_check(center, ctx, negs) < 1e-4


def test_pair_gradients_zero_vectors_finite():
    z = np.zeros(4)
    loss, d_center, d_ctx, d_negs = pair_gradients(z, z, np.zeros((3, 4)))
    assert np.isfinite(loss)
    assert np.all(np.isfinite(d_center))
    # at the origin the loss is (1 + negatives) * ln 2
    assert loss == pytest.approx(4 * math.log(2.0))


# ------------------------------------------------------------ noise sampler


def test_noise_distribution_matches_unigram_power():
    counts = [100, 80, 60, 50, 40, 30, 20, 10, 5, 2]
    vocab = Vocab(tokens=[f"t{i}" for i in range(10)], counts=counts, min_count=1)
    power = 0.75
    cdf = _noise_cdf(vocab, power)
    weights = np.array(counts, dtype=float) ** power
    expect = weights / weights.sum()

    rng = np.random.Generator(np.random.PCG64(11))
    draws = sample_negatives(cdf, rng, 1_000_000)
    freq = np.bincount(draws, minlength=10) / draws.size
    assert np.max(np.abs(freq - expect)) < 0.01


def test_zero_count_tokens_never_sampled():
    vocab = Vocab(tokens=["a", "b", "c"], counts=[10, 0, 10], min_count=1)
    cdf = _noise_cdf(vocab, 0.75)
    rng = np.random.Generator(np.random.PCG64(0))
    draws = sample_negatives(cdf, rng, 10_000)
    assert not np.any(draws == 1)


# ----------------------------------------------------------------- training

AB_SENTENCES = 1000


@pytest.fixture(scope="module")
def ab_table():
    """Corpus where tokens alpha/beta are distributionally interchangeable
    and gamma is unrelated filler."""
    rng = np.random.Generator(np.random.PCG64(5))
    fillers = ["one", "two", "three", "four", "five", "six"]
    sentences = []
    for _ in range(AB_SENTENCES):
        word = "alpha" if rng.random() < 0.5 else "beta"
        frame = rng.choice(fillers, size=4, replace=True).tolist()
        sentences.append(" ".join([frame[0], frame[1], word, frame[2], frame[3]]))
        sentences.append("gamma " + " ".join(rng.choice(fillers, size=2).tolist()))
    corpus = _corpus(sentences)
    config = SgnsConfig(dim=20, negatives=5, window=2, epochs=3, seed=13)
    return train_sgns(corpus, config, build_vocab(corpus, min_count=1))


def test_interchangeable_tokens_end_up_close(ab_table):
    a = ab_table.vector("alpha")
    b = ab_table.vector("beta")
    c = ab_table.vector("gamma")
    assert cosine_similarity(a, b) > cosine_similarity(a, c)


def test_nearest_neighbor_of_alpha_is_beta(ab_table):
    names = [t for t, _ in nearest_neighbors(ab_table, "alpha", 3)]
    assert names[0] == "beta"


def test_zero_epochs_returns_initialization():
    corpus = _corpus(["a b c d e"] * 3)
    vocab = build_vocab(corpus, min_count=1)
    config = SgnsConfig(dim=12, negatives=2, window=2, epochs=0, seed=4)
    table = train_sgns(corpus, config, vocab)
    rng = np.random.Generator(np.random.PCG64(4))
    expect = (rng.random((len(vocab), 12)) - 0.5) / 12
    assert np.array_equal(table.input_vectors, expect)
    assert np.array_equal(table.output_vectors, np.zeros_like(expect))


def test_training_reproducible_bit_for_bit():
    corpus = _corpus(["the gel was dried", "the gel was fired"] * 20)
    config = SgnsConfig(dim=16, negatives=3, window=2, epochs=2, seed=21)
    t1 = train_sgns(corpus, config, build_vocab(corpus, min_count=1))
    t2 = train_sgns(corpus, config, build_vocab(corpus, min_count=1))
    assert np.array_equal(t1.input_vectors, t2.input_vectors)
    assert np.array_equal(t1.output_vectors, t2.output_vectors)


def test_epoch_losses_trend_down():
    """Mean pair loss per epoch is non-increasing, allowing one small blip."""
    corpus = _corpus(["the powder was mixed and fired", "the gel was dried then fired"] * 15)
    config = SgnsConfig(dim=16, negatives=4, window=3, epochs=10, seed=2)
    table = train_sgns(corpus, config, build_vocab(corpus, min_count=1))
    losses = table.epoch_losses
    assert len(losses) == 10
    increases = [
        (b - a) / a for a, b in zip(losses, losses[1:]) if b > a
    ]
    assert len(increases) <= 1
    assert all(inc < 0.05 for inc in increases)


def test_train_empty_corpus_rejected():
    vocab = Vocab(tokens=["<NUM>", "<CHEM>", "<UNK>"], counts=[1, 1, 1], min_count=1)
    with pytest.raises(EmptyCorpus):
        train_sgns([], SgnsConfig(dim=4, epochs=1), vocab)


# ------------------------------------------------------------------- cosine


def test_cosine_identity():
    v = np.array([0.3, -1.2, 4.0])
    assert cosine_similarity(v, v) == pytest.approx(1.0)


def test_cosine_orthogonal():
    assert cosine_similarity(np.array([1.0, 0.0]), np.array([0.0, 1.0])) == 0.0


def test_cosine_hand_value():
    # (1*4 + 2*5 + 3*6) / (sqrt(14) * sqrt(77)) = 32 / 32.83291...
    got = cosine_similarity(np.array([1.0, 2.0, 3.0]), np.array([4.0, 5.0, 6.0]))
    assert got == pytest.approx(0.974631846, abs=1e-9)


def test_cosine_zero_vector():
    with pytest.raises(ZeroVector):
        cosine_similarity(np.zeros(3), np.ones(3))


# ---------------------------------------------------------------- neighbors


def _table_from_vectors(tokens, vectors):
    vocab = Vocab(tokens=list(tokens), counts=[1] * len(tokens), min_count=1)
    arr = np.asarray(vectors, dtype=float)
    return EmbeddingTable(vocab=vocab, input_vectors=arr,
                          output_vectors=np.zeros_like(arr))


def test_neighbors_exclude_query_and_cap_k():
    table = _table_from_vectors(
        ["a", "b", "c", "<UNK>"],
        [[1, 0], [1, 0.1], [0, 1], [0.5, 0.5]],
    )
    got = nearest_neighbors(table, "a", 10)
    assert len(got) == 3
    assert all(name != "a" for name, _ in got)


def test_neighbor_ties_break_by_vocab_id():
    table = _table_from_vectors(
        ["a", "b", "c", "<UNK>"],
        [[1, 0], [2, 0], [3, 0], [0, -1]],  # b and c both at cosine 1 with a
    )
    names = [name for name, _ in nearest_neighbors(table, "a", 2)]
    assert names == ["b", "c"]


# -------------------------------------------------------------- persistence


def test_save_load_round_trip(tmp_path, ab_table):
    path = tmp_path / "vectors.txt"
    save_embeddings(ab_table, path)
    loaded = load_embeddings(path)
    assert loaded.vocab.tokens == ab_table.vocab.tokens
    a, b = ab_table.vector("alpha"), loaded.vector("alpha")
    assert np.max(np.abs(a - b)) < 1e-6
    before = cosine_similarity(ab_table.vector("alpha"), ab_table.vector("beta"))
    after = cosine_similarity(loaded.vector("alpha"), loaded.vector("beta"))
    assert abs(before - after) < 1e-6


def test_file_has_header_plus_one_line_per_token(tmp_path):
    table = _table_from_vectors(["a", "b", "c"], [[1.0, 2.0]] * 3)
    path = tmp_path / "v.txt"
    save_embeddings(table, path)
    lines = path.read_text(encoding="utf-8").splitlines()
    assert len(lines) == 4
    assert lines[0] == "3 2"


def test_header_body_mismatch_rejected(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("2 3\na 0.1 0.2 0.3\nb 0.1 0.2\n", encoding="utf-8")
    with pytest.raises(ParseError):
        load_embeddings(path)


def test_malformed_header_rejected(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("not a header\n", encoding="utf-8")
    with pytest.raises(ParseError):
        load_embeddings(path)
