"""Checkpoint round trips and rejection of damaged files."""

import struct

import numpy as np
import pytest

from helpers import toy_table
from ulsa.errors import CheckpointError
from ulsa.tagger.bilstm import BilstmConfig, TaggerModel, init_params, predict
from ulsa.tagger.checkpoint import MAGIC, VERSION, load_checkpoint, save_checkpoint


@pytest.fixture()
def model():
    table = toy_table(["the", "powder", "was", "mixed"], dim=6, seed=3)
    rng = np.random.Generator(np.random.PCG64(1))
    params = init_params(6, 4, 9, rng)
    config = BilstmConfig(hidden=4, dropout=0.1, embedding_dim=6)
    return TaggerModel(embeddings=table, params=params, config=config)


def test_round_trip_exact(model, tmp_path):
    path = tmp_path / "model.ulsa"
    save_checkpoint(model, path)
    loaded = load_checkpoint(path)
    for name in model.params:
        assert np.array_equal(loaded.params[name], model.params[name])
    assert np.array_equal(
        loaded.embeddings.input_vectors, model.embeddings.input_vectors
    )
    assert loaded.embeddings.vocab.tokens == model.embeddings.vocab.tokens
    assert loaded.labels == model.labels
    assert loaded.config.hidden == model.config.hidden


def test_round_trip_predictions_identical(model, tmp_path):
    path = tmp_path / "model.ulsa"
    save_checkpoint(model, path)
    loaded = load_checkpoint(path)
    sentence = ["the", "powder", "was", "mixed"]
    assert predict(loaded, sentence) == predict(model, sentence)


def test_bad_magic_rejected(model, tmp_path):
    path = tmp_path / "model.ulsa"
    save_checkpoint(model, path)
    data = bytearray(path.read_bytes())
    data[:8] = b"NOTULSA!"
    path.write_bytes(bytes(data))
    with pytest.raises(CheckpointError, match="magic"):
        load_checkpoint(path)


def test_version_mismatch_rejected(model, tmp_path):
    path = tmp_path / "model.ulsa"
    save_checkpoint(model, path)
    data = bytearray(path.read_bytes())
    data[8:12] = struct.pack("<I", VERSION + 1)
    path.write_bytes(bytes(data))
    with pytest.raises(CheckpointError, match="version"):
        load_checkpoint(path)


def test_truncated_file_rejected(model, tmp_path):
    path = tmp_path / "model.ulsa"
    save_checkpoint(model, path)
    data = path.read_bytes()
    path.write_bytes(data[: len(data) - 16])
    with pytest.raises(CheckpointError, match="truncated"):
        load_checkpoint(path)


def test_trailing_bytes_rejected(model, tmp_path):
    path = tmp_path / "model.ulsa"
    save_checkpoint(model, path)
    path.write_bytes(path.read_bytes() + b"\x00")
    with pytest.raises(CheckpointError, match="trailing"):
        load_checkpoint(path)


def test_non_finite_tensor_rejected(model, tmp_path):
    model.params["out_b"][0] = np.nan
    path = tmp_path / "model.ulsa"
    save_checkpoint(model, path)
    with pytest.raises(CheckpointError, match="non-finite"):
        load_checkpoint(path)


def test_empty_file_rejected(tmp_path):
    path = tmp_path / "empty.ulsa"
    path.write_bytes(b"")
    with pytest.raises(CheckpointError):
        load_checkpoint(path)


def test_magic_constant():
    assert MAGIC == b"ULSA-TAG"
    assert len(MAGIC) == 8
