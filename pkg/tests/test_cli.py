"""Command-line behavior: formats, artifacts, exit codes."""

import csv
import json
import socket
import xml.etree.ElementTree as ET

import pytest

from ulsa.cli import pipeline_settings, read_config_file
from ulsa.dataset import save_dataset
from ulsa.errors import ParseError

from helpers import run_cli


# ------------------------------------------------------------------- stats


def test_stats_text(replica_path, capsys):
    assert run_cli(["stats", replica_path]) == 0
    out = capsys.readouterr().out
    assert "paragraphs" in out and "535" in out
    assert "synthesis sentences" in out and "3040" in out
    assert "Mixing" in out


def test_stats_json(replica_path, capsys):
    assert run_cli(["stats", replica_path, "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["paragraphs"] == 535
    assert payload["total_sentences"] == 3781
    assert payload["synthesis_sentences"] == 3040
    assert payload["action_tokens"] == sum(payload["per_term"].values())
    assert set(payload["paragraphs_per_type"]) == {
        "SolidState", "SolGel", "Hydrothermal", "Precipitation",
    }
    # histograms are str(key) -> count and cover every paragraph / sentence
    assert sum(payload["sentences_per_paragraph"].values()) == 535
    assert sum(payload["tokens_per_sentence"].values()) == 3781


def test_stats_csv(replica_path, capsys):
    assert run_cli(["stats", replica_path, "--format", "csv"]) == 0
    rows = dict(
        line.split(",") for line in capsys.readouterr().out.splitlines() if line
    )
    assert rows["paragraphs"] == "535"
    assert rows["total_sentences"] == "3781"
    assert "action_tokens.Mixing" in rows


def test_stats_writes_output_file(replica_path, tmp_path, capsys):
    out = tmp_path / "artifacts"
    assert run_cli(["stats", replica_path, "--format", "json", "--output", out]) == 0
    on_disk = json.loads((out / "stats.json").read_text())
    assert on_disk == json.loads(capsys.readouterr().out)


def test_stats_missing_file(tmp_path, capsys):
    assert run_cli(["stats", tmp_path / "nope.json"]) == 2
    assert "error:" in capsys.readouterr().err


def test_stats_malformed_json(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run_cli(["stats", bad]) == 2


# ------------------------------------------------------------------ config


def test_read_config_file(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        "# comment\n"
        "sgns.dim = 32\n"
        "bilstm.dropout = 0.1  # inline comment\n"
        "bilstm.hidden=8\n"
        "\n"
    )
    options = read_config_file(str(cfg))
    assert options == {"sgns.dim": 32, "bilstm.dropout": 0.1, "bilstm.hidden": 8}


def test_config_malformed_line(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("sgns.dim 32\n")
    with pytest.raises(ParseError, match=":1:"):
        read_config_file(str(cfg))


def test_pipeline_settings_rejects_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("sgns.dims = 32\n")
    ds = tmp_path / "ds.json"
    ds.write_text("[]")
    assert run_cli(["train", ds, "--config", cfg]) == 2
    assert "unknown config key" in capsys.readouterr().err


def test_pipeline_settings_split_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("split.train = 0.8\nsplit.test = 0.1\nsplit.validation = 0.1\n")

    class Args:
        config = str(cfg)

    settings = pipeline_settings(Args())
    assert settings["ratios"] == (0.8, 0.1, 0.1)


# --------------------------------------------------------------------- tag


@pytest.fixture()
def paragraph_file(tmp_path):
    p = tmp_path / "paragraphs.txt"
    p.write_text(
        "The powders were mixed and then calcined at 900 K. "
        "The product was pressed into pellets.\n"
        "\n"
        "Results were discussed with reviewers.\n"
    )
    return p


def test_tag_baseline_all(paragraph_file, tmp_path, capsys):
    out = tmp_path / "out"
    code = run_cli(["tag", paragraph_file, "--baseline", "all", "--output", out])
    assert code == 0
    records = json.loads((out / "tagged.json").read_text())
    # paragraph 1 splits into two sentences; paragraph 2 is one sentence
    assert len(records) == 3
    first = records[0]
    tags = {a["token"]: a["tag"] for a in first["annotations"]}
    assert tags["mixed"] == "Mixing"
    assert tags["calcined"] == "Heating"
    assert first["is_synthesis"] is True
    second = {a["token"]: a["tag"] for a in records[1]["annotations"]}
    assert second["pressed"] == "Shaping"
    assert records[2]["is_synthesis"] is False
    assert capsys.readouterr().err.strip().endswith("3 sentences")


def test_tag_baseline_verbs_stdout(paragraph_file, capsys):
    assert run_cli(["tag", paragraph_file, "--baseline", "verbs"]) == 0
    records = json.loads(capsys.readouterr().out)
    tags = {a["token"]: a["tag"] for a in records[0]["annotations"]}
    assert tags["mixed"] == "Mixing"


def test_tag_empty_input(tmp_path, capsys):
    empty = tmp_path / "empty.txt"
    empty.write_text("\n\n")
    assert run_cli(["tag", empty, "--baseline", "all"]) == 0
    assert json.loads(capsys.readouterr().out) == []


def test_tag_without_model_or_baseline(paragraph_file, capsys):
    assert run_cli(["tag", paragraph_file]) == 2


def test_tag_with_bad_checkpoint(paragraph_file, tmp_path, capsys):
    bad = tmp_path / "model.ulsa"
    bad.write_bytes(b"not a checkpoint at all")
    assert run_cli(["tag", paragraph_file, "--model", bad]) == 2
    assert "error:" in capsys.readouterr().err


# --------------------------------------------------------- flowchart + pca


def test_flowchart_then_analyze(clusters_path, tmp_path, capsys):
    out = tmp_path / "flow"
    assert run_cli(["flowchart", "--dataset", clusters_path, "--output", out]) == 0
    with open(out / "flowcharts.csv", newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    assert len(rows) == 41  # header + 40 paragraphs
    assert len(rows[0]) == 102
    assert rows[0][:2] == ["paragraph_id", "synthesis_type"]
    assert rows[0][2] == "Starting→Starting"
    assert (out / "sequences.txt").exists()

    assert run_cli(["analyze", out / "flowcharts.csv", "--output", out]) == 0
    stdout = capsys.readouterr().out
    assert "projected 40 paragraphs" in stdout
    with open(out / "projections.csv", newline="", encoding="utf-8") as fh:
        proj_rows = list(csv.reader(fh))
    assert len(proj_rows) == 41
    assert proj_rows[0] == ["paragraph_id", "synthesis_type", "pc1", "pc2"]
    ET.parse(out / "clusters.svg")
    with open(out / "fits.csv", newline="", encoding="utf-8") as fh:
        fits = list(csv.reader(fh))
    assert fits[0] == ["label", "slope", "intercept", "count"]
    assert {row[0] for row in fits[1:]} == {
        "SolidState", "SolGel", "Hydrothermal", "Precipitation",
    }


def test_analyze_three_components(clusters_path, tmp_path):
    out = tmp_path / "flow"
    run_cli(["flowchart", "--dataset", clusters_path, "--output", out])
    assert run_cli(
        ["analyze", out / "flowcharts.csv", "--output", out, "--components", 3]
    ) == 0
    with open(out / "explained_variance.csv", newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["pc1", "pc2", "pc3"]
    assert len(rows[1]) == 3


def _flowchart_header():
    from ulsa.actions import REFINED_ORDER

    return ["paragraph_id", "synthesis_type"] + [
        f"{a.value}→{b.value}" for a in REFINED_ORDER for b in REFINED_ORDER
    ]


def test_analyze_single_row_rejected(tmp_path, capsys):
    flows = tmp_path / "flowcharts.csv"
    flows.write_text(
        ",".join(_flowchart_header()) + "\n"
        + ",".join(["p0", "SolidState"] + ["0"] * 100) + "\n"
    )
    assert run_cli(["analyze", flows, "--output", tmp_path]) == 2


def test_analyze_zero_variance_warns(tmp_path, capsys):
    flows = tmp_path / "flowcharts.csv"
    lines = [",".join(_flowchart_header())]
    for i in range(4):
        lines.append(",".join([f"p{i}", "SolidState"] + ["2"] * 100))
    flows.write_text("\n".join(lines) + "\n")
    assert run_cli(["analyze", flows, "--output", tmp_path]) == 0
    assert "zero variance" in capsys.readouterr().err


# ------------------------------------------------------------------- train


def test_train_tiny_deterministic(replica_ds, tmp_path, capsys):
    synthesis = [s for s in replica_ds if s.is_synthesis][:60]
    filler = [s for s in replica_ds if not s.is_synthesis][:5]
    ds_path = tmp_path / "tiny.json"
    save_dataset(synthesis + filler, ds_path)

    cfg = tmp_path / "tiny.cfg"
    cfg.write_text(
        "sgns.dim = 16\n"
        "sgns.epochs = 2\n"
        "vocab.min_count = 2\n"
        "bilstm.hidden = 8\n"
        "bilstm.epochs_max = 3\n"
        "bilstm.patience = 3\n"
    )

    outs = []
    for name in ("run1", "run2"):
        out = tmp_path / name
        code = run_cli(
            ["train", ds_path, "--config", cfg, "--seed", 7,
             "--deterministic", "--output", out]
        )
        assert code == 0
        outs.append(out)

    for out in outs:
        for artifact in ("embeddings.txt", "model.ulsa", "eval.json", "manifest.json"):
            assert (out / artifact).exists(), artifact

    m1 = (outs[0] / "manifest.json").read_bytes()
    m2 = (outs[1] / "manifest.json").read_bytes()
    assert m1 == m2
    manifest = json.loads(m1)
    assert manifest["seed"] == 7
    assert manifest["config"]["sgns"]["dim"] == 16
    assert manifest["config"]["deterministic"] is True
    assert "dataset" in manifest["inputs"]
    assert "test_token_micro_f1" in manifest["metrics"]
    assert manifest["notes"] and all(len(n) > 10 for n in manifest["notes"])

    report = json.loads((outs[0] / "eval.json").read_text())
    assert report["n_sentences"] == 12  # 60 * 0.2

    stdout = capsys.readouterr().out
    assert "sentence precision" in stdout


# ------------------------------------------------------------------- serve


def test_serve_port_busy(replica_path, capsys):
    blocker = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        blocker.bind(("127.0.0.1", 0))
        blocker.listen(1)
        port = blocker.getsockname()[1]
        code = run_cli(["serve", replica_path, "--port", port])
        assert code == 2
        assert "cannot bind" in capsys.readouterr().err
    finally:
        blocker.close()
