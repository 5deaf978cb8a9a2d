"""Command-line entry point.

Subcommands
-----------
stats      corpus statistics for an annotated dataset
train      embeddings + sequence tagger training pipeline
tag        tag raw paragraphs with a trained model or a baseline
flowchart  extract per-paragraph action sequences and adjacency rows
analyze    PCA / per-class trend lines over flowchart vectors
serve      HTTP annotation service

Exit codes: 0 success, 1 internal error, 2 invalid input or configuration.

Heavy modules are imported inside the command functions so that argument
parsing stays fast and ``--deterministic`` can pin the BLAS thread count
before numpy is first loaded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_USAGE = 2


# ---------------------------------------------------------------------------
# configuration file


def _coerce(raw: str):
    """Parse a config value: int, then float, then bool, else string."""
    text = raw.strip()
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            pass
    if text.lower() in ("true", "false"):
        return text.lower() == "true"
    return text


def read_config_file(path: str) -> dict:
    """``key = value`` lines; ``#`` comments and blank lines ignored."""
    from .errors import ParseError

    options: dict = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.split("#", 1)[0].strip()
            if not stripped:
                continue
            if "=" not in stripped:
                raise ParseError(f"{path}:{lineno}: expected 'key = value'")
            key, _, value = stripped.partition("=")
            options[key.strip()] = _coerce(value)
    return options


# keys the pipeline understands, with defaults supplied by the dataclasses
_SGNS_KEYS = ("dim", "negatives", "window", "epochs", "initial_lr", "unigram_power")
_BILSTM_KEYS = ("hidden", "dropout", "epochs_max", "patience", "batch_size", "lr")


def pipeline_settings(args) -> dict:
    """Merge config-file options over built-in defaults.  Unknown keys fail."""
    from .errors import ParseError

    options = read_config_file(args.config) if args.config else {}
    settings = {
        "sgns": {},
        "bilstm": {},
        "min_count": 5,
        "ratios": (0.70, 0.20, 0.10),
    }
    ratios = list(settings["ratios"])
    for key, value in options.items():
        if key.startswith("sgns.") and key[5:] in _SGNS_KEYS:
            settings["sgns"][key[5:]] = value
        elif key.startswith("bilstm.") and key[7:] in _BILSTM_KEYS:
            settings["bilstm"][key[7:]] = value
        elif key == "vocab.min_count":
            settings["min_count"] = value
        elif key in ("split.train", "split.test", "split.validation"):
            index = ("split.train", "split.test", "split.validation").index(key)
            ratios[index] = float(value)
        else:
            raise ParseError(f"unknown config key: {key!r}")
    settings["ratios"] = tuple(ratios)
    return settings


def _ensure_output_dir(args) -> str:
    out = args.output or "."
    os.makedirs(out, exist_ok=True)
    return out


# ---------------------------------------------------------------------------
# stats


def cmd_stats(args) -> int:
    from .actions import SynthesisType
    from .dataset import dataset_stats, load_dataset, token_level_action_count

    ds = load_dataset(args.dataset)
    stats = dataset_stats(ds)
    individual = token_level_action_count(ds)
    per_term = {t.value: n for t, n in stats.per_term.items()}
    per_type = {t.value: n for t, n in stats.paragraphs_per_type.items()
                if t is not SynthesisType.UNKNOWN}

    if args.format == "json":
        payload = {
            "paragraphs": stats.paragraph_count,
            "paragraphs_per_type": per_type,
            "total_sentences": stats.total_sentences,
            "synthesis_sentences": stats.synthesis_sentences,
            "action_tokens": stats.action_token_count,
            "per_term": per_term,
            "per_term_individual": {t.value: n for t, n in individual.items()},
            "sentences_per_paragraph":
                {str(k): v for k, v in sorted(stats.sentences_per_paragraph.items())},
            "synthesis_sentences_per_paragraph":
                {str(k): v for k, v in sorted(stats.synthesis_sentences_per_paragraph.items())},
            "tokens_per_sentence":
                {str(k): v for k, v in sorted(stats.tokens_per_sentence.items())},
            "action_tokens_per_sentence":
                {str(k): v for k, v in sorted(stats.action_tokens_per_sentence.items())},
        }
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    elif args.format == "csv":
        rows = [("paragraphs", stats.paragraph_count)]
        rows += [(f"paragraphs.{name}", count) for name, count in per_type.items()]
        rows += [("total_sentences", stats.total_sentences),
                 ("synthesis_sentences", stats.synthesis_sentences),
                 ("action_tokens", stats.action_token_count)]
        rows += [(f"action_tokens.{term}", count) for term, count in per_term.items()]
        text = "".join(f"{key},{value}\n" for key, value in rows)
    else:
        lines = [f"{'paragraphs':<28}{stats.paragraph_count:>8}"]
        for name, count in per_type.items():
            lines.append(f"  {name:<26}{count:>8}")
        lines += [
            f"{'total sentences':<28}{stats.total_sentences:>8}",
            f"{'synthesis sentences':<28}{stats.synthesis_sentences:>8}",
            f"{'action tokens':<28}{stats.action_token_count:>8}",
        ]
        for term, count in per_term.items():
            lines.append(f"  {term:<26}{count:>8}")
        total_individual = sum(individual.values())
        if total_individual != stats.action_token_count:
            lines.append(f"{'action tokens (individual)':<28}{total_individual:>8}")
        text = "\n".join(lines) + "\n"

    sys.stdout.write(text)
    if args.output:
        out = _ensure_output_dir(args)
        suffix = {"text": "txt", "csv": "csv", "json": "json"}[args.format]
        with open(os.path.join(out, f"stats.{suffix}"), "w", encoding="utf-8") as fh:
            fh.write(text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# train


def _embedding_corpus(ds, extra_path=None):
    """Connective-stripped token lists for embedding training.

    Dataset records are already tokenized, so sentences are rebuilt from the
    stored tokens rather than re-segmented.  An optional plain-text file (one
    paragraph per non-empty line) extends the corpus.
    """
    from .corpus import (RawParagraph, Token, TokenizedSentence,
                         normalize_token, paragraph_to_sentences,
                         strip_connectives)

    corpus = []
    for s in ds:
        tokens = tuple(
            Token(surface=t, normalized=normalize_token(t),
                  sentence_index=0, token_index=i)
            for i, t in enumerate(s.tokens)
        )
        kept = strip_connectives(tokens)
        if kept:
            corpus.append(TokenizedSentence(text=s.sentence, tokens=tuple(kept)))
    if extra_path:
        with open(extra_path, "r", encoding="utf-8") as fh:
            for i, line in enumerate(fh):
                line = line.strip()
                if not line:
                    continue
                for sent in paragraph_to_sentences(RawParagraph(id=f"corpus-{i}", text=line)):
                    kept = strip_connectives(sent.tokens)
                    if kept:
                        corpus.append(TokenizedSentence(text=sent.text, tokens=tuple(kept)))
    return corpus


def cmd_train(args) -> int:
    from .dataset import load_dataset, split_dataset
    from .embeddings import SgnsConfig, build_vocab, save_embeddings, train_sgns
    from .manifest import build_manifest, write_manifest
    from .tagger import (BilstmConfig, evaluate, predict, save_checkpoint,
                         train_bilstm)

    settings = pipeline_settings(args)
    out = _ensure_output_dir(args)

    ds = load_dataset(args.dataset)
    corpus = _embedding_corpus(ds, args.corpus)
    vocab = build_vocab(corpus, min_count=settings["min_count"])
    sgns_config = SgnsConfig(seed=args.seed, **settings["sgns"])
    sys.stderr.write(f"training embeddings: {len(corpus)} sentences, "
                     f"{len(vocab.tokens)} vocabulary entries\n")
    table = train_sgns(corpus, sgns_config, vocab)

    synthesis = [s for s in ds if s.is_synthesis]
    train, test, validation = split_dataset(synthesis, settings["ratios"], args.seed)
    bilstm_config = BilstmConfig(
        seed=args.seed,
        embedding_dim=sgns_config.dim,
        **settings["bilstm"],
    )
    sys.stderr.write(f"training tagger: {len(train)} train / "
                     f"{len(validation)} validation / {len(test)} test sentences\n")
    model = train_bilstm(train, validation, table, bilstm_config)

    predictions = [predict(model, list(s.tokens)) for s in test]
    report = evaluate(predictions, test)

    embeddings_path = os.path.join(out, "embeddings.txt")
    checkpoint_path = os.path.join(out, "model.ulsa")
    save_embeddings(table, embeddings_path)
    save_checkpoint(model, checkpoint_path)
    with open(os.path.join(out, "eval.json"), "w", encoding="utf-8") as fh:
        json.dump(report.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")

    best = min((h["val_loss"] for h in model.history), default=float("nan"))
    metrics = {
        "epochs_trained": len(model.history),
        "validation_loss_best": best,
        "test_sentence_precision": report.sentence.precision,
        "test_sentence_recall": report.sentence.recall,
        "test_sentence_f1": report.sentence.f1,
        "test_token_micro_f1": report.token_micro.f1,
    }
    config_record = {
        "sgns": sgns_config.__dict__,
        "bilstm": bilstm_config.__dict__,
        "min_count": settings["min_count"],
        "ratios": list(settings["ratios"]),
        "deterministic": bool(args.deterministic),
    }
    inputs = {"dataset": args.dataset}
    if args.corpus:
        inputs["corpus"] = args.corpus
    notes = None
    if not args.corpus:
        notes = ["embeddings trained on the dataset text only; token micro-F1 "
                 "typically lands below the ~0.89 reachable with embeddings "
                 "from a large synthesis-literature corpus"]
    manifest = build_manifest(
        command="train",
        seed=args.seed,
        config=config_record,
        inputs=inputs,
        metrics=metrics,
        notes=notes,
    )
    write_manifest(os.path.join(out, "manifest.json"), manifest)

    sys.stdout.write(
        "sentence precision {:.4f}  recall {:.4f}  f1 {:.4f}\n"
        "token micro    f1 {:.4f}  ({} test sentences, {} epochs)\n".format(
            report.sentence.precision,
            report.sentence.recall,
            report.sentence.f1,
            report.token_micro.f1,
            report.n_sentences,
            len(model.history),
        )
    )
    return EXIT_OK


# ---------------------------------------------------------------------------
# tag / flowchart


def _make_tagger(args):
    """Return ``tag(sentence) -> list[ActionTerm]`` for a model or baseline."""
    from .tagger import (LookupTable, PosLexicon, baseline_all_tokens,
                         baseline_verbs_only, load_checkpoint, predict)

    if args.baseline:
        table = LookupTable.load(args.lookup) if args.lookup else LookupTable.load()
        if args.baseline == "all":
            return lambda sentence: baseline_all_tokens(sentence, table)
        pos = PosLexicon.load(args.verbs) if args.verbs else PosLexicon.load()
        return lambda sentence: baseline_verbs_only(sentence, table, pos)
    if not args.model:
        raise FileNotFoundError("either --model or --baseline is required")
    model = load_checkpoint(args.model)
    return lambda sentence: predict(model, sentence)


def _read_paragraphs(path):
    from .corpus import RawParagraph

    with open(path, "r", encoding="utf-8") as fh:
        lines = [line.strip() for line in fh]
    return [RawParagraph(id=f"p{i:04d}", text=line)
            for i, line in enumerate(lines) if line]


def _tag_paragraphs(paragraphs, tag):
    """Tag every sentence of every paragraph; yields dataset-shaped records."""
    from .actions import ActionTerm
    from .corpus import paragraph_to_sentences

    records = []
    for paragraph in paragraphs:
        for sentence in paragraph_to_sentences(paragraph):
            tags = tag(sentence)
            records.append({
                "annotations": [
                    {"token": token.surface, "tag": t.value}
                    for token, t in zip(sentence.tokens, tags)
                ],
                "sentence": sentence.text,
                "is_synthesis": any(t is not ActionTerm.NOT_ACTION for t in tags),
                "paragraph_id": paragraph.id,
            })
    return records


def cmd_tag(args) -> int:
    tag = _make_tagger(args)
    records = _tag_paragraphs(_read_paragraphs(args.input), tag)
    text = json.dumps(records, indent=1)
    if args.output:
        out = _ensure_output_dir(args)
        with open(os.path.join(out, "tagged.json"), "w", encoding="utf-8") as fh:
            fh.write(text)
            fh.write("\n")
    else:
        sys.stdout.write(text + "\n")
    sys.stderr.write(f"tagged {len(records)} sentences\n")
    return EXIT_OK


def cmd_flowchart(args) -> int:
    from .flowchart import (RefinementRules, dataset_sequences,
                            write_flowchart_csv, write_sequences)

    rules = RefinementRules.load()
    if args.dataset:
        from .dataset import load_dataset

        sentences = [s for s in load_dataset(args.dataset) if s.is_synthesis]
    else:
        if not args.input:
            raise FileNotFoundError("either --dataset or --input is required")
        from .dataset import record_to_sentence

        tag = _make_tagger(args)
        records = _tag_paragraphs(_read_paragraphs(args.input), tag)
        sentences = [record_to_sentence(r, i) for i, r in enumerate(records)]

    sequences = dataset_sequences(sentences, rules)
    out = _ensure_output_dir(args)
    write_flowchart_csv(os.path.join(out, "flowcharts.csv"), sequences)
    write_sequences(os.path.join(out, "sequences.txt"), sequences)
    sys.stdout.write(f"wrote {len(sequences)} paragraph sequences\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# analyze


def cmd_analyze(args) -> int:
    import csv as _csv

    from .analysis import pca_fit, scatter_svg, write_svg
    from .flowchart import read_flowchart_csv

    ids, types, matrix = read_flowchart_csv(args.flowcharts)
    result = pca_fit(matrix, args.components)
    if float(result.eigenvalues.sum()) == 0.0:
        sys.stderr.write("warning: flowchart vectors have zero variance; "
                         "all projections are 0\n")

    out = _ensure_output_dir(args)
    k = args.components
    with open(os.path.join(out, "projections.csv"), "w", encoding="utf-8", newline="") as fh:
        writer = _csv.writer(fh, lineterminator="\n")
        writer.writerow(["paragraph_id", "synthesis_type"]
                        + [f"pc{i + 1}" for i in range(k)])
        for pid, stype, row in zip(ids, types, result.projections):
            writer.writerow([pid, stype or ""] + [f"{v:.10g}" for v in row])

    with open(os.path.join(out, "explained_variance.csv"), "w", encoding="utf-8", newline="") as fh:
        writer = _csv.writer(fh, lineterminator="\n")
        writer.writerow([f"pc{i + 1}" for i in range(k)])
        writer.writerow([f"{v:.10g}" for v in result.explained_variance_ratio])

    labeled = [(proj, stype) for proj, stype in zip(result.projections, types) if stype]
    fits = []
    if labeled and k >= 2:
        from .analysis import fit_line
        from .errors import DegenerateClass

        groups: dict = {}
        for proj, stype in labeled:
            groups.setdefault(stype, []).append(proj[:2])
        for stype in sorted(groups):
            xs = [p[0] for p in groups[stype]]
            ys = [p[1] for p in groups[stype]]
            try:
                fits.append(fit_line(xs, ys, label=stype))
            except DegenerateClass as exc:
                sys.stderr.write(f"warning: skipping trend line: {exc}\n")
    with open(os.path.join(out, "fits.csv"), "w", encoding="utf-8", newline="") as fh:
        writer = _csv.writer(fh, lineterminator="\n")
        writer.writerow(["label", "slope", "intercept", "count"])
        for fit in fits:
            writer.writerow([fit.label, f"{fit.slope:.10g}",
                             f"{fit.intercept:.10g}", fit.count])

    if k >= 2:
        points = [(float(row[0]), float(row[1]), stype or "unlabeled")
                  for row, stype in zip(result.projections, types)]
        svg = scatter_svg(points, fits=fits, title="Flowchart vectors, first two components")
        write_svg(os.path.join(out, "clusters.svg"), svg)

    ratios = ", ".join(f"{v:.4f}" for v in result.explained_variance_ratio)
    sys.stdout.write(f"projected {len(ids)} paragraphs; "
                     f"explained variance ratios: {ratios}\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# serve


def cmd_serve(args) -> int:
    import socket

    from .service import AnnotationStore, create_app

    # Fail fast with a usage error when the port is taken, instead of letting
    # the server stack raise after the app has started loading.
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    try:
        probe.bind((args.host, args.port))
    except OSError as exc:
        sys.stderr.write(f"error: cannot bind {args.host}:{args.port}: {exc}\n")
        return EXIT_USAGE
    finally:
        probe.close()

    store = AnnotationStore(args.dataset)
    static_dir = args.static if args.static and os.path.isdir(args.static) else None
    app = create_app(store, static_dir=static_dir)

    import uvicorn

    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser / dispatch


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ulsa",
        description="Synthesis-action tagging and analysis toolkit.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="FILE", help="key = value options file")
    common.add_argument("--seed", type=int, default=0, metavar="N")
    common.add_argument("--deterministic", action="store_true",
                        help="pin BLAS threads for byte-identical reruns")
    common.add_argument("--output", metavar="DIR", help="directory for output files")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stats", parents=[common], help="dataset statistics")
    p.add_argument("dataset")
    p.add_argument("--format", choices=("text", "csv", "json"), default="text")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("train", parents=[common], help="train embeddings and tagger")
    p.add_argument("dataset")
    p.add_argument("--corpus", metavar="FILE",
                   help="extra plain-text paragraphs for embedding training")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("tag", parents=[common], help="tag raw paragraphs")
    p.add_argument("input", help="text file, one paragraph per line")
    p.add_argument("--model", metavar="CHECKPOINT")
    p.add_argument("--baseline", choices=("all", "verbs"))
    p.add_argument("--lookup", metavar="TSV", help="term lookup table override")
    p.add_argument("--verbs", metavar="FILE", help="verb lexicon override")
    p.set_defaults(func=cmd_tag)

    p = sub.add_parser("flowchart", parents=[common],
                       help="per-paragraph action sequences")
    p.add_argument("--dataset", help="annotated dataset (gold tags)")
    p.add_argument("--input", help="raw paragraphs to tag first")
    p.add_argument("--model", metavar="CHECKPOINT")
    p.add_argument("--baseline", choices=("all", "verbs"))
    p.add_argument("--lookup", metavar="TSV")
    p.add_argument("--verbs", metavar="FILE")
    p.set_defaults(func=cmd_flowchart)

    p = sub.add_parser("analyze", parents=[common],
                       help="PCA and trend lines over flowchart vectors")
    p.add_argument("flowcharts", help="CSV written by the flowchart command")
    p.add_argument("--components", type=int, default=2, metavar="K")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("serve", parents=[common], help="annotation HTTP service")
    p.add_argument("dataset")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8571)
    p.add_argument("--static", metavar="DIR", help="directory with the web UI build")
    p.set_defaults(func=cmd_serve)

    return parser


def _error_exit_code(exc: Exception) -> int:
    """Usage errors exit 2; unexpected internal failures exit 1."""
    from .errors import (CheckpointError, DegenerateChance, DegenerateClass,
                         DegenerateInput, EmptyCorpus, EmptyTrainingSet,
                         InvalidRatio, ParseError, SchemaError)

    usage = (ParseError, SchemaError, InvalidRatio, EmptyCorpus,
             EmptyTrainingSet, CheckpointError, DegenerateInput,
             DegenerateClass, DegenerateChance, FileNotFoundError,
             IsADirectoryError, NotADirectoryError, PermissionError,
             ValueError)
    return EXIT_USAGE if isinstance(exc, usage) else EXIT_INTERNAL


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.deterministic:
        for name in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ.setdefault(name, "1")
    try:
        return args.func(args)
    except KeyboardInterrupt:
        return EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001 - single translation point to exit codes
        sys.stderr.write(f"error: {exc}\n")
        return _error_exit_code(exc)


if __name__ == "__main__":
    sys.exit(main())
