"""Command-line entry points for the detection pipeline.

Subcommands mirror the pipeline stages so each is independently invokable:
stats, detect-lang, transliterate, train, predict, ensemble-vote, evaluate,
and run (the full pipeline). Exit codes: 0 success, 2 input error, 3 config
error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import corpus, features, langid, learn, metrics, pipeline, textprep, translit
from .corpus import Label
from .errors import ConfigError, HopedetectError

EXIT_INPUT_ERROR = 2
EXIT_CONFIG_ERROR = 3


# Defaults for the `run` subcommand; its argparse defaults are None so a
# config file can fill in anything the user did not pass explicitly.
_RUN_DEFAULTS = {
    "script_threshold": 0.5, "seed": 0, "k": 1, "fraction_train": 0.9,
    "tie_break": "MajorityClassPrior", "classifier": "logreg",
    "lr": 0.1, "epochs": 500, "l2": 1e-4, "svm_c": 1.0,
    "n_trees": 100, "max_depth": 16, "min_df": 1, "embedding_dim": 768,
    "scheme": None, "train_embeddings": None, "test_embeddings": None,
}


def _apply_config_file(args):
    """Fill unset (None) run options from key=value lines; flags win."""
    if getattr(args, "config", None):
        for line_no, line in enumerate(
            Path(args.config).read_text(encoding="utf-8").splitlines(), start=1
        ):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"{args.config}:{line_no}: expected key=value")
            key, value = line.split("=", 1)
            key = key.strip().replace("-", "_")
            if key not in _RUN_DEFAULTS:
                raise ConfigError(f"{args.config}:{line_no}: unknown key {key!r}")
            if getattr(args, key) is None:
                default = _RUN_DEFAULTS[key]
                if isinstance(default, bool):
                    value = value.strip().lower() in ("1", "true", "yes")
                elif isinstance(default, int):
                    value = int(value)
                elif isinstance(default, float):
                    value = float(value)
                else:
                    value = value.strip()
                setattr(args, key, value)
    for key, default in _RUN_DEFAULTS.items():
        if getattr(args, key, None) is None:
            setattr(args, key, default)


def _build_pipeline_config(args) -> pipeline.PipelineConfig:
    params = {}
    if args.classifier == "logreg":
        params = {"lr": args.lr, "epochs": args.epochs, "l2": args.l2}
    elif args.classifier == "linear_svm":
        params = {"lr": args.lr, "epochs": args.epochs, "C": args.svm_c}
    elif args.classifier == "random_forest":
        params = {"n_trees": args.n_trees, "max_depth": args.max_depth}
    mode = "embeddings" if args.train_embeddings or args.test_embeddings else "tfidf"
    return pipeline.PipelineConfig(
        dataset_lang=pipeline.dataset_lang_from_code(args.lang),
        profile_paths=args.profiles or [],
        script_threshold=args.script_threshold,
        scheme_path=args.scheme,
        feature_mode=mode,
        train_embeddings=args.train_embeddings,
        test_embeddings=args.test_embeddings,
        embedding_dim=args.embedding_dim,
        min_df=args.min_df,
        classifier=args.classifier,
        classifier_params=params,
        k=args.k,
        base_seed=args.seed,
        fraction_train=args.fraction_train,
        tie_break=args.tie_break,
    )


def _add_common_model_flags(p, defer_defaults=False):
    d = (lambda k: None) if defer_defaults else _RUN_DEFAULTS.get
    p.add_argument("--classifier", default=d("classifier"),
                   choices=["logreg", "linear_svm", "random_forest"])
    p.add_argument("--lr", type=float, default=d("lr"))
    p.add_argument("--epochs", type=int, default=d("epochs"))
    p.add_argument("--l2", type=float, default=d("l2"))
    p.add_argument("--svm-c", type=float, default=d("svm_c"))
    p.add_argument("--n-trees", type=int, default=d("n_trees"))
    p.add_argument("--max-depth", type=int, default=d("max_depth"))
    p.add_argument("--min-df", type=int, default=d("min_df"))
    p.add_argument("--train-embeddings")
    p.add_argument("--test-embeddings")
    p.add_argument("--embedding-dim", type=int, default=d("embedding_dim"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hopedetect", description="Hope-speech detection pipeline"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stats", help="class distribution of a labeled TSV")
    p.add_argument("--lang", required=True, choices=["en", "ta", "ml"])
    p.add_argument("path")

    p = sub.add_parser("detect-lang", help="per-line language detection")
    p.add_argument("--profiles", nargs="+", required=True)
    p.add_argument("--script-threshold", type=float, default=0.5)
    p.add_argument("path")

    p = sub.add_parser("train-profile", help="train a language ID profile")
    p.add_argument("--lang", required=True)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--out", required=True)
    p.add_argument("path", help="one training sentence per line")

    p = sub.add_parser("transliterate", help="Latin runs to native script")
    p.add_argument("--lang", required=True, choices=["ta", "ml"])
    p.add_argument("--scheme", help="custom scheme TSV (default: bundled)")
    p.add_argument("path")

    p = sub.add_parser("train", help="train one classifier on a labeled TSV")
    p.add_argument("--lang", required=True, choices=["en", "ta", "ml"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    _add_common_model_flags(p)
    p.add_argument("path")

    p = sub.add_parser("predict", help="predict with a saved model")
    p.add_argument("--lang", required=True, choices=["en", "ta", "ml"])
    p.add_argument("--model", required=True)
    p.add_argument("--min-df", type=int, default=1)
    p.add_argument("--train-path", required=True,
                   help="TSV the model was trained on (rebuilds the vocabulary)")
    p.add_argument("--out", required=True)
    p.add_argument("path")

    p = sub.add_parser("ensemble-vote", help="majority-vote prediction files")
    p.add_argument("--predictions", nargs="+", required=True)
    p.add_argument("--n-rows", type=int, required=True)
    p.add_argument("--tie-break", default="MajorityClassPrior",
                   choices=["MajorityClassPrior", "ClassOrder"])
    p.add_argument("--out")

    p = sub.add_parser("evaluate", help="score predictions against gold labels")
    p.add_argument("--lang", required=True, choices=["en", "ta", "ml"])
    p.add_argument("--format", default="text", choices=["text", "tsv", "json"])
    p.add_argument("gold")
    p.add_argument("predictions")

    p = sub.add_parser("run", help="full pipeline: train, predict, evaluate")
    p.add_argument("--lang", required=True, choices=["en", "ta", "ml"])
    p.add_argument("--config", help="key=value config file")
    p.add_argument("--profiles", nargs="*", default=[])
    p.add_argument("--script-threshold", type=float)
    p.add_argument("--scheme")
    p.add_argument("--seed", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--fraction-train", type=float)
    p.add_argument("--tie-break",
                   choices=["MajorityClassPrior", "ClassOrder"])
    _add_common_model_flags(p, defer_defaults=True)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("train")
    p.add_argument("test")
    return parser


def _cmd_stats(args):
    rows = corpus.load_tsv(args.path, pipeline.dataset_lang_from_code(args.lang))
    stats = corpus.compute_stats(rows)
    for label in learn.CLASS_ORDER:
        print(f"{label.value}\t{stats.counts[label]}")
    print(f"total\t{stats.total}")
    ratio = stats.hope_to_nothope_ratio
    print(f"hope_to_nothope_ratio\t{float(ratio):.4f}" if ratio is not None
          else "hope_to_nothope_ratio\tn/a")


def _cmd_detect_lang(args):
    profiles = [langid.load_profile(p) for p in args.profiles]
    with open(args.path, encoding="utf-8") as fh:
        for line in fh:
            text = textprep.normalize_text(line.rstrip("\n"))
            if not text:
                print("??")
                continue
            print(langid.detect(text, profiles, args.script_threshold).best)


def _cmd_train_profile(args):
    with open(args.path, encoding="utf-8") as fh:
        sentences = [ln.rstrip("\n") for ln in fh if ln.strip()]
    profile = langid.train_profile(sentences, args.lang, args.n, args.alpha)
    langid.save_profile(profile, args.out)
    print(f"wrote {args.out} ({len(profile.logprob)} n-grams)")


def _cmd_transliterate(args):
    if args.scheme:
        table = translit.load_scheme_table(args.scheme, args.lang)
    else:
        table = translit.bundled_scheme_table(args.lang)
    with open(args.path, encoding="utf-8") as fh:
        for line in fh:
            print(translit.transliterate(line.rstrip("\n"), table))


def _binary_training_data(args):
    lang = pipeline.dataset_lang_from_code(args.lang)
    rows = corpus.load_tsv(args.path if hasattr(args, "path") else args.train, lang)
    cfg = pipeline.PipelineConfig(dataset_lang=lang, min_df=args.min_df)
    table = pipeline._scheme_table(cfg)
    proc = pipeline.preprocess_rows(rows, cfg, [], table)
    binary = [(p, r) for p, r in zip(proc, rows)
              if r.label in (Label.HOPE, Label.NOT_HOPE)]
    return lang, cfg, table, proc, binary


def _cmd_train(args):
    _, _, _, _, binary = _binary_training_data(args)
    texts = [p.text for p, _ in binary]
    if args.train_embeddings:
        vecs = features.load_embeddings(args.train_embeddings, args.embedding_dim)
        X = [vecs[p.id] for p, _ in binary]
    else:
        vocab = features.build_vocab(texts, args.min_df)
        X = [features.tfidf_vectorize(t, vocab) for t in texts]
    y = [r.label.value for _, r in binary]
    params = dict(seed=args.seed)
    if args.classifier == "logreg":
        model = learn.train_logreg(X, y, args.lr, args.epochs, args.l2, **params)
    elif args.classifier == "linear_svm":
        model = learn.train_linear_svm(X, y, args.lr, args.epochs, args.svm_c,
                                       **params)
    else:
        model = learn.train_random_forest(X, y, args.n_trees, args.max_depth,
                                          **params)
    learn.save_model(model, args.out)
    print(f"wrote {args.out} ({model.kind}, dim {model.dim})")


def _cmd_predict(args):
    model = learn.load_model(args.model)
    lang = pipeline.dataset_lang_from_code(args.lang)
    cfg = pipeline.PipelineConfig(dataset_lang=lang, min_df=args.min_df)
    table = pipeline._scheme_table(cfg)
    train_rows = corpus.load_tsv(args.train_path, lang)
    train_proc = pipeline.preprocess_rows(train_rows, cfg, [], table)
    binary_texts = [p.text for p, r in zip(train_proc, train_rows)
                    if r.label in (Label.HOPE, Label.NOT_HOPE)]
    vocab = features.build_vocab(binary_texts, args.min_df)
    try:
        rows = corpus.load_tsv(args.path, lang, labeled=True)
    except HopedetectError:
        rows = corpus.load_tsv(args.path, lang, labeled=False)
    proc = pipeline.preprocess_rows(rows, cfg, [], table)
    with open(args.out, "w", encoding="utf-8") as fh:
        for p in proc:
            vec = features.tfidf_vectorize(p.text, vocab)
            label = Label(learn.predict(model, vec)[0])
            fh.write(pipeline._OUT_ALIAS[label] + "\n")
    print(f"wrote {args.out} ({len(proc)} predictions)")


def _cmd_ensemble_vote(args):
    matrix = learn.load_external_predictions(args.predictions, args.n_rows)
    merged = [
        learn.majority_vote([row[i] for row in matrix], args.tie_break)
        for i in range(args.n_rows)
    ]
    out = sys.stdout if not args.out else open(args.out, "w", encoding="utf-8")
    try:
        for label in merged:
            out.write(label + "\n")
    finally:
        if args.out:
            out.close()
            print(f"wrote {args.out} ({len(merged)} rows)")


def _cmd_evaluate(args):
    lang = pipeline.dataset_lang_from_code(args.lang)
    gold_rows = corpus.load_tsv(args.gold, lang)
    pred = learn.load_external_predictions([args.predictions], len(gold_rows))[0]
    gold = [r.label.value for r in gold_rows]
    classes = [c.value for c in learn.CLASS_ORDER]
    cm = metrics.confusion(gold, pred, classes)
    print(metrics.render_report(metrics.aggregate(cm), args.format), end="")


def _cmd_run(args):
    _apply_config_file(args)
    cfg = _build_pipeline_config(args)
    pipeline.run_pipeline(cfg, args.train, args.test, args.out)
    print(f"wrote predictions and manifest under {args.out}")


_COMMANDS = {
    "stats": _cmd_stats,
    "detect-lang": _cmd_detect_lang,
    "train-profile": _cmd_train_profile,
    "transliterate": _cmd_transliterate,
    "train": _cmd_train,
    "predict": _cmd_predict,
    "ensemble-vote": _cmd_ensemble_vote,
    "evaluate": _cmd_evaluate,
    "run": _cmd_run,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _COMMANDS[args.command](args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except (HopedetectError, OSError) as e:
        print(f"input error: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    return 0


if __name__ == "__main__":
    sys.exit(main())
