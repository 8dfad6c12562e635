"""End-to-end orchestration: preprocessing -> language detection ->
transliteration -> classification, plus prediction/manifest/report output.

The three-class prediction is realized as a language-ID gate in front of a
binary hope classifier: comments gated as not-in-intended-language never
reach the feature or classifier stages.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from pathlib import Path

from . import corpus, features, langid, learn, metrics, textprep, translit
from .corpus import DatasetLang, Label
from .errors import ConfigError, StageError

MANIFEST_VERSION = "manifest-v1"

# Canonical output aliases per dataset language.
_NOT_LANG_ALIAS = {
    DatasetLang.ENGLISH: "not-English",
    DatasetLang.TAMIL: "not-Tamil",
    DatasetLang.MALAYALAM: "not-malayalam",
}
_OUT_ALIAS = {Label.HOPE: "Hope_speech", Label.NOT_HOPE: "Non_hope_speech"}

_LANG_CODES = {"en": DatasetLang.ENGLISH, "ta": DatasetLang.TAMIL,
               "ml": DatasetLang.MALAYALAM}


@dataclass
class PipelineConfig:
    dataset_lang: DatasetLang
    normalization: textprep.NormalizationConfig = field(
        default_factory=textprep.NormalizationConfig
    )
    profile_paths: list[str] = field(default_factory=list)
    script_threshold: float = 0.5
    scheme_path: str | None = None  # None -> bundled table for ta/ml
    feature_mode: str = "tfidf"  # "tfidf" | "embeddings"
    train_embeddings: str | None = None
    test_embeddings: str | None = None
    embedding_dim: int = features.DEFAULT_EMBEDDING_DIM
    min_df: int = 1
    classifier: str = "logreg"
    classifier_params: dict = field(default_factory=dict)
    k: int = 1
    base_seed: int = 0
    fraction_train: float = 0.9
    tie_break: str = "MajorityClassPrior"
    include_zero_support: bool = True

    def validate(self):
        if self.feature_mode not in ("tfidf", "embeddings"):
            raise ConfigError(f"unknown feature mode {self.feature_mode!r}")
        if self.feature_mode == "embeddings" and not (
            self.train_embeddings and self.test_embeddings
        ):
            raise ConfigError("embeddings mode requires train and test embedding paths")
        if self.classifier not in learn._TRAINERS:
            raise ConfigError(f"unknown classifier {self.classifier!r}")
        if not 0 < self.script_threshold <= 1:
            raise ConfigError(f"script threshold out of range: {self.script_threshold}")


def dataset_lang_from_code(code: str) -> DatasetLang:
    try:
        return _LANG_CODES[code]
    except KeyError:
        raise ConfigError(f"unknown language code {code!r} (use en/ta/ml)") from None


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def _load_profiles(cfg: PipelineConfig):
    return [langid.load_profile(p) for p in cfg.profile_paths]


def detect_language(text: str, profiles, cfg: PipelineConfig) -> str:
    """Detected language code; without profiles, script evidence only.

    The profile-free fallback assigns the dominant Indic script's language,
    or English when no Indic script dominates.
    """
    if profiles:
        return langid.detect(text, profiles, cfg.script_threshold).best
    fractions = langid.script_fraction(text)
    for script in sorted(fractions):
        if fractions[script] >= cfg.script_threshold and fractions[script] > 0:
            return langid._SCRIPT_LANG[script]
    return "en"


def _gate(best: str, dataset_lang: DatasetLang) -> str:
    return langid.assign_language_class(
        langid.DetectionResult(best=best, scores={best: 0.0}), dataset_lang
    )


def _scheme_table(cfg: PipelineConfig):
    code = {DatasetLang.TAMIL: "ta", DatasetLang.MALAYALAM: "ml"}.get(cfg.dataset_lang)
    if code is None:
        return None  # transliteration only applies to the Indic datasets
    if cfg.scheme_path:
        return translit.load_scheme_table(cfg.scheme_path, code)
    return translit.bundled_scheme_table(code)


@dataclass
class ProcessedRow:
    id: int
    text: str  # normalized (and transliterated, when applicable)
    gate: str  # "InLanguage" | "NotLanguage"
    gold: Label | None


def preprocess_rows(rows, cfg: PipelineConfig, profiles, table,
                    trace_hook=None) -> list[ProcessedRow]:
    out = []
    for row in rows:
        if trace_hook:
            trace_hook(row.id, "preprocess")
        text = textprep.normalize_text(row.text, cfg.normalization)
        if trace_hook:
            trace_hook(row.id, "langid")
        if text:
            best = detect_language(text, profiles, cfg)
            gate = _gate(best, cfg.dataset_lang)
        else:
            gate = "InLanguage"  # empty after normalization: no evidence to flag
        if gate == "InLanguage" and table is not None:
            if trace_hook:
                trace_hook(row.id, "transliterate")
            text = translit.transliterate(text, table)
        out.append(ProcessedRow(id=row.id, text=text, gate=gate, gold=row.label))
    return out


def run_pipeline(cfg: PipelineConfig, train_path, test_path, out_dir,
                 trace_hook=None):
    """Train the ensemble on the train file, predict the test file.

    Writes predictions.txt, manifest.txt and (when the test file carries
    gold labels) report.txt under out_dir. Returns (predictions, report).
    """
    cfg.validate()
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    try:
        train_rows = corpus.load_tsv(train_path, cfg.dataset_lang, labeled=True)
    except Exception as e:
        raise StageError("load-train", e) from e
    test_labeled = True
    try:
        test_rows = corpus.load_tsv(test_path, cfg.dataset_lang, labeled=True)
    except Exception:
        test_labeled = False
        test_rows = corpus.load_tsv(test_path, cfg.dataset_lang, labeled=False)

    profiles = _load_profiles(cfg)
    table = _scheme_table(cfg)
    train_proc = preprocess_rows(train_rows, cfg, profiles, table, trace_hook)
    test_proc = preprocess_rows(test_rows, cfg, profiles, table, trace_hook)

    # Binary classifier training set: gold Hope/NotHope rows only.
    binary = [p for p, r in zip(train_proc, train_rows)
              if r.label in (Label.HOPE, Label.NOT_HOPE)]
    if cfg.feature_mode == "tfidf":
        vocab = features.build_vocab([p.text for p in binary], cfg.min_df)
        vec_of = {p.id: features.tfidf_vectorize(p.text, vocab) for p in binary}
        test_vecs = {
            p.id: features.tfidf_vectorize(p.text, vocab) for p in test_proc
        }
    else:
        train_emb = features.load_embeddings(
            cfg.train_embeddings, cfg.embedding_dim, n_rows=len(train_rows)
        )
        test_emb = features.load_embeddings(
            cfg.test_embeddings, cfg.embedding_dim, n_rows=len(test_rows)
        )
        vec_of = {p.id: train_emb[p.id] for p in binary}
        test_vecs = {p.id: test_emb[p.id] for p in test_proc}

    sub_rows = [r for r in train_rows if r.label in (Label.HOPE, Label.NOT_HOPE)]
    X = {r.id: vec_of[r.id] for r in sub_rows}
    y = {r.id: r.label.value for r in sub_rows}
    ens_cfg = learn.EnsembleConfig(
        k=cfg.k, base_seed=cfg.base_seed, member_kind=cfg.classifier,
        fraction_train=cfg.fraction_train, tie_break=cfg.tie_break,
    )
    models, records = learn.train_ensemble(
        sub_rows, X, y, ens_cfg, **cfg.classifier_params
    )

    # Per-member validation weighted F1, recorded in the manifest.
    for model, rec in zip(models, records):
        vids = rec["validation_ids"]
        gold = [y[i] for i in vids]
        pred = [learn.predict(model, X[i])[0] for i in vids]
        cm = metrics.confusion(gold, pred, model.classes)
        rec["validation_weighted_f1"] = metrics.aggregate(cm).weighted.f1

    not_lang_alias = _NOT_LANG_ALIAS[cfg.dataset_lang]
    predictions: list[tuple[Label, str]] = []
    for p in test_proc:
        if p.gate == "NotLanguage":
            predictions.append((Label.NOT_LANGUAGE, not_lang_alias))
            continue
        if trace_hook:
            trace_hook(p.id, "classify")
        voted = learn.ensemble_predict(models, test_vecs[p.id], cfg.tie_break)
        label = Label(voted)
        predictions.append((label, _OUT_ALIAS[label]))

    pred_path = out_dir / "predictions.txt"
    pred_path.write_text(
        "".join(alias + "\n" for _, alias in predictions), encoding="utf-8"
    )

    report = None
    if test_labeled:
        gold = [r.label.value for r in test_rows]
        pred = [label.value for label, _ in predictions]
        classes = [c.value for c in learn.CLASS_ORDER]
        cm = metrics.confusion(gold, pred, classes)
        report = metrics.aggregate(cm, cfg.include_zero_support)
        (out_dir / "report.txt").write_text(
            metrics.render_report(report, "text"), encoding="utf-8"
        )
        (out_dir / "report.tsv").write_text(
            metrics.render_report(report, "tsv"), encoding="utf-8"
        )

    manifest = _render_manifest(cfg, train_path, test_path, models, records)
    (out_dir / "manifest.txt").write_text(manifest, encoding="utf-8")
    return predictions, report


def _render_manifest(cfg, train_path, test_path, models, records) -> str:
    lines = [f"# {MANIFEST_VERSION}"]
    add = lines.append
    add(f"dataset_lang={cfg.dataset_lang.value}")
    add(f"split_prng={corpus.SPLIT_PRNG}")
    nc = cfg.normalization
    add(
        "normalization="
        f"specials:{int(nc.strip_specials)},emoji:{int(nc.strip_emoji)},"
        f"lowercase:{int(nc.lowercase)},whitespace:{int(nc.collapse_whitespace)}"
    )
    add(f"script_threshold={cfg.script_threshold!r}")
    add(f"feature_mode={cfg.feature_mode}")
    if cfg.feature_mode == "tfidf":
        add(f"min_df={cfg.min_df}")
    else:
        add(f"embedding_dim={cfg.embedding_dim}")
    add(f"classifier={cfg.classifier}")
    for model in models[:1]:
        for key in sorted(model.hyperparams):
            add(f"hyperparam.{key}={model.hyperparams[key]!r}")
    add(f"ensemble_k={cfg.k}")
    add(f"base_seed={cfg.base_seed}")
    add(f"fraction_train={cfg.fraction_train!r}")
    add(f"tie_break={cfg.tie_break}")
    add(f"input.train.sha256={sha256_file(train_path)}")
    add(f"input.test.sha256={sha256_file(test_path)}")
    for rec in records:
        add(
            f"member.seed={rec['seed']} "
            f"validation_weighted_f1={rec.get('validation_weighted_f1', 0.0):.6f}"
        )
    return "\n".join(lines) + "\n"
