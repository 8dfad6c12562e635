import sys

import pytest

from hopedetect import cli, corpus, langid, pipeline
from hopedetect.corpus import DatasetLang, Label
from conftest import FIXTURES, synthetic_sentences


def run_cli(*argv):
    return cli.main(list(argv))


class TestStats:
    def test_fixture(self, capsys):
        assert run_cli("stats", "--lang", "en", str(FIXTURES / "en_train.tsv")) == 0
        out = capsys.readouterr().out
        assert "Hope\t20" in out
        assert "NotHope\t30" in out
        assert "total\t52" in out

    def test_missing_file_exit_2(self, capsys):
        assert run_cli("stats", "--lang", "en", "/nonexistent.tsv") == 2

    def test_bad_lang_rejected(self):
        with pytest.raises(SystemExit):
            run_cli("stats", "--lang", "fr", str(FIXTURES / "en_train.tsv"))


class TestTrainProfileAndDetect:
    def test_round_trip(self, tmp_path, capsys):
        corpus_file = tmp_path / "en.txt"
        corpus_file.write_text(
            "\n".join(synthetic_sentences("en", 50, seed=1)) + "\n"
        )
        profile_path = tmp_path / "en.profile"
        assert run_cli("train-profile", "--lang", "en", "--out",
                       str(profile_path), str(corpus_file)) == 0
        input_file = tmp_path / "in.txt"
        input_file.write_text("this is some english text\n")
        assert run_cli("detect-lang", str(input_file),
                       "--profiles", str(profile_path)) == 0
        assert capsys.readouterr().out.splitlines()[-1] == "en"


class TestTransliterate:
    def test_tamil(self, tmp_path, capsys):
        src = tmp_path / "in.txt"
        src.write_text("ka\n")
        assert run_cli("transliterate", "--lang", "ta", str(src)) == 0
        assert capsys.readouterr().out.strip() == "க"


class TestTrainPredictEvaluate:
    def test_full_cycle(self, tmp_path, capsys):
        train = str(FIXTURES / "en_train.tsv")
        model_path = tmp_path / "lr.model"
        assert run_cli("train", "--lang", "en", "--seed", "1",
                       "--epochs", "100", "--out", str(model_path), train) == 0
        preds = tmp_path / "preds.txt"
        assert run_cli("predict", "--lang", "en", "--model", str(model_path),
                       "--train-path", train, "--out", str(preds), train) == 0
        assert run_cli("evaluate", "--lang", "en", "--format", "tsv",
                       train, str(preds)) == 0
        out = capsys.readouterr().out
        assert "weighted_f1" in out


class TestEnsembleVote:
    def test_planted_majority(self, tmp_path, capsys):
        for i in range(3):
            (tmp_path / f"p{i}.txt").write_text("Hope_speech\nNon_hope_speech\n")
        paths = [str(tmp_path / f"p{i}.txt") for i in range(3)]
        assert run_cli("ensemble-vote", "--predictions", *paths,
                       "--n-rows", "2") == 0
        assert capsys.readouterr().out.splitlines() == ["Hope", "NotHope"]


class TestRun:
    def test_end_to_end_deterministic(self, tmp_path):
        out1, out2 = tmp_path / "run1", tmp_path / "run2"
        for out in (out1, out2):
            code = run_cli(
                "run", "--lang", "en", "--k", "3", "--seed", "7",
                "--epochs", "50", "--out", str(out),
                str(FIXTURES / "en_train.tsv"), str(FIXTURES / "en_test.tsv"),
            )
            assert code == 0
        assert (out1 / "predictions.txt").read_bytes() == \
            (out2 / "predictions.txt").read_bytes()
        assert (out1 / "manifest.txt").read_bytes() == \
            (out2 / "manifest.txt").read_bytes()
        assert (out1 / "report.txt").exists()
        preds = (out1 / "predictions.txt").read_text().splitlines()
        assert len(preds) == 25
        assert set(preds) <= {"Hope_speech", "Non_hope_speech", "not-English"}

    def test_embeddings_mode(self, tmp_path):
        import numpy as np

        rng = np.random.default_rng(3)
        for name, n in (("train.emb", 52), ("test.emb", 25)):
            rows = "\n".join(
                " ".join(f"{v:.6f}" for v in rng.normal(size=8)) for _ in range(n)
            )
            (tmp_path / name).write_text("# producer: test\n" + rows + "\n")
        out = tmp_path / "out"
        code = run_cli(
            "run", "--lang", "en", "--seed", "1", "--epochs", "40",
            "--train-embeddings", str(tmp_path / "train.emb"),
            "--test-embeddings", str(tmp_path / "test.emb"),
            "--embedding-dim", "8", "--out", str(out),
            str(FIXTURES / "en_train.tsv"), str(FIXTURES / "en_test.tsv"),
        )
        assert code == 0
        manifest = (out / "manifest.txt").read_text()
        assert "feature_mode=embeddings" in manifest
        assert len((out / "predictions.txt").read_text().splitlines()) == 25

    def test_config_file(self, tmp_path):
        cfg = tmp_path / "pipeline.cfg"
        cfg.write_text("k=3\nseed=9\nepochs=40\n")
        out = tmp_path / "out"
        code = run_cli(
            "run", "--lang", "en", "--config", str(cfg), "--out", str(out),
            str(FIXTURES / "en_train.tsv"), str(FIXTURES / "en_test.tsv"),
        )
        assert code == 0
        manifest = (out / "manifest.txt").read_text()
        assert "ensemble_k=3" in manifest
        assert "base_seed=9" in manifest

    def test_bad_config_exit_3(self, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("unknown_key=1\n")
        code = run_cli(
            "run", "--lang", "en", "--config", str(cfg), "--out",
            str(tmp_path / "o"),
            str(FIXTURES / "en_train.tsv"), str(FIXTURES / "en_test.tsv"),
        )
        assert code == 3


class TestPipelineInternals:
    def test_notlanguage_bypasses_classifier(self, tmp_path, trained_profiles):
        profile_paths = []
        for p in trained_profiles:
            path = tmp_path / f"{p.lang}.profile"
            langid.save_profile(p, path)
            profile_paths.append(str(path))
        cfg = pipeline.PipelineConfig(
            dataset_lang=DatasetLang.TAMIL,
            profile_paths=profile_paths,
            k=1, classifier_params={"epochs": 30},
        )
        trace = []
        pipeline.run_pipeline(
            cfg, FIXTURES / "ta_train.tsv", FIXTURES / "ta_train.tsv",
            tmp_path / "out", trace_hook=lambda i, stage: trace.append((i, stage)),
        )
        preds = (tmp_path / "out" / "predictions.txt").read_text().splitlines()
        rows = corpus.load_tsv(FIXTURES / "ta_train.tsv", DatasetLang.TAMIL)
        # the pure-English row must come out as not-Tamil without classification
        english_ids = [r.id for r in rows if r.label is Label.NOT_LANGUAGE]
        for rid in english_ids:
            assert preds[rid] == "not-Tamil"
        classified = {i for i, stage in trace if stage == "classify"}
        assert not (set(english_ids) & classified)

    def test_stage_order(self):
        cfg = pipeline.PipelineConfig(dataset_lang=DatasetLang.TAMIL)
        rows = corpus.load_tsv(FIXTURES / "ta_train.tsv", DatasetLang.TAMIL)
        table = pipeline._scheme_table(cfg)
        trace = []
        pipeline.preprocess_rows(
            rows, cfg, [], table, trace_hook=lambda i, s: trace.append((i, s))
        )
        order = {"preprocess": 0, "langid": 1, "transliterate": 2}
        by_row = {}
        for rid, stage in trace:
            by_row.setdefault(rid, []).append(order[stage])
        for stages in by_row.values():
            assert stages == sorted(stages)
            assert stages[0] == 0

    def test_embeddings_mode_requires_paths(self):
        cfg = pipeline.PipelineConfig(
            dataset_lang=DatasetLang.ENGLISH, feature_mode="embeddings"
        )
        with pytest.raises(pipeline.ConfigError):
            cfg.validate()
