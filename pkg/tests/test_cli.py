"""CLI behavior: subcommands, exit codes, config precedence, artifacts."""

import json

import pytest

from conftest import STARTER_PATH, WORKED_EXAMPLE_PATH
from interestprof.cli import main
from interestprof.config import ENV_PREFIX


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    import os

    for key in list(os.environ):
        if key.startswith(ENV_PREFIX):
            monkeypatch.delenv(key)


def run(*args):
    return main([str(a) for a in args])


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exit_info:
        run("--version")
    assert exit_info.value.code == 0
    assert "interestprof" in capsys.readouterr().out


def test_validate_ontology_ok(capsys):
    assert run("validate-ontology", "--taxonomy", STARTER_PATH) == 0
    out = capsys.readouterr().out
    assert "25 concepts" in out and "200 instances" in out


def test_validate_ontology_cycle_exits_1(tmp_path, capsys):
    bad = tmp_path / "cyclic.taxonomy"
    bad.write_text("root R\nconcept A parent B\nconcept B parent A\n")
    assert run("validate-ontology", "--taxonomy", bad) == 1
    err = capsys.readouterr().err
    assert "cycle" in err and "A" in err


def test_missing_predictions_exits_2(tmp_path):
    assert run("score", "--taxonomy", STARTER_PATH,
               "--predictions", tmp_path / "nope.jsonl", "--out", tmp_path / "out") == 2


def test_predictions_flag_required(tmp_path):
    assert run("score", "--taxonomy", STARTER_PATH, "--out", tmp_path / "out") == 2


def test_metrics_artifacts(tmp_path):
    out = tmp_path / "metrics"
    assert run("metrics", "--taxonomy", STARTER_PATH, "--out", out, "--attest-accuracy") == 0
    payload = json.loads((out / "ontology_metrics.json").read_text())
    assert payload["size"]["size_c"] == 25
    assert payload["structural"]["n_rn"] == 1
    assert payload["semiotic"]["accuracy"] is True
    assert "size_total" in (out / "ontology_metrics.txt").read_text()


def test_pipeline_worked_example(tmp_path, capsys):
    out = tmp_path / "out"
    assert run("pipeline", "--taxonomy", STARTER_PATH,
               "--predictions", WORKED_EXAMPLE_PATH, "--out", out) == 0
    err = capsys.readouterr().err
    assert "correlation step skipped" in err
    assert "evaluation step skipped" in err

    profiles = json.loads((out / "profiles.json").read_text())
    assert len(profiles) == 1
    prof = profiles[0]
    assert prof["predicted_topic"] == "Drink"
    assert prof["v_occ"]["Drink"] == 1.0
    assert prof["v_prob"]["Drink"] == pytest.approx(0.2 / 0.3, abs=1e-9)

    occ_csv = (out / "image_scores_occ.csv").read_text().splitlines()
    assert occ_csv[0].startswith("user_id,image_id,Activities,")
    row = dict(zip(occ_csv[0].split(","), occ_csv[1].split(",")))
    assert (row["Drink"], row["Food"], row["Fashion"]) == ("0.6", "0.2", "0.2")
    assert not (out / "report.json").exists()


def test_refuses_nonempty_outdir_without_force(tmp_path):
    out = tmp_path / "out"
    out.mkdir()
    (out / "existing.txt").write_text("keep me?")
    args = ("metrics", "--taxonomy", STARTER_PATH, "--out", out)
    assert run(*args) == 2
    assert run(*args, "--force") == 0


def test_fixture_and_full_pipeline(tmp_path):
    fix = tmp_path / "fix"
    assert run("fixture", "--taxonomy", STARTER_PATH, "--out", fix,
               "--users-per-topic", 1, "--images", 6, "--seed", 3) == 0
    predictions = fix / "predictions.jsonl"
    labels = fix / "labels.csv"
    assert len(predictions.read_text().splitlines()) == 24 * 6
    assert len(labels.read_text().splitlines()) == 24 + 1

    out = tmp_path / "run"
    assert run("pipeline", "--taxonomy", STARTER_PATH, "--predictions", predictions,
               "--labels", labels, "--out", out, "--sweep", "2,6") == 0
    report = json.loads((out / "report.json").read_text())
    assert report["overall_accuracy"] == {"2": 1.0, "6": 1.0}
    for name in (
        "ontology_metrics.json", "ontology_metrics.txt",
        "image_scores_prob.csv", "image_scores_occ.csv",
        "profiles.json", "profiles_sweep.json",
        "pearson.csv", "pearson_bands.csv", "pearson_heatmap.svg", "co_interest.csv",
        "report.json", "accuracy_by_topic.csv", "confusion.csv", "cmc.csv",
        "precision_recall.csv", "roc_points.csv", "cmc.svg", "accuracy_sweep.svg",
    ):
        assert (out / name).exists(), name


def test_score_command(tmp_path):
    out = tmp_path / "scores"
    assert run("score", "--taxonomy", STARTER_PATH,
               "--predictions", WORKED_EXAMPLE_PATH, "--out", out) == 0
    text = (out / "image_scores_prob.csv").read_text()
    assert text.splitlines()[0].endswith(",unmapped")
    assert len(text.splitlines()) == 2


def test_profile_command_sweep_artifact(tmp_path):
    out = tmp_path / "profiles"
    assert run("profile", "--taxonomy", STARTER_PATH,
               "--predictions", WORKED_EXAMPLE_PATH, "--out", out, "--sweep", "1") == 0
    sweep = json.loads((out / "profiles_sweep.json").read_text())
    assert list(sweep) == ["1"]


def test_profile_mechanism_flag(tmp_path):
    out = tmp_path / "profiles"
    assert run("profile", "--taxonomy", STARTER_PATH, "--predictions", WORKED_EXAMPLE_PATH,
               "--out", out, "--mechanism", "prob") == 0
    prof = json.loads((out / "profiles.json").read_text())[0]
    assert prof["mechanism"] == "prob"
    assert prof["predicted_topic"] == "Drink"


def test_evaluate_requires_labels(tmp_path):
    assert run("evaluate", "--taxonomy", STARTER_PATH,
               "--predictions", WORKED_EXAMPLE_PATH, "--out", tmp_path / "e") == 2


def test_evaluate_standalone(tmp_path):
    labels = tmp_path / "labels.csv"
    labels.write_text("user_id,topic\nu1,Drink\n")
    out = tmp_path / "eval"
    assert run("evaluate", "--taxonomy", STARTER_PATH, "--predictions", WORKED_EXAMPLE_PATH,
               "--labels", labels, "--out", out, "--sweep", "1") == 0
    report = json.loads((out / "report.json").read_text())
    assert report["overall_accuracy"] == {"1": 1.0}
    assert report["n_labeled"] == 1


def test_correlate_single_user_exits_1(tmp_path):
    assert run("correlate", "--taxonomy", STARTER_PATH,
               "--predictions", WORKED_EXAMPLE_PATH, "--out", tmp_path / "c") == 1


def test_config_file_env_and_flag_precedence(tmp_path, monkeypatch):
    config = tmp_path / "run.conf"
    config.write_text(
        f"taxonomy = {STARTER_PATH}\nimages = 2\nusers_per_topic = 1\nseed = 4\n"
    )
    out1 = tmp_path / "o1"
    assert run("fixture", "--config", config, "--out", out1) == 0
    assert len((out1 / "predictions.jsonl").read_text().splitlines()) == 24 * 2

    monkeypatch.setenv(ENV_PREFIX + "IMAGES", "3")
    out2 = tmp_path / "o2"
    assert run("fixture", "--config", config, "--out", out2) == 0
    assert len((out2 / "predictions.jsonl").read_text().splitlines()) == 24 * 3

    out3 = tmp_path / "o3"
    assert run("fixture", "--config", config, "--out", out3, "--images", 4) == 0
    assert len((out3 / "predictions.jsonl").read_text().splitlines()) == 24 * 4


def test_bad_config_values_exit_2(tmp_path):
    config = tmp_path / "bad.conf"
    config.write_text("topk = zero\n")
    assert run("validate-ontology", "--config", config, "--taxonomy", STARTER_PATH) == 2
    config.write_text("mystery = 1\n")
    assert run("validate-ontology", "--config", config, "--taxonomy", STARTER_PATH) == 2
    assert run("profile", "--taxonomy", STARTER_PATH, "--predictions", WORKED_EXAMPLE_PATH,
               "--out", tmp_path / "m", "--sweep", "5,5") == 2


def test_unmappable_user_skipped_with_warning(tmp_path, capsys):
    predictions = tmp_path / "p.jsonl"
    predictions.write_text(
        json.dumps({"user_id": "ghost", "image_id": "i",
                    "predictions": [{"label": "zzz_unknown", "prob": 0.9}]}) + "\n"
        + WORKED_EXAMPLE_PATH.read_text()
    )
    out = tmp_path / "out"
    assert run("profile", "--taxonomy", STARTER_PATH,
               "--predictions", predictions, "--out", out) == 0
    assert "ghost" in capsys.readouterr().err
    profiles = json.loads((out / "profiles.json").read_text())
    assert [p["user_id"] for p in profiles] == ["u1"]
