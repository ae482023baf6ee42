"""CLI behavior, exit codes, and parity with the service wire format."""

from __future__ import annotations

import json

import pytest

from gaitbench.cli import main, parse_filter_args
from gaitbench.eks import load_store, save_store
from gaitbench.errors import InvalidRange
from gaitbench.synth import generate_cohort_files
from gaitbench.trial import Gender, dump_trial

from conftest import make_walking_trial, seeded_store


@pytest.fixture
def workspace(tmp_path):
    store_path = tmp_path / "store.json"
    save_store(seeded_store(), store_path)
    trial_path = tmp_path / "trial.json"
    dump_trial(make_walking_trial(spatial=True), trial_path)
    return tmp_path, store_path, trial_path


class TestParseFilterArgs:
    def test_gender(self):
        f = parse_filter_args(["gender=female,male"])
        assert f.genders == frozenset({Gender.FEMALE, Gender.MALE})

    def test_intervals(self):
        f = parse_filter_args(["age=30:60", "mass=:80", "height=150:"])
        assert f.age == (30.0, 60.0)
        assert f.body_mass_kg == (float("-inf"), 80.0)
        assert f.body_height_cm == (150.0, float("inf"))

    def test_bad_key(self):
        with pytest.raises(InvalidRange):
            parse_filter_args(["shoe=42"])

    def test_bad_value(self):
        with pytest.raises(InvalidRange):
            parse_filter_args(["age=young:old"])


class TestAnalyze:
    def test_human_report(self, workspace, capsys):
        _, store_path, trial_path = workspace
        rc = main(["analyze", str(trial_path), "--store", str(store_path)])
        out = capsys.readouterr().out
        assert rc == 0
        assert "best match" in out
        assert "Norm" in out and "Ankle" in out

    def test_json_report_is_canonical(self, workspace, capsys):
        _, store_path, trial_path = workspace
        rc = main(["analyze", str(trial_path), "--store", str(store_path), "--json"])
        out = capsys.readouterr().out
        assert rc == 0
        doc = json.loads(out)
        assert len(doc["results"]) == 5
        assert out == json.dumps(doc, sort_keys=True, separators=(",", ":"))

    def test_missing_store_exits_2(self, workspace, capsys):
        tmp_path, _, trial_path = workspace
        rc = main(["analyze", str(trial_path), "--store", str(tmp_path / "nope.json")])
        assert rc == 2
        assert "error" in capsys.readouterr().err

    def test_missing_trial_exits_2(self, workspace, capsys):
        _, store_path, _ = workspace
        rc = main(["analyze", "/does/not/exist.json", "--store", str(store_path)])
        assert rc == 2

    def test_flat_trial_exits_1(self, workspace, tmp_path, capsys):
        _, store_path, _ = workspace
        bad = tmp_path / "flat.json"
        trial = make_walking_trial()
        doc = {
            "patient": {
                "id": "F1",
                "age": 30,
                "body_mass_kg": 80,
                "body_height_cm": 170,
                "gender": "female",
            },
            "sample_rate_hz": 1000.0,
            "left_fv_newton": [0.0] * 500,
            "right_fv_newton": [0.0] * 500,
        }
        bad.write_text(json.dumps(doc))
        rc = main(["analyze", str(bad), "--store", str(store_path)])
        assert rc == 1

    def test_filtered_analysis_runs(self, workspace, capsys):
        _, store_path, trial_path = workspace
        rc = main(
            [
                "analyze",
                str(trial_path),
                "--store",
                str(store_path),
                "--filter",
                "gender=female",
                "--json",
            ]
        )
        assert rc == 0
        doc = json.loads(capsys.readouterr().out)
        assert len(doc["results"]) == 5


class TestStoreCommands:
    def test_show_tree(self, workspace, capsys):
        _, store_path, _ = workspace
        rc = main(["store", "show-tree", "--store", str(store_path)])
        out = capsys.readouterr().out
        assert rc == 0
        assert "Norm (norm) (6)" in out

    def test_apply_adds_patient(self, workspace, capsys):
        _, store_path, trial_path = workspace
        rc = main(
            [
                "store",
                "apply",
                "--store",
                str(store_path),
                "--trial",
                str(trial_path),
                "--category",
                "knee",
            ]
        )
        assert rc == 0
        store = load_store(store_path)
        assert any(p.meta.id == "P100" for p in store.category("knee").patients)

    def test_apply_subset(self, workspace):
        _, store_path, trial_path = workspace
        rc = main(
            [
                "store",
                "apply",
                "--store",
                str(store_path),
                "--trial",
                str(trial_path),
                "--category",
                "hip",
                "--subset",
                "1,2",
            ]
        )
        assert rc == 0
        store = load_store(store_path)
        record = next(p for p in store.category("hip").patients if p.meta.id == "P100")
        assert record.stps.present_ids() == (1, 2)

    def test_bad_subset_value_exits_1(self, workspace, capsys):
        _, store_path, trial_path = workspace
        rc = main(
            [
                "store",
                "apply",
                "--store",
                str(store_path),
                "--trial",
                str(trial_path),
                "--category",
                "hip",
                "--subset",
                "one,two",
            ]
        )
        assert rc == 1
        assert "subset" in capsys.readouterr().err

    def test_duplicate_apply_exits_1(self, workspace, capsys):
        _, store_path, trial_path = workspace
        args = [
            "store",
            "apply",
            "--store",
            str(store_path),
            "--trial",
            str(trial_path),
            "--category",
            "knee",
        ]
        assert main(args) == 0
        capsys.readouterr()
        assert main(args) == 1

    def test_override_and_reset(self, workspace, capsys):
        _, store_path, _ = workspace
        rc = main(
            [
                "store",
                "override",
                "--store",
                str(store_path),
                "--category",
                "ankle",
                "--stp",
                "4",
                "--min",
                "0.1",
                "--max",
                "0.9",
            ]
        )
        assert rc == 0
        assert "[manual]" in capsys.readouterr().out
        assert load_store(store_path).category("ankle").range_for(4).manual

        rc = main(["store", "reset", "--store", str(store_path), "--category", "ankle"])
        assert rc == 0
        assert not load_store(store_path).category("ankle").range_for(4).manual

    def test_export_patient(self, workspace, tmp_path, capsys):
        _, store_path, _ = workspace
        rc = main(
            [
                "store",
                "export-patient",
                "--store",
                str(store_path),
                "--category",
                "norm",
                "--patient",
                "norm-0",
            ]
        )
        assert rc == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["meta"]["id"] == "norm-0"
        assert len(doc["stp_values"]) == 16

    def test_export_unknown_patient_exits_1(self, workspace, capsys):
        _, store_path, _ = workspace
        rc = main(
            [
                "store",
                "export-patient",
                "--store",
                str(store_path),
                "--category",
                "norm",
                "--patient",
                "ghost",
            ]
        )
        assert rc == 1

    def test_invalid_override_exits_1(self, workspace):
        _, store_path, _ = workspace
        rc = main(
            [
                "store",
                "override",
                "--store",
                str(store_path),
                "--category",
                "ankle",
                "--stp",
                "4",
                "--min",
                "2.0",
                "--max",
                "1.0",
            ]
        )
        assert rc == 1


class TestSynthCohort:
    def test_generates_files_with_counts(self, tmp_path, capsys):
        rc = main(
            [
                "synth-cohort",
                "--norm",
                "15",
                "--per-category",
                "4",
                "--seed",
                "3",
                "--out",
                str(tmp_path / "cohort"),
            ]
        )
        assert rc == 0
        store = load_store(tmp_path / "cohort" / "store.json")
        assert len(store.norm_category.patients) == 15
        assert all(len(c.patients) == 4 for c in store.pathology_categories)
        assert (tmp_path / "cohort" / "trials" / "norm.json").exists()

    def test_deterministic_across_invocations(self, tmp_path):
        for name in ("x", "y"):
            main(
                [
                    "synth-cohort",
                    "--norm",
                    "10",
                    "--per-category",
                    "3",
                    "--seed",
                    "5",
                    "--out",
                    str(tmp_path / name),
                ]
            )
        a = (tmp_path / "x" / "store.json").read_bytes()
        b = (tmp_path / "y" / "store.json").read_bytes()
        assert a == b


class TestServiceParity:
    def test_analyze_json_matches_service_match_bytes(self, tmp_path, capsys):
        from fastapi.testclient import TestClient

        from gaitbench.config import ServiceConfig
        from gaitbench.service import create_app

        paths = generate_cohort_files(tmp_path / "cohort", 30, 8, seed=21)
        trial_path = paths["trial:hip"]

        config = ServiceConfig(store_path=str(paths["store"]))
        with TestClient(create_app(config)) as client:
            body = trial_path.read_bytes()
            assert client.post("/patients/load", content=body).status_code == 200
            service_bytes = client.get(
                "/match", params={"gender": "female", "age_min": 20, "age_max": 70}
            ).content

        rc = main(
            [
                "analyze",
                str(trial_path),
                "--store",
                str(paths["store"]),
                "--filter",
                "gender=female",
                "--filter",
                "age=20:70",
                "--json",
            ]
        )
        assert rc == 0
        cli_bytes = capsys.readouterr().out.encode()
        assert cli_bytes == service_bytes
