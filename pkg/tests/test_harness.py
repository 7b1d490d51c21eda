import itertools
import json

import numpy as np
import pytest

from portalbench import harness
from portalbench.harness import (
    ExperimentConfig,
    TrialLogImportError,
    config_from_dict,
    cyclic_square,
    generate_report,
    import_human_logs,
    latin_square_orders,
    preset_config,
    read_trial_logs_csv,
    run_batch,
    run_participant,
    run_sessions,
    save_config,
    williams_square,
    write_trial_logs_csv,
)
from portalbench.cli import main as cli_main


class TestLatinSquares:
    def test_single_condition(self):
        assert latin_square_orders(1, 4) == [[0], [0], [0], [0]]

    def test_latin_property_n3(self):
        orders = latin_square_orders(3, 3, seed=5)
        for row in orders:
            assert sorted(row) == [0, 1, 2]
        for col in range(3):
            assert sorted(orders[p][col] for p in range(3)) == [0, 1, 2]

    def test_williams_n4_first_order_balance(self):
        square = williams_square(4)
        pairs = [(row[i], row[i + 1]) for row in square for i in range(3)]
        expected = {(a, b) for a in range(4) for b in range(4) if a != b}
        assert sorted(pairs) == sorted(expected)   # each ordered pair exactly once

    def test_even_n_uses_williams_balance(self):
        orders = latin_square_orders(4, 4, seed=0)
        pairs = [(row[i], row[i + 1]) for row in orders for i in range(3)]
        assert len(set(pairs)) == 12

    def test_rows_cycle_past_n(self):
        orders = latin_square_orders(3, 7, seed=1)
        assert orders[0] == orders[3] == orders[6]

    def test_cyclic_square_is_latin(self):
        square = cyclic_square(5)
        for row in square:
            assert sorted(row) == list(range(5))
        for col in zip(*square):
            assert sorted(col) == list(range(5))

    def test_seed_relabels_consistently(self):
        a = latin_square_orders(9, 9, seed=1)
        b = latin_square_orders(9, 9, seed=2)
        assert a != b
        for row in a:
            assert sorted(row) == list(range(9))


class TestConfig:
    def test_presets_pin_counts(self):
        c1 = preset_config("study1_task1")
        assert len(c1.conditions()) == 9
        assert c1.trials_per_cell == 3
        assert c1.participants == 21
        c2 = preset_config("study2")
        assert len(c2.conditions()) == 6
        assert c2.trials_per_cell == 9

    def test_round_trip(self, tmp_path):
        config = preset_config("study1_task1", master_seed=42)
        path = tmp_path / "config.json"
        save_config(config, path)
        loaded, errors = harness.load_config(path)
        assert errors == []
        assert loaded == config

    def test_validation_reports_field_paths(self):
        raw = preset_config("study1_task1").to_dict()
        raw["distances_m"] = [3.0, -6.0]
        raw["trials_per_cell"] = 0
        raw["agent"]["fitts_a_s"] = "fast"
        config, errors = config_from_dict(raw)
        assert config is None
        joined = "\n".join(errors)
        assert "distances_m[1]" in joined
        assert "trials_per_cell" in joined
        assert "agent.fitts_a_s" in joined

    def test_schema_version_checked(self):
        raw = preset_config("study1_task1").to_dict()
        raw["schema_version"] = 99
        config, errors = config_from_dict(raw)
        assert config is None
        assert any("schema_version" in e for e in errors)

    def test_unknown_technique_rejected(self):
        raw = preset_config("study1_task1").to_dict()
        raw["techniques"] = ["portal", "go_go"]
        config, errors = config_from_dict(raw)
        assert config is None
        assert any("techniques" in e for e in errors)

    def test_hash_stable_and_sensitive(self):
        a = preset_config("study1_task1")
        b = preset_config("study1_task1")
        c = preset_config("study1_task1", master_seed=8)
        assert a.config_hash() == b.config_hash()
        assert a.config_hash() != c.config_hash()


def small_config(**overrides):
    defaults = dict(task="selection", participants=3, trials_per_cell=1,
                    distances_m=(3.0, 9.0), techniques=("portal", "homer"),
                    master_seed=11)
    defaults.update(overrides)
    return ExperimentConfig(preset="custom", **defaults)


class TestSessions:
    def test_preset_study1_task1_counts(self):
        config = preset_config("study1_task1", participants=1)
        session = run_participant(config, 1)
        assert len(session.logs) == 27
        center = sum(log.center_selections for log in session.logs)
        scored = sum(log.scored_selections for log in session.logs)
        assert center == 27
        assert scored == 432

    def test_preset_study2_counts(self):
        config = preset_config("study2", participants=1)
        session = run_participant(config, 1)
        assert len(session.logs) == 54
        assert all(log.task == "docking" for log in session.logs)
        assert all(log.selection_time_s is not None for log in session.logs)

    def test_condition_order_is_latin_row(self):
        config = preset_config("study1_task1", participants=9)
        sessions = [run_participant(config, p) for p in range(1, 4)]
        for s in sessions:
            assert sorted(s.condition_order) == sorted(config.conditions())

    def test_parallel_matches_serial(self):
        config = small_config()
        serial = run_sessions(config, parallel=1)
        parallel = run_sessions(config, parallel=2)
        assert [s.logs for s in serial] == [s.logs for s in parallel]


class TestPersistence:
    def test_round_trip_identity(self, tmp_path):
        config = small_config()
        sessions = run_sessions(config)
        path = tmp_path / "logs.csv"
        write_trial_logs_csv(path, sessions)
        loaded = read_trial_logs_csv(path)
        assert [s.logs for s in loaded] == [s.logs for s in sessions]

    def test_import_rejects_schema_mismatch(self, tmp_path):
        config = small_config()
        path = tmp_path / "logs.csv"
        write_trial_logs_csv(path, run_sessions(config))
        text = path.read_text().splitlines()
        text[1] = text[1].replace("1,", "9,", 1)
        path.write_text("\n".join(text) + "\n")
        with pytest.raises(TrialLogImportError, match="row 2"):
            import_human_logs(path)

    def test_import_rejects_nonmonotone_timestamps(self, tmp_path):
        config = small_config(participants=1, distances_m=(3.0,),
                              techniques=("portal",))
        path = tmp_path / "logs.csv"
        write_trial_logs_csv(path, run_sessions(config))
        lines = path.read_text().splitlines()
        # find two consecutive event rows of the same trial and swap them
        rows = [line.split(",") for line in lines]
        idx = next(i for i in range(1, len(rows) - 1)
                   if rows[i][6] == "event" and rows[i + 1][6] == "event")
        lines[idx], lines[idx + 1] = lines[idx + 1], lines[idx]
        path.write_text("\n".join(lines) + "\n")
        with pytest.raises(TrialLogImportError, match="row"):
            import_human_logs(path)

    def test_import_rejects_bad_header(self, tmp_path):
        path = tmp_path / "logs.csv"
        path.write_text("not,a,log\n")
        with pytest.raises(TrialLogImportError, match="row 1"):
            import_human_logs(path)


class TestBatch:
    def test_determinism_byte_identical(self, tmp_path):
        config = small_config()
        out_a = run_batch(config, tmp_path / "a")
        out_b = run_batch(config, tmp_path / "b")
        for fa, fb in zip(out_a.files, out_b.files):
            assert fa.name == fb.name
            assert fa.read_bytes() == fb.read_bytes()

    def test_seed_changes_output(self, tmp_path):
        a = run_batch(small_config(), tmp_path / "a")
        b = run_batch(small_config(master_seed=12), tmp_path / "b")
        logs_a = (tmp_path / "a" / "trial_logs.csv").read_bytes()
        logs_b = (tmp_path / "b" / "trial_logs.csv").read_bytes()
        assert logs_a != logs_b

    def test_outputs_exist_with_expected_columns(self, tmp_path):
        config = small_config(participants=4)
        result = run_batch(config, tmp_path / "out")
        summary = (tmp_path / "out" / "trial_summary.csv").read_text().splitlines()
        assert summary[0] == ",".join(harness.TRIAL_SUMMARY_COLUMNS)
        assert len(summary) == 1 + 4 * 4   # participants x (2 tech x 2 dist x 1 trial)
        anova = (tmp_path / "out" / "anova_selection_time_s.csv").read_text().splitlines()
        assert anova[0] == "factor,dof1,dof2,F,p,eta_p2"
        assert len(anova) == 4

    def test_report_from_imported_logs_matches(self, tmp_path):
        config = small_config(participants=4)
        result = run_batch(config, tmp_path / "out")
        sessions = import_human_logs(tmp_path / "out" / "trial_logs.csv")
        files, notes = generate_report(sessions, tmp_path / "reimport")
        original = (tmp_path / "out" / "anova_selection_time_s.csv").read_bytes()
        regenerated = (tmp_path / "reimport" / "anova_selection_time_s.csv").read_bytes()
        assert original == regenerated

    def test_too_few_participants_skips_anova(self, tmp_path):
        config = small_config(participants=2)
        result = run_batch(config, tmp_path / "out")
        assert any("anova" in note for note in result.notes)


class TestCli:
    def test_validate_ok(self, tmp_path, capsys):
        path = tmp_path / "config.json"
        save_config(preset_config("study1_task1"), path)
        assert cli_main(["validate", "--config", str(path)]) == 0
        assert "ok:" in capsys.readouterr().out

    def test_validate_bad(self, tmp_path, capsys):
        path = tmp_path / "config.json"
        raw = preset_config("study1_task1").to_dict()
        raw["participants"] = -1
        path.write_text(json.dumps(raw))
        assert cli_main(["validate", "--config", str(path)]) == 1
        assert "participants" in capsys.readouterr().err

    def test_run_report_import_cycle(self, tmp_path, capsys):
        config_path = tmp_path / "config.json"
        save_config(small_config(participants=3), config_path)
        out = tmp_path / "out"
        assert cli_main(["run", "--config", str(config_path),
                         "--out", str(out)]) == 0
        assert (out / "trial_logs.csv").exists()
        assert cli_main(["report", "--in", str(out)]) == 0
        imported = tmp_path / "imported"
        assert cli_main(["import", "--logs", str(out / "trial_logs.csv"),
                         "--out", str(imported)]) == 0
        assert (imported / "report.txt").exists()

    def test_env_var_default_out(self, tmp_path, monkeypatch):
        monkeypatch.setenv(harness.OUTPUT_DIR_ENV, str(tmp_path / "envout"))
        config_path = tmp_path / "config.json"
        save_config(small_config(participants=3,
                                 techniques=("portal",), distances_m=(6.0,)),
                    config_path)
        assert cli_main(["run", "--config", str(config_path)]) == 0
        assert (tmp_path / "envout" / "trial_logs.csv").exists()

    def test_seed_override(self, tmp_path):
        config_path = tmp_path / "config.json"
        save_config(small_config(participants=3), config_path)
        cli_main(["run", "--config", str(config_path), "--out",
                  str(tmp_path / "a"), "--seed", "99"])
        cli_main(["run", "--config", str(config_path), "--out",
                  str(tmp_path / "b"), "--seed", "99"])
        cli_main(["run", "--config", str(config_path), "--out",
                  str(tmp_path / "c"), "--seed", "100"])
        a = (tmp_path / "a" / "trial_logs.csv").read_bytes()
        b = (tmp_path / "b" / "trial_logs.csv").read_bytes()
        c = (tmp_path / "c" / "trial_logs.csv").read_bytes()
        assert a == b != c


class TestPerParticipantReach:
    def test_scalar_and_list_reach(self):
        raw = preset_config("study1_task1", participants=3).to_dict()
        raw["arm_reach_m"] = [0.55, 0.62, 0.7]
        config, errors = config_from_dict(raw)
        assert errors == []
        assert config.reach_for(1) == 0.55
        assert config.reach_for(3) == 0.7
        assert config.reach_for(4) == 0.55   # cycles

    def test_list_reach_validated(self):
        raw = preset_config("study1_task1").to_dict()
        raw["arm_reach_m"] = [0.6, 2.0]
        config, errors = config_from_dict(raw)
        assert config is None
        assert any("arm_reach_m[1]" in e for e in errors)

    def test_list_reach_round_trips(self, tmp_path):
        config = preset_config("study1_task1", participants=2,
                               arm_reach_m=(0.5, 0.65))
        save_config(config, tmp_path / "c.json")
        loaded, errors = harness.load_config(tmp_path / "c.json")
        assert errors == []
        assert loaded.arm_reach_m == (0.5, 0.65)
