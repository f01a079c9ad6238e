import json
import math
from pathlib import Path

import tactons
from tactons.cli import main

MAZES = Path(tactons.__file__).parent / "data" / "mazes"


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestRender:
    def test_static_dump(self, capsys):
        code, out, err = run(capsys, "render", "--tacton", "set4/N", "--until", "200")
        assert code == 0 and err == ""
        assert out == "0\t000f\n"

    def test_runs_to_cap(self, capsys):
        code, out, _ = run(capsys, "render", "--tacton", "set4/N", "--until", "600", "--cap", "500")
        assert code == 0
        assert out == "0\t000f\n500\t0000\n"

    def test_deterministic(self, capsys):
        args = ("render", "--tacton", "set9/NE", "--until", "2000")
        _, first, _ = run(capsys, *args)
        _, second, _ = run(capsys, *args)
        assert first == second
        assert first.count("\n") > 10

    def test_ascii_mode_draws_grids(self, capsys):
        code, out, _ = run(capsys, "render", "--tacton", "set4/N", "--until", "100", "--ascii")
        assert code == 0
        assert "t=0 ms" in out and "oooo" in out

    def test_unknown_tacton(self, capsys):
        code, out, err = run(capsys, "render", "--tacton", "set99/N")
        assert code == 1 and out == ""
        assert err.startswith("error:")


class TestSimulateAnalyze:
    def test_pipeline_reports_lossless_transmission(self, capsys, tmp_path):
        code, csv_text, _ = run(
            capsys, "simulate", "--space", "s3", "--participants", "2", "--trials", "48"
        )
        assert code == 0
        csv_file = tmp_path / "trials.csv"
        csv_file.write_text(csv_text)

        code, out, _ = run(capsys, "analyze", str(csv_file), "--space", "s3")
        assert code == 0
        report = json.loads(out)
        assert report["n_trials"] == 96
        assert report["overall_error_rate"] == 0.0
        assert abs(report["overall_bits"] - math.log2(48)) < 1e-9

    def test_analyze_infers_space_when_unset(self, capsys, tmp_path):
        _, csv_text, _ = run(
            capsys, "simulate", "--space", "s2", "--participants", "1", "--trials", "32"
        )
        csv_file = tmp_path / "trials.csv"
        csv_file.write_text(csv_text)
        code, out, _ = run(capsys, "analyze", str(csv_file))
        assert code == 0
        report = json.loads(out)
        assert [d["name"] for d in report["dimensions"]] == ["dir", "size", "speed"]
        assert abs(report["overall_bits"] - math.log2(32)) < 1e-9

    def test_simulate_with_model_file(self, capsys, tmp_path):
        model = tmp_path / "model.json"
        model.write_text(json.dumps({"confusion": {"speed": 1.0}}))
        _, csv_text, _ = run(
            capsys,
            "simulate", "--space", "s3", "--participants", "1", "--trials", "48",
            "--model", str(model),
        )
        csv_file = tmp_path / "trials.csv"
        csv_file.write_text(csv_text)
        _, out, _ = run(capsys, "analyze", str(csv_file), "--space", "s3")
        report = json.loads(out)
        by_name = {d["name"]: d for d in report["dimensions"]}
        assert by_name["speed"]["error_rate"] == 1.0
        assert by_name["dir"]["error_rate"] == 0.0

    def test_analyze_missing_file(self, capsys):
        code, _, err = run(capsys, "analyze", "/does/not/exist.csv")
        assert code == 1 and err.startswith("error:")


class TestMazeWalk:
    def test_single_file(self, capsys):
        code, out, err = run(capsys, "maze-walk", str(MAZES / "maze01.txt"))
        assert code == 0 and err == ""
        assert out == "maze01.txt: steps = BFS distance = 26\n"

    def test_directory_checks_every_maze(self, capsys):
        code, out, err = run(capsys, "maze-walk", str(MAZES))
        assert code == 0 and err == ""
        lines = out.strip().split("\n")
        assert len(lines) == 24
        assert all(": steps = BFS distance = " in line for line in lines)

    def test_empty_directory(self, capsys, tmp_path):
        code, _, err = run(capsys, "maze-walk", str(tmp_path))
        assert code == 1 and "no maze files" in err


class TestCatalog:
    def test_dump_parses_and_round_trips(self, capsys, tmp_path):
        code, out, _ = run(capsys, "catalog", "dump")
        assert code == 0
        data = json.loads(out)
        assert len(data["tactons"]) == 110
        by_name = {e["name"]: e for e in data["tactons"]}
        assert by_name["set1/N"]["reconstructed"] is True
        assert "reconstructed" not in by_name["set4/N"]

        # a dumped catalog is a valid --catalog override of itself
        path = tmp_path / "catalog.json"
        path.write_text(out)
        code, again, _ = run(capsys, "--catalog", str(path), "catalog", "dump")
        assert code == 0 and again == out

    def test_render_respects_catalog_override(self, capsys, tmp_path):
        override = {
            "tactons": [
                {
                    "name": "set4/N",
                    "kind": "static",
                    "pattern": "....\noooo\n....\n....",
                }
            ]
        }
        path = tmp_path / "catalog.json"
        path.write_text(json.dumps(override))
        _, out, _ = run(
            capsys, "--catalog", str(path), "render", "--tacton", "set4/N", "--until", "100"
        )
        assert out == "0\t00f0\n"
