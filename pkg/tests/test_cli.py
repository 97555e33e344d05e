from __future__ import annotations

import csv
import json

import pytest

from vsem import snapshot
from vsem.cli import build_parser, main
from vsem.harness import CSV_COLUMNS

from builders import encounter, memory_with

GENERATE = ["generate", "--genera", "2", "--instances", "2", "--with-diff", "1",
            "--without-diff", "1", "--frames", "30", "--dim", "8", "--seed", "1"]


@pytest.fixture(scope="module")
def dataset_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("ds")
    assert main(GENERATE + ["--out", str(out)]) == 0
    return out


def run_args(dataset_dir, out_dir, *extra):
    return ["run", "--dataset", str(dataset_dir / "manifest.json"),
            "--out", str(out_dir), "--runs", "2", "--window", "10", "--stride", "5",
            "--smoothing", "1", "--seed", "9", *extra]


# --- happy paths -----------------------------------------------------------

def test_generate_writes_dataset(dataset_dir, capsys):
    assert (dataset_dir / "manifest.json").exists()
    payloads = list(dataset_dir.glob("*.vsem"))
    assert len(payloads) == 2 * 2 * 2


def test_run_writes_csv_and_figures(dataset_dir, tmp_path, capsys):
    out = tmp_path / "results"
    assert main(run_args(dataset_dir, out, "--alpha", "1.0")) == 0
    printed = capsys.readouterr().out
    csv_path = out / "accuracy_alpha_1.csv"
    assert csv_path.exists()
    assert str(csv_path) in printed
    with open(csv_path) as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == list(CSV_COLUMNS)
    assert rows[1][0] == "2"  # run count
    assert rows[1][1] == "1.0"
    assert (out / "genus_accuracy.png").exists()
    assert (out / "differentia_accuracy.png").exists()


def test_run_no_figures(dataset_dir, tmp_path):
    out = tmp_path / "results"
    assert main(run_args(dataset_dir, out, "--alpha", "1.0", "--no-figures")) == 0
    assert (out / "accuracy_alpha_1.csv").exists()
    assert not (out / "genus_accuracy.png").exists()


def test_run_alpha_sweep_writes_one_csv_each(dataset_dir, tmp_path):
    out = tmp_path / "results"
    assert main(run_args(dataset_dir, out, "--alpha", "1.0", "--alpha", "0.5",
                         "--no-figures")) == 0
    assert (out / "accuracy_alpha_1.csv").exists()
    assert (out / "accuracy_alpha_0.5.csv").exists()


def test_run_is_reproducible(dataset_dir, tmp_path):
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    assert main(run_args(dataset_dir, out_a, "--alpha", "0.5", "--no-figures")) == 0
    assert main(run_args(dataset_dir, out_b, "--alpha", "0.5", "--no-figures")) == 0
    name = "accuracy_alpha_0.5.csv"
    assert (out_a / name).read_bytes() == (out_b / name).read_bytes()


def test_inspect_prints_hierarchy(tmp_path, capsys):
    mem = memory_with([[0.0]], [[0.5]], [[9.0]])
    mem.record_same_genus_edge(0, 1)
    mem.supervision.record(0.5, True)
    mem.supervision.record(2.0, False)
    mem.supervision.refresh()
    path = tmp_path / "snap.json"
    snapshot.save(mem, path)
    assert main(["inspect", str(path)]) == 0
    out = capsys.readouterr().out
    assert "thing" in out
    assert "objects 3" in out
    assert "group: objects 0, 1" in out
    assert "object 2" in out


def test_serve_print_openapi(capsys):
    assert main(["serve", "--print-openapi"]) == 0
    schema = json.loads(capsys.readouterr().out)
    assert "/sessions" in schema["paths"]
    assert "/sessions/{session_id}/encounters" in schema["paths"]


# --- failure paths ------------------------------------------------------------

def test_generate_rejects_bad_geometry(tmp_path, capsys):
    code = main(["generate", "--out", str(tmp_path), "--genera", "4",
                 "--instances", "4", "--dim", "8"])
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_run_rejects_missing_dataset(tmp_path, capsys):
    code = main(["run", "--dataset", str(tmp_path / "nope.json"),
                 "--out", str(tmp_path), "--alpha", "1.0"])
    assert code == 2


def test_run_rejects_bad_alpha(dataset_dir, tmp_path):
    assert main(run_args(dataset_dir, tmp_path, "--alpha", "1.5")) == 2


def test_inspect_rejects_corrupt_snapshot(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{broken")
    assert main(["inspect", str(bad)]) == 2
    assert main(["inspect", str(tmp_path / "missing.json")]) == 2


def test_parser_requires_subcommand(capsys):
    with pytest.raises(SystemExit) as err:
        build_parser().parse_args([])
    assert err.value.code == 2


def test_parser_run_requires_alpha(dataset_dir, tmp_path, capsys):
    with pytest.raises(SystemExit) as err:
        build_parser().parse_args(["run", "--dataset", "x", "--out", "y"])
    assert err.value.code == 2
