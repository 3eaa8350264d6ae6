import csv
import io
import json
import shlex
import sys

import numpy as np
import pytest

from tablegrid.cli import DEBUG_FILES, main
from tablegrid.raster import read_image, write_pgm


def run_extract(capsys, *args):
    code = main(["extract", *map(str, args)])
    out, err = capsys.readouterr()
    return code, out, err


def read_csv(path):
    return list(csv.reader(io.StringIO(path.read_text(encoding="utf-8"), newline="")))


def test_fixture_extract(tmp_path, capsys, golden_files, golden):
    pgm, tsv = golden_files
    code, out, _ = run_extract(capsys, pgm, "--ocr-tsv", tsv, "-o", tmp_path)
    assert code == 0
    assert "2 table(s) [4x5, 4x3]" in out
    assert sorted(p.name for p in tmp_path.iterdir()) == ["golden_table1.csv", "golden_table2.csv"]
    _, _, _, gt = golden
    for k, truth in enumerate(gt.tables, start=1):
        assert read_csv(tmp_path / f"golden_table{k}.csv") == [list(r) for r in truth.texts]


def test_blank_page_exits_2(tmp_path, capsys):
    write_pgm(tmp_path / "blank.pgm", np.full((200, 300), 255, np.uint8))
    code, _, err = run_extract(capsys, tmp_path / "blank.pgm", "--no-ocr", "-o", tmp_path / "out")
    assert code == 2
    assert "no table" in err
    assert not (tmp_path / "out").exists()


def test_missing_and_corrupt_input_exit_1(tmp_path, capsys):
    code, _, err = run_extract(capsys, tmp_path / "nope.pgm", "--no-ocr")
    assert code == 1 and "error: raster" in err
    (tmp_path / "bad.pgm").write_bytes(b"P5\n10 10\n255\n" + b"\0" * 20)
    code, _, err = run_extract(capsys, tmp_path / "bad.pgm", "--no-ocr")
    assert code == 1 and "error: raster" in err


def test_malformed_tsv_is_tagged(tmp_path, capsys, golden_files):
    pgm, _ = golden_files
    (tmp_path / "bad.tsv").write_text("not a header\n")
    code, _, err = run_extract(capsys, pgm, "--ocr-tsv", tmp_path / "bad.tsv", "-o", tmp_path)
    assert code == 1 and "error: ocrwords" in err


def test_ocr_tsv_count_must_match(tmp_path, capsys, golden_files):
    pgm, tsv = golden_files
    code, _, err = run_extract(capsys, pgm, pgm, "--ocr-tsv", tsv)
    assert code == 1


def test_invalid_flag_values(capsys, golden_files):
    pgm, _ = golden_files
    with pytest.raises(SystemExit):
        main(["extract", str(pgm), "--block-size", "10"])
    code, _, err = run_extract(capsys, pgm, "--conf-threshold", "150")
    assert code == 1 and "conf_threshold" in err


def test_debug_manifest(tmp_path, capsys, golden_files):
    pgm, tsv = golden_files
    dbg = tmp_path / "dbg"
    code, _, _ = run_extract(capsys, pgm, "--ocr-tsv", tsv, "-o", tmp_path / "out", "--debug-dir", dbg)
    assert code == 0
    assert sorted(p.name for p in dbg.iterdir()) == sorted(DEBUG_FILES)
    vert, horiz, skel = (read_image(dbg / n) > 0 for n in DEBUG_FILES[2:5])
    assert np.array_equal(vert | horiz, skel)
    counts = (dbg / "histogram.txt").read_text().split()
    assert len(counts) == 256 and sum(map(int, counts)) == 1000 * 800
    groups = read_image(dbg / "07_groups.pgm")
    assert set(np.unique(groups)) == {0, 1, 2}


def test_no_debug_dir_writes_no_debug(tmp_path, capsys, golden_files):
    pgm, tsv = golden_files
    run_extract(capsys, pgm, "--ocr-tsv", tsv, "-o", tmp_path)
    assert not any(p.suffix == ".pgm" or p.name == "histogram.txt" for p in tmp_path.rglob("*"))


def test_json_format(tmp_path, capsys, golden_files):
    pgm, tsv = golden_files
    code, _, _ = run_extract(capsys, pgm, "--ocr-tsv", tsv, "-o", tmp_path, "--format", "json")
    assert code == 0
    doc = json.loads((tmp_path / "golden.json").read_text(encoding="utf-8"))
    assert [(t["n_rows"], t["n_cols"]) for t in doc["tables"]] == [(4, 5), (4, 3)]
    assert doc["parameters"]["block_size"] == 199
    assert doc["parameters"]["kernel_length"] == 10
    assert doc["tables"][0]["rows"][0] == ["Date", "Fruit", "Price", "Weight", "Amount"]


def test_ocr_command_from_env(tmp_path, capsys, monkeypatch, golden_files):
    pgm, tsv = golden_files
    script = tmp_path / "fake_ocr.py"
    script.write_text(f"import sys\nsys.stdout.write(open({str(tsv)!r}, encoding='utf-8').read())\n")
    monkeypatch.setenv("TABLEGRID_OCR_CMD", f"{shlex.quote(sys.executable)} {shlex.quote(str(script))} {{input}}")
    code, _, _ = run_extract(capsys, pgm, "-o", tmp_path)
    assert code == 0
    assert read_csv(tmp_path / "golden_table2.csv")[0] == ["Course", "Price", "Hours"]


def test_failing_ocr_command(tmp_path, capsys, golden_files):
    pgm, _ = golden_files
    cmd = f"{shlex.quote(sys.executable)} -c 'import sys; sys.exit(3)'"
    code, _, err = run_extract(capsys, pgm, "--ocr-cmd", cmd, "-o", tmp_path)
    assert code == 1 and "exited with 3" in err


def test_no_ocr_gives_empty_cells(tmp_path, capsys, golden_files):
    pgm, _ = golden_files
    code, _, _ = run_extract(capsys, pgm, "--no-ocr", "-o", tmp_path)
    assert code == 0
    rows = read_csv(tmp_path / "golden_table1.csv")
    assert len(rows) == 4 and all(r == [""] * 5 for r in rows)


def test_batch_mixed_exit_codes(tmp_path, capsys, golden_files):
    pgm, _ = golden_files
    write_pgm(tmp_path / "blank.pgm", np.full((100, 100), 255, np.uint8))
    code, _, _ = run_extract(capsys, pgm, tmp_path / "blank.pgm", "--no-ocr", "-o", tmp_path / "o",
                             "--debug-dir", tmp_path / "d", "--jobs", "2")
    assert code == 2
    assert (tmp_path / "o" / "golden_table1.csv").exists()
    assert {p.name for p in (tmp_path / "d").iterdir()} == {"golden", "blank"}
    code, _, _ = run_extract(capsys, pgm, tmp_path / "missing.pgm", "--no-ocr", "-o", tmp_path / "o")
    assert code == 1


def test_batch_matches_single_runs(tmp_path, capsys, golden_files, data_dir):
    from tablegrid import synth

    pgm, _ = golden_files
    img, _ = synth.render(*synth.load_fixture(data_dir / "golden_gradient.json"))
    write_pgm(tmp_path / "grad.pgm", img)
    inputs = [pgm, tmp_path / "grad.pgm"]
    run_extract(capsys, *inputs, "--no-ocr", "--format", "both", "-o", tmp_path / "batch", "--jobs", "2")
    for p in inputs:
        run_extract(capsys, p, "--no-ocr", "--format", "both", "-o", tmp_path / "single")
    batch = {p.name: p.read_bytes() for p in (tmp_path / "batch").iterdir()}
    single = {p.name: p.read_bytes() for p in (tmp_path / "single").iterdir()}
    assert batch == single and len(batch) == 6


def test_synth_subcommand(tmp_path, capsys, data_dir, golden):
    code = main(["synth", str(data_dir / "golden.json"), "-o", str(tmp_path), "--name", "page"])
    assert code == 0
    assert sorted(p.name for p in tmp_path.iterdir()) == ["page.pgm", "page.tsv", "page_truth.json"]
    assert np.array_equal(read_image(tmp_path / "page.pgm"), golden[2])
    truth = json.loads((tmp_path / "page_truth.json").read_text())
    assert len(truth["tables"]) == 2
    code = main(["synth", str(data_dir / "golden.json"), "-o", str(tmp_path), "--name", "g", "--gradient", "1", "0.5"])
    assert code == 0
    assert not np.array_equal(read_image(tmp_path / "g.pgm"), golden[2])
    assert main(["synth", str(tmp_path / "missing.json")]) == 1
