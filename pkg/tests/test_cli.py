import json
import subprocess
import sys

import pytest

from cli_cases import CASES, FIXTURES, golden_path, render, run


@pytest.mark.parametrize("name,argv,expected", CASES, ids=[c[0] for c in CASES])
def test_golden(name, argv, expected):
    code, out, err = run(argv)
    assert code == expected, err
    assert render(code, out, err) == golden_path(name).read_text(encoding="utf-8")


@pytest.mark.parametrize("name,argv,expected", CASES, ids=[c[0] for c in CASES])
def test_two_runs_identical(name, argv, expected):
    assert run(argv) == run(argv)


def test_every_subcommand_has_a_case_per_outcome():
    from cplkit.cli import build_parser

    sub = next(a for a in build_parser()._actions if a.dest == "command")
    commands = set(sub.choices)
    covered = {(argv[0], code) for _, argv, code in CASES if argv}
    assert {c for c, _ in covered} == commands
    for command in commands:
        assert (command, 0) in covered and (command, 2) in covered, command
    for command in ("eval", "modal-check", "gensub-check", "bmorph-check", "gt-check"):
        assert (command, 1) in covered


def test_failure_output_is_json():
    for _, argv, expected in CASES:
        if expected == 1:
            _, out, _ = run(argv)
            json.loads(out)


def test_json_flag_outputs_json():
    for _, argv, expected in CASES:
        if expected == 0 and "--json" in argv:
            _, out, _ = run(argv)
            json.loads(out)


def test_enumerate_out_dir(tmp_path):
    code, _, _ = run(["enumerate", "--worlds", "2", "--out-dir", str(tmp_path)])
    assert code == 0
    files = sorted(tmp_path.glob("*.json"))
    assert len(files) == 36 and files[0].name == "frame_0000.json"


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "cplkit.cli", "classify", "--frame", "f1.json"],
                          cwd=FIXTURES, capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout == "monotonic quasi-filter augmented-quasi-filter\n"
