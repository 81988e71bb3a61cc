import importlib.util
import json
import sys
from pathlib import Path

import pytest

SCRIPTS = Path(__file__).resolve().parent.parent / "scripts"


def load(name):
    spec = importlib.util.spec_from_file_location(name, SCRIPTS / f"{name}.py")
    module = importlib.util.module_from_spec(spec)
    sys.modules[name] = module
    spec.loader.exec_module(module)
    return module


def test_staircase_script(capsys):
    assert load("staircase_path").main(["--k", "20", "--grid", "3", "--solve-k", "4"]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "s,t,certificate,target,solver_small_k"


def test_midpoint_script(capsys):
    assert load("midpoint_search").main(["--p", "2", "--weights", "3"]) == 0
    (row,) = json.loads(capsys.readouterr().out)
    assert row["best_deviation"] > 1e-2


def test_sandwich_script(capsys):
    assert load("sandwich_sweep").main(["--pairs", "2", "--max-k", "2"]) == 0
    assert len(capsys.readouterr().out.splitlines()) == 3


def test_hierarchy_script(tmp_path):
    out = tmp_path / "h.csv"
    assert load("hierarchy_sweep").main(["--instances", "1", "--max-size", "3", "--out", str(out)]) == 0
    assert len(out.read_text().splitlines()) == 1 + 11 * 3


def test_fixture_script_reproduces(tmp_path):
    load("make_fixtures").main(["make_fixtures", str(tmp_path)])
    fixtures = Path(__file__).resolve().parent.parent / "fixtures"
    for path in sorted(fixtures.glob("*.json")):
        assert (tmp_path / path.name).read_text() == path.read_text()


@pytest.mark.parametrize("name", ["hierarchy_sweep", "staircase_path", "midpoint_search", "sandwich_sweep"])
def test_scripts_have_usage(name):
    assert load(name).__doc__.strip()
