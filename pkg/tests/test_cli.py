import json
import subprocess
import sys

import pytest

from planar4crit.cli import main
from planar4crit.coloring import is_proper
from planar4crit.graph import delete_edge, parse

ENVELOPE = {"schema_version", "command", "parameters", "artifact_version", "timing", "payload", "verdict"}


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, (json.loads(out.out) if out.out.strip() else None), out.err


def test_verify_gadgets(capsys):
    code, env, _ = run(capsys, "verify-gadgets")
    assert code == 0 and set(env) == ENVELOPE and env["verdict"] == "pass"
    assert [g["accepted"] for g in env["payload"]["gadgets"]] == [15, 39, 51, 147, 12]
    assert env["payload"]["mutation_control"]["rejected"]


def test_chi(capsys):
    code, env, _ = run(capsys, "chi", "--n", "4")
    assert code == 0 and env["payload"]["chi"] == 4 and env["payload"]["lattice_chi"] == 3


@pytest.mark.parametrize("fmt", ["graph6", "dimacs", "dot"])
def test_gen_to_file(capsys, tmp_path, fmt):
    out = tmp_path / f"g.{fmt}"
    code, env, _ = run(capsys, "gen", "--n", "4", "--out", str(out), "--format", fmt)
    assert code == 0
    g = parse(out.read_text(), fmt)
    assert (g.n, g.num_edges) == (env["payload"]["vertices"], env["payload"]["edges"]) == (149, 305)


def test_critical_witnesses_revalidate(capsys):
    code, env, _ = run(capsys, "critical", "--n", "4", "--guaranteed")
    assert code == 0
    _, gen, _ = run(capsys, "gen", "--n", "4", "--format", "dot")
    g = parse(gen["payload"]["graph"], "dot")
    vertex = {g.name(v): v for v in range(g.n)}
    p = env["payload"]
    assert p["checked"] == p["guaranteed_critical"] == 48
    for row in p["edges"]:
        e = tuple(vertex[x] for x in row["edge"])
        colors = dict(enumerate(row["witness"]))
        assert is_proper(delete_edge(g, e), colors, 3)
        assert not is_proper(g, colors, 3)


def test_lemma_command(capsys):
    code, env, _ = run(capsys, "lemma", "--id", "L2", "--n", "3")
    assert code == 0 and env["payload"]["holds"] and env["payload"]["method"] == "enumeration"
    code, env, _ = run(capsys, "lemma", "--id", "L8", "--n", "4")
    assert code == 0 and all(env["payload"]["checks"].values())


def test_deterministic_modulo_timing(capsys):
    _, a, _ = run(capsys, "critical", "--n", "4")
    _, b, _ = run(capsys, "critical", "--n", "4")
    a.pop("timing"), b.pop("timing")
    assert a == b


def test_budget_exceeded_is_failure(capsys):
    code, env, _ = run(capsys, "extract", "--n", "4", "--budget-secs", "0")
    assert code == 1 and env["verdict"] == "fail" and env["payload"]["error"] == "budget exceeded"


@pytest.mark.parametrize(
    "argv",
    [[], ["bogus"], ["chi"], ["chi", "--n", "3"], ["chi", "--n", "x"], ["lemma", "--id", "L9", "--n", "4"],
     ["critical", "--n", "4", "--all", "--guaranteed"], ["density", "--from", "5", "--to", "4"],
     ["gen", "--n", "4", "--format", "png"], ["chi", "--n", "4", "--workers", "0"]],
)
def test_usage_errors_exit_2(capsys, argv):
    code, env, err = run(capsys, *argv)
    assert code == 2 and env is None and "usage" in err


def test_workers_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("PLANAR4CRIT_WORKERS", "3")
    _, env, _ = run(capsys, "chi", "--n", "4")
    assert env["parameters"]["workers"] == 3


def test_console_script_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "planar4crit.cli", "lemma", "--id", "L2", "--n", "2"],
        capture_output=True, text=True, check=False,
    )
    assert res.returncode == 0
    assert json.loads(res.stdout)["verdict"] == "pass"
