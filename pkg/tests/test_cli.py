import json
import subprocess
import sys

from polarzoo.cli import main
from polarzoo.graphs import from_bitrows, nu_graph


def run(tmp_path, *args):
    return main(["--out", str(tmp_path), "--quiet", *args])


def test_catalog_json(tmp_path, capsys):
    assert main(["--out", str(tmp_path), "--format", "json", "catalog", "H", "2", "9"]) == 0
    cert = json.loads(capsys.readouterr().out)
    assert cert["verdict"] == "verified"
    assert cert["data"]["points"] == 280 and cert["data"]["generators"] == 112


def test_text_report_is_delimited(tmp_path, capsys):
    assert main(["--out", str(tmp_path), "catalog", "W", "2", "3"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0].startswith("=== catalog") and out[-1] == "=== end ==="


def test_construct_then_verify(tmp_path):
    assert run(tmp_path, "construct", "segre-hemisystem") == 0
    lines = tmp_path / "segre-hemisystem-H3q9.lines"
    assert len(lines.read_text().splitlines()) == 56
    assert (tmp_path / "segre-hemisystem-H3q9.png").stat().st_size > 0
    assert run(tmp_path / "v", "verify", "regular-system", str(lines), "--space", "H:3:9") == 0
    part = tmp_path / "part.lines"
    part.write_text("\n".join(lines.read_text().splitlines()[:54]) + "\n")
    assert run(tmp_path / "v", "verify", "regular-system", str(part), "--space", "H:3:9") == 1


def test_empty_system_is_zero_regular(tmp_path):
    empty = tmp_path / "empty.lines"
    empty.write_text("")
    assert run(tmp_path, "verify", "regular-system", str(empty), "--space", "H:3:9") == 0
    cert = json.loads(next(tmp_path.glob("*.cert.json")).read_text())
    assert cert["data"]["m"] == 0


def test_graph_export_round_trip(tmp_path):
    assert run(tmp_path, "graph", "nu", "--n", "3", "--q", "2") == 0
    exported = tmp_path / "graph-NU3q4.graph"
    G = from_bitrows(exported.read_text())
    assert G.same_edges(nu_graph(3, 2))
    assert exported.read_text().splitlines()[0] == "12"
    assert run(tmp_path / "f", "graph", "file", "--input", str(exported), "--params", "12", "9", "6", "9") == 0
    assert run(tmp_path / "f", "graph", "file", "--input", str(exported), "--params", "12", "9", "6", "8") == 1


def test_usage_and_budget_errors(tmp_path):
    assert main(["frobnicate"]) == 2
    assert run(tmp_path, "graph", "file", "--input", str(tmp_path / "missing")) == 2
    assert run(tmp_path, "--budget-nodes", "3", "construct", "segre-hemisystem") == 2


def test_trivial_pencil_switch_is_not_verified(tmp_path):
    assert run(tmp_path, "switch", "--n", "4", "--q", "2", "--type", "pencil") == 1


def test_replay_reproduces_payloads(tmp_path, capsys):
    assert run(tmp_path, "catalog", "W", "2", "2") == 0
    assert run(tmp_path, "graph", "collinearity", "--space", "W:3:2") == 0
    capsys.readouterr()
    assert main(["--out", str(tmp_path / "r"), "replay", str(tmp_path)]) == 0


def test_console_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "polarzoo.cli", "--out", str(tmp_path), "catalog", "Q", "2", "3"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "verdict: verified" in res.stdout
