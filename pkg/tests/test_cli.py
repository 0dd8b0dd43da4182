import json

from ovdiam.cli import main


def run_cli(*args):
    return main(list(args))


def test_encode_writes_file_and_is_deterministic(tmp_path, capsys):
    out_a = tmp_path / "a.ov"
    out_b = tmp_path / "b.ov"
    assert run_cli("encode", "--n", "8", "--seed", "3", "--out", str(out_a)) == 0
    assert run_cli("encode", "--n", "8", "--seed", "3", "--out", str(out_b)) == 0
    assert out_a.read_bytes() == out_b.read_bytes()
    assert "d=9" in capsys.readouterr().err


def test_encode_round_trip_through_file(tmp_path):
    disj = tmp_path / "inst.txt"
    disj.write_text("2\n10\n11\n")
    out = tmp_path / "enc.ov"
    assert run_cli("encode", "--in", str(disj), "--out", str(out)) == 0
    assert out.read_text().startswith("2 5\n")


def test_encode_malformed_file_is_usage_error(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("2\n10\n111\n")
    assert run_cli("encode", "--in", str(bad)) == 2
    assert "line 3" in capsys.readouterr().err


def test_gadget_writes_edgelist_and_labels(tmp_path):
    ov = tmp_path / "inst.ov"
    ov.write_text("1 1\n1\n1\n")
    out = tmp_path / "g.gr"
    assert run_cli(
        "gadget", "--in", str(ov), "--ell", "1", "--p", "0", "--q", "1",
        "--out", str(out),
    ) == 0
    assert out.read_text().startswith("p edge 10 12\n")
    labels = (tmp_path / "g.gr.labels").read_text()
    assert "7 xL" in labels


def test_gadget_json_format(tmp_path):
    ov = tmp_path / "inst.ov"
    ov.write_text("1 1\n1\n1\n")
    out = tmp_path / "g.json"
    assert run_cli(
        "gadget", "--in", str(ov), "--ell", "1", "--p", "0", "--q", "1",
        "--format", "json", "--out", str(out),
    ) == 0
    doc = json.loads(out.read_text())
    assert doc["vertex_count"] == 10


def test_diameter_of_generated_instance(capsys):
    assert run_cli(
        "diameter", "--n", "2", "--seed", "5", "--ell", "1", "--auto-ell", "--q", "1"
    ) == 0
    out = capsys.readouterr().out
    assert "diameter=" in out and "classification=" in out


def test_diameter_from_graph_file(tmp_path, capsys):
    graph = tmp_path / "p3.gr"
    graph.write_text("p edge 3 2\ne 1 2\ne 2 3\n")
    assert run_cli("diameter", "--graph", str(graph)) == 0
    assert "diameter=2" in capsys.readouterr().out


def test_diameter_disconnected_graph_file(tmp_path, capsys):
    graph = tmp_path / "dis.gr"
    graph.write_text("p edge 4 2\ne 1 2\ne 3 4\n")
    assert run_cli("diameter", "--graph", str(graph)) == 2
    assert "disconnected" in capsys.readouterr().err


def test_verify_exit_codes(tmp_path):
    assert run_cli("verify", "--n", "3", "--seed", "1", "--ell", "2", "--q", "1") == 0
    assert run_cli(
        "verify", "--n", "3", "--seed", "1", "--ell", "2", "--q", "1",
        "--negative-control",
    ) == 1


def test_verify_writes_json_report(tmp_path):
    out = tmp_path / "report.json"
    assert run_cli(
        "verify", "--n", "2", "--seed", "2", "--ell", "1", "--q", "1",
        "--out", str(out),
    ) == 0
    doc = json.loads(out.read_text())
    assert doc["passed"] is True
    assert doc["checks"]


def test_simulate_q_zero_is_usage_error(capsys):
    assert run_cli(
        "simulate", "--n", "2", "--seed", "1", "--ell", "1", "--q", "0"
    ) == 2
    assert "q >= 1" in capsys.readouterr().err


def test_simulate_reports(tmp_path, capsys):
    out = tmp_path / "sim.json"
    assert run_cli(
        "simulate", "--n", "2", "--seed", "1", "--ell", "1", "--auto-ell",
        "--q", "1", "--out", str(out),
    ) == 0
    stdout = capsys.readouterr().out
    assert "verdict=" in stdout and "faithful=True" in stdout
    doc = json.loads(out.read_text())
    assert doc["ledger"]["rounds"] > 0


def test_sweep_exit_code(capsys):
    assert run_cli(
        "sweep", "--ells", "1", "--ps", "0,1", "--qs", "1", "--random", "4",
        "--max-n", "2", "--seed", "9",
    ) == 0
    assert "failures=0" in capsys.readouterr().out


def test_missing_instance_is_usage_error():
    assert run_cli("verify", "--ell", "1", "--q", "1") == 2


def test_unknown_command_is_usage_error():
    assert run_cli("frobnicate") == 2
