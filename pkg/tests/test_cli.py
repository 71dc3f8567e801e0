import json

import pytest

from congestlab import cli, comm, gadgets as G, lemmas
from congestlab.graph import Graph


def run_cli(args, capsys):
    code = cli.main(args)
    out = capsys.readouterr().out
    return code, [json.loads(line) for line in out.splitlines() if line.strip()]


def test_check_lemma_mvc_exhaustive(capsys):
    code, lines = run_cli(["check-lemma", "mvc", "--k", "2", "--exhaustive", "--quiet"], capsys)
    assert code == 0
    assert lines[-1]["total"] == 225 and lines[-1]["pass"] == 225


def test_check_lemma_cycle_sparse(capsys):
    code, lines = run_cli(["check-lemma", "cycle8", "--k", "3", "--sparse", "2", "--quiet"], capsys)
    assert code == 0 and lines[-1]["counterexample"] == 0
    assert lines[-1]["total"] == 46 * 46


def test_check_lemma_streams_json_lines(capsys):
    code, lines = run_cli(["check-lemma", "col3", "--k", "2", "--count", "5", "--seed", "3"], capsys)
    assert code == 0 and len(lines) == 6
    assert all(rec["status"] == "pass" for rec in lines[:-1])


def test_check_lemma_reproducible(capsys):
    args = ["check-lemma", "colc", "--k", "2", "--c", "4", "--count", "6", "--seed", "9"]
    _, a = run_cli(args, capsys)
    _, b = run_cli(args, capsys)
    assert a == b


def drop_one_bin_edge(name, k, x, y, c=None):
    inst = lemmas.build(name, k, x, y, c=c)
    a1 = inst.groups["A1"][0]
    victim = next(v for v in inst.graph.neighbors(a1) if inst.graph.labels[v].startswith(("F_", "T_")))
    g = inst.graph.without_edges([(a1, victim)])
    return G.LowerBoundInstance(inst.kind, g, inst.partition, inst.params, inst.x, inst.y, inst.groups)


def test_mutation_is_caught():
    recs = list(cli.check_lemma("mvc", 2, lemmas.exhaustive_pairs(4), builder=drop_one_bin_edge))
    summary = cli.summarize(recs)
    assert summary["counterexample"] + summary["invariant"] > 0
    assert cli.exit_code(summary) in (2, 3)
    bad = summary["first_failure"]
    assert comm.from_hex(bad["x"]) and "y" in bad


def test_counterexample_exit_code(capsys):
    code, lines = run_cli(["check-lemma", "colapprox", "--k", "2", "--c", "2", "--count", "10", "--quiet"], capsys)
    assert code == 2
    assert lines[-1]["first_failure"]["status"] == "counterexample"


def test_invariant_exit_code():
    assert cli.exit_code({"invariant": 1, "counterexample": 4}) == 3
    assert cli.exit_code({"invariant": 0, "counterexample": 0}) == 0


def test_gen_verify_round_trip(tmp_path, capsys):
    f = tmp_path / "m.json"
    code, _ = run_cli(["gen", "--kind", "mvc", "--k", "2", "--x", "4:6", "--y", "4:3", "--out", str(f)], capsys)
    assert code == 0
    d = json.loads(f.read_text())
    assert d["n"] == 16 and d["kind"] == "mvc" and d["x"] == "4:6"
    assert set(d["partition"].values()) == {"A", "B"}
    code, [rep] = run_cli(["verify", "--kind", "mvc", "--in", str(f)], capsys)
    assert code == 0 and rep["predicate"] and rep["value"] == 8 and rep["matches_lemma"]
    assert len(rep["witness"]) == 8


def test_verify_detects_tampered_file(tmp_path, capsys):
    f = tmp_path / "m.json"
    run_cli(["gen", "--kind", "mvc", "--k", "2", "--x", "4:6", "--y", "4:3", "--out", str(f)], capsys)
    d = json.loads(f.read_text())
    d["edges"] = d["edges"][:-1]
    f.write_text(json.dumps(d))
    code, _ = run_cli(["verify", "--in", str(f)], capsys)
    assert code == 1


@pytest.mark.parametrize("kind,k,extra", [("col3", 2, []), ("colc", 2, ["--c", "4"]), ("cycle8", 3, []),
                                          ("colapprox", 2, ["--c", "1"]), ("ident", 3, []), ("star", 8, [])])
def test_gen_verify_kinds(kind, k, extra, tmp_path, capsys):
    f = tmp_path / "g.json"
    code, _ = run_cli(["--seed", "5", "gen", "--kind", kind, "--k", str(k), "--out", str(f)] + extra, capsys)
    assert code == 0
    code, [rep] = run_cli(["verify", "--in", str(f)], capsys)
    assert rep["matches_lemma"] and code == 0


def test_gen_dot(capsys):
    code = cli.main(["gen", "--kind", "cycle8", "--k", "3", "--x", "9:1", "--y", "9:1", "--format", "dot"])
    out = capsys.readouterr().out
    assert code == 0 and out.startswith("graph cycle8 {") and out.count("color=red") == 2


def test_simulate_ident(tmp_path, capsys):
    f = tmp_path / "i.json"
    run_cli(["gen", "--kind", "ident", "--k", "4", "--out", str(f)], capsys)
    args = ["simulate", "--algo", "ident", "--in", str(f), "--seed", "2", "--bandwidth", "12", "--max-rounds", "200"]
    code, [rep] = run_cli(args, capsys)
    assert code == 0
    assert set(rep) >= {"verdicts", "rounds", "bits_total", "bits_per_edge"}
    assert len(set(rep["verdicts"])) == 1 and sum(rep["bits_per_edge"].values()) == rep["bits_total"]
    _, [again] = run_cli(args, capsys)
    assert again == rep


def test_simulate_bandwidth_too_small(tmp_path, capsys):
    f = tmp_path / "i.json"
    run_cli(["gen", "--kind", "ident", "--k", "4", "--out", str(f)], capsys)
    assert cli.main(["simulate", "--in", str(f), "--bandwidth", "3"]) == 3


def test_protocols(tmp_path, capsys):
    f = tmp_path / "c.json"
    run_cli(["gen", "--kind", "cycle8", "--k", "3", "--x", "9:3", "--y", "9:2", "--out", str(f)], capsys)
    for args in (["--algo", "apsp2"], ["--algo", "apspT", "--t", "3"], ["--algo", "simulate", "--program", "gather"]):
        code, [rep] = run_cli(["protocol", "--in", str(f)] + args, capsys)
        assert code == 0 and rep["bound_satisfied"]
        assert set(rep) >= {"outputs_digest", "total_bits", "bound", "bound_satisfied"}


def test_protocol_plain_graph_file(tmp_path, capsys):
    f = tmp_path / "p.json"
    f.write_text(json.dumps({"n": 3, "edges": [[0, 1, 2], [1, 2, 3]], "partition": {"0": "A", "1": "A", "2": "B"}}))
    code, [rep] = run_cli(["protocol", "--algo", "apsp2", "--in", str(f)], capsys)
    assert code == 0 and rep["exact"]


def test_bench(capsys):
    code, rows = run_cli(["bench", "--algo", "ident", "--sizes", "4", "8"], capsys)
    assert code == 0 and all(r["rounds"] <= r["bound"] and r["D"] == 3 for r in rows)
    code, rows = run_cli(["bench", "--algo", "apsp2", "--sizes", "10", "20"], capsys)
    assert code == 0 and all(r["ratio"] <= 1 and r["exact"] for r in rows)
    code, rows = run_cli(["bench", "--algo", "star"], capsys)
    assert code == 0 and [r["n"] for r in rows] == [8, 16, 32] and all(r["decoded"] for r in rows)


def test_workers_env(monkeypatch, capsys):
    monkeypatch.setenv(cli.WORKERS_ENV, "2")
    assert cli.workers() == 2
    code, lines = run_cli(["check-lemma", "mvc", "--k", "2", "--count", "40", "--quiet"], capsys)
    monkeypatch.setenv(cli.WORKERS_ENV, "1")
    code1, lines1 = run_cli(["check-lemma", "mvc", "--k", "2", "--count", "40", "--quiet"], capsys)
    assert code == code1 == 0 and lines == lines1
    monkeypatch.setenv(cli.WORKERS_ENV, "lots")
    assert cli.workers() == 1


def test_bad_usage_exit(capsys):
    assert cli.main(["gen", "--kind", "mvc", "--k", "3", "--x", "9:0", "--y", "9:0"]) == 1
    with pytest.raises(SystemExit):
        cli.main(["gen", "--kind", "nope", "--k", "2"])
