import json
from pathlib import Path

import pytest

from iqp.cli import main
from iqp.generate import generate_instance
from iqp.io import emit_instance, parse_instance

INSTANCES = Path(__file__).resolve().parent.parent / "instances"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def parse_report(text):
    report = {}
    for line in text.splitlines():
        key, _, value = line.partition(": ")
        report.setdefault(key, []).append(value)
    return report


def test_roundtrip_generated_instances():
    for seed in range(12):
        inst = generate_instance(seed, n=2 + seed % 3, l=3, m_extra=seed % 4)
        assert parse_instance(emit_instance(inst)) == inst


def test_solve_batch_bundled(capsys):
    code, out, _ = run(capsys, "solve", str(INSTANCES / "box-indefinite.json"))
    assert code == 0
    rep = parse_report(out)
    assert rep["status"] == ["optimal"]
    assert rep["value"] == ["-4"]


def test_solve_oracle_agrees(capsys):
    code, out, _ = run(
        capsys,
        "solve",
        str(INSTANCES / "box-indefinite.json"),
        "--algorithm",
        "oracle",
    )
    assert code == 0
    assert parse_report(out)["value"] == ["-4"]


def test_solve_malformed_file_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(capsys, "solve", str(bad))
    assert code == 2 and "error" in err


def test_solve_asymmetric_rejected(tmp_path, capsys):
    doc = {
        "n": 2,
        "Q": [["0", "1"], ["0", "0"]],
        "c": ["0", "0"],
        "A": [["1", "0"]],
        "b": ["1"],
    }
    path = tmp_path / "asym.json"
    path.write_text(json.dumps(doc))
    code, _, err = run(capsys, "solve", str(path))
    assert code == 2 and "symmetric" in err


def test_solve_unbounded_exit_5(tmp_path, capsys):
    doc = {"n": 1, "Q": [["1"]], "c": ["0"], "A": [["1"]], "b": ["0"]}
    path = tmp_path / "unbounded.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "solve", str(path))
    assert code == 5
    assert parse_report(out)["status"] == ["unbounded-region"]


def test_solve_budget_exit_6(capsys):
    code, out, _ = run(
        capsys,
        "solve",
        str(INSTANCES / "coupled-indefinite.json"),
        "--max-nodes",
        "2",
    )
    assert code == 6
    assert parse_report(out)["status"] == ["budget-exceeded"]


def test_gen_deterministic(capsys):
    code1, out1, _ = run(capsys, "gen", "--seed", "7", "--n", "3", "--l", "2")
    code2, out2, _ = run(capsys, "gen", "--seed", "7", "--n", "3", "--l", "2")
    assert code1 == code2 == 0
    assert out1 == out2


def test_gen_output_parses_and_is_bounded(capsys):
    code, out, _ = run(capsys, "gen", "--seed", "3", "--n", "2", "--m", "2")
    assert code == 0
    inst = parse_instance(out)
    from iqp.solver import check_bounded

    assert inst.q.is_symmetric()
    assert check_bounded(inst)


def test_hull_brute_square(capsys):
    code, out, _ = run(capsys, "hull", str(INSTANCES / "square3.json"), "--mode", "brute")
    assert code == 0
    rep = parse_report(out)
    assert rep["hull_vertices"] == ["4"]


def test_hull_superset_contains_brute(capsys):
    code, bout, _ = run(capsys, "hull", str(INSTANCES / "square3.json"), "--mode", "brute")
    _, sout, _ = run(capsys, "hull", str(INSTANCES / "square3.json"), "--mode", "superset")
    brute = {tuple(json.loads(v)) for v in parse_report(bout).get("vertex", [])}
    sup = {tuple(json.loads(v)) for v in parse_report(sout).get("candidate", [])}
    assert brute <= sup


def test_hull_concave(capsys):
    code, out, _ = run(
        capsys, "hull", str(INSTANCES / "concave-square3.json"), "--mode", "concave"
    )
    assert code == 0
    assert parse_report(out)["value"] == ["-18"]


def test_hull_concave_rejects_indefinite_exit_3(capsys):
    code, _, err = run(
        capsys, "hull", str(INSTANCES / "box-indefinite.json"), "--mode", "concave"
    )
    assert code == 3 and "positive eigenvalue" in err


def test_reduce_triangle(capsys):
    code, out, _ = run(
        capsys,
        "reduce",
        str(INSTANCES / "triangle.graph"),
        "--cover",
        "0,1",
        "--kappa",
        "2",
    )
    assert code == 0
    rep = parse_report(out)
    assert rep["edges"] == ["1"] and rep["check_edges"] == ["1"]


def test_reduce_kappa_zero(capsys):
    code, out, _ = run(
        capsys,
        "reduce",
        str(INSTANCES / "triangle.graph"),
        "--cover",
        "0,1",
        "--kappa",
        "0",
    )
    assert code == 0 and parse_report(out)["edges"] == ["0"]


def test_reduce_bad_cover_exit_4(capsys):
    code, _, err = run(
        capsys,
        "reduce",
        str(INSTANCES / "triangle.graph"),
        "--cover",
        "0",
        "--kappa",
        "2",
    )
    assert code == 4 and "cover" in err


def test_verify_bundled_ok(capsys):
    code, out, _ = run(capsys, "verify", str(INSTANCES / "box-indefinite.json"))
    assert code == 0
    assert parse_report(out)["all_ok"] == ["True"]


def test_verify_generated_trials(capsys):
    code, out, _ = run(capsys, "verify", "--trials", "2", "--seed", "41")
    assert code == 0
    assert parse_report(out)["verified"] == ["2"]


def test_threads_flag_does_not_change_output(capsys):
    base = run(capsys, "solve", str(INSTANCES / "box-indefinite.json"))
    threaded = run(
        capsys, "solve", str(INSTANCES / "box-indefinite.json"), "--threads", "4"
    )
    # wall time varies; everything else must be byte-identical
    strip = lambda s: "\n".join(
        ln for ln in s.splitlines() if not ln.startswith("wall_time")
    )
    assert strip(base[1]) == strip(threaded[1])


def test_bench_runs(capsys):
    code, out, _ = run(capsys, "bench", "--trials", "2", "--n", "2", "--seed", "1")
    assert code == 0
    assert "batch_time_s" in out and "sequential_nodes" in out
