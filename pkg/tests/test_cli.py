import csv
import io
import json

import pytest

from ttpk.cli import flaw_predicate, main, parse_grid
from ttpk.schedule import Game, Schedule, to_json


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def unit20(tmp_path, capsys):
    path = tmp_path / "u20.txt"
    assert run(["gen", "--kind", "unit", "--n", "20", "--out", str(path)], capsys)[0] == 0
    return path


@pytest.fixture
def euclid6(tmp_path, capsys):
    path = tmp_path / "e6.txt"
    run(["gen", "--kind", "euclidean", "--n", "6", "--seed", "1", "--out", str(path)], capsys)
    return path


def test_flaw_twenty_k4(capsys):
    code, out, _ = run(["flaw", "--n", "20", "--k", "4"], capsys)
    js = json.loads(out)
    assert code == 0
    assert js["cons_feasible"] and js["predicate"] and js["observed"]
    assert all(r["flawed_violating_teams"] == [js["hub"]] for r in js["per_l"])


def test_flaw_twenty_k6(capsys):
    code, out, _ = run(["flaw", "--n", "20", "--k", "6"], capsys)
    js = json.loads(out)
    assert code == 0 and js["r"] == 7
    assert js["cons_feasible"] and not js["predicate"] and not js["observed"]
    assert all(r["flawed_feasible"] for r in js["per_l"])


def test_flaw_with_instance(unit20, capsys):
    code, out, _ = run(["flaw", "--n", "20", "--k", "4", "--in", str(unit20)], capsys)
    assert code == 0 and json.loads(out)["matches"]
    assert run(["flaw", "--n", "10", "--k", "4", "--in", str(unit20)], capsys)[0] == 1


def test_solve_validate_roundtrip(unit20, tmp_path, capsys):
    itin = tmp_path / "it.csv"
    code, out, _ = run(["solve", "--in", str(unit20), "--k", "4", "--emit-candidates",
                        "--itinerary", str(itin)], capsys)
    js = json.loads(out)
    assert code == 0
    assert len(js["candidates"]) == 19 * 4
    assert js["provenance"]["flags"]["rule2_day1_reversal"] is True
    assert itin.read_text().startswith("team,day,venue\n")
    sched = tmp_path / "s.json"
    sched.write_text(out)
    code, out, _ = run(["validate", "--schedule", str(sched), "--k", "4"], capsys)
    assert code == 0 and json.loads(out)["feasible"]


def test_validate_corrupted_schedule(tmp_path, capsys, caplog):
    days = [[(1, 0), (3, 2)], [(0, 1), (2, 3)], [(2, 0), (3, 1)],
            [(0, 2), (1, 3)], [(3, 0), (2, 1)], [(0, 3), (1, 2)]]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(to_json(Schedule.from_pairs(4, days), 3)))
    code, out, _ = run(["validate", "--schedule", str(path), "--k", "3"], capsys)
    js = json.loads(out)
    assert code == 1
    assert not js["no_repeat"]["ok"]
    assert js["no_repeat"]["violations"][0]["day"] == 2
    assert "violates" in caplog.text


def test_validate_malformed_is_exit_one(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"n": 4, "k": 3, "days": [[{"away": 1, "home": 2}]]}))
    assert run(["validate", "--schedule", str(path), "--k", "3"], capsys)[0] == 1


def test_bounds_and_certify(unit20, capsys):
    code, out, _ = run(["bounds", "--in", str(unit20), "--k", "4"], capsys)
    js = json.loads(out)
    assert code == 0
    assert (js["lb_tour"], js["lb_delta_k"], js["lb_delta_n"], js["ub_analyzed"]) == (400, 190, 76, 680)
    code, out, _ = run(["certify", "--in", str(unit20), "--k", "4"], capsys)
    js = json.loads(out)
    assert code == 0 and js["ub_ok"] and js["ratio_ok"]


def test_k_clamped_with_warning(euclid6, capsys, caplog):
    code, out, _ = run(["solve", "--in", str(euclid6), "--k", "9"], capsys)
    assert code == 0 and json.loads(out)["k"] == 5
    assert "clamping" in caplog.text


def test_tour_commands(euclid6, capsys):
    code, out, _ = run(["tour", "--in", str(euclid6)], capsys)
    heur = json.loads(out)
    code2, out2, _ = run(["tour", "--in", str(euclid6), "--exact"], capsys)
    exact = json.loads(out2)
    assert code == code2 == 0
    assert exact["method"] == "held-karp"
    assert exact["length"] <= heur["length"]


def test_oracle_command(euclid6, capsys):
    code, out, _ = run(["oracle", "--in", str(euclid6), "--k", "3", "--budget", "60"], capsys)
    js = json.loads(out)
    assert code == 0 and js["status"] == "optimal" and js["cost"] == 21456
    assert len(js["days"]) == 10


def test_domain_error_exit_one(tmp_path, capsys):
    path = tmp_path / "odd.txt"
    path.write_text("5\n" + "0 0 0 0 0\n" * 5)
    assert run(["tour", "--in", str(path)], capsys)[0] == 1
    assert run(["tour", "--in", str(tmp_path / "missing.txt")], capsys)[0] == 1


def test_tsplib_input(tmp_path, capsys):
    path = tmp_path / "four.tsp"
    path.write_text("DIMENSION: 4\nEDGE_WEIGHT_TYPE: EXPLICIT\nEDGE_WEIGHT_FORMAT: FULL_MATRIX\n"
                    "EDGE_WEIGHT_SECTION\n0 1 2 3\n1 0 1 2\n2 1 0 1\n3 2 1 0\nEOF\n")
    code, out, _ = run(["tour", "--in", str(path), "--format", "tsplib-full-matrix", "--exact"], capsys)
    assert code == 0 and json.loads(out)["length"] == 6


@pytest.mark.parametrize("argv", [["bogus"], ["solve", "--k", "3"], ["solve", "--in", "x", "--k", "3", "--nope"],
                                  ["bench", "--grid", "m=1..2"]])
def test_usage_errors_exit_two(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_parse_grid():
    cells = parse_grid("n=4..8,k=2..n-1")
    assert cells == [(4, 2), (4, 3), (6, 2), (6, 3), (6, 4), (6, 5),
                     (8, 2), (8, 3), (8, 4), (8, 5), (8, 6), (8, 7)]
    assert parse_grid("n=20,k=4") == [(20, 4)]
    assert parse_grid("n=3..6,k=2..n/2") == [(4, 2), (6, 2), (6, 3)]


def test_flaw_predicate_examples():
    assert flaw_predicate(20, 4) and not flaw_predicate(20, 6) and not flaw_predicate(20, 19)


def test_bench_deterministic_csv(tmp_path, capsys):
    argv = ["bench", "--grid", "n=4..10,k=2..n-1", "--kinds", "unit,circle,euclidean"]
    code, first, _ = run(argv, capsys)
    code2, second, _ = run(argv + ["--jobs", "2"], capsys)
    assert code == code2 == 0
    assert first == second
    rows = list(csv.DictReader(io.StringIO(first)))
    assert list(rows[0]) == ["n", "k", "kind", "cost", "lb", "ub", "ratio", "feasible",
                             "flaw_predicate", "flaw_observed"]
    assert len(rows) == 3 * (2 + 4 + 6 + 8)
    assert all(r["feasible"] == "1" and r["flaw_predicate"] == r["flaw_observed"] for r in rows)
    out = tmp_path / "b.csv"
    run(argv + ["--out", str(out)], capsys)
    assert out.read_text() == first
