import json
import sys
import threading
import time

import pytest

from experiments import spheres
from experiments.growth import free_lie_dimensions, growth_table, tensor_series
from sullivan import report, serialize
from sullivan.bigraded import verify
from sullivan.errors import ModelError
from sullivan.log_manager import LogManager
from sullivan.workers import run_parallel


def test_run_parallel_keeps_input_order():
    def work(i):
        return i * i

    assert run_parallel(work, range(20), workers=4) == [i * i for i in range(20)]
    assert run_parallel(work, [], workers=4) == []
    assert run_parallel(work, [3], workers=4) == [9]
    assert run_parallel(work, range(5), workers=1) == [0, 1, 4, 9, 16]


def test_run_parallel_bounds_concurrency():
    lock = threading.Lock()
    active, peak = [0], [0]

    def work(i):
        with lock:
            active[0] += 1
            peak[0] = max(peak[0], active[0])
        time.sleep(0.01)
        with lock:
            active[0] -= 1
        return i

    assert run_parallel(work, range(12), workers=3) == list(range(12))
    assert 1 <= peak[0] <= 3


def test_run_parallel_propagates_errors():
    def work(i):
        if i == 3:
            raise ValueError("boom")
        return i

    with pytest.raises(ValueError, match="boom"):
        run_parallel(work, range(6), workers=3)


def test_morphism_round_trip(phi6):
    obj = serialize.morphism_to_json(phi6)
    back = serialize.morphism_from_json(phi6.model, json.loads(serialize.dumps(obj)))
    assert back.format() == phi6.format()


def test_malformed_json_is_a_model_error(wedge6):
    good = serialize.model_to_json(wedge6)
    with pytest.raises(ModelError):
        serialize.model_from_json({k: v for k, v in good.items() if k != "generators"})
    bad_term = dict(good, generators=[dict(good["generators"][0], diff=[{"coef": "x", "mono": []}])])
    with pytest.raises(ModelError):
        serialize.model_from_json(bad_term)
    with pytest.raises(ModelError):
        serialize.morphism_from_json(wedge6.cdga, {"cap": 6})


def test_save_json_is_atomic(tmp_path):
    path = tmp_path / "out.json"
    serialize.save_json({"b": 1, "a": [1, 2]}, path)
    serialize.save_json({"a": 3}, path)
    assert serialize.load_json(path) == {"a": 3}
    assert [p.name for p in tmp_path.iterdir()] == ["out.json"]


def test_generator_table(wedge6):
    table = report.generator_table(wedge6)
    assert table["total"].to_dict() == {2: 1, 3: 3, 4: 2, 5: 3, 6: 6}
    assert table.loc[6].drop("total").to_dict() == {0: 0, 1: 0, 2: 4, 3: 2}


def test_text_reports(wedge6):
    result = verify(wedge6)
    text = report.format_build(wedge6, result)
    assert text.splitlines()[0] == "model wedge-s2-s3-s3 cap=6 generators=15 stages=4"
    assert "H dims: 1,0,1,2,0,0" in text
    assert "verify: PASS" in text
    cohom = report.cohomology_table(wedge6, result)
    assert (cohom["computed"] == cohom["expected"]).all()


def test_log_manager(tmp_path):
    with LogManager(tmp_path / "logs") as log:
        log.event("group", rank=0)
        with log.step("model_build", cap=6) as rec:
            rec["passed"] = True
        with pytest.raises(ValueError):
            with log.step("selfeq"):
                raise ValueError("boom")
        path = log.path
    records = [json.loads(line) for line in path.read_text().splitlines()]
    assert [r["event"] for r in records] == ["group", "model_build", "selfeq"]
    assert records[1]["cap"] == 6 and records[1]["passed"] is True
    assert records[1]["outcome"] == "ok" and records[1]["seconds"] >= 0
    assert records[2]["outcome"] == "ValueError"


def test_log_rotation(tmp_path):
    old = tmp_path / "logs" / "run_20000101_000000.jsonl"
    old.parent.mkdir()
    old.write_text("{}\n")
    log = LogManager(tmp_path / "logs")
    log.close()
    assert log.rotated == 1
    assert (tmp_path / "logs" / "archive" / old.name).exists()


def test_free_lie_dimensions():
    assert tensor_series([1], 4) == [1, 1, 1, 1, 1]
    # one odd generator: [e, e] survives, nothing after
    assert free_lie_dimensions([1], 4) == {1: 1, 2: 1, 3: 0, 4: 0}
    assert free_lie_dimensions([2, 2], 6) == {1: 0, 2: 2, 3: 0, 4: 1, 5: 0, 6: 2}
    assert free_lie_dimensions([1, 2, 2], 5) == {1: 1, 2: 3, 3: 2, 4: 3, 5: 6}


def test_spheres_experiment_prints_cohomology(monkeypatch, capsys):
    monkeypatch.setattr(sys, "argv", ["spheres", "5"])
    spheres.main()
    out = capsys.readouterr().out
    assert out.count("computed") == len(spheres.SPECS)
    assert "verify: PASS" in out


def test_growth_table_matches():
    df = growth_table(cap=6)
    assert df["match"].all()
    assert df.loc[6, "generators"] == 6
