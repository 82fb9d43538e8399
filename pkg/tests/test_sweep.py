import json

import pytest

from nestorders.explore import explore
from nestorders.index import Memo
from nestorders.orders import ResourceGuardError
from nestorders.sweep import sweep


def test_m3_all_oracle_agrees():
    rep = sweep(3, oracle=True, memo=Memo())
    agg = rep.aggregates()
    assert agg["records"] == 256
    assert agg["oracle_checked"] == 256 and agg["oracle_disagreements"] == 0
    assert rep.findings == []


def test_m4_closed_classification_agrees():
    rep = sweep(4, "closed", memo=Memo(), brackets=False)
    agg = rep.aggregates()
    assert agg["class4_checked"] == agg["records"] == 2480
    assert agg["class4_agreement"] == 2480


def test_m4_all_histogram():
    rep = sweep(4, memo=Memo(), brackets=False)
    assert rep.histogram == {-1: 2, 0: 298, 1: 16212, 2: 44928, 3: 4096}


@pytest.mark.slow
def test_m4_brackets_never_invert():
    rep = sweep(4, memo=Memo(), jobs=2)
    assert len(rep.records) == 65536
    assert all(r["bracket"][0] <= r["bracket"][1] for r in rep.records)
    assert rep.aggregates()["bracket_status"].get("contradiction", 0) == 0


def test_jobs_do_not_change_records():
    one = sweep(3, jobs=1, memo=Memo())
    three = sweep(3, jobs=3, memo=Memo())
    assert json.dumps(one.records) == json.dumps(three.records)


def test_parallel_memo_is_merged():
    memo = Memo()
    sweep(3, jobs=2, memo=memo, brackets=False)
    assert len(memo) > 0
    again = sweep(3, jobs=2, memo=memo, brackets=False)
    assert again.expansions == 0


def test_warm_cache_fewer_expansions(tmp_path):
    path = str(tmp_path / "memo.jsonl")
    cold = Memo()
    a = sweep(4, memo=cold, brackets=False)
    cold.save(path)
    warm = Memo()
    warm.load(path)
    b = sweep(4, memo=warm, brackets=False)
    assert a.records == b.records
    assert b.expansions < a.expansions


def test_sampled_sweep_is_seeded():
    a = sweep(5, sample=40, seed=7, memo=Memo(), brackets=False)
    b = sweep(5, sample=40, seed=7, memo=Memo(), brackets=False)
    c = sweep(5, sample=40, seed=8, memo=Memo(), brackets=False)
    assert a.records == b.records != c.records


def test_guards():
    with pytest.raises(ResourceGuardError):
        sweep(5)
    with pytest.raises(ResourceGuardError):
        sweep(7, sample=3)
    with pytest.raises(ValueError):
        sweep(3, "weird")


# -- exploration ------------------------------------------------------------

def test_explore_uniform_rows():
    rep = explore(1, Memo())
    row = next(r for r in rep["rows"] if (r["j"], r["i"]) == (5, 2))
    assert row["recursion"] == row["direct"]
    assert row["witness_revalidated"] is True
    assert rep["findings"] == []


def test_explore_problem2_battery():
    rep = explore(2, Memo())
    assert rep["recursion"] == 1 and rep["direct"] == 1
    assert rep["two_orders"] is None and rep["onemin"] is None
    assert rep["bracket"]["lower"] == 1
    assert rep["bracket"]["upper"] <= 4


def test_explore_problem3_small_budget():
    rep = explore(3, Memo(), budget=50, seed=1)
    assert rep["disagreements"] == []
    assert rep["checked"] == 2 + 4 + 16 + 256 + 100


def test_explore_budget_guard():
    with pytest.raises(ResourceGuardError):
        explore(1, Memo(), budget=9)
    with pytest.raises(ValueError):
        explore(4, Memo())
