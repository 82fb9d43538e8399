import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nestorders import kernels
from nestorders.family import Family, full_cube, intervals, mask_of, parse_family
from nestorders.fprec import PrecOrder, fprec
from nestorders.index import Memo
from nestorders.orders import (
    LinearOrder,
    ResourceGuardError,
    full_cube_orders,
    full_cube_selectors,
    initial_segment,
    intersect_segments,
    is_representable,
    min_orders,
    proper_orders,
    proper_selectors,
    search_orders,
    segment_family,
)


def lo(text):
    return LinearOrder.parse(text)


def test_initial_segments():
    assert initial_segment(lo("1234"), 2) == mask_of([1, 2])
    assert initial_segment(lo("4321"), 3) == mask_of([3, 4])
    assert initial_segment(lo("1423"), 4) == mask_of([1, 4])


def test_parse_and_format_orders():
    assert str(lo("53241")) == "53241"
    assert lo("[2,1,3]").seq == (2, 1, 3)
    assert LinearOrder(tuple(range(10, 0, -1))).to_json() == list(range(10, 0, -1))
    with pytest.raises(ValueError):
        lo("1224")


@pytest.mark.parametrize("family,orders", [
    (None, ("123456", "654321")),
    ("4: 12,23,34,123,234", ("1234", "4321")),
    ("4: 12,13,14,123,124", ("1423", "1324")),
    ("4: 12,123,124", ("3124", "4213")),
])
def test_order_witness_vectors(family, orders):
    f = intervals(6) if family is None else parse_family(family)
    rep = is_representable(f, [lo(o) for o in orders])
    assert rep.ok
    for a, sel in rep.selectors.items():
        assert intersect_segments([lo(o) for o in orders], sel) == a


def test_failing_sets_reported():
    rep = is_representable(parse_family("3: 13"), [lo("123")])
    assert not rep.ok and rep.failing == [mask_of([1, 3])]


def test_fprec_usual_needs_three_orders():
    res = search_orders(fprec(PrecOrder.usual(5)), 2)
    assert res.witness is None
    assert res.tuples_covered == 14400
    assert res.prefixes_examined == 120


def test_intervals_two_orders_found():
    res = search_orders(intervals(5), 2)
    assert res.witness is not None
    assert is_representable(intervals(5), res.witness).ok


def test_chain_one_order():
    f = parse_family("4: 2,23,234,1234")
    res = search_orders(f, 1)
    assert res.witness is not None and res.witness[0].seq == (2, 3, 4, 1)


def test_chain_with_empty_set_needs_two_orders():
    f = parse_family("3: 0,1,12")
    assert search_orders(f, 1).witness is None
    assert search_orders(f, 2).witness is not None


def test_search_guard():
    with pytest.raises(ResourceGuardError):
        search_orders(Family(7, ()), 2)
    with pytest.raises(ResourceGuardError):
        search_orders(Family(6, ()), 4)
    with pytest.raises(ValueError):
        search_orders(Family(3, ()), 0)


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 4).flatmap(lambda m: st.tuples(st.just(m), st.integers(0, (1 << (1 << m)) - 1))),
       st.integers(1, 3))
def test_search_soundness(args, k):
    m, bits = args
    f = Family.from_bits(m, bits)
    res = search_orders(f, k)
    if res.witness is not None:
        assert len(res.witness) == k
        assert is_representable(f, res.witness).ok


def test_search_complete_against_brute_force_m3():
    perms = [LinearOrder(p) for p in itertools.permutations(range(1, 4))]
    for fm in range(256):
        f = Family.from_bits(3, fm)
        for k in (1, 2):
            brute = any(is_representable(f, list(t)).ok for t in itertools.product(perms, repeat=k))
            assert (search_orders(f, k).witness is not None) == brute


def test_coherence_and_no_inversion_m4():
    memo = Memo()
    perms = [LinearOrder(p) for p in itertools.permutations(range(1, 5))]
    reps = sorted({kernels.canon_fm(fm, 4)[0] for fm in range(1 << 16)})
    for cfm in reps:
        f = Family.from_bits(4, cfm)
        for k in (1, 2):
            res = search_orders(f, k)
            if res.witness is None:
                continue
            assert kernels.no_value(cfm, 4, memo.table, memo.stats) <= k - 1
            for extra in perms:
                assert is_representable(f, res.witness + [extra]).ok
            break


# -- explicit constructions -------------------------------------------------

def test_proper_orders_m4():
    missing = mask_of([1, 2, 3])
    orders = proper_orders(4, missing)
    assert len(orders) == 3
    assert [o.seq[-2:] for o in orders] == [(4, 1), (4, 2), (4, 3)]
    for a in range(16):
        if a == missing:
            continue
        sel = proper_selectors(orders, missing, a)
        assert intersect_segments(orders, sel) == a
    assert not is_representable(Family(4, (missing,)), orders).ok


def test_proper_selector_recipes():
    missing = mask_of([1, 2, 3])
    orders = proper_orders(4, missing)
    # n = 4 in A: each order selects k if k in A, else n
    assert proper_selectors(orders, missing, mask_of([1, 2, 4])) == (1, 2, 4)
    # n not in A: k if k in A, else the element just below n
    assert proper_selectors(orders, missing, mask_of([2])) == (3, 2, 2)


@pytest.mark.parametrize("m", range(3, 7))
def test_proper_orders_general(m):
    full = (1 << m) - 1
    for missing in (full & ~(1 << i) for i in range(m)):
        orders = proper_orders(m, missing)
        fam = Family.from_masks(m, [a for a in range(1 << m) if a != missing])
        assert is_representable(fam, orders).ok


def test_proper_orders_rejects_bad_missing():
    with pytest.raises(ValueError):
        proper_orders(4, mask_of([1, 2]))


@pytest.mark.parametrize("m", range(2, 7))
def test_full_cube_orders(m):
    orders = full_cube_orders(m)
    assert len(orders) == m
    assert [o.seq[-1] for o in orders] == list(range(1, m + 1))
    assert is_representable(full_cube(m), orders).ok
    for a in range(1, 1 << m):
        assert intersect_segments(orders, full_cube_selectors(orders, a)) == a


def test_segment_family_of_two_opposite_orders_is_intervals():
    assert segment_family([lo("1234"), lo("4321")]) == intervals(4)


def test_min_orders():
    assert min_orders(intervals(4), 3).k == 2
    assert min_orders(full_cube(3), 3).k == 3
    assert min_orders(full_cube(4), 3) is None
