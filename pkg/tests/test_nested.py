import itertools

import pytest

from nestorders.family import Family, intervals, is_intersection_closed
from nestorders.fprec import PrecOrder, sprec
from nestorders.nested import (
    NestedOrders,
    enumerate_order_trees,
    extend,
    family_of,
    nested_from_orders,
    to_nested,
    validate,
)
from nestorders.orders import LinearOrder, ResourceGuardError, segment_family


def orders(*texts):
    return [LinearOrder.parse(t) for t in texts]


S_USUAL = sprec(PrecOrder.usual(5))


def test_sprec_usual_validates():
    rep = validate(S_USUAL, 1)
    assert rep.ok and rep.ok_strict


def test_missing_singleton_breaks_clause_1():
    s = S_USUAL.with_seqs(S_USUAL.seqs - {(4,)})
    rep = validate(s, 1)
    assert not rep.c1.ok
    assert rep.c1.violation == ((4,),)


def test_missing_pair_with_extension_kept_breaks_clause_3():
    assert (3, 1) in S_USUAL and (3, 2, 1) in S_USUAL
    s = S_USUAL.with_seqs(S_USUAL.seqs - {(3, 1)})
    assert not validate(s, 1).c3.ok


def test_too_long_sequence_flagged():
    s = S_USUAL.with_seqs(S_USUAL.seqs | {(4, 3, 2, 1)})
    assert not validate(s, 1).length.ok


def test_intervals_from_two_orders():
    s = nested_from_orders(orders("123", "321"))
    assert family_of(s, 1) == intervals(3)


def test_level_minus_one_is_ground():
    s = nested_from_orders(orders("123", "321"))
    assert family_of(s, -1) == Family(3, (0b111,))


def test_nested_from_orders_membership():
    s = nested_from_orders(orders("123", "321"))
    assert (3, 1, 2) in s
    assert validate(s, 1).ok_strict


def test_single_order():
    s = nested_from_orders(orders("12"))
    assert s.seqs == {(1,), (2,), (2, 1)}
    assert s.n == 0


def test_witness_json_round_trip():
    d = S_USUAL.to_json()
    assert d["n"] == 1
    assert d["seqs"] == sorted(d["seqs"])
    assert NestedOrders.from_json(d) == S_USUAL


def test_segment_families_inside_nested_family():
    for m in range(1, 5):
        perms = ["".join(map(str, p)) for p in itertools.permutations(range(1, m + 1))]
        for k in range(1, 4):
            for tup in itertools.product(perms, repeat=k):
                os_ = orders(*tup)
                assert segment_family(os_).issubfamily(family_of(nested_from_orders(os_), k - 1))


def test_extend_preserves_prefixes():
    ext = extend(S_USUAL, 1)
    assert validate(ext, 2).ok_strict
    assert {q for q in ext.seqs if len(q) <= 3} == S_USUAL.seqs
    assert family_of(S_USUAL, 1).issubfamily(family_of(ext, 2))


def test_extend_full_depth_family_is_unchanged_below():
    # on two points nothing of length 4 can exist, so extension adds nothing
    s = nested_from_orders(orders("12", "21"))
    assert extend(s, 1).seqs == s.seqs


def test_extend_rejects_invalid():
    s = S_USUAL.with_seqs(S_USUAL.seqs - {(2,)})
    with pytest.raises(ValueError):
        extend(s, 1)


def test_tree_counts():
    assert sum(1 for _ in enumerate_order_trees(2, 1)) == 2
    assert sum(1 for _ in enumerate_order_trees(3, 1)) == 12


def test_tree_guard():
    with pytest.raises(ResourceGuardError):
        next(enumerate_order_trees(7, 1))


def _trees(m, n):
    return list(enumerate_order_trees(m, n))


@pytest.mark.parametrize("m,n", [(1, 0), (2, 2), (3, 0), (3, 1), (3, 2), (4, 0), (4, 1)])
def test_trees_give_valid_families(m, n):
    for tree in _trees(m, n):
        s = to_nested(tree)
        rep = validate(s, n)
        assert rep.ok_strict, rep.to_json()
        f = family_of(s, n)
        assert is_intersection_closed(f)
        assert 0 in f.sets and f.full in f.sets
        if n >= 1:
            assert all(1 << i in f.sets for i in range(m))


def test_trees_m4_n2_exhaustive():
    assert len(_trees(4, 2)) == 576
    for tree in enumerate_order_trees(4, 2):
        s = to_nested(tree)
        assert validate(s, 2).ok_strict
        f = family_of(s, 2)
        assert is_intersection_closed(f) and 0 in f.sets


def test_family_monotone_in_level():
    for m in range(1, 5):
        for tree in enumerate_order_trees(m, 2):
            s = to_nested(tree)
            fams = [family_of(s, n) for n in range(-1, 3)]
            for a, b in zip(fams, fams[1:]):
                assert a.issubfamily(b)


def test_extend_monotone_exhaustive_small():
    for m in range(1, 5):
        for n in range(0, 3):
            for tree in enumerate_order_trees(m, n):
                s = to_nested(tree)
                e = extend(s, n)
                assert validate(e, n + 1).ok_strict
                assert family_of(s, n).issubfamily(family_of(e, n + 1))


def test_clause5_readings_reported_separately():
    s = nested_from_orders(orders("1234", "4321"))
    broken = s.with_seqs(s.seqs - {(3, 1, 2)})
    rep = validate(broken, 1)
    # (3,1) and (3,2) are now incomparable at prefix length k = n = 1
    assert rep.ok
    assert not rep.ok_strict
    assert not rep.c5[1].ok and rep.c5[0].ok
    assert rep.to_json()["comparability_by_k"]["1"]["ok"] is False
