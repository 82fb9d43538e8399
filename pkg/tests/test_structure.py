import itertools
import random

import pytest

from nestorders.family import Family, full_cube, intersection_closure, mask_of, parse_family, relabel
from nestorders.structure import classify4, contains_cycle


def test_triangle():
    w = contains_cycle(parse_family("3: 12,23,13"))
    assert w is not None and w.support == 0b111
    assert sorted(w.cycle) == [1, 2, 3]


def test_three_triples_trace_a_cycle_on_234():
    w = contains_cycle(parse_family("4: 123,124,134"))
    assert w is not None and w.support == mask_of([2, 3, 4])


def test_path_has_no_cycle():
    assert contains_cycle(parse_family("4: 12,23,34")) is None


def test_witness_edges_are_traces():
    rng = random.Random(3)
    for _ in range(300):
        f = Family.from_bits(5, rng.getrandbits(32))
        w = contains_cycle(f)
        if w is None:
            continue
        traces = {a & w.support for a in f.sets}
        k = len(w.cycle)
        assert k == bin(w.support).count("1") >= 3
        for i in range(k):
            assert mask_of([w.cycle[i], w.cycle[(i + 1) % k]]) in traces


def test_cycle_relabeling_invariant():
    rng = random.Random(11)
    perms = list(itertools.permutations(range(1, 5)))
    for _ in range(500):
        f = Family.from_bits(4, rng.getrandbits(16))
        p = perms[rng.randrange(24)]
        assert (contains_cycle(f) is None) == (contains_cycle(relabel(f, p)) is None)


def test_cycle_monotone_under_superfamily():
    rng = random.Random(12)
    for _ in range(300):
        m = rng.randint(3, 5)
        bits = rng.getrandbits(1 << m)
        more = bits | rng.getrandbits(1 << m)
        if contains_cycle(Family.from_bits(m, bits)) is not None:
            assert contains_cycle(Family.from_bits(m, more)) is not None


def test_classify_examples():
    assert classify4(full_cube(4)) == 3
    assert classify4(intersection_closure(parse_family("4: 12,23,13"))) == 2
    assert classify4(parse_family("4: 0,1,12,123,1234")) == 0
    assert classify4(intersection_closure(parse_family("4: 12,23,34"))) == 1


def test_classify_preconditions():
    with pytest.raises(ValueError):
        classify4(full_cube(3))
    with pytest.raises(ValueError):
        classify4(parse_family("4: 12,23"))
