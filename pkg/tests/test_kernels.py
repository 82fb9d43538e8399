"""Compiled kernel vs pure-Python fallback: same answers everywhere."""

import os
import random
import subprocess
import sys

import pytest

from nestorders import _kernels_py as py
from nestorders import kernels

ext = kernels.ext
needs_ext = pytest.mark.skipif(ext is None, reason="compiled kernel not built")


def _rand_families(m, count, seed):
    rng = random.Random(seed)
    return [rng.getrandbits(1 << m) for _ in range(count)]


def test_backend_name():
    assert kernels.BACKEND in ("cython", "python")
    if os.environ.get("NESTORDERS_PURE") == "1":
        assert kernels.BACKEND == "python"


def test_pure_flag_forces_fallback():
    env = dict(os.environ, NESTORDERS_PURE="1")
    out = subprocess.run([sys.executable, "-c", "from nestorders import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_large_ground_uses_fallback():
    assert kernels._pick(7) is py
    memo, stats = {}, [0]
    full7 = (1 << (1 << 7)) - 1
    assert kernels.no_value(1 << 127, 7, memo, stats) == -1
    assert kernels.is_chain_fm(full7 & 0b1, 7)


@needs_ext
@pytest.mark.parametrize("m", range(0, 7))
def test_index_agrees(m):
    fams = list(range(1 << (1 << m))) if m <= 3 else _rand_families(m, 400 if m < 6 else 60, m)
    pm, ps, em, es = {}, [0], {}, [0]
    for fm in fams:
        assert py.no_value(fm, m, pm, ps) == ext.no_value(fm, m, em, es)


@needs_ext
@pytest.mark.parametrize("m", range(0, 7))
def test_bit_operations_agree(m):
    rng = random.Random(100 + m)
    for fm in _rand_families(m, 200, m):
        assert py.closure_fm(fm, m) == ext.closure_fm(fm, m)
        assert bool(py.is_chain_fm(fm, m)) == bool(ext.is_chain_fm(fm, m))
        assert py.canon_fm(fm, m)[0] == ext.canon_fm(fm, m)[0]
        y = rng.getrandbits(m) if m else 0
        assert py.restrict_fm(fm, m, y) == ext.restrict_fm(fm, m, y)
        if m:
            a_set = rng.getrandbits(m) | 1 << rng.randrange(m)
            a = rng.choice([i + 1 for i in range(m) if a_set >> i & 1])
            assert py.link_fm(fm, m, a_set, a) == ext.link_fm(fm, m, a_set, a)


@needs_ext
def test_canonical_permutations_are_witnesses():
    for fm in _rand_families(5, 200, 9):
        for k in (py, ext):
            cfm, perm = k.canon_fm(fm, 5)
            assert py.permute_fm(fm, perm) == cfm


@needs_ext
def test_rules_agree():
    rng = random.Random(4)
    for m in range(1, 7):
        prem = [rng.getrandbits(m) for _ in range(30)]
        concl = [1 << rng.randrange(m) for _ in range(30)]
        assert py.family_of_rules(m, prem, concl) == ext.family_of_rules(m, prem, concl)


def test_canon_guard():
    with pytest.raises(ValueError):
        py.canon_fm(1, 9)
