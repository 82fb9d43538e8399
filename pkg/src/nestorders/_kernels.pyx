# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels over family bitsets (m <= 6, one uint64 per family).

Mirrors ``_kernels_py`` exactly; callers go through ``nestorders.kernels``.
"""

from itertools import permutations

from libc.stdint cimport uint64_t

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil

cdef enum:
    MAXM = 6
    NPERMS = 874          # 0! + 1! + ... + 6!

MAX_M = MAXM
MAX_CANON_M = MAXM

cdef unsigned char _img[NPERMS][64]
cdef int _perm_start[MAXM + 2]
_perm_tuples = []
cdef int _order[MAXM + 1][64]     # nonempty subsets, largest first


cdef void _build_tables():
    cdef int m, idx = 0, b, i, c, k
    for m in range(MAXM + 1):
        _perm_start[m] = idx
        for p in permutations(range(1, m + 1)):
            _perm_tuples.append(tuple(p))
            for b in range(1 << m):
                c = 0
                for i in range(m):
                    if (b >> i) & 1:
                        c |= 1 << (p[i] - 1)
                _img[idx][b] = c
            idx += 1
        subs = sorted(range(1, 1 << m), key=lambda a: (-bin(a).count("1"), a))
        for k in range(len(subs)):
            _order[m][k] = subs[k]
    _perm_start[MAXM + 1] = idx


_build_tables()


cdef inline int _popcount(uint64_t x) nogil:
    return __builtin_popcountll(x)


cdef inline int _compress(int mask, int onto) nogil:
    cdef int out = 0, j = 0, low
    while onto:
        low = onto & -onto
        if mask & low:
            out |= 1 << j
        j += 1
        onto ^= low
    return out


cdef inline uint64_t _link(uint64_t fm, int a_set, int abit) nogil:
    cdef int keep = a_set & ~abit
    cdef int b
    cdef uint64_t out = 0
    while fm:
        b = __builtin_ctzll(fm)
        fm &= fm - 1
        if b & abit:
            out |= (<uint64_t>1) << _compress(b & keep, keep)
    return out


cdef bint _is_chain(uint64_t fm) nogil:
    cdef int ms[64]
    cdef int n = 0, i, j, t
    while fm:
        ms[n] = __builtin_ctzll(fm)
        fm &= fm - 1
        n += 1
    # insertion sort by popcount
    for i in range(1, n):
        t = ms[i]
        j = i - 1
        while j >= 0 and _popcount(ms[j]) > _popcount(t):
            ms[j + 1] = ms[j]
            j -= 1
        ms[j + 1] = t
    for i in range(n - 1):
        if ms[i] & ~ms[i + 1]:
            return False
    return True


cdef inline bint _better(uint64_t x, uint64_t y) nogil:
    cdef uint64_t d = x ^ y
    return d != 0 and (x & d & (~d + 1)) != 0


cdef uint64_t _canon(uint64_t fm, int m, int *which) nogil:
    cdef int ms[64]
    cdef int n = 0, i, p
    cdef uint64_t x, best = 0
    cdef bint have = False
    while fm:
        ms[n] = __builtin_ctzll(fm)
        fm &= fm - 1
        n += 1
    for p in range(_perm_start[m], _perm_start[m + 1]):
        x = 0
        for i in range(n):
            x |= (<uint64_t>1) << _img[p][ms[i]]
        if not have or _better(x, best):
            best = x
            which[0] = p
            have = True
    return best


def memo_key(fm, int m):
    return (fm << 5) | m


def link_fm(uint64_t fm, int m, int a_set, int a):
    return _link(fm, a_set, 1 << (a - 1))


def restrict_fm(uint64_t fm, int m, int y):
    cdef uint64_t out = 0
    cdef int b
    while fm:
        b = __builtin_ctzll(fm)
        fm &= fm - 1
        out |= (<uint64_t>1) << _compress(b & y, y)
    return out


def is_chain_fm(uint64_t fm, int m):
    return _is_chain(fm)


def closure_fm(uint64_t fm, int m):
    cdef uint64_t cur, rest, other
    cdef int b, c
    fm |= (<uint64_t>1) << ((1 << m) - 1)
    while True:
        cur = fm
        rest = cur
        while rest:
            b = __builtin_ctzll(rest)
            rest &= rest - 1
            other = cur
            while other:
                c = __builtin_ctzll(other)
                other &= other - 1
                fm |= (<uint64_t>1) << (b & c)
        if fm == cur:
            return fm


def canon_fm(uint64_t fm, int m):
    cdef int which = 0
    cdef uint64_t best = _canon(fm, m, &which)
    return best, _perm_tuples[which]


cdef int _no_value(uint64_t fm, int m, dict memo, list stats) except -2:
    cdef uint64_t full = (<uint64_t>1) << ((1 << m) - 1)
    cdef uint64_t cfm
    cdef int which, k, a_set, size, cur, best, v, rest, low
    if fm & ~full == 0:
        return -1
    key = ((<object>fm) << 5) | m
    hit = memo.get(key)
    if hit is not None:
        return hit
    if _is_chain(fm):
        memo[key] = 0
        return 0
    cfm = _canon(fm, m, &which)
    ckey = ((<object>cfm) << 5) | m
    hit = memo.get(ckey)
    if hit is not None:
        memo[key] = hit
        return hit
    stats[0] += 1
    best = -1
    for k in range((1 << m) - 1):
        a_set = _order[m][k]
        size = _popcount(a_set)
        if size - 1 <= best:
            break
        cur = size
        rest = a_set
        while rest:
            low = rest & -rest
            rest ^= low
            v = _no_value(_link(fm, a_set, low), size - 1, memo, stats)
            if v < cur:
                cur = v
                if cur + 1 <= best:
                    break
        if cur + 1 > best:
            best = cur + 1
    memo[key] = best
    memo[ckey] = best
    return best


def no_value(uint64_t fm, int m, dict memo, list stats):
    return _no_value(fm, m, memo, stats)


def family_of_rules(int m, premises, conclusions):
    cdef int n = len(premises), i, a
    cdef int ps[4096]
    cdef int cs[4096]
    cdef uint64_t out = 0
    if n > 4096:
        raise ValueError("too many rules for the compiled kernel")
    for i in range(n):
        ps[i] = premises[i]
        cs[i] = conclusions[i]
    for a in range(1 << m):
        for i in range(n):
            if (a & ps[i]) == ps[i] and not (a & cs[i]):
                break
        else:
            out |= (<uint64_t>1) << a
    return out
