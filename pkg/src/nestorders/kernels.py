"""Backend selection for the bitset kernels.

The compiled extension is used for ``m <= 6`` when it imports; everything
else (and every call when ``NESTORDERS_PURE=1`` is set) goes to the
pure-Python twin.  ``BACKEND`` names what was picked.
"""

from __future__ import annotations

import os

from . import _kernels_py as py

try:
    if os.environ.get("NESTORDERS_PURE") == "1":
        raise ImportError("pure backend forced")
    from . import _kernels as ext  # type: ignore[attr-defined]
except ImportError:
    ext = None

BACKEND = "cython" if ext is not None else "python"
EXT_MAX_M = 6

members = py.members
compress = py.compress
memo_key = py.memo_key
permute_fm = py.permute_fm
subsets_by_size = py.subsets_by_size


def _pick(m: int):
    return ext if ext is not None and m <= EXT_MAX_M else py


def link_fm(fm: int, m: int, a_set: int, a: int) -> int:
    return _pick(m).link_fm(fm, m, a_set, a)


def restrict_fm(fm: int, m: int, y: int) -> int:
    return _pick(m).restrict_fm(fm, m, y)


def is_chain_fm(fm: int, m: int) -> bool:
    return bool(_pick(m).is_chain_fm(fm, m))


def closure_fm(fm: int, m: int) -> int:
    return _pick(m).closure_fm(fm, m)


def canon_fm(fm: int, m: int) -> tuple[int, tuple[int, ...]]:
    return _pick(m).canon_fm(fm, m)


def no_value(fm: int, m: int, memo: dict, stats: list) -> int:
    return _pick(m).no_value(fm, m, memo, stats)


def family_of_rules(m: int, premises: list[int], conclusions: list[int]) -> int:
    return _pick(m).family_of_rules(m, premises, conclusions)
