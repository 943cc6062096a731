"""Occupation-number basis of the N-fermion sector and its excitation tables.

Basis vector ``I = (i_1 < ... < i_N)`` is ``a*_{i_1} ... a*_{i_N} |0>``, i.e.
the wedge product ``e_{i_1} ^ ... ^ e_{i_N}``. States are ordered
lexicographically in the occupied-index tuples.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from math import comb

import numpy as np


class FockError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FockBasis:
    d: int
    N: int
    states: tuple[int, ...]
    index: dict[int, int] = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.states)

    def occupations(self) -> np.ndarray:
        """``(dim, N)`` array of occupied orbital indices, ascending per row."""
        return _occupations(self.d, self.N)

    def __len__(self) -> int:
        return len(self.states)


@lru_cache(maxsize=64)
def enumerate_basis(d: int, N: int) -> FockBasis:
    if d < 1 or N < 0:
        raise FockError(f"need d >= 1 and N >= 0, got d={d}, N={N}")
    if N > d:
        raise FockError(f"cannot place N={N} fermions in d={d} orbitals")
    states = tuple(sum(1 << i for i in occ) for occ in combinations(range(d), N))
    assert len(states) == comb(d, N)
    return FockBasis(d, N, states, {s: k for k, s in enumerate(states)})


@lru_cache(maxsize=64)
def _occupations(d: int, N: int) -> np.ndarray:
    occ = np.array(list(combinations(range(d), N)), dtype=np.intp).reshape(-1, N)
    occ.setflags(write=False)
    return occ


def _annihilate(state: int, j: int) -> tuple[int, int]:
    if not (state >> j) & 1:
        return 0, 0
    sign = -1 if bin(state & ((1 << j) - 1)).count("1") % 2 else 1
    return state ^ (1 << j), sign


def _create(state: int, i: int) -> tuple[int, int]:
    if (state >> i) & 1:
        return 0, 0
    sign = -1 if bin(state & ((1 << i) - 1)).count("1") % 2 else 1
    return state | (1 << i), sign


@dataclass(frozen=True)
class OneBodyTable:
    """All non-zero matrix elements of ``a*_i a_j``: ``<dst| a*_i a_j |src> = sign``."""

    src: np.ndarray
    dst: np.ndarray
    i: np.ndarray
    j: np.ndarray
    sign: np.ndarray


@dataclass(frozen=True)
class TwoBodyTable:
    """Non-zero elements of ``a*_p a*_q a_s a_r`` (ordered, p != q, r != s)."""

    src: np.ndarray
    dst: np.ndarray
    p: np.ndarray
    q: np.ndarray
    r: np.ndarray
    s: np.ndarray
    sign: np.ndarray


@lru_cache(maxsize=32)
def one_body_table(d: int, N: int) -> OneBodyTable:
    basis = enumerate_basis(d, N)
    rows = []
    for k, state in enumerate(basis.states):
        for j in range(d):
            s1, sg1 = _annihilate(state, j)
            if not sg1:
                continue
            for i in range(d):
                s2, sg2 = _create(s1, i)
                if sg2:
                    rows.append((k, basis.index[s2], i, j, sg1 * sg2))
    arr = np.array(rows, dtype=np.intp).reshape(-1, 5)
    return OneBodyTable(*(arr[:, c].copy() for c in range(5)))


@lru_cache(maxsize=16)
def two_body_table(d: int, N: int) -> TwoBodyTable:
    basis = enumerate_basis(d, N)
    rows = []
    for k, state in enumerate(basis.states):
        for r in range(d):
            s1, sg1 = _annihilate(state, r)
            if not sg1:
                continue
            for s in range(d):
                s2, sg2 = _annihilate(s1, s)
                if not sg2:
                    continue
                for q in range(d):
                    s3, sg3 = _create(s2, q)
                    if not sg3:
                        continue
                    for p in range(d):
                        s4, sg4 = _create(s3, p)
                        if sg4:
                            rows.append(
                                (k, basis.index[s4], p, q, r, s, sg1 * sg2 * sg3 * sg4)
                            )
    arr = np.array(rows, dtype=np.intp).reshape(-1, 7)
    return TwoBodyTable(*(arr[:, c].copy() for c in range(7)))
