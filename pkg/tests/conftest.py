"""Shared fixtures and independent oracles for the test suite."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import pytest

from flatspec import HWMatrix, build_hw_group, example

HALF = Fraction(1, 2)


def det_oracle(matrix) -> int:
    """Determinant by minor expansion with column-mask memoization.

    Independent of the Faddeev-LeVerrier route used by the package.
    """
    n = len(matrix)

    @lru_cache(maxsize=None)
    def expand(row: int, colmask: int) -> int:
        if row == n:
            return 1
        total = 0
        sign = 1
        for j in range(n):
            if colmask & (1 << j):
                if matrix[row][j]:
                    total += sign * matrix[row][j] * expand(row + 1, colmask & ~(1 << j))
                sign = -sign
        return total

    return expand(0, (1 << n) - 1)


def classical_hw_matrix() -> HWMatrix:
    return HWMatrix(n=3, rows=((HALF, HALF, 0), (0, HALF, HALF)))


def corpus_defs():
    """Labelled group definitions covering every catalog entry."""
    pairs = ["4.3", "4.5", "5.1", "5.5", "5.6", "5.7", "5.8"]
    out = []
    for key in pairs:
        first, second = example(key)
        out.append((first.label, first))
        out.append((second.label, second))
    for key in ["4.1(n=4,k=1)", "4.1(n=4,k=3)", "4.1(n=6,k=3)",
                "4.2(n=6,k=3,j=2)", "4.2h(n=4,h=2)", "4.2h(n=6,h=3)"]:
        defn = example(key)
        out.append((defn.label, defn))
    first, second = example("5.9(k=1)")
    out.append((first.label, first))
    out.append((second.label, second))
    hw = build_hw_group(classical_hw_matrix())
    out.append((hw.label, hw))
    return out


@pytest.fixture(scope="session")
def all_corpus_defs():
    return corpus_defs()
