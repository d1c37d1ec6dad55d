"""Binary Krawtchouk polynomial values, exact over Z.

Only integer evaluations are ever needed, so there is no polynomial-object
machinery: K_l^h(j) is computed from the closed form

    K_l^h(j) = sum_t (-1)^t C(j, t) C(h - j, l - t),

which equals the signed subset count sum over |L| = l of (-1)^{|L & I_o|}
for any h-set I and j-subset I_o.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from math import comb

SUBSET_ORACLE_CAP = 22


def _check_range(l: int, j: int, h: int) -> None:
    if not (0 <= l <= h and 0 <= j <= h):
        raise ValueError(f"need 0 <= l and j <= h, got l={l}, j={j}, h={h}")


@lru_cache(maxsize=None)
def krawtchouk(l: int, j: int, h: int) -> int:
    """K_l^h(j) by the closed form."""
    _check_range(l, j, h)
    return sum(
        (-1) ** t * comb(j, t) * comb(h - j, l - t) for t in range(min(j, l) + 1)
    )


def krawtchouk_subset_oracle(l: int, j: int, h: int) -> int:
    """Literal signed subset count; independent of the closed form.

    Enumerates every size-l subset of an h-set, so it is capped at h <= 22.
    """
    _check_range(l, j, h)
    if h > SUBSET_ORACLE_CAP:
        raise ValueError(f"subset oracle capped at h <= {SUBSET_ORACLE_CAP}")
    total = 0
    for subset in combinations(range(h), l):
        inter = sum(1 for x in subset if x < j)
        total += -1 if inter % 2 else 1
    return total


def diagonal_trace(p: int, n: int, n_fixed: int) -> int:
    """Exterior-power trace of the diagonal +-1 matrix fixing n_fixed coordinates.

    For diagonal B with n_B = n_fixed coordinates fixed, trace_p(B) equals
    K_p^n(n - n_B).
    """
    if not 0 <= n_fixed <= n:
        raise ValueError(f"fixed-coordinate count {n_fixed} out of range for n={n}")
    return krawtchouk(p, n - n_fixed, n)
