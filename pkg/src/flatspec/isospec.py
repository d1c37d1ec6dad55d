"""Spectral comparison of two groups up to a finite eigenvalue cutoff.

Verdicts are finite certificates: "equal up to cutoff" never claims full
isospectrality.  The pairing criterion checks the termwise identity
trace_p(B) e_{mu,B} = trace_p(B') e_{mu,B'} under a holonomy bijection, which
when it holds for every mu proves p-isospectrality outright; here it is
verified for mu up to the cutoff.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Iterable, Optional

from .crystal import (
    GroupDefinition,
    PointGroupElement,
    close_point_group,
    extend_with_characters,
    require_valid,
)
from .exact_linear import det, trace_p
from .spectral import (
    betti_row,
    character_sum,
    multiplicity,
    tallies_equal,
    tally_scale,
)

DEFAULT_MU_MAX = 10


@dataclass(frozen=True)
class PVerdict:
    equal_up_to_cutoff: bool
    witness: Optional[tuple[int, int, int, int]]  # (p, mu, d, d')


@dataclass(frozen=True)
class ComparisonReport:
    dim: int
    mu_max: int
    p_verdicts: tuple[tuple[int, PVerdict], ...]
    betti_first: tuple[int, ...]
    betti_second: tuple[int, ...]
    orientable_first: bool
    orientable_second: bool

    def verdicts(self) -> dict[int, PVerdict]:
        return dict(self.p_verdicts)

    def equal_p_set(self) -> tuple[int, ...]:
        return tuple(p for p, v in self.p_verdicts if v.equal_up_to_cutoff)

    def to_json_dict(self) -> dict:
        return {
            "dim": self.dim,
            "mu_max": self.mu_max,
            "note": "verdicts are equality up to cutoff, not full isospectrality",
            "verdicts": {
                str(p): {
                    "equal_up_to_cutoff": v.equal_up_to_cutoff,
                    "witness": (
                        None
                        if v.witness is None
                        else {
                            "p": v.witness[0],
                            "mu": v.witness[1],
                            "d_first": v.witness[2],
                            "d_second": v.witness[3],
                        }
                    ),
                }
                for p, v in self.p_verdicts
            },
            "betti": {
                "first": list(self.betti_first),
                "second": list(self.betti_second),
            },
            "orientable": {
                "first": self.orientable_first,
                "second": self.orientable_second,
            },
        }


def is_orientable(defn: GroupDefinition) -> bool:
    return all(det(el.matrix) == 1 for el in close_point_group(defn))


def compare_spectra(
    first: GroupDefinition,
    second: GroupDefinition,
    p_set: Optional[Iterable[int]] = None,
    mu_max: int = DEFAULT_MU_MAX,
) -> ComparisonReport:
    """Per-p verdicts of spectral equality for mu <= mu_max.

    The witness for an unequal p is the smallest mu where the multiplicities
    differ, so witnesses are deterministic.
    """
    require_valid(first)
    require_valid(second)
    if first.dim != second.dim:
        raise ValueError("cannot compare groups of different dimensions")
    ps = sorted(set(p_set)) if p_set is not None else list(range(first.dim + 1))
    for p in ps:
        if not 0 <= p <= first.dim:
            raise ValueError(f"form degree {p} out of range")
    verdicts = []
    for p in ps:
        witness = None
        for mu in range(mu_max + 1):
            d1 = multiplicity(first, p, mu)
            d2 = multiplicity(second, p, mu)
            if d1 != d2:
                witness = (p, mu, d1, d2)
                break
        verdicts.append((p, PVerdict(witness is None, witness)))
    return ComparisonReport(
        dim=first.dim,
        mu_max=mu_max,
        p_verdicts=tuple(verdicts),
        betti_first=betti_row(first),
        betti_second=betti_row(second),
        orientable_first=is_orientable(first),
        orientable_second=is_orientable(second),
    )


@dataclass(frozen=True)
class HolonomyPairing:
    """A bijection between two point groups, identity matched to identity."""

    pairs: tuple[tuple[PointGroupElement, PointGroupElement], ...]

    def __post_init__(self):
        firsts = [a for a, _ in self.pairs]
        seconds = [b for _, b in self.pairs]
        if len(set(firsts)) != len(firsts) or len(set(seconds)) != len(seconds):
            raise ValueError("pairing is not a bijection")
        for a, b in self.pairs:
            if a.is_identity != b.is_identity:
                raise ValueError("pairing must match identity with identity")


def pairing_from_words(
    first: GroupDefinition,
    second: GroupDefinition,
    word_map: dict[tuple[int, ...], tuple[int, ...]],
) -> HolonomyPairing:
    """Build a pairing from a map of generator words; unlisted words map to
    themselves."""
    by_word_1 = {el.word: el for el in close_point_group(first)}
    by_word_2 = {el.word: el for el in close_point_group(second)}
    pairs = []
    for word, el in by_word_1.items():
        target = word_map.get(word, word)
        pairs.append((el, by_word_2[target]))
    return HolonomyPairing(pairs=tuple(pairs))


def identity_pairing(first: GroupDefinition, second: GroupDefinition) -> HolonomyPairing:
    """Match elements with equal matrix parts; the point groups must coincide."""
    by_matrix = {el.matrix: el for el in close_point_group(second)}
    pairs = []
    for el in close_point_group(first):
        if el.matrix not in by_matrix:
            raise ValueError("point groups differ; no identity pairing exists")
        pairs.append((el, by_matrix[el.matrix]))
    return HolonomyPairing(pairs=tuple(pairs))


def check_pairing_criterion(
    first: GroupDefinition,
    second: GroupDefinition,
    pairing: HolonomyPairing,
    p: int,
    mu_max: int = DEFAULT_MU_MAX,
) -> bool:
    """Termwise trace_p(B) e_{mu,B} = trace_p(B') e_{mu,B'} for all mu <= mu_max.

    True implies the compare_spectra verdict for this p at the same cutoff.
    """
    require_valid(first)
    require_valid(second)
    if len(pairing.pairs) != len(close_point_group(first)):
        raise ValueError("pairing does not cover the whole point group")
    for a, b in pairing.pairs:
        wa = trace_p(a.matrix, p)
        wb = trace_p(b.matrix, p)
        for mu in range(mu_max + 1):
            ta = tally_scale(character_sum(a, mu), wa)
            tb = tally_scale(character_sum(b, mu), wb)
            if not tallies_equal(ta, tb):
                return False
    return True


@dataclass(frozen=True)
class DualityReport:
    orientable: bool
    holds: bool
    counterexample: Optional[tuple[int, int, int, int]]  # (p, mu, d_p, d_{n-p})


def duality_check(defn: GroupDefinition, mu_max: int = DEFAULT_MU_MAX) -> DualityReport:
    """Check d_{p,mu} = d_{n-p,mu} for mu <= mu_max.

    Holds for orientable groups (trace_p = det * trace_{n-p}); for
    non-orientable groups the first violating (p, mu) is reported.
    """
    require_valid(defn)
    n = defn.dim
    orientable = is_orientable(defn)
    for p in range(n // 2 + 1):
        for mu in range(mu_max + 1):
            d1 = multiplicity(defn, p, mu)
            d2 = multiplicity(defn, n - p, mu)
            if d1 != d2:
                return DualityReport(orientable, False, (p, mu, d1, d2))
    return DualityReport(orientable, True, None)


def kunneth_betti(defn: GroupDefinition, k: int, h: int) -> int:
    """Betti number of the product with a k-torus.

    Computed as sum_i beta_i(M) C(k, h-i) and cross-checked against the
    Betti number of the group extended by k torus coordinates.
    """
    require_valid(defn)
    if k < 0:
        raise ValueError("torus factor count must be nonnegative")
    if not 0 <= h <= defn.dim + k:
        raise ValueError(f"degree {h} out of range for dimension {defn.dim + k}")
    row = betti_row(defn)
    value = sum(
        row[i] * comb(k, h - i) for i in range(len(row)) if 0 <= h - i <= k
    )
    extended = extend_with_characters(defn, [], trivial_count=k)
    direct = multiplicity(extended, h, 0)
    if direct != value:
        raise ArithmeticError(
            f"Kunneth value {value} disagrees with direct Betti {direct}"
        )
    return value
