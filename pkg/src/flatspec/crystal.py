"""Bieberbach groups over the canonical lattice Z^n.

A group is specified by affine generators gamma_i = B_i L_{b_i} where B_i is
a signed permutation (the symmetries of Z^n) and b_i is a rational
translation, together with all lattice translations.  This module closes the
point group, decides torsion-freeness with translation lattice Z^n, computes
first homology, and provides the constructors used by the built-in corpus.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import prod
from typing import Sequence

from .exact_linear import (
    IntMatrix,
    RatVector,
    as_int_matrix,
    identity_matrix,
    in_image_lattice,
    is_signed_permutation,
    mat_mul,
    mat_sub,
    mat_vec,
    signed_permutation_order,
    smith_normal_form,
    transpose,
)

COSET_CAP = 1024

HALF = Fraction(1, 2)


class GroupStructureError(ValueError):
    """The generators do not satisfy the direct-product point-group hypothesis."""


class CosetCapError(ValueError):
    """The point group would exceed the coset cap."""


def _as_fraction(x) -> Fraction:
    if isinstance(x, float):
        raise TypeError("floating point translations are not accepted; use Fraction")
    return Fraction(x)


def _mod1(f: Fraction) -> Fraction:
    return Fraction(f.numerator % f.denominator, f.denominator)


@dataclass(frozen=True)
class AffineGenerator:
    """One generator B L_b: signed-permutation matrix plus translation mod Z^n."""

    matrix: IntMatrix
    translation: RatVector
    order: int = 0  # 0 means "compute"; declared values are verified

    def __post_init__(self):
        matrix = as_int_matrix(self.matrix)
        if not is_signed_permutation(matrix):
            raise GroupStructureError(
                "generator matrix must be a signed permutation; other orthogonal "
                "matrices do not preserve the canonical lattice Z^n"
            )
        translation = tuple(_mod1(_as_fraction(x)) for x in self.translation)
        if len(translation) != len(matrix):
            raise ValueError("translation length does not match matrix size")
        true_order = signed_permutation_order(matrix)
        if self.order and self.order != true_order:
            raise ValueError(
                f"declared order {self.order} wrong: matrix has order {true_order}"
            )
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "translation", translation)
        object.__setattr__(self, "order", true_order)

    @property
    def dim(self) -> int:
        return len(self.matrix)


@dataclass(frozen=True)
class GroupDefinition:
    """Generators of Gamma = <gamma_1, ..., gamma_r, L_{Z^n}>; empty = torus."""

    dim: int
    generators: tuple[AffineGenerator, ...]
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        if self.dim < 1:
            raise ValueError("dimension must be positive")
        for g in self.generators:
            if g.dim != self.dim:
                raise ValueError("generator size does not match group dimension")


@dataclass(frozen=True)
class PointGroupElement:
    """Coset representative B L_b of Lambda\\Gamma, translation reduced to [0,1)^n.

    ``word`` is the multi-exponent (l_1, ..., l_r) of gamma_1^{l_1} ... gamma_r^{l_r}.
    """

    matrix: IntMatrix
    translation: RatVector
    word: tuple[int, ...]

    @property
    def is_identity(self) -> bool:
        return all(l == 0 for l in self.word)


@dataclass(frozen=True)
class ValidationReport:
    is_group_closed: bool
    has_translation_lattice_Zn: bool
    is_torsion_free: bool
    holonomy_order: int
    holonomy_structure: tuple[int, ...]
    failures: tuple[tuple[tuple, str], ...]


@dataclass(frozen=True)
class AbelianGroupType:
    """Finitely generated abelian group: free rank plus invariant factors > 1."""

    free_rank: int
    torsion: tuple[int, ...]

    def __post_init__(self):
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a != 0:
                raise ValueError("invariant factors must form a divisibility chain")

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        i = 0
        while i < len(self.torsion):
            d = self.torsion[i]
            count = 1
            while i + count < len(self.torsion) and self.torsion[i + count] == d:
                count += 1
            parts.append(f"Z{d}" if count == 1 else f"Z{d}^{count}")
            i += count
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class HWMatrix:
    """Translation parameters of a diagonal 2-torsion family in odd dimension.

    Row i holds the translation of the generator fixing coordinate i and
    negating all others; entries are 0 or 1/2.
    """

    n: int
    rows: tuple[RatVector, ...]

    def __post_init__(self):
        if self.n < 3 or self.n % 2 == 0:
            raise ValueError("dimension must be odd and at least 3")
        rows = tuple(tuple(_as_fraction(x) for x in row) for row in self.rows)
        if len(rows) != self.n - 1 or any(len(r) != self.n for r in rows):
            raise ValueError(f"need {self.n - 1} rows of length {self.n}")
        for row in rows:
            for x in row:
                if x not in (0, HALF):
                    raise ValueError("entries must be 0 or 1/2")
        object.__setattr__(self, "rows", rows)


def _coset_mul(
    am: IntMatrix, at: RatVector, bm: IntMatrix, bt: RatVector
) -> tuple[IntMatrix, RatVector]:
    # (A L_a)(B L_b) = AB L_{B^{-1} a + b}; B^{-1} = B^T for signed permutations
    shifted = mat_vec(transpose(bm), at)
    return mat_mul(am, bm), tuple(_mod1(x + y) for x, y in zip(shifted, bt))


@lru_cache(maxsize=None)
def close_point_group(definition: GroupDefinition) -> tuple[PointGroupElement, ...]:
    """One representative per coset of Lambda\\Gamma, identity first.

    Elements are ordered by word length then lexicographic word.  Raises
    GroupStructureError unless the generator matrices pairwise commute, the
    matrix group is the direct product of the declared cyclic groups, and the
    word cosets are closed under multiplication (equivalently, gamma_i^{m_i}
    is a lattice translation for each i).
    """
    gens = definition.generators
    orders = [g.order for g in gens]
    total = prod(orders)
    if total > COSET_CAP:
        raise CosetCapError(f"point group order {total} exceeds cap {COSET_CAP}")

    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            a, b = gens[i].matrix, gens[j].matrix
            if mat_mul(a, b) != mat_mul(b, a):
                raise GroupStructureError(
                    f"generator matrices {i} and {j} do not commute"
                )

    ident = (identity_matrix(definition.dim), (Fraction(0),) * definition.dim)
    powers = []
    for g in gens:
        table = [ident]
        for _ in range(1, g.order):
            pm, pt = table[-1]
            table.append(_coset_mul(pm, pt, g.matrix, g.translation))
        powers.append(table)

    words = sorted(
        _all_words(orders), key=lambda w: (sum(w), w)
    )
    elements = []
    for word in words:
        mat, tr = ident
        for i, l in enumerate(word):
            if l:
                pm, pt = powers[i][l]
                mat, tr = _coset_mul(mat, tr, pm, pt)
        elements.append(PointGroupElement(matrix=mat, translation=tr, word=word))

    if len({el.matrix for el in elements}) != total:
        raise GroupStructureError(
            "matrix group is not the direct product of the declared cyclic factors"
        )
    cosets = {(el.matrix, el.translation) for el in elements}
    if len(cosets) != total:
        raise GroupStructureError(
            "distinct words give the same coset; translation lattice exceeds Z^n"
        )
    for el in elements:
        for g in gens:
            if _coset_mul(el.matrix, el.translation, g.matrix, g.translation) not in cosets:
                raise GroupStructureError(
                    "word cosets are not closed under multiplication; "
                    "some gamma_i^{m_i} is not a lattice translation"
                )
    return tuple(elements)


def _all_words(orders: Sequence[int]):
    if not orders:
        return [()]
    rest = _all_words(orders[1:])
    return [(l,) + w for l in range(orders[0]) for w in rest]


def check_pairwise_condition(definition: GroupDefinition) -> list[tuple[int, int]]:
    """Pairs (i, j) violating (B_i^{-1} - I) b_j - (B_j^{-1} - I) b_i in Z^n."""
    failures = []
    gens = definition.generators
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            bi, bj = gens[i], gens[j]
            left = [
                x - y for x, y in zip(mat_vec(transpose(bi.matrix), bj.translation), bj.translation)
            ]
            right = [
                x - y for x, y in zip(mat_vec(transpose(bj.matrix), bi.translation), bi.translation)
            ]
            if any((x - y).denominator != 1 for x, y in zip(left, right)):
                failures.append((i, j))
    return failures


def _power_sum(matrix: IntMatrix) -> IntMatrix:
    # S = sum_{j=0}^{m-1} B^{-j} for B of order m
    m = signed_permutation_order(matrix)
    binv = transpose(matrix)
    acc = identity_matrix(len(matrix))
    total = acc
    for _ in range(1, m):
        acc = mat_mul(acc, binv)
        total = tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(total, acc))
    return total

def check_torsion_condition(element: PointGroupElement) -> bool:
    """True iff S b(I) lies in Z^n but outside S Z^n, for S = sum_j B_I^{-j}.

    This is the per-coset form of the torsion-freeness condition: powers of
    the element reach a nonzero lattice translation.
    """
    s = _power_sum(element.matrix)
    w = mat_vec(s, element.translation)
    if any(x.denominator != 1 for x in w):
        return False
    return not in_image_lattice(s, w)


@lru_cache(maxsize=None)
def validate_bieberbach(definition: GroupDefinition) -> ValidationReport:
    """Decide whether the definition gives a torsion-free group with lattice Z^n.

    The torsion condition is enforced over every nontrivial coset of the
    closed point group; every coset arises from a generator word, and the
    condition only depends on the coset, so this is equivalent to checking
    all index words with repetitions.  The lattice flag follows the separate
    split: pairwise condition plus S_i b_i in Z^n per generator.
    """
    gens = definition.generators
    failures: list[tuple[tuple, str]] = []

    pair_failures = check_pairwise_condition(definition)
    for i, j in pair_failures:
        failures.append(((i, j), "pairwise"))

    lattice_ok = not pair_failures
    for i, g in enumerate(gens):
        w = mat_vec(_power_sum(g.matrix), g.translation)
        if any(x.denominator != 1 for x in w):
            word = tuple(1 if k == i else 0 for k in range(len(gens)))
            failures.append((word, "generator-lattice"))
            lattice_ok = False

    closed = True
    elements: tuple[PointGroupElement, ...] = ()
    try:
        elements = close_point_group(definition)
    except CosetCapError:
        raise
    except GroupStructureError as exc:
        closed = False
        failures.append(((), f"closure: {exc}"))

    torsion_free = closed and not pair_failures
    for el in elements[1:] if closed else ():
        if not check_torsion_condition(el):
            failures.append((el.word, "torsion"))
            torsion_free = False

    return ValidationReport(
        is_group_closed=closed,
        has_translation_lattice_Zn=lattice_ok,
        is_torsion_free=torsion_free,
        holonomy_order=len(elements) if closed else 0,
        holonomy_structure=tuple(g.order for g in gens if g.order > 1),
        failures=tuple(failures),
    )


def require_valid(definition: GroupDefinition) -> ValidationReport:
    report = validate_bieberbach(definition)
    if not report.is_torsion_free:
        raise ValueError(
            f"group definition {definition.label or '<unnamed>'} fails validation: "
            + "; ".join(f"{cond} at {word}" for word, cond in report.failures)
        )
    return report


def first_homology(definition: GroupDefinition) -> AbelianGroupType:
    """H_1 = Gamma/[Gamma, Gamma] from the abelianized presentation.

    Generators are gamma_1..gamma_r and the coordinate translations t_1..t_n;
    relations are the lattice conjugations (B_i - I)e_j, the power relations
    m_i gamma_i = S_i b_i, and the commutators [gamma_i, gamma_j] = L_mu.
    The (redundant) relation set is absorbed by the Smith normal form.
    """
    require_valid(definition)
    gens = definition.generators
    r = len(gens)
    n = definition.dim
    rows: list[list[int]] = []

    for i, g in enumerate(gens):
        bmi = mat_sub(g.matrix, identity_matrix(n))
        for j in range(n):
            col = [bmi[k][j] for k in range(n)]
            if any(col):
                rows.append([0] * r + col)
        w = mat_vec(_power_sum(g.matrix), g.translation)
        row = [0] * r
        row[i] = g.order
        rows.append(row + [-int(x) for x in w])

    for i in range(r):
        for j in range(i + 1, r):
            gi, gj = gens[i], gens[j]
            term = [
                (xj - bj) - (xi - bi)
                for xj, bj, xi, bi in zip(
                    mat_vec(transpose(gj.matrix), gi.translation),
                    gi.translation,
                    mat_vec(transpose(gi.matrix), gj.translation),
                    gj.translation,
                )
            ]
            mu = mat_vec(mat_mul(gi.matrix, gj.matrix), term)
            if any(mu):
                rows.append([0] * r + [int(x) for x in mu])

    if not rows:
        return AbelianGroupType(free_rank=r + n, torsion=())
    snf = smith_normal_form(tuple(tuple(row) for row in rows))
    diag = snf.diagonal()
    rank = sum(1 for d in diag if d != 0)
    torsion = tuple(d for d in diag if d > 1)
    return AbelianGroupType(free_rank=(r + n) - rank, torsion=torsion)


def build_hw_group(a: HWMatrix) -> GroupDefinition:
    """Group with the n-1 diagonal generators B_i fixing only coordinate i.

    B_i e_i = e_i, B_i e_j = -e_j otherwise; translations come from the rows
    of ``a``.  The result need not be torsion-free; callers validate.
    """
    n = a.n
    gens = []
    for i in range(n - 1):
        matrix = tuple(
            tuple((1 if i == k else -1) if k == j else 0 for j in range(n))
            for k in range(n)
        )
        gens.append(AffineGenerator(matrix=matrix, translation=a.rows[i]))
    return GroupDefinition(dim=n, generators=tuple(gens), label=f"hw-{n}d")


def extend_with_characters(
    definition: GroupDefinition,
    chars: Sequence[Sequence[int]],
    trivial_count: int = 0,
) -> GroupDefinition:
    """Append one coordinate per character row plus ``trivial_count`` torus factors.

    Character row h assigns generator i the diagonal action chars[h][i] on the
    new coordinate; translations on new coordinates are zero, so a valid input
    stays torsion-free.
    """
    r = len(definition.generators)
    char_rows = [tuple(row) for row in chars]
    for row in char_rows:
        if len(row) != r:
            raise ValueError(f"character row needs one entry per generator ({r})")
        if any(x not in (1, -1) for x in row):
            raise ValueError("character values must be +-1")
    extra = len(char_rows) + trivial_count
    n = definition.dim
    new_gens = []
    for i, g in enumerate(definition.generators):
        diag = [row[i] for row in char_rows] + [1] * trivial_count
        matrix = tuple(
            tuple(row) + (0,) * extra for row in g.matrix
        ) + tuple(
            (0,) * n + tuple(diag[h] if h == k else 0 for h in range(extra))
            for k in range(extra)
        )
        translation = g.translation + (Fraction(0),) * extra
        new_gens.append(AffineGenerator(matrix=matrix, translation=translation))
    label = definition.label
    if extra:
        label = f"{label}x[{len(char_rows)}ch,{trivial_count}t]" if label else ""
    return GroupDefinition(dim=n + extra, generators=tuple(new_gens), label=label)


# ---------------------------------------------------------------------------
# JSON group-definition exchange format

def group_to_json(definition: GroupDefinition) -> dict:
    return {
        "dim": definition.dim,
        "label": definition.label,
        "generators": [
            {
                "matrix": [list(row) for row in g.matrix],
                "translation": [
                    f"{x.numerator}/{x.denominator}" for x in g.translation
                ],
                "order": g.order,
            }
            for g in definition.generators
        ],
    }


def group_from_json(data: dict) -> GroupDefinition:
    if not isinstance(data, dict):
        raise ValueError("group definition must be a JSON object")
    try:
        dim = int(data["dim"])
        label = str(data.get("label", ""))
        raw_gens = data["generators"]
    except KeyError as exc:
        raise ValueError(f"group definition missing field {exc}") from exc
    gens = []
    for raw in raw_gens:
        matrix = as_int_matrix(raw["matrix"])
        translation = tuple(_parse_fraction(s) for s in raw["translation"])
        gens.append(
            AffineGenerator(
                matrix=matrix, translation=translation, order=int(raw.get("order", 0))
            )
        )
    return GroupDefinition(dim=dim, generators=tuple(gens), label=label)


_FRACTION_RE = re.compile(r"^-?\d+(/\d+)?$")


def _parse_fraction(s) -> Fraction:
    if isinstance(s, int):
        return Fraction(s)
    if not isinstance(s, str) or not _FRACTION_RE.match(s.strip()):
        raise ValueError(f"not a p/q rational: {s!r}")
    return Fraction(s)
