"""Built-in catalog of worked example groups.

Catalog ids are short numeric keys ("4.1", "5.6", ...).  Parametrized entries
take key=value suffixes, e.g. ``4.1(n=4,k=1)``.  Pair entries return two
group definitions; the CLI addresses the members as ``<id>a`` and ``<id>b``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Callable, Union

from .crystal import AffineGenerator, GroupDefinition, extend_with_characters

HALF = Fraction(1, 2)
QUARTER = Fraction(1, 4)

J_BLOCK = ((0, 1), (-1, 0))  # rotation by a quarter turn, order 4

CorpusEntry = Union[GroupDefinition, tuple[GroupDefinition, GroupDefinition]]


def _diag(*entries: int) -> tuple[tuple[int, ...], ...]:
    n = len(entries)
    return tuple(
        tuple(entries[i] if i == j else 0 for j in range(n)) for i in range(n)
    )


def _block_diag(*blocks) -> tuple[tuple[int, ...], ...]:
    size = sum(len(b) for b in blocks)
    rows = []
    offset = 0
    for b in blocks:
        for row in b:
            rows.append((0,) * offset + tuple(row) + (0,) * (size - offset - len(row)))
        offset += len(b)
    return tuple(rows)


def _unit_translation(n: int, components: dict[int, Fraction]) -> tuple[Fraction, ...]:
    # components keyed by 1-based coordinate
    return tuple(components.get(i + 1, Fraction(0)) for i in range(n))


def _family_reflections(n: int, k: int) -> GroupDefinition:
    if n < 4 or n % 2:
        raise ValueError("dimension must be even and at least 4")
    if not (1 <= k <= n - 1) or k % 2 == 0:
        raise ValueError("k must be odd with 1 <= k <= n-1")
    c_k = _diag(*([1] * k + [-1] * (n - k)))
    gen = AffineGenerator(matrix=c_k, translation=_unit_translation(n, {1: HALF}))
    return GroupDefinition(dim=n, generators=(gen,), label=f"4.1(n={n},k={k})")


def _family_reflections_shifted(n: int, k: int, j: int) -> GroupDefinition:
    if n < 4 or n % 2:
        raise ValueError("dimension must be even and at least 4")
    if k % 2 == 0 or not (1 <= j <= k <= n - 1):
        raise ValueError("need k odd and 1 <= j <= k <= n-1")
    c_k = _diag(*([1] * k + [-1] * (n - k)))
    tr = _unit_translation(n, {i: HALF for i in range(1, j + 1)})
    gen = AffineGenerator(matrix=c_k, translation=tr)
    return GroupDefinition(dim=n, generators=(gen,), label=f"4.2(n={n},k={k},j={j})")


def _family_half_reflections(n: int, h: int) -> GroupDefinition:
    if n < 2 or n % 2:
        raise ValueError("dimension must be even")
    if not 1 <= h <= n // 2:
        raise ValueError("need 1 <= h <= n/2")
    c = _diag(*([1] * (n // 2) + [-1] * (n // 2)))
    tr = _unit_translation(n, {i: HALF for i in range(1, h + 1)})
    gen = AffineGenerator(matrix=c, translation=tr)
    return GroupDefinition(dim=n, generators=(gen,), label=f"4.2h(n={n},h={h})")


def _pair_9d() -> tuple[GroupDefinition, GroupDefinition]:
    b = _diag(1, 1, 1, -1, -1, -1, -1, -1, -1)
    b_prime = _diag(1, 1, 1, 1, 1, 1, -1, -1, -1)
    tr = _unit_translation(9, {1: HALF})
    return (
        GroupDefinition(9, (AffineGenerator(b, tr),), label="4.3a"),
        GroupDefinition(9, (AffineGenerator(b_prime, tr),), label="4.3b"),
    )


def _pair_4d_z22() -> tuple[GroupDefinition, GroupDefinition]:
    b1 = _diag(1, 1, -1, -1)
    b2 = _diag(1, -1, 1, -1)
    first = GroupDefinition(
        4,
        (
            AffineGenerator(b1, _unit_translation(4, {2: HALF, 4: HALF})),
            AffineGenerator(b2, _unit_translation(4, {3: HALF})),
        ),
        label="4.5a",
    )
    second = GroupDefinition(
        4,
        (
            AffineGenerator(b1, _unit_translation(4, {2: HALF})),
            AffineGenerator(b2, _unit_translation(4, {1: HALF})),
        ),
        label="4.5b",
    )
    return first, second


def _pair_6d_z4z2() -> tuple[GroupDefinition, GroupDefinition]:
    i2 = ((1, 0), (0, 1))
    neg_i2 = ((-1, 0), (0, -1))
    b1 = _block_diag(J_BLOCK, J_BLOCK, i2)
    b2 = _block_diag(neg_i2, i2, i2)
    b1p = _block_diag(J_BLOCK, _diag(1, -1, -1, 1))
    b2p = _block_diag(neg_i2, _diag(-1, 1, -1, 1))
    first = GroupDefinition(
        6,
        (
            AffineGenerator(b1, _unit_translation(6, {5: QUARTER})),
            AffineGenerator(b2, _unit_translation(6, {6: HALF})),
        ),
        label="5.1a",
    )
    second = GroupDefinition(
        6,
        (
            AffineGenerator(b1p, _unit_translation(6, {6: QUARTER})),
            AffineGenerator(b2p, _unit_translation(6, {4: HALF, 5: HALF})),
        ),
        label="5.1b",
    )
    return first, second


# character rows are indexed by generator: the 6d pair has generators
# (order 4, order 2); the sign character acts by -1 on the first
SIGN_CHAR = (-1, 1)
TRIVIAL_CHAR = (1, 1)


def _pair_7d() -> tuple[GroupDefinition, GroupDefinition]:
    g, gp = _pair_6d_z4z2()
    return (
        _relabel(extend_with_characters(g, [SIGN_CHAR]), "5.5a"),
        _relabel(extend_with_characters(gp, [SIGN_CHAR]), "5.5b"),
    )


def _pair_8d_parity() -> tuple[GroupDefinition, GroupDefinition]:
    g, gp = _pair_6d_z4z2()
    return (
        _relabel(extend_with_characters(g, [SIGN_CHAR, SIGN_CHAR]), "5.6a"),
        _relabel(extend_with_characters(gp, [SIGN_CHAR, TRIVIAL_CHAR]), "5.6b"),
    )


def _pair_8d_mixed() -> tuple[GroupDefinition, GroupDefinition]:
    g, gp = _pair_6d_z4z2()
    return (
        _relabel(extend_with_characters(g, [SIGN_CHAR, SIGN_CHAR]), "5.7a"),
        _relabel(extend_with_characters(gp, [TRIVIAL_CHAR, TRIVIAL_CHAR]), "5.7b"),
    )


def _pair_4d_holonomies() -> tuple[GroupDefinition, GroupDefinition]:
    b1 = _diag(1, 1, -1, -1)
    b2 = _diag(1, -1, -1, 1)
    first = GroupDefinition(
        4,
        (
            AffineGenerator(b1, _unit_translation(4, {1: HALF})),
            AffineGenerator(b2, _unit_translation(4, {4: HALF})),
        ),
        label="5.8a",
    )
    b_prime = _block_diag(J_BLOCK, _diag(-1, 1))
    second = GroupDefinition(
        4,
        (AffineGenerator(b_prime, _unit_translation(4, {4: QUARTER})),),
        label="5.8b",
    )
    return first, second


def _pair_torus_products(k: int) -> tuple[GroupDefinition, GroupDefinition]:
    if k < 0:
        raise ValueError("torus factor count must be nonnegative")
    g, gp = _pair_6d_z4z2()
    return (
        _relabel(extend_with_characters(g, [], trivial_count=k), f"5.9(k={k})a"),
        _relabel(extend_with_characters(gp, [], trivial_count=k), f"5.9(k={k})b"),
    )


def _relabel(defn: GroupDefinition, label: str) -> GroupDefinition:
    return GroupDefinition(dim=defn.dim, generators=defn.generators, label=label)


_REGISTRY: dict[str, tuple[Callable, tuple[str, ...], bool, str]] = {
    # id: (builder, parameter names, is_pair, description)
    "4.1": (_family_reflections, ("n", "k"), False,
            "reflection family C_k with half shift; holonomy Z2"),
    "4.2": (_family_reflections_shifted, ("n", "k", "j"), False,
            "C_k with shift (e_1+...+e_j)/2; holonomy Z2"),
    "4.2h": (_family_half_reflections, ("n", "h"), False,
             "half-space reflection with shift (e_1+...+e_h)/2; holonomy Z2"),
    "4.3": (_pair_9d, (), True,
            "9d pair, isospectral exactly on 2- and 7-forms"),
    "4.5": (_pair_4d_z22, (), True,
            "4d pair with holonomy Z2^2, isospectral on all p-forms"),
    "5.1": (_pair_6d_z4z2, (), True,
            "6d pair with holonomy Z4xZ2, isospectral only on 0- and 6-forms"),
    "5.5": (_pair_7d, (), True,
            "7d non-orientable pair from 5.1 plus one sign character"),
    "5.6": (_pair_8d_parity, (), True,
            "8d pair isospectral exactly for p odd"),
    "5.7": (_pair_8d_mixed, (), True,
            "8d pair isospectral exactly on 2- and 6-forms"),
    "5.8": (_pair_4d_holonomies, (), True,
            "4d pair with holonomies Z2^2 and Z4, isospectral for p odd"),
    "5.9": (_pair_torus_products, ("k",), True,
            "5.1 pair times a k-torus; Betti numbers strictly ordered"),
}

_ID_RE = re.compile(r"^([0-9.]+h?)(?:\(([^()]*)\))?$")


def corpus_ids() -> list[tuple[str, tuple[str, ...], bool, str]]:
    """(id, parameter names, is_pair, description) for every catalog entry."""
    return [
        (key, params, pair, desc)
        for key, (_builder, params, pair, desc) in _REGISTRY.items()
    ]


def is_pair_id(base_id: str) -> bool:
    if base_id not in _REGISTRY:
        raise KeyError(f"unknown catalog id: {base_id!r}")
    return _REGISTRY[base_id][2]


def example(catalog_id: str) -> CorpusEntry:
    """Resolve a catalog id, e.g. ``"4.5"`` or ``"4.1(n=4,k=1)"``.

    Returns a single GroupDefinition or a (GroupDefinition, GroupDefinition)
    pair depending on the entry.
    """
    match = _ID_RE.match(catalog_id.strip())
    if not match:
        raise KeyError(f"malformed catalog id: {catalog_id!r}")
    base, raw_params = match.group(1), match.group(2)
    if base not in _REGISTRY:
        raise KeyError(f"unknown catalog id: {base!r}")
    builder, param_names, _is_pair, _desc = _REGISTRY[base]
    params: dict[str, int] = {}
    if raw_params:
        for chunk in raw_params.split(","):
            if "=" not in chunk:
                raise KeyError(f"malformed parameter {chunk!r} in {catalog_id!r}")
            key, _, value = chunk.partition("=")
            key = key.strip()
            if key not in param_names:
                raise KeyError(f"unknown parameter {key!r} for catalog id {base!r}")
            try:
                params[key] = int(value)
            except ValueError:
                raise KeyError(f"non-integer parameter value in {catalog_id!r}")
    missing = [p for p in param_names if p not in params]
    if missing:
        raise KeyError(f"catalog id {base!r} needs parameters {missing}")
    return builder(**params)
