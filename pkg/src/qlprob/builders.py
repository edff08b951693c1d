"""Canonical example lattices used throughout the tests and the CLI."""

from __future__ import annotations

import numpy as np

from .core import (
    CapExceeded,
    Lattice,
    OrthoLattice,
    Poset,
    attach_ortho,
    build_poset,
    lattice_check,
)


def _subset_name(mask: int) -> str:
    if mask == 0:
        return "{}"
    members = [str(i + 1) for i in range(mask.bit_length()) if mask >> i & 1]
    return "{" + ",".join(members) + "}"


def powerset(n: int) -> OrthoLattice:
    """Boolean lattice of all subsets of an n-element set, 1 <= n <= 12.

    Element index equals the subset bitmask, so the tables come straight
    from bitwise operations; attach_ortho still verifies the negation.
    """
    if not 1 <= n <= 12:
        raise CapExceeded(f"powerset supports 1 <= n <= 12, got {n}")
    size = 1 << n
    names = tuple(_subset_name(m) for m in range(size))
    masks = np.arange(size)
    leq = (masks[:, None] & masks[None, :]) == masks[:, None]
    poset = Poset(names=names, leq=leq, bottom=0, top=size - 1)
    meet_t = (masks[:, None] & masks[None, :]).astype(np.int32)
    join_t = (masks[:, None] | masks[None, :]).astype(np.int32)
    lat = Lattice(poset=poset, meet_table=meet_t, join_table=join_t)
    full = size - 1
    return attach_ortho(lat, [(m, m ^ full) for m in range(size // 2)])


def firefly_l12() -> OrthoLattice:
    """The 12-element firefly-box lattice: two 8-element Boolean blocks
    on atom sets {l, r, n} and {f, b, n}, pasted along {0, n, ~n, 1}."""
    names = ["0", "l", "r", "f", "b", "n", "~l", "~r", "~f", "~b", "~n", "1"]
    covers = [
        ("0", "l"), ("0", "r"), ("0", "f"), ("0", "b"), ("0", "n"),
        ("l", "~r"), ("l", "~n"),
        ("r", "~l"), ("r", "~n"),
        ("f", "~b"), ("f", "~n"),
        ("b", "~f"), ("b", "~n"),
        ("n", "~l"), ("n", "~r"), ("n", "~f"), ("n", "~b"),
        ("~l", "1"), ("~r", "1"), ("~f", "1"), ("~b", "1"), ("~n", "1"),
    ]
    lat = lattice_check(build_poset(names, covers, bottom="0", top="1"))
    pairs = [("0", "1"), ("l", "~l"), ("r", "~r"), ("f", "~f"), ("b", "~b"), ("n", "~n")]
    return attach_ortho(lat, pairs)


def mo(n: int) -> OrthoLattice:
    """MO(n), the lantern: bottom, top and n complementary atom pairs,
    atoms from distinct pairs incomparable.  MO(1) is the 4-element
    Boolean lattice; MO(2) is the smallest non-distributive OML."""
    if not 1 <= n <= 100:
        raise CapExceeded(f"mo supports 1 <= n <= 100, got {n}")
    names = ["0"] + [f"a{i}" for i in range(1, n + 1)] + [f"~a{i}" for i in range(1, n + 1)] + ["1"]
    covers = []
    for i in range(1, n + 1):
        covers += [("0", f"a{i}"), ("0", f"~a{i}"), (f"a{i}", "1"), (f"~a{i}", "1")]
    lat = lattice_check(build_poset(names, covers, bottom="0", top="1"))
    pairs = [("0", "1")] + [(f"a{i}", f"~a{i}") for i in range(1, n + 1)]
    return attach_ortho(lat, pairs)


def n5() -> Lattice:
    """The pentagon: smallest non-modular lattice.  No orthocomplementation."""
    names = ["0", "a", "b", "c", "1"]
    covers = [("0", "a"), ("a", "c"), ("c", "1"), ("0", "b"), ("b", "1")]
    return lattice_check(build_poset(names, covers, bottom="0", top="1"))


def o6() -> OrthoLattice:
    """The hexagon: an ortholattice that is not orthomodular."""
    names = ["0", "a", "b", "c", "d", "1"]
    covers = [("0", "a"), ("a", "b"), ("b", "1"), ("0", "c"), ("c", "d"), ("d", "1")]
    lat = lattice_check(build_poset(names, covers, bottom="0", top="1"))
    return attach_ortho(lat, [("0", "1"), ("a", "d"), ("b", "c")])
