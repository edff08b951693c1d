"""Law checks along the axiom ladder, compatibility and block structure.

All checks are exhaustive scans over the memoised tables.  Scans report
the first failing witness in index order, so results are deterministic
however the loops are arranged.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .core import (
    CapExceeded,
    ComplementLawFails,
    Lattice,
    NotInvolutive,
    NotOrderReversing,
    NotOrthomodular,
    OrthoLattice,
    Poset,
    attach_ortho,
    lattice_check,
)


class Witness(NamedTuple):
    law: str
    elements: tuple[int, ...]


def check_distributive(lattice: Lattice) -> Witness | None:
    """Scan all triples for x^(yvz) = (x^y)v(x^z) and its dual."""
    n = lattice.n
    M, J = lattice.meet_table, lattice.join_table
    for x in range(n):
        lhs = M[x][J]                      # lhs[y, z] = x ^ (y v z)
        rhs = J[M[x][:, None], M[x][None, :]]
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            y, z = map(int, bad[0])
            return Witness("distributive", (x, y, z))
    for x in range(n):                     # dual, same witnesses in lattices
        lhs = J[x][M]
        rhs = M[J[x][:, None], J[x][None, :]]
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            y, z = map(int, bad[0])
            return Witness("distributive-dual", (x, y, z))
    return None


def check_modular(lattice: Lattice) -> Witness | None:
    """Scan all (x, a, b) with x <= b for x v (a^b) = (x v a) ^ b."""
    n = lattice.n
    M, J = lattice.meet_table, lattice.join_table
    leq = lattice.poset.leq
    for x in range(n):
        lhs = J[x][M]                      # lhs[a, b] = x v (a ^ b)
        rhs = M[J[x][:, None], np.arange(n)[None, :]]
        bad = np.argwhere((lhs != rhs) & leq[x][None, :])
        if len(bad):
            a, b = map(int, bad[0])
            return Witness("modular", (x, a, b))
    return None


def check_orthomodular(ortho: OrthoLattice) -> Witness | None:
    """Scan all pairs x <= b for x v (neg(x) ^ b) = b."""
    n = ortho.n
    M, J = ortho.lattice.meet_table, ortho.lattice.join_table
    leq = ortho.poset.leq
    narr = np.array(ortho.neg)
    for x in range(n):
        lhs = J[x][M[narr[x]]]             # lhs[b] = x v (neg(x) ^ b)
        bad = np.flatnonzero((lhs != np.arange(n)) & leq[x])
        if len(bad):
            return Witness("orthomodular", (x, int(bad[0])))
    return None


@lru_cache(maxsize=None)
def _orthomodular_witness(ortho: OrthoLattice) -> Witness | None:
    return check_orthomodular(ortho)


def compatibility_matrix(ortho: OrthoLattice) -> np.ndarray:
    """C[a, b] true when a = (a^b) v (a^neg(b))."""
    M, J = ortho.lattice.meet_table, ortho.lattice.join_table
    narr = np.array(ortho.neg)
    recon = J[M, M[:, narr]]               # recon[a, b] = (a^b) v (a^neg(b))
    return recon == np.arange(ortho.n)[:, None]


def compatible(ortho: OrthoLattice, a: int, b: int) -> bool:
    """Whether a and b live in a common Boolean block; requires an
    orthomodular lattice, where the relation is symmetric."""
    witness = _orthomodular_witness(ortho)
    if witness is not None:
        raise NotOrthomodular(tuple(ortho.names[e] for e in witness.elements))
    m = ortho.lattice.meet
    return ortho.join(m(a, b), m(a, ortho.neg[b])) == a


def maximal_blocks(ortho: OrthoLattice, cap: int = 64) -> tuple[tuple[int, ...], ...]:
    """Maximal Boolean sublattices, greedily grown from every element and
    closed under meet, join and negation.  Canonical sorted order."""
    witness = _orthomodular_witness(ortho)
    if witness is not None:
        raise NotOrthomodular(tuple(ortho.names[e] for e in witness.elements))
    C = compatibility_matrix(ortho)
    n = ortho.n
    blocks: set[frozenset[int]] = set()
    for seed in range(n):
        members = [seed]
        mask = C[seed].copy()
        changed = True
        while changed:
            changed = False
            for e in range(n):
                if e not in members and mask[e]:
                    members.append(e)
                    mask &= C[e]
                    changed = True
            # close under the lattice operations; compatibility is preserved
            # inside a pairwise-compatible set, so the loop re-runs greedily
            fresh = set(members)
            for a in list(fresh):
                fresh.add(ortho.neg[a])
            for a in list(fresh):
                for b in list(fresh):
                    fresh.add(ortho.meet(a, b))
                    fresh.add(ortho.join(a, b))
            for e in sorted(fresh):
                if e not in members:
                    if not mask[e]:
                        raise AssertionError("closure left the compatible set")
                    members.append(e)
                    mask &= C[e]
                    changed = True
        blocks.add(frozenset(members))
        if len(blocks) > cap:
            raise CapExceeded(f"more than {cap} maximal blocks")
    ordered = sorted(tuple(sorted(b)) for b in blocks)
    return tuple(ordered)


def _poset_meet(poset: Poset, a: int, b: int) -> int | None:
    lowers = poset.down[a] & poset.down[b]
    maximal = [m for m in _bits(lowers) if poset.up[m] & lowers == 1 << m]
    return maximal[0] if len(maximal) == 1 else None


def _poset_join(poset: Poset, a: int, b: int) -> int | None:
    uppers = poset.up[a] & poset.up[b]
    minimal = [m for m in _bits(uppers) if poset.down[m] & uppers == 1 << m]
    return minimal[0] if len(minimal) == 1 else None


def _bits(mask: int):
    while mask:
        lsb = mask & -mask
        yield lsb.bit_length() - 1
        mask ^= lsb


def check_sigma_omp(structure, family_cap: int = 12) -> Witness | None:
    """Verify the orthomodular-poset axioms on anything with .poset/.neg:
    joins of pairwise-orthogonal families exist (families up to
    family_cap), and the orthomodular identity holds on comparable pairs.

    Returns None on pass, else the first witness: a family lacking a
    join, or a comparable pair violating the identity.
    """
    poset: Poset = structure.poset
    neg = structure.neg
    n = poset.n
    ortho_mat = [[bool(poset.leq[a, neg[b]]) for b in range(n)] for a in range(n)]

    nonzero = [x for x in range(n) if x != poset.bottom]
    bad_family: list[int] | None = None

    def extend(family: list[int], start: int):
        nonlocal bad_family
        if bad_family is not None:
            return
        if len(family) >= 2:
            uppers = poset.up[family[0]]
            for e in family[1:]:
                uppers &= poset.up[e]
            minimal = [m for m in _bits(uppers) if poset.down[m] & uppers == 1 << m]
            if len(minimal) != 1:
                bad_family = list(family)
                return
        if len(family) == family_cap:
            return
        for e in nonzero[start:]:
            if all(ortho_mat[e][f] for f in family):
                family.append(e)
                extend(family, nonzero.index(e) + 1)
                family.pop()
                if bad_family is not None:
                    return

    extend([], 0)
    if bad_family is not None:
        return Witness("orthogonal-join", tuple(bad_family))

    for x in range(n):
        for b in range(n):
            if not poset.leq[x, b] or x == b:
                continue
            m = _poset_meet(poset, neg[x], b)
            if m is None:
                return Witness("orthomodular", (x, b))
            j = _poset_join(poset, x, m)
            if j != b:
                return Witness("orthomodular", (x, b))
    return None


@dataclass(frozen=True)
class ClassificationReport:
    """Ladder flags with law witnesses and the block decomposition.

    Flags below is_lattice are None when the prerequisite structure is
    absent; witnesses maps a law name to the first failing witness.
    """

    names: tuple[str, ...]
    is_lattice: bool
    is_ortholattice: bool
    is_distributive: bool | None
    is_modular: bool | None
    is_orthomodular: bool | None
    is_boolean: bool | None
    is_atomic: bool | None
    is_atomistic: bool | None
    witnesses: dict[str, Witness]
    blocks: tuple[tuple[int, ...], ...] | None

    def witness_names(self, law: str) -> tuple[str, ...]:
        return tuple(self.names[e] for e in self.witnesses[law].elements)


def classify(obj: Lattice | OrthoLattice) -> ClassificationReport:
    """Run the full axiom ladder on a built lattice."""
    if isinstance(obj, OrthoLattice):
        lattice, ortho = obj.lattice, obj
    else:
        lattice, ortho = obj, None

    witnesses: dict[str, Witness] = {}
    w_dist = check_distributive(lattice)
    if w_dist is not None:
        witnesses[w_dist.law] = w_dist
    w_mod = check_modular(lattice)
    if w_mod is not None:
        witnesses[w_mod.law] = w_mod

    is_omod = None
    blocks = None
    if ortho is not None:
        w_omod = _orthomodular_witness(ortho)
        if w_omod is not None:
            witnesses[w_omod.law] = w_omod
        is_omod = w_omod is None
        if is_omod:
            blocks = maximal_blocks(ortho)

    return ClassificationReport(
        names=lattice.names,
        is_lattice=True,
        is_ortholattice=ortho is not None,
        is_distributive=w_dist is None,
        is_modular=w_mod is None,
        is_orthomodular=is_omod,
        is_boolean=(ortho is not None) and w_dist is None,
        is_atomic=lattice.is_atomic(),
        is_atomistic=lattice.is_atomistic(),
        witnesses=witnesses,
        blocks=blocks,
    )


def classify_poset(poset: Poset, neg_pairs=None) -> ClassificationReport:
    """Ladder classification starting from a bare poset; records the
    failure witness instead of raising when it is not a lattice or the
    negation fails an axiom."""
    try:
        lattice = lattice_check(poset)
    except Exception as exc:  # NotALattice carries its own witnesses
        return ClassificationReport(
            names=poset.names,
            is_lattice=False,
            is_ortholattice=False,
            is_distributive=None,
            is_modular=None,
            is_orthomodular=None,
            is_boolean=None,
            is_atomic=None,
            is_atomistic=None,
            witnesses={"lattice": Witness("lattice", tuple(poset.index[w] for w in getattr(exc, "witnesses", ())))},
            blocks=None,
        )
    if neg_pairs:
        try:
            ortho = attach_ortho(lattice, neg_pairs)
        except (NotInvolutive, NotOrderReversing, ComplementLawFails):
            report = classify(lattice)
            return report
        return classify(ortho)
    return classify(lattice)
