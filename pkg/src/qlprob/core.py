"""Finite bounded posets, lattices and orthocomplemented lattices.

Elements are integer indices into a fixed name table.  Structures are
built from covering relations (Hasse form); the full order is the
reflexive-transitive closure.  Meets and joins are found by brute-force
bound search at construction time and memoised in dense tables, so every
later law check is a table lookup.  All types are immutable once built.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

# Dense n x n matrices and O(n^3) closure; fine at desk scale, a hard cap
# keeps accidental blowups out.
MAX_ELEMENTS = 4096


class LatticeError(Exception):
    """Base class for structure construction and verification errors."""


class DuplicateElement(LatticeError):
    pass


class CycleDetected(LatticeError):
    def __init__(self, pair):
        self.pair = pair
        super().__init__(f"order contains a cycle through elements {pair[0]} and {pair[1]}")


class NotBounded(LatticeError):
    pass


class CapExceeded(LatticeError):
    """A configured size cap was exceeded; carries partial results when any."""

    def __init__(self, message, partial=None):
        self.partial = partial
        super().__init__(message)


class NotALattice(LatticeError):
    """Some pair has no unique greatest lower / least upper bound."""

    def __init__(self, pair, witnesses, kind):
        self.pair = pair
        self.witnesses = tuple(witnesses)
        self.kind = kind  # "meet" or "join"
        word = "maximal lower" if kind == "meet" else "minimal upper"
        super().__init__(
            f"pair {pair} has {len(self.witnesses)} incomparable {word} bounds: "
            f"{list(self.witnesses)}"
        )


class NotInvolutive(LatticeError):
    def __init__(self, witnesses):
        self.witnesses = tuple(witnesses)
        super().__init__(f"negation is not an involution; witnesses {list(self.witnesses)}")


class NotOrderReversing(LatticeError):
    def __init__(self, witnesses):
        self.witnesses = tuple(witnesses)
        super().__init__(
            f"negation does not reverse the order; violating pairs {list(self.witnesses)}"
        )


class ComplementLawFails(LatticeError):
    def __init__(self, witnesses):
        self.witnesses = tuple(witnesses)
        super().__init__(
            f"complement laws fail; violating instances {list(self.witnesses)}"
        )


class NotOrthomodular(LatticeError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"orthomodular law fails at pair {witness}")


def _bits(mask: int):
    while mask:
        lsb = mask & -mask
        yield lsb.bit_length() - 1
        mask ^= lsb


@dataclass(frozen=True, eq=False)
class Poset:
    """A finite bounded poset: name table, dense order matrix, bounds."""

    names: tuple[str, ...]
    leq: np.ndarray  # bool, shape (n, n); leq[a, b] means a <= b
    bottom: int
    top: int

    def __post_init__(self):
        self.leq.setflags(write=False)

    @property
    def n(self) -> int:
        return len(self.names)

    @cached_property
    def index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.names)}

    def le(self, a: int, b: int) -> bool:
        return bool(self.leq[a, b])

    @cached_property
    def down(self) -> tuple[int, ...]:
        """Bitmask per element a of {c : c <= a}."""
        masks = []
        for a in range(self.n):
            m = 0
            for c in np.flatnonzero(self.leq[:, a]):
                m |= 1 << int(c)
            masks.append(m)
        return tuple(masks)

    @cached_property
    def up(self) -> tuple[int, ...]:
        """Bitmask per element a of {c : a <= c}."""
        masks = []
        for a in range(self.n):
            m = 0
            for c in np.flatnonzero(self.leq[a, :]):
                m |= 1 << int(c)
            masks.append(m)
        return tuple(masks)

    @cached_property
    def covers(self) -> tuple[tuple[int, int], ...]:
        """Covering pairs (lo, hi) of the Hasse diagram, in index order."""
        strict = self.leq & ~np.eye(self.n, dtype=bool)
        two_step = (strict.astype(np.uint8) @ strict.astype(np.uint8)) > 0
        cov = strict & ~two_step
        return tuple((int(a), int(b)) for a, b in np.argwhere(cov))


def build_poset(
    names: Sequence[str],
    covering_pairs: Iterable[tuple[str, str]],
    bottom: str | None = None,
    top: str | None = None,
) -> Poset:
    """Build a bounded poset from element names and covering pairs.

    The order is the reflexive-transitive closure of the covers.  Bottom
    and top may be declared (then verified) or inferred; a poset whose
    inferred bounds coincide is rejected, as is an empty one.
    """
    names = tuple(names)
    if not names:
        raise NotBounded("empty element list")
    if len(names) > MAX_ELEMENTS:
        raise CapExceeded(f"{len(names)} elements exceeds the cap of {MAX_ELEMENTS}")
    seen = set()
    for name in names:
        if name in seen:
            raise DuplicateElement(f"element {name!r} declared twice")
        seen.add(name)
    index = {name: i for i, name in enumerate(names)}
    n = len(names)

    adj = np.zeros((n, n), dtype=bool)
    for lo, hi in covering_pairs:
        if lo not in index or hi not in index:
            missing = lo if lo not in index else hi
            raise ValueError(f"cover references undeclared element {missing!r}")
        if lo == hi:
            raise ValueError(f"self-cover on element {lo!r}")
        adj[index[lo], index[hi]] = True

    leq = adj | np.eye(n, dtype=bool)
    for k in range(n):
        leq |= np.outer(leq[:, k], leq[k, :])

    sym = leq & leq.T & ~np.eye(n, dtype=bool)
    if sym.any():
        a, b = map(int, np.argwhere(sym)[0])
        raise CycleDetected((names[a], names[b]))

    bottom_candidates = np.flatnonzero(leq.all(axis=1))
    top_candidates = np.flatnonzero(leq.all(axis=0))
    if bottom is not None:
        if bottom not in index:
            raise ValueError(f"declared bottom {bottom!r} is not an element")
        bot = index[bottom]
        if bot not in bottom_candidates:
            raise NotBounded(f"declared bottom {bottom!r} is not below every element")
    elif len(bottom_candidates) == 1:
        bot = int(bottom_candidates[0])
    else:
        raise NotBounded("poset has no global lower bound")
    if top is not None:
        if top not in index:
            raise ValueError(f"declared top {top!r} is not an element")
        tp = index[top]
        if tp not in top_candidates:
            raise NotBounded(f"declared top {top!r} is not above every element")
    elif len(top_candidates) == 1:
        tp = int(top_candidates[0])
    else:
        raise NotBounded("poset has no global upper bound")
    if bot == tp:
        raise NotBounded("top and bottom coincide; the one-element theory is rejected")
    return Poset(names=names, leq=leq, bottom=bot, top=tp)


@dataclass(frozen=True, eq=False)
class Lattice:
    """A poset with memoised meet and join tables."""

    poset: Poset
    meet_table: np.ndarray  # int32, shape (n, n)
    join_table: np.ndarray

    def __post_init__(self):
        self.meet_table.setflags(write=False)
        self.join_table.setflags(write=False)

    @property
    def n(self) -> int:
        return self.poset.n

    @property
    def names(self) -> tuple[str, ...]:
        return self.poset.names

    @property
    def index(self) -> dict[str, int]:
        return self.poset.index

    @property
    def bottom(self) -> int:
        return self.poset.bottom

    @property
    def top(self) -> int:
        return self.poset.top

    def le(self, a: int, b: int) -> bool:
        return self.poset.le(a, b)

    def meet(self, a: int, b: int) -> int:
        return int(self.meet_table[a, b])

    def join(self, a: int, b: int) -> int:
        return int(self.join_table[a, b])

    @cached_property
    def atoms(self) -> tuple[int, ...]:
        """Elements covering bottom."""
        bot = self.bottom
        out = []
        for x in range(self.n):
            if x == bot:
                continue
            if self.poset.down[x] == (1 << bot) | (1 << x):
                out.append(x)
        return tuple(out)

    def is_atomic(self) -> bool:
        """Every nonzero element dominates an atom."""
        atom_mask = 0
        for a in self.atoms:
            atom_mask |= 1 << a
        for x in range(self.n):
            if x == self.bottom:
                continue
            if not (self.poset.down[x] & atom_mask):
                return False
        return True

    def is_atomistic(self) -> bool:
        """Every element is the join of the atoms below it."""
        for x in range(self.n):
            acc = self.bottom
            for a in self.atoms:
                if self.le(a, x):
                    acc = self.join(acc, a)
            if acc != x and x != self.bottom:
                return False
        return True


def lattice_check(poset: Poset) -> Lattice:
    """Verify every pair has a meet and a join; memoise the tables.

    Raises NotALattice at the first failing pair in index order, carrying
    the incomparable bound set as witnesses.
    """
    n = poset.n
    down, up = poset.down, poset.up
    meet_t = np.zeros((n, n), dtype=np.int32)
    join_t = np.zeros((n, n), dtype=np.int32)
    for a in range(n):
        for b in range(a, n):
            lowers = down[a] & down[b]
            maximal = [m for m in _bits(lowers) if up[m] & lowers == 1 << m]
            if len(maximal) != 1:
                raise NotALattice(
                    (poset.names[a], poset.names[b]),
                    [poset.names[m] for m in maximal],
                    "meet",
                )
            meet_t[a, b] = meet_t[b, a] = maximal[0]
            uppers = up[a] & up[b]
            minimal = [m for m in _bits(uppers) if down[m] & uppers == 1 << m]
            if len(minimal) != 1:
                raise NotALattice(
                    (poset.names[a], poset.names[b]),
                    [poset.names[m] for m in minimal],
                    "join",
                )
            join_t[a, b] = join_t[b, a] = minimal[0]
    return Lattice(poset=poset, meet_table=meet_t, join_table=join_t)


def _resolve(poset: Poset, token) -> int:
    if isinstance(token, str):
        return poset.index[token]
    return int(token)


@dataclass(frozen=True, eq=False)
class OrthoLattice:
    """A lattice with a verified orthocomplementation."""

    lattice: Lattice
    neg: tuple[int, ...]

    @property
    def poset(self) -> Poset:
        return self.lattice.poset

    @property
    def n(self) -> int:
        return self.lattice.n

    @property
    def names(self) -> tuple[str, ...]:
        return self.lattice.names

    @property
    def index(self) -> dict[str, int]:
        return self.lattice.index

    @property
    def bottom(self) -> int:
        return self.lattice.bottom

    @property
    def top(self) -> int:
        return self.lattice.top

    @property
    def atoms(self) -> tuple[int, ...]:
        return self.lattice.atoms

    def le(self, a: int, b: int) -> bool:
        return self.lattice.le(a, b)

    def meet(self, a: int, b: int) -> int:
        return self.lattice.meet(a, b)

    def join(self, a: int, b: int) -> int:
        return self.lattice.join(a, b)

    def orthogonal(self, a: int, b: int) -> bool:
        """a is orthogonal to b when a <= neg(b)."""
        return self.le(a, self.neg[b])


@dataclass(frozen=True, eq=False)
class OrthoPoset:
    """A bounded poset with an orthocomplementation; no lattice structure assumed."""

    poset: Poset
    neg: tuple[int, ...]

    @property
    def n(self) -> int:
        return self.poset.n

    @property
    def names(self) -> tuple[str, ...]:
        return self.poset.names

    def le(self, a: int, b: int) -> bool:
        return self.poset.le(a, b)

    def orthogonal(self, a: int, b: int) -> bool:
        return self.le(a, self.neg[b])


def _build_negation(poset: Poset, neg_pairs) -> tuple[int, ...]:
    n = poset.n
    neg = [-1] * n
    conflicts = []
    for x, y in neg_pairs:
        a, b = _resolve(poset, x), _resolve(poset, y)
        for p, q in ((a, b), (b, a)):
            if neg[p] not in (-1, q):
                conflicts.append(poset.names[p])
            neg[p] = q
    if conflicts:
        raise NotInvolutive(sorted(set(conflicts)))
    missing = [poset.names[i] for i, v in enumerate(neg) if v == -1]
    if missing:
        raise ValueError(f"negation must pair every element; missing {missing}")
    fixed = [poset.names[i] for i, v in enumerate(neg) if v == i]
    if fixed:
        # A fixed point a = neg(a) forces a v neg(a) = a < top.
        raise ComplementLawFails([(name, "fixed point of negation") for name in fixed])
    return tuple(neg)


def attach_ortho(lattice: Lattice, neg_pairs: Iterable[tuple]) -> OrthoLattice:
    """Attach a negation given as element pairs and verify all four
    orthocomplementation axioms exhaustively.

    Pairs may use names or indices and are read symmetrically.  Raises
    NotInvolutive, NotOrderReversing or ComplementLawFails with every
    violating instance of the first failing axiom.
    """
    poset = lattice.poset
    neg = _build_negation(poset, neg_pairs)
    narr = np.array(neg)

    # involution holds by the symmetric reading; contradictions were caught above

    reversed_ok = poset.leq[np.ix_(narr, narr)].T
    viol = poset.leq & ~reversed_ok
    if viol.any():
        witnesses = [
            (poset.names[int(a)], poset.names[int(b)]) for a, b in np.argwhere(viol)
        ]
        raise NotOrderReversing(witnesses)

    idx = np.arange(lattice.n)
    bad_join = np.flatnonzero(lattice.join_table[idx, narr] != lattice.top)
    bad_meet = np.flatnonzero(lattice.meet_table[idx, narr] != lattice.bottom)
    if len(bad_join) or len(bad_meet):
        witnesses = [(poset.names[int(a)], "a v neg(a) != top") for a in bad_join]
        witnesses += [(poset.names[int(a)], "a ^ neg(a) != bottom") for a in bad_meet]
        raise ComplementLawFails(witnesses)

    return OrthoLattice(lattice=lattice, neg=neg)


def attach_ortho_poset(poset: Poset, neg_pairs: Iterable[tuple]) -> OrthoPoset:
    """Attach a negation to a bare poset, verifying the orthocomplementation
    axioms with bound-set checks in place of lattice tables."""
    neg = _build_negation(poset, neg_pairs)
    narr = np.array(neg)

    reversed_ok = poset.leq[np.ix_(narr, narr)].T
    viol = poset.leq & ~reversed_ok
    if viol.any():
        witnesses = [
            (poset.names[int(a)], poset.names[int(b)]) for a, b in np.argwhere(viol)
        ]
        raise NotOrderReversing(witnesses)

    down, up = poset.down, poset.up
    witnesses = []
    for a in range(poset.n):
        # a v neg(a) = top means the only common upper bound is top itself,
        # and dually for the meet.
        uppers = up[a] & up[neg[a]]
        if uppers != 1 << poset.top:
            witnesses.append((poset.names[a], "a v neg(a) != top"))
        lowers = down[a] & down[neg[a]]
        if lowers != 1 << poset.bottom:
            witnesses.append((poset.names[a], "a ^ neg(a) != bottom"))
    if witnesses:
        raise ComplementLawFails(witnesses)
    return OrthoPoset(poset=poset, neg=neg)
