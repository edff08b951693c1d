"""Subspace lattices of finite-dimensional complex inner-product spaces.

Events are closed subspaces; meet is intersection, join is the span of
the union, negation is the orthogonal complement, and a density matrix
rho turns each subspace P into the number tr(rho P).  Everything here is
floating point: subspaces compare equal when their projectors are within
EQUALITY_TOL in Frobenius norm, and basis orthonormality is maintained
to ORTHONORMAL_TOL.  The two thresholds are kept two orders of
magnitude apart so rank decisions never contradict equality decisions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import CapExceeded, OrthoLattice, attach_ortho, build_poset, lattice_check
from .states import Valuation

ORTHONORMAL_TOL = 1e-10
EQUALITY_TOL = 1e-8
MAX_DIMENSION = 8


class DimensionMismatch(Exception):
    pass


class NumericalBreakdown(Exception):
    pass


def _check_dimension(d: int):
    if not 1 <= d <= MAX_DIMENSION:
        raise DimensionMismatch(f"ambient dimension {d} outside 1..{MAX_DIMENSION}")


@dataclass(frozen=True)
class Subspace:
    """Orthonormal column basis of a subspace; zero columns for the
    null subspace."""

    d: int
    basis: np.ndarray  # complex128, shape (d, k)

    def __post_init__(self):
        self.basis.setflags(write=False)
        gram = self.basis.conj().T @ self.basis
        if not np.allclose(gram, np.eye(self.dim), atol=ORTHONORMAL_TOL):
            raise ValueError("basis columns are not orthonormal")

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.conj().T

    def same(self, other: "Subspace") -> bool:
        if self.d != other.d:
            raise DimensionMismatch(f"{self.d} vs {other.d}")
        gap = np.linalg.norm(self.projector() - other.projector())
        return gap < EQUALITY_TOL

    def contains(self, other: "Subspace") -> bool:
        p = self.projector()
        q = other.projector()
        return np.linalg.norm(p @ q - q) < EQUALITY_TOL


def subspace_from_vectors(d: int, vectors) -> Subspace:
    """Orthonormalize a spanning set; rank from singular values against
    1e-10 times the largest."""
    _check_dimension(d)
    vecs = [np.asarray(v, dtype=np.complex128).reshape(-1) for v in vectors]
    for v in vecs:
        if v.shape[0] != d:
            raise DimensionMismatch(f"vector of length {v.shape[0]} in dimension {d}")
    if not vecs:
        return Subspace(d, np.zeros((d, 0), dtype=np.complex128))
    matrix = np.column_stack(vecs)
    u, sigma, _ = np.linalg.svd(matrix, full_matrices=False)
    if sigma.size == 0 or sigma[0] == 0:
        return Subspace(d, np.zeros((d, 0), dtype=np.complex128))
    rank = int(np.sum(sigma > ORTHONORMAL_TOL * sigma[0]))
    return Subspace(d, u[:, :rank].copy())


def null_subspace(d: int) -> Subspace:
    _check_dimension(d)
    return Subspace(d, np.zeros((d, 0), dtype=np.complex128))


def full_subspace(d: int) -> Subspace:
    _check_dimension(d)
    return Subspace(d, np.eye(d, dtype=np.complex128))


def ortho_s(a: Subspace) -> Subspace:
    """Orthogonal complement via the full singular basis."""
    if a.dim == 0:
        return full_subspace(a.d)
    if a.dim == a.d:
        return null_subspace(a.d)
    u, _, _ = np.linalg.svd(a.basis, full_matrices=True)
    return Subspace(a.d, u[:, a.dim:].copy())


def join_s(a: Subspace, b: Subspace) -> Subspace:
    if a.d != b.d:
        raise DimensionMismatch(f"{a.d} vs {b.d}")
    columns = [a.basis[:, i] for i in range(a.dim)] + [
        b.basis[:, i] for i in range(b.dim)
    ]
    return subspace_from_vectors(a.d, columns)


def meet_s(a: Subspace, b: Subspace) -> Subspace:
    # intersection through the complement of the span of complements
    return ortho_s(join_s(ortho_s(a), ortho_s(b)))


@dataclass(frozen=True)
class DensityMatrix:
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("density matrix must be square")
        _check_dimension(m.shape[0])
        object.__setattr__(self, "matrix", m)
        m.setflags(write=False)
        if np.linalg.norm(m - m.conj().T) >= 1e-10:
            raise ValueError("density matrix is not Hermitian")
        eigenvalues = np.linalg.eigvalsh(m)
        if eigenvalues.min() <= -1e-10:
            raise ValueError(f"negative eigenvalue {eigenvalues.min():.3e}")
        if abs(np.trace(m).real - 1) >= 1e-10:
            raise ValueError(f"trace {np.trace(m).real} is not 1")

    @property
    def d(self) -> int:
        return self.matrix.shape[0]


def max_mixed(d: int) -> DensityMatrix:
    _check_dimension(d)
    return DensityMatrix(np.eye(d, dtype=np.complex128) / d)


def pure(vector) -> DensityMatrix:
    v = np.asarray(vector, dtype=np.complex128).reshape(-1)
    norm = np.linalg.norm(v)
    if norm == 0:
        raise ValueError("pure state vector must be nonzero")
    v = v / norm
    return DensityMatrix(np.outer(v, v.conj()))


def random_density(d: int, rng: np.random.Generator) -> DensityMatrix:
    """Full-rank sample G G† / tr from a standard complex Gaussian G."""
    _check_dimension(d)
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    m = g @ g.conj().T
    return DensityMatrix(m / np.trace(m).real)


def born(rho: DensityMatrix, subspace: Subspace) -> float:
    """tr(rho P), guaranteed real in [0,1] up to clamping at 1e-10."""
    if rho.d != subspace.d:
        raise DimensionMismatch(f"{rho.d} vs {subspace.d}")
    value = float(np.trace(rho.matrix @ subspace.projector()).real)
    if value < -1e-10 or value > 1 + 1e-10:
        raise NumericalBreakdown(f"trace value {value} outside the unit interval")
    return min(1.0, max(0.0, value))


@dataclass(frozen=True)
class ResolutionReport:
    passed: bool
    worst_product: float
    identity_gap: float


def resolution_check(projectors) -> ResolutionReport:
    """Whether the family is pairwise orthogonal and sums to the
    identity, both within 1e-8."""
    mats = [np.asarray(p, dtype=np.complex128) for p in projectors]
    d = mats[0].shape[0]
    for m in mats:
        if m.shape != (d, d):
            raise DimensionMismatch("projectors of unequal shape")
    worst = 0.0
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            worst = max(worst, float(np.linalg.norm(mats[i] @ mats[j])))
    gap = float(np.linalg.norm(sum(mats) - np.eye(d)))
    return ResolutionReport(
        passed=worst < EQUALITY_TOL and gap < EQUALITY_TOL,
        worst_product=worst,
        identity_gap=gap,
    )


def _canonical_key(s: Subspace):
    rounded = np.round(s.projector(), 9) + 0.0  # normalize -0.0
    return (s.dim, tuple(rounded.real.ravel()), tuple(rounded.imag.ravel()))


def generate_sublattice(seeds, cap: int = 256) -> tuple[OrthoLattice, tuple[Subspace, ...]]:
    """Close the seeds under meet, join, and complement, then rebuild
    the result as a verified abstract ortholattice.

    Returns the lattice together with the element-indexed subspace
    embedding.  Closure is breadth-first with deduplication by projector
    distance; element order is by (dimension, projector entries), which
    keeps runs deterministic."""
    seeds = list(seeds)
    if not seeds:
        raise ValueError("at least one seed subspace required")
    d = seeds[0].d
    for s in seeds:
        if s.d != d:
            raise DimensionMismatch(f"{s.d} vs {d}")

    elements: list[Subspace] = [null_subspace(d), full_subspace(d)]

    def find(s: Subspace) -> int | None:
        for i, t in enumerate(elements):
            if t.same(s):
                return i
        return None

    def add(s: Subspace) -> bool:
        if find(s) is None:
            elements.append(s)
            if len(elements) > cap:
                raise CapExceeded(f"closure exceeded {cap} subspaces")
            return True
        return False

    for s in seeds:
        add(s)
    frontier = list(range(len(elements)))
    while frontier:
        fresh: list[int] = []

        def record(s: Subspace):
            if add(s):
                fresh.append(len(elements) - 1)

        for i in frontier:
            record(ortho_s(elements[i]))
        snapshot = len(elements)
        new = set(frontier)
        for i in range(snapshot):
            for j in range(i + 1, snapshot):
                if i in new or j in new:
                    record(meet_s(elements[i], elements[j]))
                    record(join_s(elements[i], elements[j]))
        frontier = fresh

    order = sorted(range(len(elements)), key=lambda i: _canonical_key(elements[i]))
    ordered = [elements[i] for i in order]
    names = ["0"] + [f"s{i}" for i in range(1, len(ordered) - 1)] + ["1"]

    leq = np.zeros((len(ordered), len(ordered)), dtype=bool)
    for i, a in enumerate(ordered):
        for j, b in enumerate(ordered):
            leq[i, j] = b.contains(a)
    covers = []
    for i in range(len(ordered)):
        for j in range(len(ordered)):
            if i == j or not leq[i, j]:
                continue
            between = any(
                leq[i, k] and leq[k, j] and k != i and k != j
                for k in range(len(ordered))
            )
            if not between:
                covers.append((names[i], names[j]))
    poset = build_poset(names, covers, bottom="0", top="1")
    if not np.array_equal(poset.leq, leq):
        raise NumericalBreakdown("subspace inclusion order is not transitive")
    lattice = lattice_check(poset)
    pairs = []
    for i, s in enumerate(ordered):
        c = ortho_s(s)
        j = next((k for k, t in enumerate(ordered) if t.same(c)), None)
        if j is None:
            raise NumericalBreakdown(f"complement of element {names[i]} left the closure")
        if i <= j:
            pairs.append((names[i], names[j]))
    ortho = attach_ortho(lattice, pairs)
    return ortho, tuple(ordered)


def born_valuation(rho: DensityMatrix, ortho: OrthoLattice, embedding) -> Valuation:
    """The trace valuation of rho on a generated lattice."""
    if rho.d != embedding[0].d:
        raise DimensionMismatch(f"{rho.d} vs {embedding[0].d}")
    return Valuation(ortho, tuple(born(rho, s) for s in embedding))
