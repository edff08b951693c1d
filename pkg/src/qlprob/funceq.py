"""Functional-equation checks for combination rules, and regraduation.

The probability calculus rests on two equations: a negation rule g with
g(g(x)) = x, and an associative combination rule f(x,y) for joining
orthogonal events.  Associative strictly-monotone rules are additive in
disguise: there is a strictly increasing w with w(f(x,y)) = w(x)+w(y),
unique up to a positive factor.  regraduate constructs that w directly
with a dyadic ruler: it anchors w = 1 at the first interior grid point,
repeatedly solves f(t,t) = previous t to halve the unit, then measures
any x greedily with the resulting graduations.  Each halving is a
bisection on the diagonal, so the construction is limited by float
precision rather than by any interpolation grid, and the residuals on
closed-form rules come out near 1e-11.

Functions built from closed forms are marked total and are evaluated
wherever composition asks; sample-defined functions raise DomainEscape
outside their data range, and associativity triples that escape are
skipped and counted instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

DOMAIN_SLACK = 1e-12


class DomainEscape(Exception):
    def __init__(self, x):
        self.x = x
        super().__init__(f"value {x} escapes the declared domain")


class TooManySkips(Exception):
    def __init__(self, skipped: int, evaluated: int):
        self.skipped = skipped
        self.evaluated = evaluated
        super().__init__(
            f"{skipped} of {skipped + evaluated} triples escaped the domain"
        )


class NotRegraduable(Exception):
    def __init__(self, reason: str, detail: str = ""):
        self.reason = reason
        super().__init__(f"{reason}: {detail}" if detail else reason)


@dataclass(frozen=True)
class CoxFunction:
    """A unary or binary rule on [lo, hi].

    total means the underlying formula evaluates anywhere, so
    compositions may leave the interval without harm; a sample-backed
    rule is not total and raises DomainEscape outside its data."""

    arity: int
    lo: float
    hi: float
    fn: Callable
    total: bool = True
    label: str = ""

    def __call__(self, *args: float) -> float:
        if len(args) != self.arity:
            raise TypeError(f"{self.label or 'rule'} takes {self.arity} arguments")
        if not self.total:
            for a in args:
                if a < self.lo - DOMAIN_SLACK or a > self.hi + DOMAIN_SLACK:
                    raise DomainEscape(a)
        return float(self.fn(*args))


_BUILTINS: dict[str, tuple[int, Callable]] = {
    "sum": (2, lambda x, y: x + y),
    "sumprod": (2, lambda x, y: x + y + x * y),
    "max": (2, max),
    "one-minus": (1, lambda x: 1 - x),
    "identity": (1, lambda x: x),
    "square": (1, lambda x: x * x),
}


def builtin(name: str, lo: float = 0.0, hi: float = 1.0) -> CoxFunction:
    if name not in _BUILTINS:
        known = ", ".join(sorted(_BUILTINS))
        raise ValueError(f"unknown rule {name!r}; built in: {known}")
    arity, fn = _BUILTINS[name]
    return CoxFunction(arity=arity, lo=lo, hi=hi, fn=fn, total=True, label=name)


def from_samples_unary(points, lo=None, hi=None) -> CoxFunction:
    """Piecewise-linear rule through (x, g(x)) samples."""
    pts = sorted((float(x), float(y)) for x, y in points)
    xs = np.array([p[0] for p in pts])
    ys = np.array([p[1] for p in pts])
    if len(xs) < 2 or np.any(np.diff(xs) <= 0):
        raise ValueError("need at least two samples with distinct increasing x")
    lo = xs[0] if lo is None else lo
    hi = xs[-1] if hi is None else hi
    return CoxFunction(
        arity=1, lo=float(lo), hi=float(hi),
        fn=lambda x: float(np.interp(x, xs, ys)),
        total=False, label="samples",
    )


def from_samples_binary(points, lo=None, hi=None) -> CoxFunction:
    """Bilinear rule through (x, y, f(x,y)) samples on a full grid."""
    xs = sorted({float(x) for x, _, _ in points})
    ys = sorted({float(y) for _, y, _ in points})
    table = {(float(x), float(y)): float(v) for x, y, v in points}
    if len(table) != len(xs) * len(ys):
        raise ValueError("samples must cover a full rectangular grid")
    grid = np.array([[table[(x, y)] for y in ys] for x in xs])
    xa, ya = np.array(xs), np.array(ys)

    def interp(x, y):
        i = min(max(int(np.searchsorted(xa, x) - 1), 0), len(xa) - 2)
        j = min(max(int(np.searchsorted(ya, y) - 1), 0), len(ya) - 2)
        tx = (x - xa[i]) / (xa[i + 1] - xa[i])
        ty = (y - ya[j]) / (ya[j + 1] - ya[j])
        return (
            grid[i, j] * (1 - tx) * (1 - ty)
            + grid[i + 1, j] * tx * (1 - ty)
            + grid[i, j + 1] * (1 - tx) * ty
            + grid[i + 1, j + 1] * tx * ty
        )

    lo = min(xs[0], ys[0]) if lo is None else lo
    hi = max(xs[-1], ys[-1]) if hi is None else hi
    return CoxFunction(
        arity=2, lo=float(lo), hi=float(hi), fn=interp, total=False, label="samples"
    )


@dataclass(frozen=True)
class InvolutionReport:
    passed: bool
    max_residual: float
    worst_x: float
    identity: bool


def check_involution(g: CoxFunction, grid_size: int = 33, tolerance: float = 1e-9) -> InvolutionReport:
    """Measure g(g(x)) − x on a uniform grid.  g must map the interval
    into itself; a point sent outside raises DomainEscape."""
    if g.arity != 1:
        raise TypeError("involution check needs a unary rule")
    grid = np.linspace(g.lo, g.hi, grid_size)
    worst = -1.0
    worst_x = g.lo
    identity_gap = 0.0
    for x in grid:
        gx = g(float(x))
        if gx < g.lo - DOMAIN_SLACK or gx > g.hi + DOMAIN_SLACK:
            raise DomainEscape(float(x))
        residual = abs(g(gx) - x)
        identity_gap = max(identity_gap, abs(gx - x))
        if residual > worst:
            worst = residual
            worst_x = float(x)
    return InvolutionReport(
        passed=bool(worst <= tolerance),
        max_residual=float(worst),
        worst_x=worst_x,
        identity=bool(identity_gap <= tolerance),
    )


@dataclass(frozen=True)
class AssociativityReport:
    passed: bool
    max_residual: float
    worst_triple: tuple[float, float, float] | None
    evaluated: int
    skipped: int


def check_associativity(f: CoxFunction, grid_size: int = 33, tolerance: float = 1e-9) -> AssociativityReport:
    """Measure f(f(x,y),z) − f(x,f(y,z)) over the grid cube.  Triples a
    sample-backed rule cannot complete are skipped; more than half
    skipped aborts with TooManySkips."""
    if f.arity != 2:
        raise TypeError("associativity check needs a binary rule")
    grid = [float(x) for x in np.linspace(f.lo, f.hi, grid_size)]
    worst = -1.0
    worst_triple = None
    evaluated = 0
    skipped = 0
    for x in grid:
        for y in grid:
            try:
                xy = f(x, y)
            except DomainEscape:
                skipped += len(grid)
                continue
            for z in grid:
                try:
                    lhs = f(xy, z)
                    rhs = f(x, f(y, z))
                except DomainEscape:
                    skipped += 1
                    continue
                evaluated += 1
                residual = abs(lhs - rhs)
                if residual > worst:
                    worst = residual
                    worst_triple = (x, y, z)
    if skipped > evaluated:
        raise TooManySkips(skipped, evaluated)
    return AssociativityReport(
        passed=bool(0 <= worst <= tolerance),
        max_residual=float(max(worst, 0.0)),
        worst_triple=worst_triple,
        evaluated=evaluated,
        skipped=skipped,
    )


@dataclass(frozen=True)
class RegraduationResult:
    w: CoxFunction
    max_residual: float
    anchor: float
    grid: tuple[float, ...]
    values: tuple[float, ...]


def _bisect_diagonal(f: CoxFunction, target: float, lo: float, hi: float) -> float:
    """Solve f(t, t) = target for t; the diagonal is strictly
    increasing once monotonicity passed."""
    a, b = lo, hi
    for _ in range(80):
        mid = 0.5 * (a + b)
        if f(mid, mid) < target:
            a = mid
        else:
            b = mid
    return 0.5 * (a + b)


def regraduate(f: CoxFunction, grid_size: int = 33) -> RegraduationResult:
    """Additive rescaling of an associative rule.

    Anchored at w(lo) = 0 and w(x1) = 1 for the first interior grid
    point x1.  Verifies strict monotonicity in each argument on the
    grid first, then requires f(lo, lo) = lo (no additive zero means no
    additive form on this interval), builds the dyadic ruler, and
    finally measures the worst additivity residual over all grid pairs
    whose f value stays inside the interval."""
    if f.arity != 2:
        raise TypeError("regraduation needs a binary rule")
    grid = [float(x) for x in np.linspace(f.lo, f.hi, grid_size)]
    for y in grid:
        along_x = [f(x, y) for x in grid]
        along_y = [f(y, x) for x in grid]
        for series in (along_x, along_y):
            gaps = np.diff(series)
            if gaps.min() <= 0:
                at = grid[int(gaps.argmin())]
                raise NotRegraduable(
                    "non-monotone", f"flat or decreasing near ({at:g}, {y:g})"
                )
    if abs(f(f.lo, f.lo) - f.lo) > 1e-9:
        raise NotRegraduable(
            "no-additive-zero", f"f({f.lo:g}, {f.lo:g}) = {f(f.lo, f.lo):g}"
        )

    anchor = grid[1]
    rulers = [anchor]
    while rulers[-1] - f.lo > 1e-14 * max(1.0, f.hi - f.lo) and len(rulers) < 60:
        rulers.append(_bisect_diagonal(f, rulers[-1], f.lo, rulers[-1]))

    cache: dict[float, float] = {}

    def measure(x: float) -> float:
        if x < f.lo - DOMAIN_SLACK or x > f.hi + DOMAIN_SLACK:
            raise DomainEscape(x)
        if x in cache:
            return cache[x]
        total = 0.0
        position = f.lo
        for level, tick in enumerate(rulers):
            weight = 0.5 ** level
            for _ in range(10_000):
                step = f(position, tick)
                if step > x + 1e-15 or step <= position:
                    break
                position = step
                total += weight
        cache[x] = total
        return total

    w = CoxFunction(
        arity=1, lo=f.lo, hi=f.hi, fn=measure, total=False,
        label=f"regraduation of {f.label or 'rule'}",
    )
    residual = 0.0
    for x in grid:
        for y in grid:
            value = f(x, y)
            if value > f.hi + DOMAIN_SLACK:
                continue
            residual = max(residual, abs(w(value) - w(x) - w(y)))
    if residual > 1e-6:
        raise NotRegraduable("residual-too-large", f"{residual:.3e}")
    return RegraduationResult(
        w=w,
        max_residual=float(residual),
        anchor=float(anchor),
        grid=tuple(float(x) for x in grid),
        values=tuple(float(w(x)) for x in grid),
    )


@dataclass(frozen=True)
class RescaleReport:
    passed: bool
    residuals: dict[float, float]


def verify_rescale_freedom(result: RegraduationResult, f: CoxFunction, factors, tolerance: float = 1e-6) -> RescaleReport:
    """Positive multiples of w stay additive: the residual scales by
    the factor, so every factor within tolerance passes."""
    residuals = {}
    for factor in factors:
        factor = float(factor)
        if factor <= 0:
            raise ValueError(f"rescale factor must be positive, got {factor}")
        worst = 0.0
        for x in result.grid:
            for y in result.grid:
                value = f(x, y)
                if value > f.hi + DOMAIN_SLACK:
                    continue
                worst = max(
                    worst,
                    abs(factor * result.w(value) - factor * result.w(x) - factor * result.w(y)),
                )
        residuals[factor] = worst
    return RescaleReport(
        passed=bool(all(v <= tolerance for v in residuals.values())),
        residuals={k: float(v) for k, v in residuals.items()},
    )


def invert_increasing(fn: Callable, lo: float, hi: float, target: float) -> float:
    """Bisection inverse of a strictly increasing function on [lo, hi]."""
    a, b = lo, hi
    for _ in range(80):
        mid = 0.5 * (a + b)
        if fn(mid) < target:
            a = mid
        else:
            b = mid
    return 0.5 * (a + b)


def additive_conjugate(result: RegraduationResult) -> CoxFunction:
    """The rule w⁻¹(w(x) + w(y)).

    The declared interval is shrunk to a third of the w-range so grid
    triples always compose; intermediates may exceed the declared hi
    and are legal, so the rule itself guards the one real limit: a
    w-sum past w(hi) has no preimage and raises DomainEscape."""
    w = result.w
    top = w(w.hi)
    hi = invert_increasing(w, w.lo, w.hi, top / 3)

    def rule(x, y):
        total = w(x) + w(y)
        if total > top + 1e-9:
            raise DomainEscape(total)
        return invert_increasing(w, w.lo, w.hi, total)

    return CoxFunction(
        arity=2, lo=w.lo, hi=hi, fn=rule, total=True,
        label="additive conjugate",
    )
