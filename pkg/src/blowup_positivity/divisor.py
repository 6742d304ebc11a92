"""Divisor classes on blow-ups of projective space at points in general position.

A class ``dH - sum m_i E_i`` is stored as its ambient dimension ``n``, degree
``d`` and the tuple of point multiplicities.  Cycles of the base locus are
joins ``J(L_I, sigma_t)`` of a linear span of points and a secant variety of
the rational normal curve through ``n + 3`` points; they are indexed by
:class:`CycleIndex`.

Everything here is exact integer bookkeeping.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator

MAX_POINTS = 20


@dataclass(frozen=True)
class CycleIndex:
    """The join of the span of ``indices`` (1-based) with the ``t``-th secant variety."""

    indices: tuple[int, ...] = ()
    t: int = 0

    def __post_init__(self):
        idx = tuple(sorted(int(i) for i in self.indices))
        if len(set(idx)) != len(idx):
            raise ValueError(f"duplicate point index in {self.indices}")
        if idx and idx[0] < 1:
            raise ValueError("point indices are 1-based")
        if self.t < 0:
            raise ValueError("secant level must be >= 0")
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "t", int(self.t))

    @property
    def dim(self) -> int:
        return len(self.indices) + 2 * self.t - 1

    def sort_key(self):
        return (self.dim, self.indices, self.t)

    def __str__(self):
        body = "{" + ",".join(map(str, self.indices)) + "}"
        return f"J(L{body},s{self.t})" if self.t else f"L{body}"


def join_dimension(c: CycleIndex) -> int:
    return c.dim


def _as_cycle(c) -> CycleIndex:
    if isinstance(c, CycleIndex):
        return c
    indices, t = c
    return CycleIndex(tuple(indices), t)


@dataclass(frozen=True)
class DivisorClass:
    """``d H - sum_i mults[i] E_{i+1}`` on the blow-up of ``P^n`` at ``s`` points."""

    n: int
    d: int
    mults: tuple[int, ...]

    def __post_init__(self):
        if int(self.n) < 1:
            raise ValueError("ambient dimension n must be >= 1")
        mults = tuple(int(m) for m in self.mults)
        if len(mults) > MAX_POINTS:
            raise ValueError(
                f"{len(mults)} points exceeds the subset-enumeration cap of {MAX_POINTS}"
            )
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "d", int(self.d))
        object.__setattr__(self, "mults", mults)

    @property
    def s(self) -> int:
        return len(self.mults)

    def mult(self, i: int) -> int:
        """Multiplicity at the 1-based point ``i``."""
        if not 1 <= i <= self.s:
            raise ValueError(f"point index {i} out of range 1..{self.s}")
        return self.mults[i - 1]

    def __str__(self):
        return f"{self.d}H - sum{list(self.mults)}E  (n={self.n})"


def _check_indices(D: DivisorClass, indices: Iterable[int]) -> tuple[int, ...]:
    idx = tuple(indices)
    for i in idx:
        if not 1 <= i <= D.s:
            raise ValueError(f"point index {i} out of range 1..{D.s}")
    return idx


def unclamped_multiplicity(D: DivisorClass, c: CycleIndex) -> int:
    """``t sum m + sum_{I} m_i - ((n+1) t + |I| - 1) d`` without the clamp at zero."""
    c = _as_cycle(c)
    idx = _check_indices(D, c.indices)
    if c.t and D.s != D.n + 3:
        raise ValueError(
            f"secant cycles need s = n + 3 points (got s={D.s}, n={D.n})"
        )
    total = c.t * sum(D.mults) if c.t else 0
    return total + sum(D.mults[i - 1] for i in idx) - ((D.n + 1) * c.t + len(idx) - 1) * D.d


def linear_multiplicity(D: DivisorClass, indices: Iterable[int]) -> int:
    """Multiplicity of containment of the span ``L_I`` in the base locus of ``|D|``."""
    idx = _check_indices(D, indices)
    if not idx:
        raise ValueError("index set must be nonempty")
    if len(set(idx)) != len(idx):
        raise ValueError("duplicate point index")
    return max(0, sum(D.mults[i - 1] for i in idx) - (len(idx) - 1) * D.d)


def join_multiplicity(D: DivisorClass, c) -> int:
    """Multiplicity of containment of ``J(L_I, sigma_t)`` in the base locus.

    For ``t = 0`` this is :func:`linear_multiplicity`; the empty cycle
    ``(∅, 0)`` gets ``d``.  Secant cycles must have dimension at most ``n - 1``.
    """
    c = _as_cycle(c)
    if c.t and c.dim > D.n - 1:
        raise ValueError(f"cycle {c} has dimension {c.dim} > n - 1 = {D.n - 1}")
    return max(0, unclamped_multiplicity(D, c))


def iter_cycles(n: int, s: int, include_secants: bool = False,
                max_dim: int | None = None, include_empty: bool = False) -> Iterator[CycleIndex]:
    """All cycles with dimension ``<= max_dim`` (default ``n - 1``), sorted by dimension.

    Linear cycles come from nonempty subsets of ``{1..s}``; secant joins
    (``t >= 1``) only when ``include_secants`` and ``s == n + 3``.
    """
    if s > MAX_POINTS:
        raise ValueError(f"s={s} exceeds the subset-enumeration cap of {MAX_POINTS}")
    if include_secants and s != n + 3:
        raise ValueError(f"secant cycles need s = n + 3 points (got s={s}, n={n})")
    top = n - 1 if max_dim is None else max_dim
    out = []
    if include_empty and top >= -1:
        out.append(CycleIndex((), 0))
    t_max = (top + 1) // 2 if include_secants else 0
    for t in range(t_max + 1):
        for size in range(0, s + 1):
            if t == 0 and size == 0:
                continue
            if size + 2 * t - 1 > top:
                break
            for I in combinations(range(1, s + 1), size):
                out.append(CycleIndex(I, t))
    out.sort(key=CycleIndex.sort_key)
    return iter(out)


@dataclass(frozen=True)
class BaseLocusEntry:
    cycle: CycleIndex
    k: int
    divisorial: bool = False


@dataclass(frozen=True)
class BaseLocusDecomposition:
    """Formal sum of base-locus cycles with their containment multiplicities."""

    n: int
    entries: tuple[BaseLocusEntry, ...] = ()

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def __contains__(self, cycle):
        return _as_cycle(cycle) in self.as_dict()

    def as_dict(self) -> dict[CycleIndex, int]:
        return {e.cycle: e.k for e in self.entries}

    @property
    def max_dim(self) -> int:
        """Largest dimension of a cycle in the base locus (``-1`` if empty)."""
        return max((e.cycle.dim for e in self.entries), default=-1)

    def divisorial(self) -> list[BaseLocusEntry]:
        return [e for e in self.entries if e.divisorial]


def base_locus(D: DivisorClass, include_secants: bool = False) -> BaseLocusDecomposition:
    """Cycles of positive dimension contained in the base locus of ``|D|``.

    The points themselves are always blown up and are not listed.
    """
    entries = []
    for c in iter_cycles(D.n, D.s, include_secants):
        if c.dim < 1:
            continue
        k = join_multiplicity(D, c)
        if k >= 1:
            entries.append(BaseLocusEntry(c, k, c.dim == D.n - 1))
    return BaseLocusDecomposition(D.n, tuple(entries))


def scale(D: DivisorClass, m: int) -> DivisorClass:
    if m < 1:
        raise ValueError("scale factor must be a positive integer")
    return DivisorClass(D.n, m * D.d, tuple(m * x for x in D.mults))


def combine(D1: DivisorClass, D2: DivisorClass, c1: int = 1, c2: int = 1) -> DivisorClass:
    """Coefficientwise ``c1 * D1 + c2 * D2``."""
    if D1.n != D2.n or D1.s != D2.s:
        raise ValueError(
            f"cannot combine classes on different spaces (n={D1.n}, s={D1.s}) vs (n={D2.n}, s={D2.s})"
        )
    return DivisorClass(
        D1.n,
        c1 * D1.d + c2 * D2.d,
        tuple(c1 * a + c2 * b for a, b in zip(D1.mults, D2.mults)),
    )


def fixed_divisor_class(c: CycleIndex, n: int, s: int) -> DivisorClass:
    """Class of the divisor ``J(L_I, sigma_t)`` with ``|I| + 2t = n``.

    It has degree ``t + 1``, multiplicity ``t + 1`` at the points of ``I`` and
    ``t`` at the remaining points.  For ``t = 0`` this is the hyperplane
    through ``n`` of the points.
    """
    c = _as_cycle(c)
    if c.dim != n - 1:
        raise ValueError(f"{c} is not a divisor in P^{n}")
    if c.t and s != n + 3:
        raise ValueError("secant divisors need s = n + 3 points")
    mults = [c.t] * s
    for i in c.indices:
        mults[i - 1] = c.t + 1
    return DivisorClass(n, c.t + 1, tuple(mults))


@dataclass(frozen=True)
class StrictTransformClass:
    """A class on an iterated blow-up: the point part plus exceptional coefficients.

    ``exceptional`` maps each blown-up cycle (``|I| >= 2`` or ``t >= 1``) to
    its positive coefficient.  ``subtracted`` records the divisorial fixed
    components that were removed from ``base``.
    """

    base: DivisorClass
    exceptional: dict = field(default_factory=dict)
    subtracted: tuple[BaseLocusEntry, ...] = ()

    def __post_init__(self):
        for c, k in self.exceptional.items():
            if len(c.indices) < 2 and c.t == 0:
                raise ValueError(f"{c} is a point or empty; its coefficient lives in base")
            if k < 1:
                raise ValueError(f"exceptional coefficient for {c} must be >= 1, got {k}")

    def coefficient(self, c) -> int:
        return self.exceptional.get(_as_cycle(c), 0)


def strict_transform(D: DivisorClass, r: int, include_secants: bool = False) -> StrictTransformClass:
    """Strict transform of ``D`` after blowing up its base-locus cycles of dimension ``<= r``.

    Cycles of dimension ``n - 1`` (only reached for ``r = n - 1``) are fixed
    divisors: they are subtracted from the class, together with their own
    multiplicity along every blown-up cycle.
    """
    if not -1 <= r <= D.n - 1:
        raise ValueError(f"r must lie in [-1, {D.n - 1}], got {r}")
    if r == -1:
        return StrictTransformClass(D)
    bl = base_locus(D, include_secants)
    exc = {e.cycle: e.k for e in bl
           if 1 <= e.cycle.dim <= min(r, D.n - 2)}
    base = D
    subtracted = ()
    if r == D.n - 1:
        subtracted = tuple(bl.divisorial())
        for e in subtracted:
            G = fixed_divisor_class(e.cycle, D.n, D.s)
            base = combine(base, G, 1, -e.k)
            for c in exc:
                exc[c] -= e.k * join_multiplicity(G, c)
        negative = {c: k for c, k in exc.items() if k < 0}
        if negative:
            raise ValueError(
                "subtracting the fixed divisors leaves negative exceptional "
                f"coefficients {negative}; the class is not effective"
            )
    exc = {c: k for c, k in sorted(exc.items(), key=lambda kv: kv[0].sort_key()) if k}
    return StrictTransformClass(base, exc, subtracted)
