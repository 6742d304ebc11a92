"""Log pairs ``(X, eps D)`` on blow-ups of ``P^n`` at points: canonical classes,
discrepancies along the blown-up base locus and the abundance inequalities.

All coefficients are exact :class:`fractions.Fraction` values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .divisor import CycleIndex, DivisorClass, base_locus, iter_cycles, join_multiplicity


class InternalCheckError(AssertionError):
    """An inequality that follows from the hypotheses failed: a bug, not a finding."""


def parse_epsilon(eps) -> Fraction:
    """Exact rational from ``Fraction``, ``int`` or a string such as ``"1/4"``."""
    if isinstance(eps, float):
        raise TypeError("epsilon must be exact; pass a Fraction or a 'p/q' string")
    return Fraction(eps)


@dataclass(frozen=True)
class LogPair:
    divisor: DivisorClass
    epsilon: Fraction

    def __post_init__(self):
        eps = parse_epsilon(self.epsilon)
        if eps < 0:
            raise ValueError(f"epsilon must be >= 0, got {eps}")
        object.__setattr__(self, "epsilon", eps)


@dataclass(frozen=True)
class ClassRecord:
    """``h H + sum_i points[i] E_i + sum_c exceptional[c] E_c`` with rational coefficients."""

    n: int
    h: Fraction
    points: tuple
    exceptional: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "h", Fraction(self.h))
        object.__setattr__(self, "points", tuple(Fraction(x) for x in self.points))
        object.__setattr__(self, "exceptional",
                           {c: Fraction(v) for c, v in self.exceptional.items() if v})

    def _combine(self, other, sign):
        if self.n != other.n or len(self.points) != len(other.points):
            raise ValueError("classes live on different spaces")
        exc = dict(self.exceptional)
        for c, v in other.exceptional.items():
            exc[c] = exc.get(c, 0) + sign * v
        return ClassRecord(self.n, self.h + sign * other.h,
                           tuple(a + sign * b for a, b in zip(self.points, other.points)), exc)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def scaled(self, c) -> "ClassRecord":
        c = Fraction(c)
        return ClassRecord(self.n, c * self.h, tuple(c * x for x in self.points),
                           {k: c * v for k, v in self.exceptional.items()})

    def as_dict(self) -> dict:
        return {
            "H": str(self.h),
            "E": [str(x) for x in self.points],
            "exceptional": {str(c): str(v) for c, v in
                            sorted(self.exceptional.items(), key=lambda kv: kv[0].sort_key())},
        }


def divisor_record(D: DivisorClass) -> ClassRecord:
    return ClassRecord(D.n, D.d, tuple(-m for m in D.mults))


def canonical_class(space: str, n: int, s: int, cycles=()) -> ClassRecord:
    """Canonical class of ``X`` (points blown up), ``Y`` (plus linear centers) or
    ``Ysigma`` (plus secant joins); each center of dimension ``r`` gets ``n - r - 1``."""
    if space not in ("X", "Y", "Ysigma"):
        raise ValueError(f"unknown space {space!r}; expected X, Y or Ysigma")
    exc = {}
    if space != "X":
        for c in cycles:
            c = c if isinstance(c, CycleIndex) else CycleIndex(*c)
            if space == "Y" and c.t:
                raise ValueError(f"{c} is a secant join; use Ysigma")
            if c.t and s != n + 3:
                raise ValueError("secant joins need s = n + 3 points")
            if not 1 <= c.dim <= n - 2:
                raise ValueError(f"center {c} must have dimension between 1 and n - 2")
            if any(i > s for i in c.indices):
                raise ValueError(f"center {c} uses a point beyond s = {s}")
            exc[c] = n - c.dim - 1
    elif cycles:
        raise ValueError("X has no centers beyond the points")
    return ClassRecord(n, -(n + 1), (n - 1,) * s, exc)


def adjoint_class(p: LogPair) -> ClassRecord:
    """``K_X + eps D = (eps d - n - 1) H - sum (eps m_i - n + 1) E_i``."""
    D, eps, n = p.divisor, p.epsilon, p.divisor.n
    return ClassRecord(n, eps * D.d - n - 1, tuple(-(eps * m - n + 1) for m in D.mults))


@dataclass(frozen=True)
class AbundanceResult:
    holds: bool
    witness: tuple | None = None
    reason: str = ""

    def __bool__(self):
        return self.holds


def abundance_condition(p: LogPair) -> AbundanceResult:
    """``eps m_i >= n - 1`` for all ``i`` and ``eps (m_i + m_j - d) <= n - 3`` for ``i != j``."""
    D, eps, n = p.divisor, p.epsilon, p.divisor.n
    for i, m in enumerate(D.mults, start=1):
        if eps * m < n - 1:
            return AbundanceResult(False, (i,), f"eps m_{i} = {eps * m} < n - 1 = {n - 1}")
    for i, j in combinations(range(1, D.s + 1), 2):
        val = eps * (D.mults[i - 1] + D.mults[j - 1] - D.d)
        if val > n - 3:
            return AbundanceResult(False, (i, j), f"eps (m_{i} + m_{j} - d) = {val} > n - 3 = {n - 3}")
    return AbundanceResult(True)


def _cycles_for(D: DivisorClass, include_secants: bool):
    secants = include_secants and D.s == D.n + 3
    if include_secants and D.s != D.n + 3:
        raise ValueError(f"secant joins need s = n + 3 = {D.n + 3} points, got {D.s}")
    return secants


@dataclass(frozen=True)
class BoundsReport:
    checked: int
    max_ratio: dict = field(default_factory=dict)


def derived_bounds(p: LogPair, include_secants: bool | None = None) -> BoundsReport:
    """Check the inequalities that follow from the abundance condition.

    ``eps (m_i - d) <= -2`` for every point (needs ``s >= 2``);
    ``eps k <= max{0, n - 1 - 2r}`` for every cycle with ``1 <= r <= n - 1``;
    ``eps k <= n - r`` for ``1 <= r <= n - 2``.  Secant joins are included when
    ``s = n + 3`` unless ``include_secants`` is False.  Any failure raises
    :class:`InternalCheckError`.
    """
    ab = abundance_condition(p)
    if not ab:
        raise ValueError(f"abundance condition fails: {ab.reason}")
    D, eps, n = p.divisor, p.epsilon, p.divisor.n
    if include_secants is None:
        include_secants = D.s == D.n + 3
    secants = _cycles_for(D, include_secants)
    checked = 0
    worst = {}
    if D.s >= 2:
        for i, m in enumerate(D.mults, start=1):
            checked += 1
            if eps * (m - D.d) > -2:
                raise InternalCheckError(f"eps (m_{i} - d) = {eps * (m - D.d)} > -2 for {D}, eps={eps}")
    for c in iter_cycles(n, D.s, secants):
        if c.dim < 1:
            continue
        k = join_multiplicity(D, c)
        val = eps * k
        bound = max(0, n - 1 - 2 * c.dim)
        checked += 1
        if val > bound:
            raise InternalCheckError(f"eps k({c}) = {val} > max(0, n - 1 - 2r) = {bound} for {D}, eps={eps}")
        if c.dim <= n - 2 and val > n - c.dim:
            raise InternalCheckError(f"eps k({c}) = {val} > n - r = {n - c.dim}")
        if bound and val:
            worst[c.dim] = max(worst.get(c.dim, Fraction(0)), val / bound)
    return BoundsReport(checked, worst)


@dataclass(frozen=True)
class DiscrepancyReport:
    entries: tuple
    discrep: Fraction
    lc: bool
    missing_secant_centers: bool = False


def discrepancies(p: LogPair, include_secants: bool = False) -> DiscrepancyReport:
    """Discrepancies of ``(X, eps D)`` along the blown-up base locus of ``D``.

    Each base-locus cycle of dimension ``1 <= r <= n - 2`` contributes
    ``n - r - 1 - eps k``.  The boundary coefficients are ``eps`` for the
    moving part and ``eps k`` for each fixed divisor, contributing ``1 - a``.
    """
    D, eps, n = p.divisor, p.epsilon, p.divisor.n
    if eps > 1:
        raise ValueError(f"epsilon = {eps} > 1 is outside the range of the discrepancy formula")
    secants = _cycles_for(D, include_secants)
    bl = base_locus(D, secants)
    entries = []
    candidates = [Fraction(1), 1 - eps]
    for e in bl:
        if 1 <= e.cycle.dim <= n - 2:
            a = n - e.cycle.dim - 1 - eps * e.k
            entries.append((e.cycle, a))
            candidates.append(a)
        elif e.divisorial:
            candidates.append(1 - eps * e.k)
    missing = False
    if not secants and D.s == n + 3:
        missing = any(join_multiplicity(D, c) for c in iter_cycles(n, D.s, True) if c.t)
    discrep = min(candidates)
    return DiscrepancyReport(tuple(entries), discrep, discrep >= -1, missing)


def is_lc(p: LogPair, include_secants: bool = False) -> bool:
    """Log canonicity; under the abundance condition a negative answer raises."""
    rep = discrepancies(p, include_secants)
    if not rep.lc and abundance_condition(p) and p.divisor.n > 3:
        raise InternalCheckError(f"abundance condition holds but discrep = {rep.discrep} < -1")
    return rep.lc
