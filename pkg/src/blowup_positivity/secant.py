"""Secant joins for ``n + 3`` points: virtual dimensions, intersections of joins,
the fixed divisors Sigma / Gamma and the decomposition ``D = D' + alpha Sigma``.

With ``s = n + 3`` points there is a unique rational normal curve ``C`` through
them; ``sigma_t`` is its ``t``-secant variety and ``J(L_I, sigma_t)`` the join
with the span of the points in ``I``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

from .divisor import (
    CycleIndex,
    DivisorClass,
    MAX_POINTS,
    combine,
    iter_cycles,
    join_multiplicity,
)


class GateError(ValueError):
    """Input lies outside the hypotheses under which the result is known."""


class DecompositionError(ArithmeticError):
    """A bound that should follow from the hypotheses failed."""


def _binom_n(a: int, n: int) -> int:
    return comb(a, n) if a >= n else 0


def _positive_subsets(vals, d: int, offset: int, max_size: int):
    """Subsets ``I`` (1-based, ``|I| <= max_size``) with positive
    ``u(I) = offset + sum_I m_i - (|I| - 1) d``; yields ``(I, u(I))``.

    Points are visited by decreasing ``m_i - d`` so a branch is cut as soon
    as even the most favourable extension stays nonpositive.
    """
    s = len(vals)
    order = sorted(range(s), key=lambda i: -vals[i])
    gains = [vals[i] - d for i in order]
    tail = [0] * (s + 1)
    for j in range(s - 1, -1, -1):
        tail[j] = tail[j + 1] + max(0, gains[j])
    out = []

    def rec(j, chosen, u):
        if u > 0:
            out.append((tuple(sorted(order[i] + 1 for i in chosen)), u))
        if len(chosen) == max_size:
            return
        for nxt in range(j, s):
            if u + gains[nxt] + tail[nxt + 1] <= 0:
                break
            chosen.append(nxt)
            rec(nxt + 1, chosen, u + gains[nxt])
            chosen.pop()

    rec(0, [], offset + d)
    return out


def _check_n3(D: DivisorClass):
    if D.s != D.n + 3:
        raise GateError(f"needs s = n + 3 = {D.n + 3} points, got {D.s}")


def sldim(D: DivisorClass) -> int:
    """Secant linear virtual dimension (not clamped at zero).

    ``sum_{t, I} (-1)^{|I|} binom(n + k_{I,t} - r_{I,t} - 1, n)`` over
    ``0 <= t <= ceil(n/2)`` and ``0 <= |I| <= n - 2t``.
    """
    _check_n3(D)
    n, d = D.n, D.d
    total_m = sum(D.mults)
    out = 0
    for t in range((n + 1) // 2 + 1):
        max_size = n - 2 * t
        if max_size < 0:
            break
        offset = t * total_m - (n + 1) * t * d
        if t == 0:
            out += comb(n + d, n) if d >= 0 else 0
        for I, k in _positive_subsets(D.mults, d, offset, max_size):
            if not I and t == 0:
                continue
            r = len(I) + 2 * t - 1
            out += (-1) ** len(I) * _binom_n(n + k - r - 1, n)
    return out


def ldim(D: DivisorClass) -> int:
    """Linear virtual dimension: the ``t = 0`` part of :func:`sldim`, over all ``I``."""
    if D.s > MAX_POINTS:
        raise ValueError(f"s={D.s} exceeds the subset-enumeration cap of {MAX_POINTS}")
    n, d = D.n, D.d
    out = comb(n + d, n) if d >= 0 else 0
    for I, k in _positive_subsets(D.mults, d, 0, D.s):
        if I:
            out += (-1) ** len(I) * _binom_n(n + k - len(I), n)
    return out


@dataclass(frozen=True)
class JoinIntersection:
    components: tuple[CycleIndex, ...]
    common: tuple[int, ...] = ()

    @property
    def empty(self) -> bool:
        return not self.components


def _disjoint_components(I1, I2, r):
    h2 = len(I1) + len(I2)
    if h2 % 2:
        return []
    h = h2 // 2
    r_J = r - h
    shift = len(I1) - len(I2)
    if shift % 2:
        return []
    out = []
    for a in range(len(I1) + 1):
        b = a - shift // 2
        if not 0 <= b <= len(I2):
            continue
        for A in combinations(I1, a):
            for B in combinations(I2, b):
                J = tuple(sorted(A + B))
                twice_t = r_J - len(J) + 1
                if twice_t < 0 or twice_t % 2:
                    continue
                out.append(CycleIndex(J, twice_t // 2))
    return out


def join_intersection(c1, c2, n: int) -> JoinIntersection:
    """Components of ``J(L_{I1}, sigma_{t1}) ∩ J(L_{I2}, sigma_{t2})`` in ``P^n``.

    Disjoint vertices need equal dimension ``r <= n - 1`` with
    ``2r <= 2n - (|I1| + |I2|)``; a shared vertex ``I12`` needs ``2r <= n - 1``
    and is reduced to the disjoint case, then joined back onto every component.
    """
    c1 = c1 if isinstance(c1, CycleIndex) else CycleIndex(*c1)
    c2 = c2 if isinstance(c2, CycleIndex) else CycleIndex(*c2)
    r = c1.dim
    if c2.dim != r:
        raise GateError(f"dimensions differ: {c1} has {c1.dim}, {c2} has {c2.dim}")
    if r > n - 1:
        raise GateError(f"dimension {r} exceeds n - 1 = {n - 1}")
    I1, I2 = set(c1.indices), set(c2.indices)
    common = tuple(sorted(I1 & I2))
    if not common:
        if 2 * r > 2 * n - (len(I1) + len(I2)):
            raise GateError(
                f"2r = {2 * r} > 2n - (|I1| + |I2|) = {2 * n - len(I1) - len(I2)}"
            )
        comps = [c for c in _disjoint_components(sorted(I1), sorted(I2), r) if c.dim >= 0]
        return JoinIntersection(tuple(sorted(comps, key=CycleIndex.sort_key)))
    if 2 * r > n - 1:
        raise GateError(f"shared vertex {common} needs 2r <= n - 1, got r = {r}, n = {n}")
    P1, P2 = sorted(I1 - set(common)), sorted(I2 - set(common))
    r_red = r - len(common)
    comps = []
    for c in _disjoint_components(P1, P2, r_red):
        if c.dim < -1:
            continue
        comps.append(CycleIndex(tuple(sorted(c.indices + common)), c.t))
    return JoinIntersection(tuple(sorted(set(comps), key=CycleIndex.sort_key)), common)


def _nu(n: int, even: bool) -> int:
    if even and n % 2:
        raise ValueError(f"n = {n} is odd; Sigma needs n even")
    if not even and n % 2 == 0:
        raise ValueError(f"n = {n} is even; Gamma needs n odd")
    nu = n // 2
    if nu < 1:
        raise ValueError("n too small")
    return nu


def sigma_class(n: int) -> DivisorClass:
    """``(nu + 1) H - nu sum E_i`` on ``n + 3`` points, ``n = 2 nu``."""
    nu = _nu(n, True)
    return DivisorClass(n, nu + 1, (nu,) * (n + 3))


def gamma_class(n: int) -> DivisorClass:
    """``(nu + 1) H - (nu + 1) E_1 - nu sum_{i >= 2} E_i`` on ``n + 3`` points, ``n = 2 nu + 1``."""
    nu = _nu(n, False)
    return DivisorClass(n, nu + 1, (nu + 1,) + (nu,) * (n + 2))


def fixed_divisor(n: int) -> DivisorClass:
    return sigma_class(n) if n % 2 == 0 else gamma_class(n)


def k_on_fixed_divisor(c, n: int) -> int:
    """Multiplicity of a join along Sigma (n even) or Gamma (n odd)."""
    c = c if isinstance(c, CycleIndex) else CycleIndex(*c)
    nu = n // 2
    delta = 1 if (n % 2 and 1 in c.indices) else 0
    return max(0, nu - len(c.indices) - c.t + 1 + delta)


@dataclass(frozen=True)
class IntegerInterval:
    lo: int
    hi: int

    @property
    def empty(self) -> bool:
        return self.lo > self.hi

    def __contains__(self, x):
        return self.lo <= x <= self.hi

    def __iter__(self):
        return iter(range(self.lo, self.hi + 1))

    def __len__(self):
        return max(0, self.hi - self.lo + 1)


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def _k_curve(D: DivisorClass) -> int:
    return join_multiplicity(D, CycleIndex((), 1))


def alpha_interval(D: DivisorClass) -> IntegerInterval:
    """Admissible multiples of Sigma: ``k_C / nu <= alpha <= min_i {m_i / nu, d - m_i}``."""
    _check_n3(D)
    nu = _nu(D.n, True)
    lo = max(0, _ceil_div(_k_curve(D), nu))
    hi = min(min(m // nu, D.d - m) for m in D.mults)
    return IntegerInterval(lo, hi)


def beta_interval(D: DivisorClass, literal_display: bool = False) -> IntegerInterval:
    """Admissible multiples of Gamma.

    The upper bound is ``min_i {m_i / (nu + delta_i), d - m_i}`` with
    ``delta_i = 1`` only for the point 1, which is what keeps every
    ``m_i - beta nu`` nonnegative.  ``literal_display=True`` uses ``m_1`` in
    every numerator instead.
    """
    _check_n3(D)
    nu = _nu(D.n, False)
    lo = max(0, _ceil_div(_k_curve(D), nu))
    bounds = []
    for i, m in enumerate(D.mults, start=1):
        num = D.mults[0] if literal_display else m
        bounds.append(min(num // (nu + (1 if i == 1 else 0)), D.d - m))
    return IntegerInterval(lo, min(bounds))


@dataclass(frozen=True)
class Decomposition:
    D: DivisorClass
    multiple: int
    fixed: DivisorClass
    residual_class: DivisorClass
    residuals: dict

    @property
    def k_curve_residual(self) -> int:
        return _k_curve(self.residual_class)


def decompose(D: DivisorClass, multiple: int, literal_display: bool = False) -> Decomposition:
    """Split ``D = D' + alpha Sigma`` (n even) or ``D' + beta Gamma`` (n odd).

    Returns ``D'`` with the residual exceptional coefficients
    ``k(alpha Sigma) + k(D') - k(D)`` on every cycle of dimension ``<= n - 2``
    where one of the three is positive.  Every bound the hypotheses
    guarantee is checked: ``0 <= m'_i <= d'``, residuals are nonnegative,
    ``D'`` has no secant base locus (so ``k_C(D') = 0``) and no fixed spans
    with more than ``nu`` points (``nu + 1`` for n odd).
    """
    _check_n3(D)
    n = D.n
    interval = alpha_interval(D) if n % 2 == 0 else beta_interval(D, literal_display)
    if multiple not in interval:
        raise ValueError(f"multiple {multiple} outside admissible interval [{interval.lo}, {interval.hi}]")
    G = fixed_divisor(n)
    Dp = combine(D, G, 1, -multiple)
    if any(not 0 <= m <= Dp.d for m in Dp.mults):
        raise DecompositionError(f"D' = {Dp} has multiplicities outside [0, d']")
    nu = n // 2
    residuals = {}
    for c in iter_cycles(n, n + 3, include_secants=True, max_dim=n - 1):
        kD = join_multiplicity(D, c)
        kDp = join_multiplicity(Dp, c)
        kG = multiple * join_multiplicity(G, c)
        if c.t and kDp:
            raise DecompositionError(f"D' keeps secant base locus along {c} (k = {kDp})")
        if not c.t and len(c.indices) >= nu + 1 + n % 2 and kDp:
            raise DecompositionError(f"D' keeps the span {c} in its base locus (k = {kDp})")
        if c.dim == n - 1:
            continue
        res = kG + kDp - kD
        if res < 0:
            raise DecompositionError(f"negative residual {res} on {c}")
        if kG or kDp or kD:
            residuals[c] = res
    return Decomposition(D, multiple, G, Dp, residuals)
