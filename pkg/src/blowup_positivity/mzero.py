"""The Kapranov model of the moduli space of stable rational curves with n+3 marks.

The model is ``P^n`` blown up at ``n + 2`` points ``S = {1..n+2}`` and along
all their linear spans of dimension ``<= n - 2``; the mark ``n + 3`` plays the
special role (its psi class is the hyperplane class).  A divisor
``d H - sum m_I E_I`` is an :class:`MZeroDivisor`.

F-curves are partitions of ``{1..n+3}`` into four blocks.  When ``{n+3}`` is
a block, the intersection with a divisor is ``A_{G,J,L}`` over the three
remaining blocks; otherwise the block containing ``n + 3`` is ``I + {n+3}``
and the intersection is ``B_{I,G,J,L}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Iterator, NamedTuple

import numpy as np

from .divisor import DivisorClass, StrictTransformClass, strict_transform
from .positivity import GGVerdict, is_bpf_full_transform


def _key(I) -> tuple[int, ...]:
    return tuple(sorted(I))


@dataclass(frozen=True, eq=False)
class MZeroDivisor:
    """``d H - sum_I coeffs[I] E_I`` with ``1 <= |I| <= n - 1``, ``I`` inside ``{1..n+2}``."""

    n: int
    d: int
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("the Kapranov model needs n >= 2")
        clean = {}
        for I, m in self.coeffs.items():
            k = _key(I)
            if not 1 <= len(k) <= self.n - 1:
                raise ValueError(f"index set {k} must have 1 <= |I| <= n - 1 = {self.n - 1}")
            if k[0] < 1 or k[-1] > self.n + 2:
                raise ValueError(f"index set {k} not inside 1..{self.n + 2}")
            if m:
                clean[k] = int(m)
        object.__setattr__(self, "coeffs", clean)

    def m(self, I) -> int:
        """Coefficient of ``E_I``; zero for missing or out-of-range index sets."""
        return self.coeffs.get(_key(I), 0)

    def __eq__(self, other):
        if not isinstance(other, MZeroDivisor):
            return NotImplemented
        return (self.n, self.d, self.coeffs) == (other.n, other.d, other.coeffs)

    def __add__(self, other):
        if self.n != other.n:
            raise ValueError("different Kapranov models")
        coeffs = dict(self.coeffs)
        for k, v in other.coeffs.items():
            coeffs[k] = coeffs.get(k, 0) + v
        return MZeroDivisor(self.n, self.d + other.d, coeffs)

    def __repr__(self):
        terms = ", ".join(f"{k}:{v}" for k, v in sorted(self.coeffs.items(), key=lambda kv: (len(kv[0]), kv[0])))
        return f"MZeroDivisor(n={self.n}, d={self.d}, m={{{terms}}})"


@dataclass(frozen=True)
class FCurve:
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        blocks = tuple(sorted((tuple(sorted(b)) for b in self.blocks), key=lambda b: b[0] if b else 0))
        if len(blocks) != 4 or any(not b for b in blocks):
            raise ValueError("an F-curve needs exactly four nonempty blocks")
        flat = [i for b in blocks for i in b]
        if len(set(flat)) != len(flat) or sorted(flat) != list(range(1, len(flat) + 1)):
            raise ValueError(f"blocks {self.blocks} do not partition 1..{len(flat)}")
        object.__setattr__(self, "blocks", blocks)

    @property
    def n(self) -> int:
        return sum(len(b) for b in self.blocks) - 3


def set_partitions(elements, k: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Partitions of ``elements`` into ``k`` nonempty blocks, in restricted-growth order."""
    elements = list(elements)
    size = len(elements)
    if k > size or k < 1:
        return
    labels = [0] * size

    def rec(pos, used):
        if size - pos < k - used:
            return
        if pos == size:
            if used == k:
                blocks = [[] for _ in range(k)]
                for e, lab in zip(elements, labels):
                    blocks[lab].append(e)
                yield tuple(tuple(b) for b in blocks)
            return
        for lab in range(min(used + 1, k)):
            labels[pos] = lab
            yield from rec(pos + 1, max(used, lab + 1))

    yield from rec(0, 0)


def fcurves(n: int) -> list[FCurve]:
    """All F-curves on the moduli space with ``n + 3`` marks, canonical order."""
    return [FCurve(p) for p in set_partitions(range(1, n + 4), 4)]


def boundary_divisor(I, n: int) -> MZeroDivisor:
    """Class of the boundary divisor ``Delta_I`` in the Kapranov basis.

    ``I`` is normalised to contain the mark ``n + 3``; with ``J = I - {n+3}``
    the class is ``E_J`` for ``|J| <= n - 1`` and the strict transform of the
    hyperplane through ``J`` for ``|J| = n``.
    """
    I = set(I)
    full = set(range(1, n + 4))
    if not I <= full:
        raise ValueError(f"index set {sorted(I)} not inside 1..{n + 3}")
    if not 2 <= len(I) <= n + 1:
        raise ValueError(f"boundary index set needs 2 <= |I| <= n + 1, got {sorted(I)}")
    if n + 3 not in I:
        I = full - I
    J = _key(I - {n + 3})
    if len(J) <= n - 1:
        return MZeroDivisor(n, 0, {J: -1})
    coeffs = {sub: 1 for size in range(1, n) for sub in combinations(J, size)}
    return MZeroDivisor(n, 1, coeffs)


def cremona_hyperplane(J, n: int) -> MZeroDivisor:
    """Image of the hyperplane class under the standard Cremona map based at ``J``.

    ``(|J| - 1) h - sum_{J' < J, 1 <= |J'| < |J| - 1} (|J| - |J'| - 1) e_{J'}``.
    With ``J = S - {i}`` this is the psi class of the mark ``i``.
    """
    J = _key(J)
    if len(J) < 2:
        raise ValueError("the Cremona transformation needs |J| >= 2")
    if len(J) > n + 1:
        raise ValueError(f"|J| = {len(J)} exceeds n + 1 = {n + 1}")
    size = len(J)
    coeffs = {sub: size - k - 1 for k in range(1, size - 1) for sub in combinations(J, k)}
    return MZeroDivisor(n, size - 1, coeffs)


def psi_class(i: int, n: int) -> MZeroDivisor:
    if not 1 <= i <= n + 3:
        raise ValueError(f"mark {i} out of range 1..{n + 3}")
    if i == n + 3:
        return MZeroDivisor(n, 1, {})
    return cremona_hyperplane([j for j in range(1, n + 3) if j != i], n)


def fcurve_intersect_boundary(F: FCurve, I) -> int:
    """Intersection number of an F-curve with ``Delta_I`` from the block table."""
    I = set(I)
    inside = 0
    for b in F.blocks:
        bs = set(b)
        if bs <= I:
            inside += 1
        elif bs & I:
            return 0
    if inside == 2:
        return 1
    if inside in (1, 3):
        return -1
    return 0


def _m_gated(D: MZeroDivisor, blocks) -> int:
    """``m`` of the union of ``blocks``; contributes only when the union has size ``<= n - 1``."""
    union = [i for b in blocks for i in b]
    if len(union) > D.n - 1:
        return 0
    return D.m(union)


def _check_partition(n: int, blocks, k: int):
    flat = [i for b in blocks for i in b]
    if len(blocks) != k or any(len(b) == 0 for b in blocks):
        raise ValueError(f"need {k} nonempty blocks")
    if sorted(flat) != list(range(1, n + 3)):
        raise ValueError(f"blocks {blocks} do not partition the model points 1..{n + 2}")


def A_coefficient(D: MZeroDivisor, G, J, L) -> int:
    """Intersection with the F-curve ``{G, J, L, {n+3}}`` (G, J, L partition 1..n+2)."""
    _check_partition(D.n, (G, J, L), 3)
    return (D.d - _m_gated(D, [G]) - _m_gated(D, [J]) - _m_gated(D, [L])
            + _m_gated(D, [J, L]) + _m_gated(D, [J, G]) + _m_gated(D, [L, G]))


def B_coefficient(D: MZeroDivisor, I, G, J, L) -> int:
    """Intersection with the F-curve ``{I + {n+3}, G, J, L}``."""
    _check_partition(D.n, (I, G, J, L), 4)
    return (_m_gated(D, [I]) - _m_gated(D, [I, G]) - _m_gated(D, [I, J]) - _m_gated(D, [I, L])
            + _m_gated(D, [I, J, L]) + _m_gated(D, [I, G, J]) + _m_gated(D, [I, G, L]))


def intersect(D: MZeroDivisor, F: FCurve) -> int:
    if F.n != D.n:
        raise ValueError("F-curve and divisor live on different moduli spaces")
    mark = D.n + 3
    special = next(b for b in F.blocks if mark in b)
    rest = [b for b in F.blocks if b is not special]
    if len(special) == 1:
        return A_coefficient(D, *rest)
    I = tuple(i for i in special if i != mark)
    return B_coefficient(D, I, *rest)


@lru_cache(maxsize=None)
def _fnef_system(n: int):
    """Integer matrix ``M`` and vector ``c`` with ``D.F = c*d + M @ m`` for every F-curve."""
    keys = [k for size in range(1, n) for k in combinations(range(1, n + 3), size)]
    pos = {k: j for j, k in enumerate(keys)}
    curves = fcurves(n)
    M = np.zeros((len(curves), len(keys)), dtype=np.int64)
    c = np.zeros(len(curves), dtype=np.int64)
    mark = n + 3

    def add(row, sign, blocks):
        union = _key(i for b in blocks for i in b)
        if len(union) <= n - 1:
            M[row, pos[union]] += sign

    for row, F in enumerate(curves):
        special = next(b for b in F.blocks if mark in b)
        G, J, L = [b for b in F.blocks if b is not special]
        if len(special) == 1:
            c[row] = 1
            for sign, blocks in ((-1, [G]), (-1, [J]), (-1, [L]),
                                 (1, [J, L]), (1, [J, G]), (1, [L, G])):
                add(row, sign, blocks)
        else:
            I = tuple(i for i in special if i != mark)
            for sign, blocks in ((1, [I]), (-1, [I, G]), (-1, [I, J]), (-1, [I, L]),
                                 (1, [I, J, L]), (1, [I, G, J]), (1, [I, G, L])):
                add(row, sign, blocks)
    M.setflags(write=False)
    c.setflags(write=False)
    return curves, keys, M, c


def fcurve_intersections(D: MZeroDivisor) -> np.ndarray:
    """``D . F`` for every F-curve, in the order of :func:`fcurves`."""
    curves, keys, M, c = _fnef_system(D.n)
    vals = [D.d] + [D.m(k) for k in keys]
    if max(abs(v) for v in vals) < 2**40:
        return c * D.d + M @ np.array(vals[1:], dtype=np.int64)
    # exact fallback for huge coefficients
    m = np.array(vals[1:], dtype=object)
    return c.astype(object) * D.d + M.astype(object) @ m


class FNefResult(NamedTuple):
    is_fnef: bool
    violator: FCurve | None = None
    value: int | None = None

    def __bool__(self):
        return self.is_fnef


def is_fnef(D: MZeroDivisor) -> FNefResult:
    """F-nefness; on failure returns the first violating F-curve in canonical order."""
    vals = fcurve_intersections(D)
    bad = np.flatnonzero(vals < 0)
    if bad.size == 0:
        return FNefResult(True)
    curves = _fnef_system(D.n)[0]
    return FNefResult(False, curves[int(bad[0])], int(vals[bad[0]]))


def effectivity_violation(D: DivisorClass) -> str | None:
    """First failing inequality among those used for strict transforms with ``s = n + 2``."""
    n = D.n
    if D.s != n + 2:
        return f"need s = n + 2 = {n + 2} points, got {D.s}"
    for i, x in enumerate(D.mults, start=1):
        if x < 0:
            return f"m_{i} = {x} < 0"
    if sum(D.mults) > n * D.d:
        return f"sum m = {sum(D.mults)} > n d = {n * D.d}"
    for I in combinations(range(1, n + 3), n + 1):
        tot = sum(D.mults[i - 1] for i in I)
        if tot > n * D.d:
            return f"sum of m over {I} = {tot} > n d = {n * D.d}"
    return None


def embed_strict_transform(D: DivisorClass) -> MZeroDivisor:
    """Strict transform of ``D`` (with ``s = n + 2``) as a class on the Kapranov model.

    Point multiplicities are kept; ``E_I`` for ``2 <= |I| <= n - 1`` gets the
    containment multiplicity ``k_I``, and fixed hyperplanes are subtracted.
    """
    if D.n < 2:
        raise ValueError("the Kapranov model needs n >= 2")
    bad = effectivity_violation(D)
    if bad:
        raise ValueError(f"not a strict transform of an effective class: {bad}")
    return transform_image(strict_transform(D, D.n - 1))


def transform_image(T: StrictTransformClass) -> MZeroDivisor:
    """Read a linear strict transform on ``n + 2`` points as a Kapranov-model class."""
    n = T.base.n
    if T.base.s != n + 2:
        raise ValueError(f"need s = n + 2 = {n + 2} points, got {T.base.s}")
    if any(c.t for c in T.exceptional):
        raise ValueError("secant exceptional divisors have no place in the Kapranov model")
    coeffs = {(i,): m for i, m in enumerate(T.base.mults, start=1)}
    coeffs.update({c.indices: k for c, k in T.exceptional.items()})
    return MZeroDivisor(n, T.base.d, coeffs)


@dataclass(frozen=True)
class FultonReport:
    divisor: DivisorClass
    image: MZeroDivisor
    gg_inequalities: bool
    bpf: GGVerdict
    nef: bool
    fnef: FNefResult

    @property
    def all_true(self) -> bool:
        return self.gg_inequalities and self.nef and self.fnef.is_fnef


class CertificationError(AssertionError):
    """A proven implication failed: this signals a bug, not a mathematical finding."""


def _gg_inequalities(D: DivisorClass) -> bool:
    if any(not 0 <= x <= D.d for x in D.mults):
        return False
    top = sorted(D.mults, reverse=True)[: D.n + 1]
    return sum(top) <= D.n * D.d


def fulton_certify(D: DivisorClass) -> FultonReport:
    """Global generation, nefness and F-nefness of the strict transform of ``D``.

    Global generation is read off the inequality system for the full
    transform; nefness follows from it.  The F-curve sweep must then agree.
    """
    image = embed_strict_transform(D)
    gg = _gg_inequalities(D)
    fnef = is_fnef(image)
    if gg and not fnef.is_fnef:
        raise CertificationError(
            f"globally generated strict transform of {D} fails F-nef at {fnef.violator} "
            f"(value {fnef.value})"
        )
    return FultonReport(D, image, gg, is_bpf_full_transform(D), gg, fnef)
