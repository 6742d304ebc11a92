"""Global generation of strict transforms on iterated blow-ups along linear cycles."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import combinations

from .divisor import DivisorClass


class GGStatus(str, Enum):
    GLOBALLY_GENERATED = "GloballyGenerated"
    NOT_GLOBALLY_GENERATED = "NotGloballyGenerated"
    OUT_OF_THEOREM_RANGE = "OutOfTheoremRange"


@dataclass(frozen=True)
class GGVerdict:
    status: GGStatus
    witness: tuple[int, ...] | None = None
    reason: str = ""

    def __post_init__(self):
        has_witness = self.witness is not None
        if has_witness != (self.status is GGStatus.NOT_GLOBALLY_GENERATED):
            raise ValueError("a witness is present exactly for NotGloballyGenerated verdicts")

    @property
    def globally_generated(self) -> bool:
        return self.status is GGStatus.GLOBALLY_GENERATED


def b_zero(D: DivisorClass) -> int:
    """Slack allowed in ``sum m_i - n d`` by the degree gate.

    Multiplicities are sorted in decreasing order before testing the special
    shape ``(d - 1, 1, ..., 1)``.
    """
    n, s = D.n, D.s
    if s <= n + 2:
        return -1
    m = sorted(D.mults, reverse=True)
    if m[0] == D.d - 1 and all(x == 1 for x in m[1:]):
        return min(n - 1, s - n - 2) - 1
    return min(n, s - n - 2) - 1


def gg_degree_bound(D: DivisorClass) -> bool:
    return D.s <= D.n + 1 or sum(D.mults) - D.n * D.d <= b_zero(D)


def vanishing_bound_check(D: DivisorClass) -> bool:
    """Coefficient bounds under which strict transforms have no higher cohomology."""
    n, d, s, m = D.n, D.d, D.s, D.mults
    if any(x < 0 for x in m):
        return False
    if s >= 2:
        top2 = sorted(m, reverse=True)[:2]
        if sum(top2) > d + 1:
            return False
    if s <= n + 1:
        slack = n if d >= 2 else 1
    elif s == n + 2:
        slack = 1
    else:
        s_d = sum(1 for x in m if x == d)
        slack = min(n - s_d, s - n - 2)
    return sum(m) <= n * d + slack


def _gg_conditions(D: DivisorClass, size: int, bound: int) -> GGVerdict:
    for i, x in enumerate(D.mults, start=1):
        if not 0 <= x <= D.d:
            return GGVerdict(GGStatus.NOT_GLOBALLY_GENERATED, (i,),
                             f"m_{i} = {x} outside [0, d = {D.d}]")
    if size <= D.s:
        # the largest multiplicities give the tightest constraint
        order = sorted(range(1, D.s + 1), key=lambda i: (-D.mults[i - 1], i))
        worst = tuple(sorted(order[:size]))
        total = sum(D.mults[i - 1] for i in worst)
        if total > bound:
            # report the lexicographically first violating set
            for I in combinations(range(1, D.s + 1), size):
                if sum(D.mults[i - 1] for i in I) > bound:
                    return GGVerdict(GGStatus.NOT_GLOBALLY_GENERATED, I,
                                     f"sum of m over {I} exceeds {bound}")
    return GGVerdict(GGStatus.GLOBALLY_GENERATED)


def _gate(D: DivisorClass) -> GGVerdict | None:
    if D.s >= D.n + 2 and not gg_degree_bound(D):
        return GGVerdict(
            GGStatus.OUT_OF_THEOREM_RANGE,
            reason=f"sum m - n d = {sum(D.mults) - D.n * D.d} > b0 = {b_zero(D)}",
        )
    return None


def is_globally_generated(D: DivisorClass, r: int) -> GGVerdict:
    """Decide whether the strict transform ``D_(r)`` is globally generated."""
    if not 0 <= r <= D.n - 1:
        raise ValueError(f"r must lie in [0, {D.n - 1}], got {r}")
    return _gate(D) or _gg_conditions(D, r + 2, (r + 1) * D.d)


def is_bpf_full_transform(D: DivisorClass) -> GGVerdict:
    """Base-point freeness of the strict transform after all linear blow-ups
    and subtraction of fixed hyperplanes."""
    return _gate(D) or _gg_conditions(D, D.n + 1, D.n * D.d)
