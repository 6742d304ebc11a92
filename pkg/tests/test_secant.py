from __future__ import annotations

from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from blowup_positivity.divisor import CycleIndex, DivisorClass, iter_cycles, join_multiplicity
from blowup_positivity.oracle import (
    RationalNormalCurve,
    evaluate_forms,
    generic_cycle_point,
    nullspace_mod_p,
    point_conditions,
    sample_config,
)
from blowup_positivity.secant import (
    GateError,
    IntegerInterval,
    alpha_interval,
    beta_interval,
    decompose,
    gamma_class,
    join_intersection,
    k_on_fixed_divisor,
    ldim,
    sigma_class,
    sldim,
)


def test_sldim_examples():
    assert sldim(DivisorClass(2, 2, (1,) * 5)) == 1
    assert sldim(DivisorClass(2, 2, (2, 1, 1, 1, 1))) == 0
    assert sldim(DivisorClass(2, 2, (2, 2, 0, 0, 0))) == 1
    assert sldim(DivisorClass(3, 2, (1,) * 6)) == 4
    with pytest.raises(GateError):
        sldim(DivisorClass(2, 2, (1,) * 4))


def test_ldim_examples():
    assert ldim(DivisorClass(2, 3, (2, 2))) == 4
    assert ldim(DivisorClass(2, 2, (2, 2))) == 1
    assert ldim(DivisorClass(3, 4, ())) == 35
    # virtual dimension, not clamped: -binom(2 + 1 - 1, 2)
    assert ldim(DivisorClass(2, -1, (1,))) == -1


def _brute_ldim(D):
    from math import comb

    n, d = D.n, D.d
    out = comb(n + d, n) if d >= 0 else 0
    for size in range(1, D.s + 1):
        for I in combinations(range(D.s), size):
            k = sum(D.mults[i] for i in I) - (size - 1) * d
            if k > 0 and n + k - size >= n:
                out += (-1) ** size * comb(n + k - size, n)
    return out


def _brute_sldim(D):
    from math import comb

    n, d = D.n, D.d
    out = comb(n + d, n) if d >= 0 else 0
    for t in range((n + 1) // 2 + 1):
        for size in range(0, n - 2 * t + 1):
            if t == 0 and size == 0:
                continue
            for I in combinations(range(1, D.s + 1), size):
                k = join_multiplicity(D, CycleIndex(I, t)) if size + 2 * t - 1 <= n - 1 else max(
                    0, t * sum(D.mults) + sum(D.mults[i - 1] for i in I) - ((n + 1) * t + size - 1) * d)
                r = size + 2 * t - 1
                a = n + k - r - 1
                out += (-1) ** size * (comb(a, n) if k > 0 and a >= n else 0)
    return out


@settings(max_examples=300, deadline=None)
@given(st.integers(1, 5).flatmap(
    lambda n: st.tuples(st.just(n), st.integers(-1, 9),
                        st.lists(st.integers(0, 9), min_size=n + 3, max_size=n + 3))))
def test_pruned_enumeration_matches_full_sweep(data):
    n, d, m = data
    D = DivisorClass(n, d, tuple(m))
    assert ldim(D) == _brute_ldim(D)
    assert sldim(D) == _brute_sldim(D)


def test_join_intersection_examples():
    assert join_intersection(CycleIndex((1, 2)), CycleIndex((3, 4)), 3).empty
    res = join_intersection(CycleIndex((1,), 1), CycleIndex((2,), 1), 5)
    assert set(res.components) == {CycleIndex((), 1), CycleIndex((1, 2))}
    res = join_intersection(CycleIndex((1, 2)), CycleIndex((2, 3)), 3)
    assert res.components == (CycleIndex((2,)),) and res.common == (2,)
    with pytest.raises(GateError):
        join_intersection(CycleIndex((1, 2)), CycleIndex((3,), 1), 5)
    with pytest.raises(GateError):
        join_intersection(CycleIndex((1, 2, 3)), CycleIndex((3, 4, 5)), 4)


def _cone_quadric(cfg, curve, vertex, rng):
    """The quadric cone over the twisted cubic with vertex ``p_vertex``."""
    p = cfg.prime
    rows = [point_conditions(cfg.points[vertex - 1], 2, 2, p)]
    for _ in range(8):
        rows.append(point_conditions(curve.point(int(rng.integers(1, p))), 1, 2, p))
    K = nullspace_mod_p(np.vstack(rows), p)
    assert K.shape[0] == 1
    return K


def test_two_point_vertex_cones_meet_in_curve_and_line():
    cfg = sample_config(3, 6, 5)
    curve = RationalNormalCurve.through(cfg)
    rng = np.random.default_rng(0)
    Q1 = _cone_quadric(cfg, curve, 1, rng)
    Q2 = _cone_quadric(cfg, curve, 2, rng)
    both = np.vstack([Q1, Q2])
    # independent quadrics: their intersection is a curve of degree 4
    assert nullspace_mod_p(both, cfg.prime).shape[0] == 8
    comps = join_intersection(CycleIndex((1,), 1), CycleIndex((2,), 1), 3).components
    assert set(comps) == {CycleIndex((), 1), CycleIndex((1, 2))}
    for c in comps:
        for _ in range(5):
            q = generic_cycle_point(cfg, c, rng, curve)
            assert not evaluate_forms(both, q, 2, cfg.prime).any()
    # degree bookkeeping: twisted cubic (3) plus a line (1) = 2 * 2
    assert 3 + 1 == 2 * 2
    # a generic point of each cone alone is not on the other cone
    q = generic_cycle_point(cfg, CycleIndex((1,), 1), rng, curve)
    assert evaluate_forms(Q2, q, 2, cfg.prime).any()


@pytest.mark.parametrize("n", range(2, 9))
def test_join_components_satisfy_block_equations(n):
    s = n + 3
    cycles = list(iter_cycles(n, s, include_secants=True))
    for a, b in combinations(cycles[::3], 2):
        try:
            res = join_intersection(a, b, n)
        except GateError:
            continue
        common = set(res.common)
        for c in res.components:
            J = set(c.indices) - common
            assert J <= (set(a.indices) | set(b.indices)) - common
            assert c.dim <= a.dim
            assert common <= set(c.indices)
            h = (len(a.indices) + len(b.indices) - 2 * len(common)) // 2
            assert c.dim - len(common) == a.dim - len(common) - h


def test_sigma_gamma_classes():
    assert sigma_class(4) == DivisorClass(4, 3, (2,) * 7)
    assert gamma_class(5) == DivisorClass(5, 3, (3,) + (2,) * 7)
    assert sigma_class(2) == DivisorClass(2, 2, (1,) * 5)
    with pytest.raises(ValueError):
        sigma_class(5)
    with pytest.raises(ValueError):
        gamma_class(4)


def test_k_on_fixed_divisor_examples():
    assert k_on_fixed_divisor(CycleIndex((), 2), 4) == 1
    assert k_on_fixed_divisor(CycleIndex((1, 2), 1), 4) == 0
    assert k_on_fixed_divisor(CycleIndex((1,), 2), 5) == 1


@pytest.mark.parametrize("n", range(2, 9))
def test_k_on_fixed_divisor_matches_join_multiplicity(n):
    G = sigma_class(n) if n % 2 == 0 else gamma_class(n)
    for c in iter_cycles(n, n + 3, include_secants=True, max_dim=n - 1):
        assert k_on_fixed_divisor(c, n) == join_multiplicity(G, c), c


def test_interval_semantics():
    iv = IntegerInterval(2, 1)
    assert iv.empty and len(iv) == 0 and list(iv) == []
    iv = IntegerInterval(1, 3)
    assert 2 in iv and list(iv) == [1, 2, 3]


def test_alpha_interval_examples():
    D = DivisorClass(4, 3, (2,) * 7)
    assert alpha_interval(D) == IntegerInterval(1, 1)
    D = DivisorClass(4, 9, (2,) * 7)
    assert alpha_interval(D).lo == 0
    assert decompose(D, 0).residual_class == D
    assert alpha_interval(DivisorClass(4, 3, (3,) * 7)).empty


def test_decompose_examples():
    dec = decompose(DivisorClass(4, 3, (2,) * 7), 1)
    assert dec.residual_class == DivisorClass(4, 0, (0,) * 7)
    assert dec.k_curve_residual == 0
    assert all(v >= 0 for v in dec.residuals.values())
    D = DivisorClass(4, 9, (2,) * 7)
    assert all(v == 0 for v in decompose(D, 0).residuals.values())
    with pytest.raises(ValueError):
        decompose(DivisorClass(4, 3, (2,) * 7), 2)


def test_beta_interval_readings():
    D = DivisorClass(5, 9, (7, 6, 6, 6, 6, 6, 6, 6))
    iv = beta_interval(D)
    assert not iv.empty
    for b in iv:
        dec = decompose(D, b)
        assert dec.k_curve_residual == 0
    lit = beta_interval(D, literal_display=True)
    assert lit.lo == iv.lo and lit.hi >= iv.hi


def _admissible(n, rng):
    nu = n // 2
    q = int(rng.integers(1, 4))
    while True:
        m = tuple(int(x) for x in rng.integers((n - 1) * q, n * q, size=n + 3))
        d = int(rng.integers(max(m) + 1, max(m) + 3 * q + 2))
        D = DivisorClass(n, d, m)
        iv = alpha_interval(D) if n % 2 == 0 else beta_interval(D)
        if not iv.empty:
            return D, iv, nu


@pytest.mark.parametrize("n", [4, 5, 6, 7])
def test_decompose_random(n):
    rng = np.random.default_rng(n)
    for _ in range(10):
        D, iv, _nu = _admissible(n, rng)
        for a in iv:
            dec = decompose(D, a)
            assert dec.k_curve_residual == 0
            assert min(dec.residuals.values(), default=0) >= 0
