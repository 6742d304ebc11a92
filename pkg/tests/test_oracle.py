from __future__ import annotations

from itertools import combinations

import numpy as np
import pytest
import sympy
from sympy import GF
from sympy.polys.matrices import DomainMatrix
from hypothesis import given, settings, strategies as st

from blowup_positivity.divisor import CycleIndex, DivisorClass
from blowup_positivity.oracle import (
    DEFAULT_PRIMES,
    RationalNormalCurve,
    normalize_point,
    base_point_probe,
    conditions_matrix,
    general_position_certificate,
    h0,
    monomials,
    nullspace_mod_p,
    point_conditions,
    rank_mod_p,
    sample_config,
    verify_dimension,
)

P = DEFAULT_PRIMES[0]


def _sympy_rank(A, p):
    M = DomainMatrix([[GF(p)(int(x)) for x in row] for row in A.tolist()], A.shape, GF(p))
    return M.rank()


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 7), st.integers(1, 7), st.integers(0, 10**6))
def test_rank_matches_sympy_over_gf_p(rows, cols, seed):
    rng = np.random.default_rng(seed)
    p = 101
    A = rng.integers(0, p, size=(rows, cols))
    # force some dependence
    if rows > 1:
        A[-1] = (A[0] * 3 + A[1 % rows]) % p
    assert rank_mod_p(A, p) == _sympy_rank(A, p)


def test_rank_large_prime_matches_sympy():
    rng = np.random.default_rng(1)
    A = rng.integers(0, P, size=(6, 8))
    A[5] = (A[0] + 2 * A[1]) % P
    assert rank_mod_p(A, P) == _sympy_rank(A, P) == 5


def test_nullspace_is_kernel():
    rng = np.random.default_rng(2)
    A = rng.integers(0, P, size=(4, 7))
    K = nullspace_mod_p(A, P)
    assert K.shape == (3, 7)
    prod = (A.astype(object) @ K.T.astype(object)) % P
    assert not prod.any()


def test_sample_config_examples():
    cfg = sample_config(2, 5, 1)
    assert cfg.s == 5
    # no three collinear: independent determinant check
    for a, b, c in combinations(cfg.points, 3):
        assert sympy.Matrix([a, b, c]).det() % P != 0
    cfg = sample_config(1, 2, 9)
    assert cfg.points[0] != cfg.points[1]
    assert sample_config(3, 6, 4) == sample_config(3, 6, 4)


def test_general_position_certificate_rejects_collinear():
    pts = [(1, 0, 0), (0, 1, 0), (1, 1, 0)]
    assert not general_position_certificate(pts, 2, P)
    assert general_position_certificate([(1, 0, 0), (0, 1, 0), (0, 0, 1)], 2, P)


def test_monomials_order():
    B = monomials(2, 2)
    assert B.tolist() == [[2, 0, 0], [1, 1, 0], [1, 0, 1], [0, 2, 0], [0, 1, 1], [0, 0, 2]]
    assert len(monomials(3, 4)) == 35


def test_conditions_examples():
    q = (3, 5, 7, 1)
    row = point_conditions(q, 1, 1, P)
    assert row.shape == (1, 4) and row[0].tolist() == list(q)
    cfg = sample_config(2, 2, 0)
    A = conditions_matrix(cfg, 2, (2, 2))
    assert A.shape == (6, 6)
    # a point of multiplicity m imposes binom(n + m - 1, n) conditions
    assert conditions_matrix(sample_config(3, 1, 0), 5, (3,)).shape == (10, 56)
    assert rank_mod_p(A, P) == 5


@pytest.mark.parametrize("n, d, m, expected", [
    (2, 2, (2, 2), 1),
    (2, 3, (2, 2), 4),
    (2, 2, (1,) * 5, 1),
    (2, 2, (2, 1, 1, 1, 1), 0),
    (2, 4, (2,) * 5, 1),
    (3, 2, (1,) * 6, 4),
    (3, 4, (2,) * 6, 11),
    (3, 3, (2, 2, 1, 1, 1, 1), 8),
])
def test_h0_frozen_values(n, d, m, expected):
    for p in DEFAULT_PRIMES:
        assert h0(sample_config(n, len(m), 0, p), d, m).h0 == expected


def test_rational_normal_curve_passes_through_points():
    for n in (2, 3, 4):
        cfg = sample_config(n, n + 3, 3)
        C = RationalNormalCurve.through(cfg)
        for i, lam in enumerate(C.lam):
            coeff = [0] * (n + 1)
            coeff[i] = 1
            v = [sum(C.M[r][k] * coeff[k] for k in range(n + 1)) % P for r in range(n + 1)]
            assert normalize_point(v, P) == cfg.points[i]
        # tau = 0 gives the last point
        assert C.point(0) == cfg.points[-1]
        q = C.point(12345)
        assert len(set(cfg.points) | {q}) == n + 4


def test_probe_examples():
    cfg = sample_config(2, 2, 0)
    res = base_point_probe(cfg, DivisorClass(2, 2, (2, 2)), CycleIndex((1, 2)))
    assert res.measured == 2 and res.agrees
    # a double conic through five points: the curve C has multiplicity 2
    cfg = sample_config(2, 5, 0)
    res = base_point_probe(cfg, DivisorClass(2, 4, (2,) * 5), CycleIndex((), 1))
    assert res.measured == 2 and res.h0 == 1
    # cycle not in the base locus
    cfg = sample_config(3, 4, 0)
    res = base_point_probe(cfg, DivisorClass(3, 2, (1,) * 4), CycleIndex((1, 2)))
    assert res.measured == 0 and res.agrees
    with pytest.raises(ValueError):
        base_point_probe(sample_config(2, 5, 0), DivisorClass(2, 2, (2, 1, 1, 1, 1)), CycleIndex((), 1))


def test_verify_examples():
    rep = verify_dimension(DivisorClass(2, 2, (2, 2)))
    assert rep.agree and rep.modal_h0 == 1 and rep.primes_agree
    rep = verify_dimension(DivisorClass(2, 2, (2, 1, 1, 1, 1)), trials=5, mode="sldim")
    assert rep.agree and rep.modal_h0 == 0 and rep.seeds == (0, 1, 2, 3, 4)
    rep = verify_dimension(DivisorClass(3, 2, (1,) * 6), mode="sldim")
    assert rep.agree and rep.formula == 4
    with pytest.raises(ValueError):
        verify_dimension(DivisorClass(3, 40, (1,)))
    with pytest.raises(ValueError):
        verify_dimension(DivisorClass(2, 2, (1,)), mode="other")


small = st.integers(2, 3).flatmap(
    lambda n: st.tuples(st.just(n), st.integers(0, 4),
                        st.lists(st.integers(0, 3), min_size=1, max_size=n + 2)))


@settings(max_examples=40, deadline=None)
@given(small, st.integers(0, 50))
def test_h0_is_deterministic_and_prime_independent(data, seed):
    n, d, m = data
    a = h0(sample_config(n, len(m), seed, DEFAULT_PRIMES[0]), d, m).h0
    b = h0(sample_config(n, len(m), seed, DEFAULT_PRIMES[0]), d, m).h0
    c = h0(sample_config(n, len(m), seed, DEFAULT_PRIMES[1]), d, m).h0
    assert a == b == c


@settings(max_examples=40, deadline=None)
@given(small, st.data())
def test_h0_monotone(data, draw):
    n, d, m = data
    cfg = sample_config(n, len(m), 0)
    base = h0(cfg, d, m).h0
    assert h0(cfg, d + 1, m).h0 >= base
    i = draw.draw(st.integers(0, len(m) - 1))
    bumped = list(m)
    bumped[i] += 1
    assert h0(cfg, d, bumped).h0 <= base
