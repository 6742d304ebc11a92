"""Brute-force interpolation oracle over a prime field.

``h^0`` of ``dH - sum m_i E_i`` is the number of degree-``d`` forms minus the
rank of the fat-point condition matrix at random points.  Ranks are computed
by row reduction mod ``p`` with numpy int64 arithmetic, which is exact for
``p < 2^31`` since products of residues stay below ``2^62``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from math import comb

import numpy as np

from .divisor import CycleIndex, DivisorClass, join_multiplicity

DEFAULT_PRIMES = (2147483647, 2147483629)
MAX_COLUMNS = 10_000
RETRY_BUDGET = 64


def rank_mod_p(A, p: int) -> int:
    """Rank of an integer matrix over ``F_p``."""
    M = np.array(A, dtype=np.int64) % p
    if M.ndim != 2 or M.size == 0:
        return 0
    if M.shape[0] > M.shape[1]:
        M = M.T.copy()
    rows, cols = M.shape
    rank = 0
    for c in range(cols):
        if rank == rows:
            break
        nz = np.flatnonzero(M[rank:, c])
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            M[[rank, piv]] = M[[piv, rank]]
        inv = pow(int(M[rank, c]), p - 2, p)
        M[rank] = (M[rank] * inv) % p
        below = M[rank + 1:, c]
        hit = np.flatnonzero(below)
        if hit.size:
            idx = rank + 1 + hit
            M[idx] = (M[idx] - (M[idx, c][:, None] * M[rank]) % p) % p
        rank += 1
    return rank


def nullspace_mod_p(A, p: int) -> np.ndarray:
    """Basis of the right kernel of ``A`` over ``F_p`` (one vector per row)."""
    M = np.array(A, dtype=np.int64) % p
    rows, cols = M.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(M[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        M[[r, piv]] = M[[piv, r]]
        M[r] = (M[r] * pow(int(M[r, c]), p - 2, p)) % p
        others = np.flatnonzero(M[:, c])
        others = others[others != r]
        if others.size:
            M[others] = (M[others] - (M[others, c][:, None] * M[r]) % p) % p
        pivots.append(c)
        r += 1
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for i, pc in enumerate(pivots):
            basis[k, pc] = (-M[i, f]) % p
    return basis


def normalize_point(v, p: int) -> tuple[int, ...]:
    """Scale so the last nonzero coordinate is 1."""
    v = [int(x) % p for x in v]
    nz = [i for i, x in enumerate(v) if x]
    if not nz:
        raise ValueError("the zero vector is not a projective point")
    inv = pow(v[nz[-1]], p - 2, p)
    return tuple(x * inv % p for x in v)


@dataclass(frozen=True)
class PointConfiguration:
    n: int
    prime: int
    points: tuple
    seed: int
    retries: int = 0

    @property
    def s(self) -> int:
        return len(self.points)


def general_position_certificate(points, n: int, p: int) -> bool:
    """No ``k + 2`` points on a ``k``-plane, ``k <= min(s - 1, n)``: every subset of
    size ``min(s, n + 1)`` is linearly independent."""
    size = min(len(points), n + 1)
    for sub in combinations(points, size):
        if rank_mod_p(np.array(sub), p) < size:
            return False
    return True


def sample_config(n: int, s: int, seed: int, prime: int = DEFAULT_PRIMES[0]) -> PointConfiguration:
    """``s`` random points of ``P^n(F_p)``, deterministic in ``seed``.

    Resamples until the linear general-position certificate passes and, for
    ``s = n + 3``, until the rational normal curve through the points exists.
    """
    if s < 1 or n < 1:
        raise ValueError("need n >= 1 and s >= 1")
    rng = np.random.default_rng(seed)
    for attempt in range(RETRY_BUDGET):
        raw = rng.integers(0, prime, size=(s, n + 1))
        if any(not row.any() for row in raw):
            continue
        pts = tuple(normalize_point(row, prime) for row in raw)
        if not general_position_certificate(pts, n, prime):
            continue
        cfg = PointConfiguration(n, prime, pts, seed, attempt)
        if s == n + 3:
            try:
                RationalNormalCurve.through(cfg)
            except ValueError:
                continue
        return cfg
    raise RuntimeError(f"no general configuration after {RETRY_BUDGET} draws (seed {seed})")


@lru_cache(maxsize=None)
def monomials(n: int, d: int) -> np.ndarray:
    """Exponent vectors of degree-``d`` monomials in ``n + 1`` variables, lex descending."""
    out = []

    def rec(prefix, left, slots):
        if slots == 1:
            out.append(prefix + [left])
            return
        for e in range(left, -1, -1):
            rec(prefix + [e], left - e, slots - 1)

    if d >= 0:
        rec([], d, n + 1)
    arr = np.array(out, dtype=np.int64).reshape(-1, n + 1)
    arr.setflags(write=False)
    return arr


def _orders(n: int, order: int):
    """Exponents ``alpha`` in ``n`` affine variables with ``|alpha| < order``."""
    return [list(a) for a in product(range(order), repeat=n) if sum(a) < order]


def point_conditions(q, order: int, d: int, p: int) -> np.ndarray:
    """Rows forcing a degree-``d`` form to vanish to order ``order`` at ``q``.

    In the chart where ``q``'s last nonzero coordinate is 1, the Taylor
    coefficient of ``y^alpha`` in ``x^beta`` is
    ``prod_i binom(beta_i, alpha_i) q_i^(beta_i - alpha_i)``.
    """
    q = normalize_point(q, p)
    n = len(q) - 1
    B = monomials(n, d)
    if order <= 0:
        return np.zeros((0, len(B)), dtype=np.int64)
    j = max(i for i, x in enumerate(q) if x)
    others = [i for i in range(n + 1) if i != j]
    powers = np.ones((n + 1, d + 1), dtype=np.int64)
    for i in range(n + 1):
        for e in range(1, d + 1):
            powers[i, e] = powers[i, e - 1] * q[i] % p
    binoms = np.array([[comb(a, b) % p for b in range(max(d, order) + 1)] for a in range(d + 1)],
                      dtype=np.int64)
    rows = []
    for alpha in _orders(n, order):
        row = np.ones(len(B), dtype=np.int64)
        for a, i in zip(alpha, others):
            col = B[:, i]
            ok = col >= a
            factor = np.where(ok, binoms[col, a] * powers[i, np.where(ok, col - a, 0)] % p, 0)
            row = row * factor % p
        rows.append(row)
    return np.array(rows, dtype=np.int64).reshape(-1, len(B))


def conditions_matrix(cfg: PointConfiguration, d: int, mults) -> np.ndarray:
    mults = tuple(int(m) for m in mults)
    if len(mults) != cfg.s:
        raise ValueError(f"{len(mults)} multiplicities for {cfg.s} points")
    if any(m < 0 for m in mults):
        raise ValueError("multiplicities must be >= 0")
    if d >= cfg.prime:
        raise ValueError("degree must be below the characteristic")
    ncols = comb(cfg.n + d, cfg.n) if d >= 0 else 0
    blocks = [point_conditions(q, m, d, cfg.prime) for q, m in zip(cfg.points, mults) if m]
    if not blocks:
        return np.zeros((0, ncols), dtype=np.int64)
    return np.vstack(blocks)


@dataclass(frozen=True)
class InterpolationResult:
    h0: int
    ncols: int
    rank: int
    seed: int
    prime: int


def h0(cfg: PointConfiguration, d: int, mults) -> InterpolationResult:
    if d < 0:
        return InterpolationResult(0, 0, 0, cfg.seed, cfg.prime)
    A = conditions_matrix(cfg, d, mults)
    rank = rank_mod_p(A, cfg.prime) if A.shape[0] else 0
    ncols = A.shape[1]
    return InterpolationResult(ncols - rank, ncols, rank, cfg.seed, cfg.prime)


def linear_system_basis(cfg: PointConfiguration, d: int, mults) -> np.ndarray:
    """Coefficient vectors (rows, monomial order of :func:`monomials`) spanning the system."""
    A = conditions_matrix(cfg, d, mults)
    if A.shape[0] == 0:
        return np.eye(A.shape[1], dtype=np.int64)
    return nullspace_mod_p(A, cfg.prime)


def evaluate_forms(basis: np.ndarray, q, d: int, p: int) -> np.ndarray:
    """Values of the forms in ``basis`` at the point ``q``."""
    q = normalize_point(q, p)
    B = monomials(len(q) - 1, d)
    vals = np.ones(len(B), dtype=np.int64)
    for i, x in enumerate(q):
        pw = np.ones(d + 1, dtype=np.int64)
        for e in range(1, d + 1):
            pw[e] = pw[e - 1] * x % p
        vals = vals * pw[B[:, i]] % p
    out = np.zeros(basis.shape[0], dtype=np.int64)
    for k in range(basis.shape[0]):
        # split the dot product to stay inside int64
        out[k] = int(np.sum(basis[k] * vals % p) % p)
    return out


def is_base_point(basis: np.ndarray, q, d: int, p: int) -> bool:
    return basis.shape[0] > 0 and not evaluate_forms(basis, q, d, p).any()


@dataclass(frozen=True)
class RationalNormalCurve:
    """``tau -> M (c_i / (tau - lambda_i))_i``: passes through point ``i <= n+1`` at
    ``tau = lambda_i``, point ``n+2`` at infinity and point ``n+3`` at 0."""

    prime: int
    M: tuple
    c: tuple
    lam: tuple

    @classmethod
    def through(cls, cfg: PointConfiguration) -> "RationalNormalCurve":
        n, p = cfg.n, cfg.prime
        if cfg.s != n + 3:
            raise ValueError("the rational normal curve needs exactly n + 3 points")
        M = np.array(cfg.points[: n + 1], dtype=np.int64).T
        c = _solve_mod_p(M, np.array(cfg.points[n + 1]), p)
        b = _solve_mod_p(M, np.array(cfg.points[n + 2]), p)
        if c is None or b is None or not all(c) or not all(b):
            raise ValueError("points are not in general position for the curve fit")
        lam = [ci * pow(bi, p - 2, p) % p for ci, bi in zip(c, b)]
        if len(set(lam)) != len(lam):
            raise ValueError("curve parameters collide")
        return cls(p, tuple(map(tuple, M.tolist())), tuple(c), tuple(lam))

    def point(self, tau: int) -> tuple[int, ...]:
        p = self.prime
        if tau % p in self.lam:
            raise ValueError("parameter hits a base point; use the point itself")
        coeff = [ci * pow((tau - li) % p, p - 2, p) % p for ci, li in zip(self.c, self.lam)]
        M = np.array(self.M, dtype=object)
        return normalize_point([sum(int(M[r, k]) * coeff[k] for k in range(len(coeff))) for r in range(len(coeff))], p)


def _solve_mod_p(M: np.ndarray, v: np.ndarray, p: int):
    """Solve the square system ``M x = v`` over ``F_p``; None if singular."""
    size = M.shape[0]
    A = np.concatenate([np.array(M, dtype=np.int64) % p, (np.array(v, dtype=np.int64) % p)[:, None]], axis=1)
    for c in range(size):
        nz = np.flatnonzero(A[c:, c])
        if nz.size == 0:
            return None
        piv = c + int(nz[0])
        A[[c, piv]] = A[[piv, c]]
        A[c] = A[c] * pow(int(A[c, c]), p - 2, p) % p
        for r in range(size):
            if r != c and A[r, c]:
                A[r] = (A[r] - A[r, c] * A[c] % p) % p
    return [int(x) for x in A[:, size]]


def generic_cycle_point(cfg: PointConfiguration, cycle, rng: np.random.Generator,
                        curve: RationalNormalCurve | None = None) -> tuple[int, ...]:
    """A random point of ``J(L_I, sigma_t)``: ``sum a_i p_i + sum b_j C(tau_j)``
    with nonzero coefficients and independent spanning vectors."""
    cycle = cycle if isinstance(cycle, CycleIndex) else CycleIndex(*cycle)
    p = cfg.prime
    if not cycle.indices and not cycle.t:
        raise ValueError("the empty cycle has no points")
    if cycle.t and curve is None:
        curve = RationalNormalCurve.through(cfg)
    if len(cycle.indices) == 1 and not cycle.t:
        return cfg.points[cycle.indices[0] - 1]
    for _ in range(RETRY_BUDGET):
        vecs = [np.array(cfg.points[i - 1], dtype=np.int64) for i in cycle.indices]
        for _t in range(cycle.t):
            tau = int(rng.integers(1, p))
            if tau in curve.lam:
                break
            vecs.append(np.array(curve.point(tau), dtype=np.int64))
        else:
            if rank_mod_p(np.array(vecs), p) < len(vecs):
                continue
            coeffs = rng.integers(1, p, size=len(vecs))
            q = np.zeros(cfg.n + 1, dtype=object)
            for a, v in zip(coeffs, vecs):
                q = q + int(a) * v.astype(object)
            if any(int(x) % p for x in q):
                return normalize_point(q, p)
    raise RuntimeError(f"could not sample a generic point of {cycle}")


@dataclass(frozen=True)
class ProbeResult:
    cycle: CycleIndex
    measured: int
    expected: int
    h0: int
    point: tuple

    @property
    def agrees(self) -> bool:
        return self.measured == self.expected


def base_point_probe(cfg: PointConfiguration, D: DivisorClass, cycle, k_guess: int | None = None,
                     seed: int = 0, point=None) -> ProbeResult:
    """Vanishing order of the general member of ``|D|`` at a generic point of ``cycle``.

    Imposes vanishing to order ``1, 2, ...`` at the point; the measured order
    is the largest one that leaves ``h^0`` unchanged.
    """
    cycle = cycle if isinstance(cycle, CycleIndex) else CycleIndex(*cycle)
    if D.s != cfg.s or D.n != cfg.n:
        raise ValueError("divisor and configuration disagree on n or s")
    base = conditions_matrix(cfg, D.d, D.mults)
    h_base = base.shape[1] - (rank_mod_p(base, cfg.prime) if base.shape[0] else 0)
    if h_base <= 0:
        raise ValueError(f"|D| is empty (h0 = {h_base}); nothing to probe")
    expected = join_multiplicity(D, cycle) if k_guess is None else k_guess
    q = point if point is not None else generic_cycle_point(cfg, cycle, np.random.default_rng(seed))
    measured = 0
    for w in range(1, D.d + 2):
        extra = point_conditions(q, w, D.d, cfg.prime)
        A = np.vstack([base, extra])
        if A.shape[1] - rank_mod_p(A, cfg.prime) != h_base:
            break
        measured = w
    return ProbeResult(cycle, measured, expected, h_base, tuple(q))


def random_point(cfg: PointConfiguration, rng: np.random.Generator) -> tuple[int, ...]:
    while True:
        v = rng.integers(0, cfg.prime, size=cfg.n + 1)
        if v.any():
            return normalize_point(v, cfg.prime)


@dataclass(frozen=True)
class VerificationReport:
    divisor: DivisorClass
    mode: str
    formula: int
    expected_h0: int
    h0_values: tuple
    modal_h0: int
    agree: bool
    primes_agree: bool
    seeds: tuple
    finding: str | None = None


def verify_dimension(D: DivisorClass, trials: int = 3, mode: str = "ldim", seed: int = 0,
                     primes=DEFAULT_PRIMES) -> VerificationReport:
    """Compare oracle ``h^0`` over several configurations and primes with ``max{0, formula}``."""
    from .secant import ldim, sldim

    if mode not in ("ldim", "sldim"):
        raise ValueError(f"mode must be 'ldim' or 'sldim', got {mode!r}")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if D.d >= 0 and comb(D.n + D.d, D.n) > MAX_COLUMNS:
        raise ValueError(f"binom(n + d, n) = {comb(D.n + D.d, D.n)} exceeds the desk-scale cap {MAX_COLUMNS}")
    if any(m < 0 for m in D.mults):
        raise ValueError("the oracle needs nonnegative multiplicities")
    formula = sldim(D) if mode == "sldim" else ldim(D)
    expected = max(0, formula)
    values = []
    seeds = []
    for trial in range(trials):
        s_trial = seed + trial
        seeds.append(s_trial)
        row = []
        for p in primes:
            cfg = sample_config(D.n, D.s, s_trial, p)
            row.append(h0(cfg, D.d, D.mults).h0)
        values.append(tuple(row))
    flat = [v for row in values for v in row]
    modal = Counter(flat).most_common(1)[0][0]
    primes_agree = all(len(set(row)) == 1 for row in values)
    agree = modal == expected
    finding = None
    if not agree:
        finding = (f"h0 = {modal} but max(0, {mode}) = {expected} for {D} "
                   f"(seeds {seeds}, primes {list(primes)})")
    return VerificationReport(D, mode, formula, expected, tuple(values), modal, agree,
                              primes_agree, tuple(seeds), finding)
