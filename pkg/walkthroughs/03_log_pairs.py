"""Log pairs (X, eps D): abundance inequalities, discrepancies and the
splitting off of the secant divisor when s = n + 3.

Run with ``python walkthroughs/03_log_pairs.py``.
"""

from __future__ import annotations

from fractions import Fraction

from blowup_positivity import DivisorClass, LogPair, abundance_condition, adjoint_class, discrepancies
from blowup_positivity.secant import alpha_interval, beta_interval, decompose

p = LogPair(DivisorClass(5, 26, (16,) * 7), Fraction(1, 4))
print("abundance condition:", bool(abundance_condition(p)))
print("K + eps D =", adjoint_class(p).as_dict())
rep = discrepancies(p)
print("discrepancy:", rep.discrep, " lc:", rep.lc)
for c, a in rep.entries[:3]:
    print(f"  a({c}) = {a}")

# n = 4, seven points: 3H - 2 sum E_i is the secant divisor itself.
D = DivisorClass(4, 3, (2,) * 7)
iv = alpha_interval(D)
dec = decompose(D, iv.lo)
print("alpha in", (iv.lo, iv.hi), "-> D' =", dec.residual_class)

# odd n: split off Gamma = 3H - 3E1 - 2 sum E_i on P^5
D = DivisorClass(5, 9, (7, 6, 6, 6, 6, 6, 6, 6))
iv = beta_interval(D)
dec = decompose(D, iv.lo)
print("beta in", (iv.lo, iv.hi), "-> D' =", dec.residual_class, " k_C(D') =", dec.k_curve_residual)
