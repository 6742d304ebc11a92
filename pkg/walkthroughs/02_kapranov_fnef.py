"""Strict transforms on the Kapranov model and F-curve checks.

Run with ``python walkthroughs/02_kapranov_fnef.py``.
"""

from __future__ import annotations

from blowup_positivity import DivisorClass, embed_strict_transform, fulton_certify, is_fnef
from blowup_positivity.mzero import boundary_divisor, fcurves, psi_class

n = 4
print(f"n = {n}: {len(fcurves(n))} F-curves")

D = DivisorClass(n, 3, (2, 2, 2, 1, 1, 1))
image = embed_strict_transform(D)
print("strict transform:", image)
rep = fulton_certify(D)
print("gg inequalities:", rep.gg_inequalities, " F-nef:", rep.fnef.is_fnef,
      " gated verdict:", rep.bpf.status.value)

# Boundary divisors are effective but not F-nef; psi classes are F-nef.
B = boundary_divisor({1, 2, n + 3}, n)
res = is_fnef(B)
print("Delta_{1,2,n+3}:", B, "-> F-nef" if res else f"-> negative on {res.violator.blocks} ({res.value})")
print("psi_1 F-nef:", bool(is_fnef(psi_class(1, n))))

# Five triple points on cubics of P^4: n + 1 of them exceed n d, so no strict transform.
from blowup_positivity.mzero import effectivity_violation

print((3, 3, 3, 3, 3, 0), "->", effectivity_violation(DivisorClass(n, 3, (3, 3, 3, 3, 3, 0))))
