"""Degree-d hypersurfaces through fat points: predicted versus computed dimensions.

Run with ``python walkthroughs/01_fat_points.py``.
"""

from __future__ import annotations

from blowup_positivity import DivisorClass, base_locus, ldim, sldim
from blowup_positivity.oracle import base_point_probe, h0, sample_config

# Conics through two double points: the only one is the doubled line p1p2.
D = DivisorClass(2, 2, (2, 2))
cfg = sample_config(2, 2, seed=0)
print("2H - 2E1 - 2E2:", "ldim =", ldim(D), " h0 =", h0(cfg, D.d, D.mults).h0)
for e in base_locus(D):
    probe = base_point_probe(cfg, D, e.cycle)
    print(f"  {e.cycle}: predicted multiplicity {e.k}, measured {probe.measured}")

# With n + 3 points the rational normal curve enters the count.
for m in [(1,) * 5, (2, 1, 1, 1, 1), (2,) * 5]:
    d = 4 if m == (2,) * 5 else 2
    D = DivisorClass(2, d, m)
    cfg = sample_config(2, 5, seed=1)
    print(f"{d}H - {m}:", "ldim =", ldim(D), " sldim =", sldim(D), " h0 =", h0(cfg, d, m).h0)

# The quartic with five double points is the doubled conic.
D = DivisorClass(2, 4, (2,) * 5)
cfg = sample_config(2, 5, seed=1)
bl = base_locus(D, include_secants=True)
for e in bl:
    print(f"  {e.cycle}: k = {e.k}, measured {base_point_probe(cfg, D, e.cycle).measured}")

# A three-dimensional example where the secant correction matters.
D = DivisorClass(3, 4, (3, 3, 2, 2, 2, 2))
cfg = sample_config(3, 6, seed=2)
print("P^3, 4H - (3,3,2,2,2,2):", "ldim =", ldim(D), " sldim =", sldim(D), " h0 =", h0(cfg, 4, D.mults).h0)
