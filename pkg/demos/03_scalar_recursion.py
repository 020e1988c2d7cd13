#!/usr/bin/env python
# The scalar tree recursion z -> lam exp(-C z): unique fixed point, and a
# two-cycle once lam C passes e.

# %%
import math

import numpy as np

from pwcc import recursion as rc

rec = rc.ScalarRecursion(1.0, 1.0)
print("fixed point at alpha = 1:", rc.fixed_point(rec), "(W(1) = 0.567143...)")

# %%
for alpha in (2.0, math.e, 3.0, 6.0):
    rep = rc.classify(rc.ScalarRecursion(alpha, 1.0))
    print(f"alpha = {alpha:.4f}  z* = {rep.z_star:.6f}  cycle = {rep.cycle}  {rep.classification.value}")

# %%
# bifurcation data: one branch below e, three above
rows = rc.bifurcation(np.linspace(1.0, 5.0, 17))
for a, z, z1, z2, cls in rows:
    print(f"{a:5.2f}  {z:.5f}  {z1:.5f}  {z2:.5f}  {cls}")

# %%
# depth-k iterates from two boundary values squeeze together below e/C
rec = rc.ScalarRecursion(0.9 * math.e, 1.0)
for k in (1, 2, 4, 8, 12):
    lhs, rhs, ok = rc.contraction_check(rec, 0.0, rec.lam, k)
    print(f"k = {k:2d}  |sqrt difference|^2 = {lhs:.3e}  bound = {rhs:.3e}  {ok}")
