#!/usr/bin/env python
# From V_k to a bound on Delta_phi and to the activity below which the Gibbs
# measure is unique: lambda < e / Delta_phi.

# %%
import math

from pwcc import HardSphere, Space, Strauss
from pwcc import connective as cn

plane = Space(2)
disk = HardSphere(1.0)

# %%
# rigorous: only the exact V_2
db = cn.delta_bound([cn.exact_v2(disk, plane)])
th = cn.uniqueness_threshold(db)
print(f"Delta <= {db.ratio:.4f} C_phi   threshold = {th.times_c_phi:.4f} / v_(2,r)   rigorous={th.rigorous}")
print(f"compare the tempered bound e / C_phi: {math.e:.4f} / v_(2,r)")

# %%
# non-rigorous: a long-chain estimate at one-sided 99% confidence
v20 = cn.estimate_vk(disk, plane, 20, 10 ** 6, seed=7)
db = cn.delta_bound([cn.exact_v2(disk, plane), v20], confidence=0.99)
th = cn.uniqueness_threshold(db)
print(f"with V_20: Delta <= {db.ratio:.4f} C_phi (k = {db.k_used})   "
      f"threshold = {th.times_c_phi:.4f} / v_(2,r)   rigorous={th.rigorous}")

# %%
# Strauss thresholds in units of C_phi
for a in (0.1, 1.0, 10.0):
    p = Strauss(1.0, a)
    th = cn.uniqueness_threshold(cn.delta_bound([cn.exact_v2(p, plane)]))
    print(f"a = {a:4.1f}  lambda_c * C_phi >= {th.times_c_phi:.4f}")

# %%
# three dimensions, from the closed-form bound
for d in (3, 5, 8):
    b = cn.v2_bound_estimate(HardSphere(1.0), Space(d))
    th = cn.uniqueness_threshold(cn.delta_bound([b]))
    print(f"d = {d}  threshold = {th.times_c_phi:.6f} / v_(d,r)")
