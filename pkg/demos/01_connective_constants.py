#!/usr/bin/env python
# Potential-weighted connective constants V_k by Monte Carlo, and the exact
# planar value of V_2 for hard disks and the Strauss potential.

# %%
import math

import numpy as np

from pwcc import HardSphere, Space, Strauss
from pwcc import connective as cn

plane = Space(2)
disk = HardSphere(1.0)
print("C_phi for the unit hard disk:", disk.temperedness_constant(plane))

# %%
# Chain weights: a Mayer factor per step, killed when a later point comes back
# closer to an earlier one than that earlier point's next step.
print(cn.chain_weight(disk, plane, [(0, 0), (0.5, 0)]))
print(cn.chain_weight(disk, plane, [(0, 0), (0.9, 0), (0.3, 0)]))
print(cn.chain_weight(Strauss(1.0, 1.0), plane, [(0, 0), (0.9, 0), (0.3, 0)]))

# %%
# V_2 for the hard disk: simulation against the lens-area closed form
est = cn.estimate_vk(disk, plane, 2, 10 ** 6, seed=42)
exact = cn.exact_v2_hard_disk(1.0)
print(f"MC    V_2/pi^2 = {est.mean / math.pi ** 2:.5f} +/- {est.std_error / math.pi ** 2:.5f}")
print(f"exact V_2/pi^2 = {exact / math.pi ** 2:.5f}")
print(f"radial quadrature agrees to {abs(cn.v2_hard_disk_quadrature(1.0) - exact) / exact:.1e}")

# %%
# k-th roots decrease towards Delta_phi; they are all below C_phi
for k in (1, 2, 4, 8, 12):
    e = cn.estimate_vk(disk, plane, k, 2 * 10 ** 5, seed=k)
    print(f"k = {k:2d}  V_k^(1/k)/C_phi = {e.root / e.c_phi:.4f} +/- {e.root_std_error / e.c_phi:.4f}")

# %%
# Strauss: V_2 / C_phi^2 moves from 1 (weak repulsion) to the hard-disk ratio
for a in (0.01, 0.5, 1.0, 3.0, 50.0):
    c = Strauss(1.0, a).temperedness_constant(plane)
    print(f"a = {a:5.2f}  V_2/C_phi^2 = {cn.exact_v2_strauss(1.0, a) / c ** 2:.5f}")

# %%
# Dimension d hard balls: V_2 <= C^2 (1 - 8^-d + 16^-d)
for d in (2, 3, 4):
    b = cn.v2_bound_dim_d(HardSphere(1.0), Space(d))
    mc = cn.estimate_vk(HardSphere(1.0), Space(d), 2, 2 * 10 ** 5, seed=d)
    print(f"d = {d}  bound {b.v2 / b.c_phi ** 2:.5f}  MC {mc.mean / mc.c_phi ** 2:.5f} +/- "
          f"{mc.std_error / mc.c_phi ** 2:.5f}")
