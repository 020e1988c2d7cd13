#!/usr/bin/env python
# The one-point density as lam exp(-integral of tilted densities), and the
# k-point density as a product of tilted one-point densities, on one batch.

# %%
from pwcc import HardSphere, Strauss
from pwcc import gibbs as gb

rods = gb.sample_gibbs(HardSphere(1.0), gb.BoxRegion((8.0,)), 0.2, 10 ** 5, seed=4)
rep = gb.verify_recursion_identity(rods, (4.0,))
print("hard rods:", {k: round(v, 6) for k, v in rep.to_dict().items()})

# %%
box = gb.BoxRegion((4.0, 4.0))
batch = gb.sample_gibbs(Strauss(1.0, 1.0), box, 0.1, 5 * 10 ** 4, seed=5)
rep = gb.verify_recursion_identity(batch, (2.0, 2.0), n=8, refine=False)
print(f"Strauss: rho = {rep.lhs:.5f}  recursion = {rep.rhs:.5f}  ({rep.z:.2f} SE)")

# %%
# tilting towards v up to d(v, w) changes the density seen at a target
v, w = (2.0, 2.0), (2.9, 2.0)
for target in [(2.5, 2.0), (3.2, 2.0)]:
    print(target, gb.estimate_density(batch, target), gb.estimate_tilted_density(batch, v, w, target))

# %%
kp = gb.verify_kpoint_product(batch, [(2.0, 2.0), (2.5, 2.0)])
print(f"two-point density {kp.lhs:.6f} vs product {kp.rhs:.6f}  ({kp.z:.2f} SE)")
