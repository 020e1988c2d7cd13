#!/usr/bin/env python
# Exact finite-volume Gibbs samples by Poisson rejection; partition function
# and densities of hard rods checked against the exact Tonks values.

# %%
import numpy as np

from pwcc import HardSphere, Strauss
from pwcc import gibbs as gb

rods = gb.sample_gibbs(HardSphere(1.0), gb.BoxRegion((10.0,)), 0.2, 10 ** 5, seed=1)
print(f"accepted {rods.n_accepted} of {rods.n_proposals}")

# %%
part = gb.estimate_partition(rods)
print(f"log Z: {part.log_z:.5f} +/- {part.log_z_se:.5f}  exact {np.log(gb.tonks_partition(0.2, 10.0, 1.0)):.5f}")
for v in (0.2, 1.0, 2.5, 5.0):
    rho, se = gb.estimate_density(rods, (v,))
    print(f"rho({v}) = {rho:.5f} +/- {se:.5f}  exact {gb.tonks_density(0.2, 10.0, 1.0, v):.5f}")

# %%
# two-dimensional Strauss process, with the activity thinning the configuration
box = gb.BoxRegion((5.0, 5.0))
rates = gb.acceptance_sweep(Strauss(1.0, 1.0), box, np.linspace(0, 0.5, 6), 20000, seed=2)
print("acceptance rate against lambda:", np.round(rates, 4))
batch = gb.sample_gibbs(Strauss(1.0, 1.0), box, 0.3, 5000, seed=3)
print("mean count", batch.counts.mean(), "vs Poisson mean", 0.3 * box.volume)
print("first configuration:", batch.configs[0])
