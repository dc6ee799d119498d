# # Spectral checks behind the decay rates
#
# The Sobolev dual error is governed by how a frame's columns sit against the
# low-frequency singular vectors V_l of D^{-r}.  After random row selection the
# singular values of V_l^H F cluster around sqrt(l).

import numpy as np

from sdquant.numkit import analytic_svd_dinv, dinv_singular_values
from sdquant.spectral import concentration_experiment, conjecture_check

# Closed-form singular values of D against a numeric SVD.

svd = analytic_svd_dinv(64)
print("largest singular values of D^-1:", np.round(svd.dinv_singular_values[:4], 3))
print("same, numeric:                  ", np.round(dinv_singular_values(64, 1)[:4], 3))

# sigma(V_l^H F)/sqrt(l) over 200 random selections.

rep = concentration_experiment(N=512, k=8, l=128, m=512, trials=200, seed=0)
for key in sorted(rep.empirical_quantiles):
    print(f"{key}: {rep.empirical_quantiles[key]:.3f}")

# The entries of the singular vectors of D^{-r} stay of size O(1/sqrt(m)).

for r in (1, 2, 3):
    rep = conjecture_check(r, [32, 64, 128, 256, 512])
    print(f"r={r} max|V|*sqrt(m):", np.round(rep.max_entry_times_sqrt_m, 3),
          " trend", round(rep.trend().slope, 4))
