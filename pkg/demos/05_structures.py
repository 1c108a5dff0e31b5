"""Seasonal, periodic and spatial dependence sets.

A dependence set D_t lists the latent indices that feed observation t. The
same simulators work for any of them; only the sets change.

Run: python demos/05_structures.py
"""
import numpy as np

from poisdep import (RngStream, TypeAParams, TypeBParams, build_periodic, build_seasonal,
                     build_spatial, simulate_type_a, simulate_type_b, structure_to_json,
                     validate)

# %% quarterly data with a one-year memory: X_t depends on t and t - 4
n = 40_000
seas = build_seasonal(n, 1, 4)
print("seasonal D_9 =", seas.D(9))
x = simulate_type_a(TypeAParams.stationary(4.0, 0.3, n), seas, rng=RngStream(1)).x.x
d = x - x.mean()
acf = [d[:-k] @ d[k:] / (d @ d) for k in range(1, 6)]
print("seasonal ACF lags 1..5:", np.round(acf, 3), "(only lag 4 is nonzero)")

# %% periodic orders: odd times use order 0, even times order 2
per = build_periodic(12, 2, [0, 2])
print("periodic D_t:", [per.D(t) for t in range(1, 7)])

# %% a ring of six regions, each tied to itself and both neighbours
ring = [[t, (t % 6) + 1, ((t - 2) % 6) + 1] for t in range(1, 7)]
sp = build_spatial(ring)
print("spatial D_1 =", sp.D(1))
params = TypeBParams.stationary(10.0, 0.5, 6, w_divisor=3.0)
g = RngStream(5).generator
X = np.array([simulate_type_b(params, sp, rng=g).x.x for _ in range(20_000)])
c = np.corrcoef(X.T)
print("neighbour corr", round(c[0, 1], 3), " non-neighbour corr", round(c[0, 3], 3))

# %% thinning probabilities that break the Po(mu) marginal are caught
bad = TypeAParams.stationary(4.0, 0.6, 12)
print("validate alpha=0.6, p=2:", validate(bad, build_periodic(12, 2, [2, 2])))

# %% structures serialise to JSON for the command line (--structure-json)
print(structure_to_json(build_spatial([[1, 2], [2, 1, 3], [3, 2]])))
