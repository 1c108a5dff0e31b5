"""Simulate the three dependent Poisson processes and compare their ACFs.

Every process keeps a Po(mu) marginal; they differ only in how the
dependence decays. Type A and Type B cut off after lag p, INAR(1) decays
geometrically.

Run: python demos/01_simulate_and_acf.py
"""
import numpy as np

from poisdep import (Inar1Params, RngStream, TypeAParams, TypeBParams, bartlett_se,
                     build_order_p, empirical_acf, simulate_inar1, simulate_type_a,
                     simulate_type_b, theoretical_acf)

n, p, mu = 50_000, 2, 6.0
s = build_order_p(n, p)

runs = {
    "typeA": (simulate_type_a(TypeAParams.stationary(mu, 0.25, n), s, rng=RngStream(1)), 0.25),
    "typeB": (simulate_type_b(TypeBParams.stationary(mu, 0.7, n), s, rng=RngStream(2)), 0.7),
    "inar1": (simulate_inar1(Inar1Params(mu, 0.6), n, rng=RngStream(3)), 0.6),
}

# %% marginals: mean and variance should both sit near mu
for kind, (sim, alpha) in runs.items():
    x = sim.x.x
    print(f"{kind:6s} mean {x.mean():.3f}  var {x.var():.3f}  (mu = {mu})")

# %% autocorrelations up to lag p + 2
max_lag = p + 2
for kind, (sim, alpha) in runs.items():
    rho = theoretical_acf(kind, alpha, p, 100).values
    emp = empirical_acf(sim.x, max_lag).values
    print(f"\n{kind}: lag  empirical  theoretical  +-2se")
    for k in range(1, max_lag + 1):
        se = bartlett_se(rho, k, n)
        print(f"       {k:3d}  {emp[k]:9.4f}  {rho[k]:11.4f}  {2 * se:.4f}")

# Type A at lag s sums alpha over p - s + 1 windows, so with p = 2 it gives
# 0.75, 0.5, 0.25 of alpha * 3. Type B scales alpha^2 by (p + 1 - s)/(p + 1).
print("\nType A lag-1 by hand:", 0.25 * p)
print("Type B lag-1 by hand:", 0.7 ** 2 * p / (p + 1))
