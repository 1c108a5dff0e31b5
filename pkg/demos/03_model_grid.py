"""Choose between models and orders with the L-measure.

L(nu) = mean predictive variance + nu * mean squared predictive bias.
Smaller is better; nu trades fit against predictive spread.

Run: python demos/03_model_grid.py
"""
import numpy as np

from poisdep import (CountSeries, GibbsConfig, RngStream, TypeBParams, build_order_p,
                     gibbs_run, l_measure, model_grid, posterior_predictive, simulate_type_b)

T = 40
sims = [simulate_type_b(TypeBParams.stationary(mu, 0.6, T), build_order_p(T, p),
                        rng=RngStream(30 + k)).x.x
        for k, (mu, p) in enumerate([(12.0, 1), (30.0, 3)])]
series = [CountSeries(tuple(range(1981, 1981 + T)), x, f"region{k + 1}")
          for k, x in enumerate(sims)]

# %% one fit, by hand
cfg = GibbsConfig(iterations=3000, burn_in=500, seed=2)
draws = gibbs_run("typeB", series[0], 1, config=cfg)
pred = posterior_predictive(draws, data=series[0], rng=RngStream(2))
for nu in (0.0, 0.5, 1.0):
    print(f"nu={nu:.1f}  L={l_measure(pred, series[0], nu):.3f}")
inside = np.mean((series[0].x >= pred.lo) & (series[0].x <= pred.hi))
print(f"observations inside 95% predictive intervals: {inside:.0%}")

# %% the whole grid: Type A and B at p = 0..3, plus INAR(1)
table = model_grid(series, p_values=range(4), config=GibbsConfig(iterations=2000, seed=5))
print()
print(table.to_text(digits=2))
for s in table.series:
    best = [c.column for c in table.cells if c.series == s and c.is_min]
    print(f"{s}: smallest L within each type -> {', '.join(best)}")
