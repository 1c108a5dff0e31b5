"""Fit a Type A model by Gibbs sampling and look at the chain.

Run: python demos/02_gibbs_fit.py
"""
import numpy as np

from poisdep import (GibbsConfig, Priors, RngStream, TypeAParams, build_order_p,
                     empirical_acf, gibbs_run, simulate_type_a)

T, p = 300, 1
truth = TypeAParams.stationary(5.0, 0.2, T)
sim = simulate_type_a(truth, build_order_p(T, p), rng=RngStream(11))
x = sim.x

# %% one alpha per time point, vague gamma and beta priors
cfg = GibbsConfig(iterations=6000, burn_in=1000, thin=5, seed=4)
draws = gibbs_run("typeA", x, p, Priors(), cfg)
print(f"kept {len(draws)} draws")
print(f"posterior mean mu {draws.mu.mean():.3f}  (truth {truth.mu})")
q = np.quantile(draws.mu, [0.025, 0.975])
print(f"95% interval mu [{q[0]:.3f}, {q[1]:.3f}]")

# %% convergence: the ergodic mean should flatten out
erg = draws.ergodic_mu
for k in np.linspace(0, erg.size - 1, 6).astype(int):
    print(f"  after {k + 1:5d} kept draws: {erg[k]:.4f}")
acf = draws.mu_acf(10)
print("chain ACF of mu at lags 1, 5, 10:", np.round(acf.values[[1, 5, 10]], 3))

# %% time-varying alphas are weakly identified; their average is not
a = draws.alpha_matrix().mean(axis=0)
print(f"mean of posterior alpha_t {a.mean():.3f}, range {a.min():.3f}..{a.max():.3f}")

# %% a single shared alpha; the default Beta(0.01, 0.01) prior piles mass
# near 0 and 1, which matters when the data carry little information
acf1 = empirical_acf(x, 1)[1]
for label, pr in (("default prior", Priors()), ("flat prior", Priors(1.0, 1.0))):
    tied = gibbs_run("typeA", x, p, pr, GibbsConfig(iterations=6000, burn_in=1000, seed=4,
                                                    tied_alpha=True))
    print(f"tied alpha, {label}: {tied.alpha.mean():.3f} +- {tied.alpha.std():.3f}")
print(f"sample lag-1 ACF {acf1:.3f}, truth 0.2")

# %% draws round-trip through CSV
text = draws.to_csv()
print("CSV header:", text.splitlines()[0][:70], "...")
