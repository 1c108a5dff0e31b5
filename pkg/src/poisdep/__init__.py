"""Dependent Poisson count sequences built by binomial thinning.

Simulation, exact autocorrelations, Gibbs-sampler inference and L-measure
model comparison for the Type A and Type B constructions and INAR(1).
"""
from .distributions import (DomainError, InfeasibleError, LogWeightTable, RngStream,
                            binom_logpmf, pois_logpmf, sample_beta, sample_binomial,
                            sample_finite_logweights, sample_gamma, sample_grid_density,
                            sample_poisson, sample_unbounded_logweights)
from .structures import (CountSeries, DependenceStructure, Inar1Params, TypeAParams,
                         TypeBParams, build_order_p, build_periodic, build_seasonal,
                         build_spatial, params_from_json, params_to_json,
                         structure_from_json, structure_to_json, validate)
from .simulate import SimOutput, simulate_inar1, simulate_type_a, simulate_type_b
from .moments import (AcfCurve, bartlett_se, empirical_acf, inar1_acf, theoretical_acf,
                      type_a_acf, type_b_acf)
from .inference import (GibbsConfig, GibbsError, GibbsState, PosteriorDraws, Priors,
                        gibbs_run, gibbs_run_inar1, init_state)
from .assess import (ComparisonTable, PredictiveSummary, l_measure, model_grid,
                     posterior_predictive)
from .io import ParseError, ingest_csv

__version__ = "0.1.0"
