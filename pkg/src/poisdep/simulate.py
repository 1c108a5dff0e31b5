"""Forward simulation of Type A, Type B and INAR(1) count sequences."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .distributions import DomainError, as_generator
from .structures import (
    CountSeries,
    DependenceStructure,
    Inar1Params,
    TypeAParams,
    TypeBParams,
    validate,
)

__all__ = ["SimOutput", "simulate_type_a", "simulate_type_b", "simulate_inar1"]


@dataclass
class SimOutput:
    x: CountSeries
    y: np.ndarray
    w: np.ndarray
    params: object
    seed: object = None


def _seed_echo(rng):
    return getattr(rng, "seed", None)


def _window_sum(values, idx):
    """Sum ``values`` over each row of a padded index matrix (``-1`` -> 0)."""
    padded = np.append(values, 0)
    return padded[idx].sum(axis=1)


def _check_T(structure, T):
    if T is not None and T != structure.T:
        raise DomainError(f"T={T} disagrees with structure horizon {structure.T}")


def simulate_type_a(params: TypeAParams, structure: DependenceStructure, T=None, rng=None):
    """Draw ``W_t ~ Po(mu)``, ``Y_t | W_t ~ Bin(w_t, alpha_t)`` and
    ``X_t = sum(y_i, i in D_t) + Po(mu (1 - sum(alpha_i, i in D_t)))``.
    """
    _check_T(structure, T)
    ok = validate(params, structure)
    if not ok:
        raise DomainError(f"invalid Type A parameters: {ok.message}")
    g = as_generator(rng)
    n = structure.T
    idx = structure.index_matrix()
    w = g.poisson(params.mu, size=n)
    y = g.binomial(w, params.alpha)
    innov_rate = params.mu * (1.0 - _window_sum(params.alpha, idx))
    x = _window_sum(y, idx) + g.poisson(np.maximum(innov_rate, 0.0))
    return SimOutput(CountSeries.from_counts(x), y, w, params, _seed_echo(rng))


def simulate_type_b(params: TypeBParams, structure: DependenceStructure, T=None, rng=None):
    """Draw ``W_t ~ Po(mu / divisor)``, ``Y_t ~ Bin(sum(w_i, i in D_t), alpha_t)``
    and ``X_t = y_t + Po(mu (1 - alpha_t))``.
    """
    _check_T(structure, T)
    ok = validate(params, structure)
    if not ok:
        raise DomainError(f"invalid Type B parameters: {ok.message}")
    g = as_generator(rng)
    n = structure.T
    idx = structure.index_matrix()
    w = g.poisson(params.mu / params.divisor(structure), size=n)
    y = g.binomial(_window_sum(w, idx), params.alpha)
    x = y + g.poisson(params.mu * (1.0 - params.alpha))
    return SimOutput(CountSeries.from_counts(x), y, w, params, _seed_echo(rng))


@njit(cache=True)
def _inar1_path(gen, mu, alpha, T):
    x = np.empty(T, dtype=np.int64)
    y = np.zeros(T, dtype=np.int64)
    x[0] = gen.poisson(mu)
    innov = mu * (1.0 - alpha)
    for t in range(1, T):
        y[t] = gen.binomial(x[t - 1], alpha)
        x[t] = y[t] + gen.poisson(innov)
    return x, y


def simulate_inar1(params: Inar1Params, T, rng=None):
    """Stationary INAR(1): ``X_1 ~ Po(mu)``, ``X_t = alpha o X_{t-1} + Po(mu (1 - alpha))``.

    ``y[t]`` holds the thinned survivor count ``alpha o x[t-1]`` (``y[0] = 0``).
    """
    ok = validate(params)
    if not ok:
        raise DomainError(f"invalid INAR(1) parameters: {ok.message}")
    if T < 1:
        raise DomainError("T must be at least 1")
    x, y = _inar1_path(as_generator(rng), float(params.mu), float(params.alpha), int(T))
    return SimOutput(CountSeries.from_counts(x), y, np.zeros(0, dtype=np.int64), params,
                     _seed_echo(rng))
