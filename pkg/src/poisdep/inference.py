"""Gibbs samplers for Type A, Type B and INAR(1) count models.

Single-site update functions take 1-based ``t`` and mutate the state in
place, returning the new value. ``gibbs_run`` drives the jitted chain loops
in ``_kernels``, which call exactly the same conditionals.
"""
from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field, asdict

import numpy as np
from scipy.special import gammaln

from . import _kernels as K
from .distributions import DomainError, LogWeightTable, RngStream, as_generator
from .moments import empirical_acf
from .structures import CountSeries, DependenceStructure

__all__ = [
    "Priors",
    "GibbsConfig",
    "GibbsState",
    "PosteriorDraws",
    "GibbsError",
    "init_state",
    "update_y_t_type_a",
    "update_alpha_t_type_a",
    "update_mu_type_a",
    "update_y_t_type_b",
    "update_w_t_type_b",
    "update_alpha_t_type_b",
    "update_mu_type_b",
    "update_y_t_inar1",
    "update_alpha_inar1",
    "update_mu_inar1",
    "y_conditional",
    "w_conditional",
    "alpha_log_conditional",
    "alpha_support",
    "mu_conditional",
    "gibbs_run",
    "gibbs_run_inar1",
    "MODEL_KINDS",
]

MODEL_KINDS = ("typeA", "typeB", "inar1")


class GibbsError(RuntimeError):
    """A full conditional had empty support; carries the failing position and state."""

    def __init__(self, message, iteration=None, t=None, state=None):
        super().__init__(message)
        self.iteration = iteration
        self.t = t
        self.state = state


@dataclass(frozen=True)
class Priors:
    a_alpha: float = 0.01
    b_alpha: float = 0.01
    a_mu: float = 0.01
    b_mu: float = 0.01

    def __post_init__(self):
        for k, v in asdict(self).items():
            if not (v > 0 and np.isfinite(v)):
                raise DomainError(f"prior hyperparameter {k} must be positive, got {v}")


@dataclass(frozen=True)
class GibbsConfig:
    iterations: int = 16000
    burn_in: int = 1000
    thin: int = 5
    seed: int = 0
    stream_id: int = 0
    alpha_grid_n: int = 512
    w_tail_tol: float = 1e-12
    init: str = "default"
    tied_alpha: bool = False
    store_latents: bool = True

    def __post_init__(self):
        if not 0 <= self.burn_in < self.iterations:
            raise DomainError("need 0 <= burn_in < iterations")
        if self.thin < 1:
            raise DomainError("thin must be at least 1")
        if self.alpha_grid_n < 2:
            raise DomainError("alpha_grid_n must be at least 2")
        if not 0 < self.w_tail_tol < 1:
            raise DomainError("w_tail_tol must lie in (0, 1)")
        if self.init not in ("default", "truth"):
            raise DomainError(f"unknown init strategy {self.init!r}")

    @property
    def n_keep(self) -> int:
        return (self.iterations - self.burn_in) // self.thin


@dataclass
class GibbsState:
    kind: str
    p: int
    y: np.ndarray
    alpha: np.ndarray
    mu: float
    w: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    divisor: float = 1.0
    tied: bool = False

    def copy(self):
        return GibbsState(self.kind, self.p, self.y.copy(), self.alpha.copy(), self.mu,
                          self.w.copy(), self.divisor, self.tied)

    def feasible(self, x) -> bool:
        x = _counts(x)
        T = x.size
        if self.kind == "typeA":
            return all(K.a_resid(x, self.y, self.p, t) >= 0 for t in range(T))
        if self.kind == "typeB":
            return all(
                0 <= self.y[t] <= min(x[t], K.b_wsum(self.w, self.p, t)) for t in range(T)
            )
        return all(0 <= self.y[t] <= min(x[t - 1], x[t]) for t in range(1, T)) and self.y[0] == 0

    def as_dict(self):
        return {"kind": self.kind, "p": self.p, "mu": self.mu, "y": self.y.tolist(),
                "w": self.w.tolist(), "alpha": self.alpha.tolist(), "tied": self.tied}


def _counts(data):
    if isinstance(data, CountSeries):
        return data.x
    x = np.asarray(data)
    if np.any(x < 0):
        raise DomainError("counts must be nonnegative")
    return x.astype(np.int64)


def _logfact(x):
    return gammaln(np.arange(2 * int(x.max(initial=0)) + 257) + 1.0)


def _order(structure):
    if isinstance(structure, DependenceStructure):
        if structure.kind != "order-p":
            raise NotImplementedError(
                "inference supports contiguous order-p structures only"
            )
        return int(structure.meta["p"])
    p = int(structure)
    if p < 0:
        raise DomainError("order p must be nonnegative")
    return p


# ---------------------------------------------------------------------------
# initialisation


def init_state(model, data, priors=None, rng=None, p=0, tied=False):
    """Feasible starting point: latents at zero, mu at the sample mean.

    Thinning probabilities start at the midpoint of the stationary feasible
    interval: ``0.5 / (p + 1)`` for Type A, ``0.5`` otherwise. Type B draws
    ``w_t ~ Po(mu / (p + 1))``.
    """
    if model not in MODEL_KINDS:
        raise DomainError(f"unknown model kind {model!r}")
    x = _counts(data)
    T = x.size
    mu = max(float(x.mean()), 1e-3)
    y = np.zeros(T, dtype=np.int64)
    if model == "inar1":
        return GibbsState("inar1", 1, y, np.array([0.5]), mu)
    if model == "typeA":
        return GibbsState("typeA", p, y, np.full(T, 0.5 / (p + 1)), mu, tied=tied)
    g = as_generator(rng if rng is not None else 0)
    w = g.poisson(mu / (p + 1), size=T).astype(np.int64)
    return GibbsState("typeB", p, y, np.full(T, 0.5), mu, w, float(p + 1), tied)


def _truth_state(model, sim, p, x):
    """Start the chain at the latents of a simulation (for integration tests)."""
    prm = sim.params
    if model == "inar1":
        return GibbsState("inar1", 1, np.asarray(sim.y, dtype=np.int64).copy(),
                          np.array([float(prm.alpha)]), float(prm.mu))
    alpha = np.asarray(prm.alpha, dtype=np.float64).copy()
    st = GibbsState(model, p, np.asarray(sim.y, dtype=np.int64).copy(), alpha, float(prm.mu))
    if model == "typeB":
        st.w = np.asarray(sim.w, dtype=np.int64).copy()
        st.divisor = float(p + 1)
    return st


# ---------------------------------------------------------------------------
# exposed conditionals


def y_conditional(state: GibbsState, data, t) -> LogWeightTable:
    """Unnormalised log full conditional of the latent y_t on its finite support."""
    x = _counts(data)
    lf = _logfact(x)
    buf = np.empty(x.max(initial=0) + 1)
    i = t - 1
    if state.kind == "typeA":
        c = K.a_y_logw(x, state.y, state.alpha, state.mu, state.p, i, lf, buf)
    elif state.kind == "typeB":
        c = K.b_y_logw(x, state.y, state.w, state.alpha, state.mu, state.p, i, lf, buf)
    else:
        if t < 2:
            raise DomainError("INAR(1) latents exist for t >= 2 only")
        c = K.i_y_logw(x, float(state.alpha[0]), state.mu, i, lf, buf)
    if c < 0:
        raise GibbsError(f"y_{t} has empty support", t=t, state=state.as_dict())
    return LogWeightTable(0, buf[: c + 1].copy())


def w_conditional(state: GibbsState, data, t, upper) -> LogWeightTable:
    """Log full conditional of w_t (Type B) enumerated from h_t through ``upper``."""
    x = _counts(data)
    lf = _logfact(x)
    base, yy, h, logc = K.b_w_setup(state.y, state.w, state.alpha, state.mu,
                                    state.p, t - 1, state.divisor)
    vals = np.array([K.b_w_logw_at(base, yy, logc, v, lf) for v in range(h, upper + 1)])
    return LogWeightTable(int(h), vals)


def alpha_support(state: GibbsState, data, t=None):
    """Open interval ``(0, hi)`` on which the alpha conditional lives."""
    x = _counts(data)
    if state.kind == "typeA":
        if state.tied:
            return 0.0, K.a_tied_upper(state.p, x.size)
        return 0.0, K.a_alpha_upper(state.alpha, state.p, t - 1, x.size)
    return 0.0, 1.0


def alpha_log_conditional(state: GibbsState, data, priors: Priors, t, points):
    """Unnormalised log density of alpha_t (or the tied/INAR alpha) at ``points``."""
    x = _counts(data)
    pts = np.ascontiguousarray(points, dtype=np.float64)
    out = np.empty_like(pts)
    a, b = priors.a_alpha, priors.b_alpha
    if state.kind == "typeA":
        if state.tied:
            K.a_tied_logdens(x, state.y, state.mu, state.p, a, b, pts, out)
        else:
            K.a_alpha_logdens(x, state.y, state.alpha, state.mu, state.p, t - 1, a, b, pts, out)
    elif state.kind == "typeB":
        if state.tied:
            K.b_tied_logdens(x, state.y, state.w, state.mu, state.p, a, b, pts, out)
        else:
            K.b_alpha_logdens(x, state.y, state.w, state.mu, state.p, t - 1, a, b, pts, out)
    else:
        K.i_alpha_logdens(x, state.y, state.mu, a, b, pts, out)
    return out


def mu_conditional(state: GibbsState, data, priors: Priors):
    """``(shape, rate)`` of the gamma full conditional of mu."""
    x = _counts(data)
    if state.kind == "typeA":
        return K.a_mu_params(x, state.y, state.alpha, state.p, priors.a_mu, priors.b_mu)
    if state.kind == "typeB":
        return K.b_mu_params(x, state.y, state.w, state.alpha, priors.a_mu, priors.b_mu,
                             state.divisor)
    return K.i_mu_params(x, state.y, float(state.alpha[0]), priors.a_mu, priors.b_mu)


# ---------------------------------------------------------------------------
# single-site updates


def _check_t(t, T):
    if not 1 <= t <= T:
        raise DomainError(f"t={t} outside 1..{T}")


def update_y_t_type_a(state: GibbsState, data, t, rng):
    x = _counts(data)
    _check_t(t, x.size)
    buf = np.empty(x.max(initial=0) + 1)
    if K.a_update_y(as_generator(rng), x, state.y, state.alpha, state.mu, state.p, t - 1,
                    _logfact(x), buf) != K.OK:
        raise GibbsError(f"y_{t} has empty support (c_t < 0)", t=t, state=state.as_dict())
    return int(state.y[t - 1])


def _grid_buffers(n):
    unit = (np.arange(n) + 0.5) / n
    return unit, np.empty(n), np.empty(n)


def update_alpha_t_type_a(state: GibbsState, data, priors: Priors, t, rng, grid_n=512):
    x = _counts(data)
    _check_t(t, x.size)
    unit, pts, dens = _grid_buffers(grid_n)
    g = as_generator(rng)
    if state.tied:
        st = K.a_update_alpha_tied(g, x, state.y, state.alpha, state.mu, state.p,
                                   priors.a_alpha, priors.b_alpha, unit, pts, dens)
    else:
        st = K.a_update_alpha(g, x, state.y, state.alpha, state.mu, state.p, t - 1,
                              priors.a_alpha, priors.b_alpha, unit, np.log(unit),
                              np.log1p(-unit), dens, np.empty((2, unit.size)),
                              np.empty(unit.size, dtype=np.int64))
    if st != K.OK:
        raise GibbsError(f"alpha_{t} has empty support (d_t <= 0)", t=t, state=state.as_dict())
    return float(state.alpha[t - 1])


def _gamma_update(state, shape, rate, rng):
    if not (shape > 0 and rate > 0):
        raise GibbsError(f"invalid gamma conditional for mu: shape={shape}, rate={rate}",
                         state=state.as_dict())
    state.mu = float(K._draw_mu(as_generator(rng), shape, rate))
    return state.mu


def update_mu_type_a(state: GibbsState, data, priors: Priors, rng):
    shape, rate = mu_conditional(state, data, priors)
    return _gamma_update(state, shape, rate, rng)


def update_y_t_type_b(state: GibbsState, data, t, rng):
    x = _counts(data)
    _check_t(t, x.size)
    buf = np.empty(x.max(initial=0) + 1)
    if K.b_update_y(as_generator(rng), x, state.y, state.w, state.alpha, state.mu, state.p,
                    t - 1, _logfact(x), buf) != K.OK:
        raise GibbsError(f"y_{t} has empty support", t=t, state=state.as_dict())
    return int(state.y[t - 1])


def update_w_t_type_b(state: GibbsState, data, t, rng, tail_tol=1e-12, return_span=False):
    x = _counts(data)
    _check_t(t, x.size)
    st, span, _ = K.b_update_w(as_generator(rng), x, state.y, state.w, state.alpha, state.mu,
                               state.p, t - 1, state.divisor, math.log(tail_tol),
                               _logfact(x), np.empty(256))
    if st != K.OK:
        raise GibbsError(f"w_{t}: no truncation point within {span} support points",
                         t=t, state=state.as_dict())
    w = int(state.w[t - 1])
    return (w, span) if return_span else w


def update_alpha_t_type_b(state: GibbsState, data, priors: Priors, t, rng, grid_n=512):
    x = _counts(data)
    _check_t(t, x.size)
    pts = (np.arange(grid_n) + 0.5) / grid_n
    la, l1a, dens = np.log(pts), np.log1p(-pts), np.empty(grid_n)
    g = as_generator(rng)
    if state.tied:
        st = K.b_update_alpha_tied(g, x, state.y, state.w, state.alpha, state.mu, state.p,
                                   priors.a_alpha, priors.b_alpha, la, l1a, pts, dens)
    else:
        st = K.b_update_alpha(g, x, state.y, state.w, state.alpha, state.mu, state.p, t - 1,
                              priors.a_alpha, priors.b_alpha, la, l1a, pts, dens)
    if st != K.OK:
        raise GibbsError(f"alpha_{t} draw failed", t=t, state=state.as_dict())
    return float(state.alpha[t - 1])


def update_mu_type_b(state: GibbsState, data, priors: Priors, rng):
    shape, rate = mu_conditional(state, data, priors)
    return _gamma_update(state, shape, rate, rng)


def update_y_t_inar1(state: GibbsState, data, t, rng):
    x = _counts(data)
    if not 2 <= t <= x.size:
        raise DomainError(f"INAR(1) latent index t={t} outside 2..{x.size}")
    K.i_update_y(as_generator(rng), x, state.y, float(state.alpha[0]), state.mu, t - 1,
                 _logfact(x), np.empty(x.max(initial=0) + 1))
    return int(state.y[t - 1])


def update_alpha_inar1(state: GibbsState, data, priors: Priors, rng, grid_n=512):
    x = _counts(data)
    pts = (np.arange(grid_n) + 0.5) / grid_n
    a = K.i_update_alpha(as_generator(rng), x, state.y, state.mu, priors.a_alpha,
                         priors.b_alpha, np.log(pts), np.log1p(-pts), pts, np.empty(grid_n))
    state.alpha[0] = a
    return float(a)


def update_mu_inar1(state: GibbsState, data, priors: Priors, rng):
    shape, rate = mu_conditional(state, data, priors)
    return _gamma_update(state, shape, rate, rng)


# ---------------------------------------------------------------------------
# posterior draws


@dataclass
class PosteriorDraws:
    kind: str
    p: int
    T: int
    mu: np.ndarray
    alpha: np.ndarray
    y: np.ndarray | None = None
    w: np.ndarray | None = None
    tied: bool = False
    config: dict = field(default_factory=dict)
    priors: dict = field(default_factory=dict)
    max_w_span: int = 0
    final_state: GibbsState | None = None

    def __len__(self):
        return int(self.mu.size)

    @property
    def has_latents(self) -> bool:
        return self.y is not None and self.y.shape[0] == len(self)

    def alpha_matrix(self) -> np.ndarray:
        """Thinning probabilities broadcast to ``(n_draws, T)`` (INAR: ``(n, 1)``)."""
        if self.kind != "inar1" and self.alpha.shape[1] == 1 and self.T > 1:
            return np.repeat(self.alpha, self.T, axis=1)
        return self.alpha

    @property
    def ergodic_mu(self) -> np.ndarray:
        return np.cumsum(self.mu) / np.arange(1, self.mu.size + 1)

    def mu_acf(self, max_lag=50):
        """Chain autocorrelation of mu, or None when too short or constant."""
        lag = min(max_lag, self.mu.size - 1)
        if lag < 1 or np.ptp(self.mu) == 0:
            return None
        return empirical_acf(self.mu, lag)

    def summary(self, quantiles=(0.025, 0.5, 0.975)) -> dict:
        def desc(v):
            return {"mean": float(np.mean(v)),
                    "quantiles": [float(q) for q in np.quantile(v, quantiles)]}

        alpha = {f"alpha_{j + 1}": desc(self.alpha[:, j]) for j in range(self.alpha.shape[1])}
        acf = self.mu_acf()
        return {
            "model": self.kind,
            "p": self.p,
            "T": self.T,
            "tied_alpha": self.tied,
            "n_draws": len(self),
            "quantile_levels": list(quantiles),
            "mu": desc(self.mu),
            "alpha": alpha,
            "diagnostics": {
                "mu_ergodic_mean_final": float(self.ergodic_mu[-1]) if len(self) else None,
                "mu_acf_lag1": float(acf.values[1]) if acf is not None else None,
                "max_w_span": int(self.max_w_span),
            },
            "config": self.config,
            "priors": self.priors,
        }

    # CSV: one commented JSON header line, then one row per kept draw
    def to_csv(self, fh=None) -> str:
        meta = {"model": self.kind, "p": self.p, "T": self.T, "tied_alpha": self.tied}
        cols = ["draw", "mu"] + [f"alpha_{j + 1}" for j in range(self.alpha.shape[1])]
        if self.has_latents:
            cols += [f"y_{j + 1}" for j in range(self.T)]
            if self.w is not None and self.w.shape[0]:
                cols += [f"w_{j + 1}" for j in range(self.T)]
        buf = io.StringIO()
        buf.write("# " + json.dumps(meta, sort_keys=True) + "\n")
        buf.write(",".join(cols) + "\n")
        for g in range(len(self)):
            row = [str(g + 1), format(self.mu[g], ".17g")]
            row += [format(v, ".17g") for v in self.alpha[g]]
            if self.has_latents:
                row += [str(int(v)) for v in self.y[g]]
                if self.w is not None and self.w.shape[0]:
                    row += [str(int(v)) for v in self.w[g]]
            buf.write(",".join(row) + "\n")
        text = buf.getvalue()
        if fh is not None:
            fh.write(text)
        return text

    @classmethod
    def from_csv(cls, text: str) -> "PosteriorDraws":
        lines = text.splitlines()
        if not lines or not lines[0].startswith("#"):
            raise DomainError("draws file must start with a '# {...}' metadata line")
        meta = json.loads(lines[0][1:])
        cols = lines[1].split(",")
        data = [ln.split(",") for ln in lines[2:] if ln.strip()]
        table = {c: [r[i] for r in data] for i, c in enumerate(cols)}
        T = int(meta["T"])
        mu = np.array(table["mu"], dtype=float)
        acols = [c for c in cols if c.startswith("alpha_")]
        alpha = np.array([table[c] for c in acols], dtype=float).T.reshape(len(mu), len(acols))
        y = w = None
        if "y_1" in table:
            y = np.array([table[f"y_{j + 1}"] for j in range(T)], dtype=np.int64).T
            y = y.reshape(len(mu), T)
        if "w_1" in table:
            w = np.array([table[f"w_{j + 1}"] for j in range(T)], dtype=np.int64).T
            w = w.reshape(len(mu), T)
        return cls(meta["model"], int(meta["p"]), T, mu, alpha, y, w, bool(meta["tied_alpha"]))


# ---------------------------------------------------------------------------
# chain drivers


def _start(model, x, p, priors, config, g, truth):
    if config.init == "truth":
        if truth is None:
            raise DomainError("init='truth' needs the simulation output")
        return _truth_state(model, truth, p, x)
    return init_state(model, x, priors, g, p=p, tied=config.tied_alpha)


def gibbs_run(model_kind, data, structure, priors: Priors | None = None,
              config: GibbsConfig | None = None, truth=None) -> PosteriorDraws:
    """Run one Gibbs chain and return the kept draws.

    Each iteration updates every y_t in ascending t, then (Type B) every w_t,
    then the thinning probabilities, then mu. ``structure`` is an order-p
    ``DependenceStructure`` or simply the integer ``p``.
    """
    priors = priors or Priors()
    config = config or GibbsConfig()
    if model_kind == "inar1":
        return gibbs_run_inar1(data, priors, config, truth=truth)
    if model_kind not in MODEL_KINDS:
        raise DomainError(f"unknown model kind {model_kind!r}")
    x = _counts(data)
    p = _order(structure)
    g = RngStream(config.seed, config.stream_id).generator
    state = _start(model_kind, x, p, priors, config, g, truth)
    state.tied = config.tied_alpha
    if state.tied:
        state.alpha[:] = state.alpha[0]
    lf = _logfact(x)
    if model_kind == "typeA":
        st, it, t, mu, mu_out, alpha_out, y_out = K.chain_type_a(
            g, x, p, priors.a_alpha, priors.b_alpha, priors.a_mu, priors.b_mu,
            config.iterations, config.burn_in, config.thin, config.alpha_grid_n,
            config.tied_alpha, config.store_latents, state.y, state.alpha, state.mu, lf)
        w_out, span = None, 0
    else:
        st, it, t, mu, mu_out, alpha_out, y_out, w_out, span = K.chain_type_b(
            g, x, p, state.divisor, priors.a_alpha, priors.b_alpha, priors.a_mu, priors.b_mu,
            config.iterations, config.burn_in, config.thin, config.alpha_grid_n,
            config.tied_alpha, config.store_latents, math.log(config.w_tail_tol),
            state.y, state.w, state.alpha, state.mu, lf)
    state.mu = float(mu)
    if st != K.OK:
        what = {K.BAD_Y: "y", K.BAD_ALPHA: "alpha", K.BAD_W: "w", K.BAD_MU: "mu"}[st]
        raise GibbsError(
            f"{model_kind} chain: {what} conditional infeasible at iteration {it}, "
            f"t={t + 1 if t >= 0 else None}", iteration=it, t=t + 1 if t >= 0 else None,
            state=state.as_dict())
    return PosteriorDraws(
        model_kind, p, x.size, mu_out, alpha_out,
        y_out if config.store_latents else None,
        w_out if config.store_latents else None,
        config.tied_alpha, asdict(config), asdict(priors), int(span), state)


def gibbs_run_inar1(data, priors: Priors | None = None, config: GibbsConfig | None = None,
                    truth=None) -> PosteriorDraws:
    """Data-augmented Gibbs sampler for INAR(1), conditioning on X_1 ~ Po(mu)."""
    priors = priors or Priors()
    config = config or GibbsConfig()
    x = _counts(data)
    if x.size < 2:
        raise DomainError("INAR(1) inference needs T >= 2")
    g = RngStream(config.seed, config.stream_id).generator
    state = _start("inar1", x, 1, priors, config, g, truth)
    st, it, t, mu, alpha, mu_out, alpha_out, y_out = K.chain_inar1(
        g, x, priors.a_alpha, priors.b_alpha, priors.a_mu, priors.b_mu,
        config.iterations, config.burn_in, config.thin, config.alpha_grid_n,
        config.store_latents, state.y, float(state.alpha[0]), state.mu, _logfact(x))
    state.mu = float(mu)
    state.alpha[0] = alpha
    if st != K.OK:
        raise GibbsError(f"inar1 chain: alpha draw failed at iteration {it}",
                         iteration=it, state=state.as_dict())
    return PosteriorDraws("inar1", 1, x.size, mu_out, alpha_out,
                          y_out if config.store_latents else None, None, False,
                          asdict(config), asdict(priors), 0, state)
