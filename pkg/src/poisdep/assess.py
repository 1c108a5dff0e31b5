"""Posterior predictive replicates, the L-measure and model-grid comparison."""
from __future__ import annotations

import io
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .distributions import DomainError, RngStream, as_generator
from .inference import MODEL_KINDS, GibbsConfig, PosteriorDraws, Priors, gibbs_run
from .structures import CountSeries

__all__ = [
    "PredictiveSummary",
    "GridCell",
    "ComparisonTable",
    "posterior_predictive",
    "l_measure",
    "model_grid",
    "cell_stream_id",
]

KIND_LABELS = {"typeA": "A", "typeB": "B", "inar1": "INAR1"}


@dataclass(frozen=True)
class PredictiveSummary:
    mean: np.ndarray
    var: np.ndarray
    lo: np.ndarray
    hi: np.ndarray
    level: float = 0.95
    n_samples: int = 0

    def to_csv(self, labels=None) -> str:
        T = self.mean.size
        labels = range(1, T + 1) if labels is None else labels
        buf = io.StringIO()
        buf.write("label,mean,var,lo,hi\n")
        for lab, m, v, a, b in zip(labels, self.mean, self.var, self.lo, self.hi):
            buf.write(f"{lab},{m:.17g},{v:.17g},{int(a)},{int(b)}\n")
        return buf.getvalue()


def _counts(data):
    return data.x if isinstance(data, CountSeries) else np.asarray(data, dtype=np.int64)


def _window(v, p):
    """Row-wise sum over lags 0..p with zeros before the first column."""
    out = v.copy()
    for i in range(1, p + 1):
        out[:, i:] += v[:, :-i]
    return out


def predictive_samples(draws: PosteriorDraws, data, rng=None, reps=1) -> np.ndarray:
    """``(reps * n_draws, T)`` in-sample replicates of X conditioned on kept latents."""
    if len(draws) == 0:
        raise DomainError("no posterior draws")
    x = _counts(data)
    T = x.size
    if T != draws.T:
        raise DomainError(f"data has T={T}, draws were fitted with T={draws.T}")
    g = as_generator(rng if rng is not None else 0)
    mu = draws.mu[:, None]
    if draws.kind == "inar1":
        a = draws.alpha[:, :1]
        prev = np.concatenate([[0], x[:-1]])[None, :]
        n = np.broadcast_to(prev, (len(draws), T))
        out = []
        for _ in range(reps):
            rate = np.where(np.arange(T) == 0, mu, mu * (1 - a))
            out.append(g.binomial(n, np.broadcast_to(a, n.shape)) + g.poisson(rate))
        return np.vstack(out)
    if not draws.has_latents:
        raise DomainError("posterior predictive needs latent snapshots; "
                          "rerun the fit with store_latents enabled")
    alpha = draws.alpha_matrix()
    if draws.kind == "typeA":
        base = _window(draws.y.astype(np.int64), draws.p)
        rate = mu * (1 - _window(alpha, draws.p))
    elif draws.kind == "typeB":
        base = draws.y.astype(np.int64)
        rate = mu * (1 - alpha)
    else:
        raise DomainError(f"unknown model kind {draws.kind!r}")
    rate = np.maximum(rate, 0.0)
    return np.vstack([base + g.poisson(rate) for _ in range(reps)])


def posterior_predictive(draws: PosteriorDraws, model_kind=None, structure=None, data=None,
                         rng=None, level=0.95, reps=1) -> PredictiveSummary:
    """Summaries of X_t^F across kept draws (``reps`` replicates per draw).

    Type A: ``sum(y_i, i in D_t) + Po(mu (1 - sum alpha_i))``; Type B:
    ``y_t + Po(mu (1 - alpha_t))``; INAR(1): ``Bin(x_{t-1}, alpha) +
    Po(mu (1 - alpha))`` with ``Po(mu)`` at t = 1. Intervals are empirical
    quantiles rounded outward to integers.
    """
    if model_kind is not None and model_kind != draws.kind:
        raise DomainError(f"draws are {draws.kind}, not {model_kind}")
    if structure is not None and draws.kind != "inar1":
        p = structure if isinstance(structure, int) else structure.order
        if p != draws.p:
            raise DomainError(f"structure order {p} differs from fitted order {draws.p}")
    if data is None:
        raise DomainError("observed data are required")
    if not 0 < level < 1:
        raise DomainError("level must lie in (0, 1)")
    xf = predictive_samples(draws, data, rng, reps)
    tail = (1 - level) / 2
    lo = np.floor(np.quantile(xf, tail, axis=0, method="inverted_cdf"))
    hi = np.ceil(np.quantile(xf, 1 - tail, axis=0, method="inverted_cdf"))
    return PredictiveSummary(xf.mean(axis=0), xf.var(axis=0), lo.astype(np.int64),
                             hi.astype(np.int64), level, xf.shape[0])


def l_measure(pred, x, nu=0.5) -> float:
    """``mean(Var(X_t^F | x)) + nu * mean((E(X_t^F | x) - x_t)^2)``."""
    if nu < 0:
        raise DomainError("nu must be nonnegative")
    var = np.asarray(pred.var, dtype=np.float64)
    mean = np.asarray(pred.mean, dtype=np.float64)
    x = np.asarray(_counts(x), dtype=np.float64)
    if not var.size == mean.size == x.size:
        raise DomainError(f"length mismatch: {var.size} variances, {mean.size} means, "
                          f"{x.size} observations")
    T = x.size
    return float(var.sum() / T + nu * ((mean - x) ** 2).sum() / T)


# ---------------------------------------------------------------------------
# model grid


@dataclass
class GridCell:
    series: str
    kind: str
    p: int | None
    L: float = math.nan
    error: str = ""
    is_min: bool = False

    @property
    def column(self) -> str:
        lab = KIND_LABELS[self.kind]
        return lab if self.p is None else f"{lab}_p{self.p}"


@dataclass
class ComparisonTable:
    cells: list = field(default_factory=list)
    nu: float = 0.5

    def flag_minima(self):
        groups = {}
        for c in self.cells:
            c.is_min = False
            groups.setdefault((c.series, c.kind), []).append(c)
        for grp in groups.values():
            ok = [c for c in grp if not c.error and np.isfinite(c.L)]
            if ok:
                min(ok, key=lambda c: c.L).is_min = True
        return self

    @property
    def series(self):
        return list(dict.fromkeys(c.series for c in self.cells))

    @property
    def columns(self):
        return list(dict.fromkeys(c.column for c in self.cells))

    def get(self, series, kind, p=None):
        for c in self.cells:
            if c.series == series and c.kind == kind and c.p == p:
                return c
        raise KeyError((series, kind, p))

    def to_csv(self) -> str:
        """Table-1 layout: one row per series, one column per fitted model."""
        cols = self.columns
        index = {(c.series, c.column): c for c in self.cells}
        buf = io.StringIO()
        buf.write("series," + ",".join(cols) + "," + ",".join(f"min_{k}" for k in
                                                             self._kinds()) + "\n")
        for s in self.series:
            row = [s]
            for col in cols:
                c = index.get((s, col))
                row.append("" if c is None or c.error else format(c.L, ".17g"))
            for k in self._kinds():
                best = [c.column for c in self.cells if c.series == s and c.kind == k
                        and c.is_min]
                row.append(best[0] if best else "")
            buf.write(",".join(row) + "\n")
        return buf.getvalue()

    def to_long_csv(self) -> str:
        buf = io.StringIO()
        buf.write("series,kind,p,L,is_min,error\n")
        for c in self.cells:
            p = "" if c.p is None else str(c.p)
            L = "" if c.error else format(c.L, ".17g")
            err = c.error.replace(",", ";").replace("\n", " ")
            buf.write(f"{c.series},{c.kind},{p},{L},{int(c.is_min)},{err}\n")
        return buf.getvalue()

    def to_text(self, digits=4) -> str:
        """Aligned text table; the smallest value within each model type carries ``*``."""
        cols = self.columns
        index = {(c.series, c.column): c for c in self.cells}
        rows = [["series"] + cols]
        for s in self.series:
            row = [s]
            for col in cols:
                c = index.get((s, col))
                if c is None:
                    row.append("")
                elif c.error:
                    row.append("failed")
                else:
                    row.append(f"{c.L:.{digits}f}" + ("*" if c.is_min else ""))
            rows.append(row)
        widths = [max(len(r[j]) for r in rows) for j in range(len(cols) + 1)]
        lines = []
        for r in rows:
            lines.append("  ".join(v.rjust(w) if j else v.ljust(w)
                                   for j, (v, w) in enumerate(zip(r, widths))))
        return "\n".join(lines) + "\n"

    def _kinds(self):
        return list(dict.fromkeys(c.kind for c in self.cells))


def cell_stream_id(series_index: int, kind: str, p: int | None) -> int:
    """Stream id for one grid cell, unique in (series, kind, p)."""
    k = MODEL_KINDS.index(kind)
    return (int(series_index) << 16) | (k << 8) | (0 if p is None else int(p) + 1)


def _fit_cell(x, kind, p, priors, config, nu, level):
    draws = gibbs_run(kind, x, 1 if p is None else p, priors, config)
    rng = RngStream(config.seed, config.stream_id).child(1)
    pred = posterior_predictive(draws, data=x, rng=rng, level=level)
    return l_measure(pred, x, nu)


def model_grid(data, kinds=MODEL_KINDS, p_values=range(7), priors: Priors | None = None,
               config: GibbsConfig | None = None, nu=0.5, level=0.95, n_jobs=1):
    """Fit every (series, kind, p) and tabulate L(nu).

    INAR(1) has no order and is fitted once per series. Each cell runs on its
    own stream ``(config.seed, cell_stream_id(...))`` so results do not depend
    on scheduling. A failing fit is recorded in its cell and the table is still
    produced.
    """
    priors = priors or Priors()
    config = config or GibbsConfig()
    if isinstance(data, CountSeries) or np.isscalar(next(iter(data), None)):
        data = [data]
    series = [d if isinstance(d, CountSeries) else CountSeries.from_counts(d) for d in data]
    kinds = list(kinds)
    p_values = list(p_values)
    if not series or not kinds or not p_values:
        raise DomainError("series, kinds and p values must all be nonempty")
    for k in kinds:
        if k not in MODEL_KINDS:
            raise DomainError(f"unknown model kind {k!r}")
    jobs = []
    for i, s in enumerate(series):
        name = s.name or f"series{i + 1}"
        for k in kinds:
            for p in ([None] if k == "inar1" else p_values):
                cfg = replace(config, stream_id=cell_stream_id(i, k, p), store_latents=True)
                jobs.append((GridCell(name, k, p), s.x, cfg))

    def run(job):
        cell, x, cfg = job
        try:
            cell.L = _fit_cell(x, cell.kind, cell.p, priors, cfg, nu, level)
        except Exception as exc:  # recorded per cell
            cell.error = f"{type(exc).__name__}: {exc}"
        return cell

    if n_jobs == 1:
        cells = [run(j) for j in jobs]
    else:
        from joblib import Parallel, delayed
        cells = Parallel(n_jobs=n_jobs)(delayed(run)(j) for j in jobs)
    return ComparisonTable(cells, nu).flag_minima()
