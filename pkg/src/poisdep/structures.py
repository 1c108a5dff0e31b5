"""Dependence sets, parameter containers and validity checks.

Time indices are 1-based throughout this module: ``sets[t - 1]`` is the
tuple ``D_t`` of latent indices feeding observation ``t``. Temporal indices
``<= 0`` are kept in the tuples and resolved by the zero convention
(latents and thinning probabilities vanish there).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .distributions import DomainError

__all__ = [
    "DependenceStructure",
    "TypeAParams",
    "TypeBParams",
    "Inar1Params",
    "CountSeries",
    "Violation",
    "build_order_p",
    "build_seasonal",
    "build_periodic",
    "build_spatial",
    "validate",
    "structure_to_json",
    "structure_from_json",
    "params_to_json",
    "params_from_json",
]


@dataclass(frozen=True)
class DependenceStructure:
    T: int
    sets: tuple
    kind: str
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if len(self.sets) != self.T:
            raise DomainError(f"expected {self.T} dependence sets, got {len(self.sets)}")

    @property
    def temporal(self) -> bool:
        return self.kind != "spatial"

    @property
    def order(self):
        """Contiguous order ``p`` for order-p structures, else None."""
        return self.meta.get("p") if self.kind == "order-p" else None

    def D(self, t: int) -> tuple:
        return self.sets[t - 1]

    def boundary(self, t: int) -> tuple:
        """Indices of ``D_t`` that fall at or before time zero."""
        return tuple(i for i in self.D(t) if i <= 0)

    def index_matrix(self) -> np.ndarray:
        """``(T, K)`` array of 0-based latent positions, ``-1`` for boundary or padding."""
        K = max((len(d) for d in self.sets), default=0)
        idx = np.full((self.T, max(K, 1)), -1, dtype=np.int64)
        for r, d in enumerate(self.sets):
            for c, i in enumerate(d):
                if i >= 1:
                    idx[r, c] = i - 1
        return idx


def build_order_p(T: int, p: int) -> DependenceStructure:
    if T < 1:
        raise DomainError("T must be at least 1")
    if p < 0:
        raise DomainError("order p must be nonnegative")
    sets = tuple(tuple(t - i for i in range(p + 1)) for t in range(1, T + 1))
    return DependenceStructure(T, sets, "order-p", {"p": p})


def build_seasonal(T: int, p: int, s: int) -> DependenceStructure:
    if s < 1:
        raise DomainError("season length s must be at least 1")
    if T < 1 or p < 0:
        raise DomainError("need T >= 1 and p >= 0")
    if s == 1:
        return build_order_p(T, p)
    sets = tuple(tuple(t - s * i for i in range(p + 1)) for t in range(1, T + 1))
    return DependenceStructure(T, sets, "seasonal", {"p": p, "s": s})


def build_periodic(T: int, s: int, p_vec: Sequence[int]) -> DependenceStructure:
    """Periodic orders: time ``t = (r-1)s + m`` uses order ``p_vec[m-1]``."""
    p_vec = [int(v) for v in p_vec]
    if len(p_vec) != s:
        raise DomainError(f"need one order per season position: len(p_vec)={len(p_vec)}, s={s}")
    if any(v < 0 for v in p_vec):
        raise DomainError("periodic orders must be nonnegative")
    if T < 1:
        raise DomainError("T must be at least 1")
    if len(set(p_vec)) == 1:
        return build_order_p(T, p_vec[0])
    sets = []
    for t in range(1, T + 1):
        m = (t - 1) % s + 1
        sets.append(tuple(t - i for i in range(p_vec[m - 1] + 1)))
    return DependenceStructure(T, tuple(sets), "periodic", {"s": s, "p_vec": p_vec})


def build_spatial(adjacency: Sequence[Sequence[int]]) -> DependenceStructure:
    """Sites are numbered ``1..T``; ``adjacency[t-1]`` lists the neighbours of site t."""
    T = len(adjacency)
    if T < 1:
        raise DomainError("need at least one site")
    sets = []
    for t, nb in enumerate(adjacency, start=1):
        nb = tuple(int(i) for i in nb)
        bad = [i for i in nb if not 1 <= i <= T]
        if bad:
            raise DomainError(f"site {t}: neighbour index {bad[0]} outside 1..{T}")
        sets.append(nb)
    return DependenceStructure(T, tuple(sets), "spatial", {"adjacency": [list(d) for d in sets]})


# ---------------------------------------------------------------------------
# parameters


def _alpha_vector(alpha, T):
    a = np.asarray(alpha, dtype=np.float64)
    if a.ndim == 0:
        if T is None:
            raise DomainError("a scalar alpha needs an explicit T")
        a = np.full(T, float(a))
    return a


@dataclass(frozen=True)
class TypeAParams:
    mu: float
    alpha: np.ndarray

    @classmethod
    def stationary(cls, mu, alpha, T):
        return cls(float(mu), _alpha_vector(alpha, T))

    def __post_init__(self):
        object.__setattr__(self, "alpha", _alpha_vector(self.alpha, None))


@dataclass(frozen=True)
class TypeBParams:
    mu: float
    alpha: np.ndarray
    w_divisor: float | None = None

    @classmethod
    def stationary(cls, mu, alpha, T, w_divisor=None):
        return cls(float(mu), _alpha_vector(alpha, T), w_divisor)

    def __post_init__(self):
        object.__setattr__(self, "alpha", _alpha_vector(self.alpha, None))

    def divisor(self, structure: DependenceStructure) -> float:
        """Rate divisor for the W layer: ``p + 1`` unless set explicitly."""
        if self.w_divisor is not None:
            return float(self.w_divisor)
        if structure.kind in ("order-p", "seasonal"):
            return float(structure.meta["p"] + 1)
        raise DomainError(
            f"w_divisor must be given explicitly for {structure.kind} structures"
        )


@dataclass(frozen=True)
class Inar1Params:
    mu: float
    alpha: float


@dataclass(frozen=True)
class CountSeries:
    labels: tuple
    x: np.ndarray
    name: str = ""

    def __post_init__(self):
        x = np.asarray(self.x)
        if x.ndim != 1 or x.size < 1:
            raise DomainError("a count series needs at least one observation")
        if not np.all(np.isfinite(x)) or np.any(x < 0) or np.any(x != np.round(x)):
            raise DomainError("counts must be nonnegative integers")
        x = x.astype(np.int64)
        labels = tuple(self.labels) if self.labels is not None else tuple(range(1, x.size + 1))
        if len(labels) != x.size:
            raise DomainError(f"{len(labels)} labels for {x.size} counts")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_counts(cls, x, name=""):
        x = np.asarray(x)
        return cls(tuple(range(1, x.size + 1)), x, name)

    @property
    def T(self) -> int:
        return int(self.x.size)

    def __len__(self):
        return self.T


@dataclass(frozen=True)
class Violation:
    t: int
    message: str

    def __bool__(self):
        return False


def validate(params, structure: DependenceStructure | None = None):
    """Check parameter constraints; returns ``True`` or a falsy ``Violation``.

    Type A needs ``sum(alpha_i, i in D_t, i >= 1) < 1`` at every t, Type B only
    ``0 < alpha_t < 1``. The first failing t (1-based) is reported.
    """
    mu = params.mu
    if not (np.isfinite(mu) and mu > 0):
        return Violation(0, f"mu must be positive, got {mu}")
    if isinstance(params, Inar1Params):
        if not 0 < params.alpha < 1:
            return Violation(0, f"alpha must lie in (0, 1), got {params.alpha}")
        return True
    alpha = params.alpha
    if structure is not None and alpha.size != structure.T:
        return Violation(0, f"alpha has length {alpha.size}, structure has T={structure.T}")
    if isinstance(params, TypeBParams):
        for t, a in enumerate(alpha, start=1):
            if not 0 < a < 1:
                return Violation(t, f"alpha_{t}={a} outside (0, 1)")
        return True
    if structure is None:
        raise DomainError("Type A validation needs a dependence structure")
    for t, a in enumerate(alpha, start=1):
        if not 0 <= a < 1:
            return Violation(t, f"alpha_{t}={a} outside [0, 1)")
    for t in range(1, structure.T + 1):
        total = sum(alpha[i - 1] for i in structure.D(t) if i >= 1)
        if not total < 1:
            return Violation(t, f"sum of alpha over D_{t} is {total:.17g} >= 1")
    return True


# ---------------------------------------------------------------------------
# JSON round trips


def structure_to_json(structure: DependenceStructure) -> str:
    doc = {"kind": structure.kind, "T": structure.T}
    if structure.kind == "order-p":
        doc["p"] = structure.meta["p"]
    elif structure.kind == "seasonal":
        doc.update(p=structure.meta["p"], s=structure.meta["s"])
    elif structure.kind == "periodic":
        doc.update(s=structure.meta["s"], p_vec=list(structure.meta["p_vec"]))
    else:
        doc["adjacency"] = [list(d) for d in structure.sets]
    return json.dumps(doc, sort_keys=True)


def structure_from_json(text: str) -> DependenceStructure:
    doc = json.loads(text)
    kind = doc.get("kind")
    if kind == "order-p":
        return build_order_p(int(doc["T"]), int(doc["p"]))
    if kind == "seasonal":
        return build_seasonal(int(doc["T"]), int(doc["p"]), int(doc["s"]))
    if kind == "periodic":
        return build_periodic(int(doc["T"]), int(doc["s"]), doc["p_vec"])
    if kind == "spatial":
        return build_spatial(doc["adjacency"])
    raise DomainError(f"unknown structure kind {kind!r}")


def params_to_json(params) -> str:
    if isinstance(params, Inar1Params):
        doc = {"model": "inar1", "mu": params.mu, "alpha": params.alpha}
    elif isinstance(params, TypeBParams):
        doc = {"model": "typeB", "mu": params.mu, "alpha": params.alpha.tolist(),
               "w_divisor": params.w_divisor}
    else:
        doc = {"model": "typeA", "mu": params.mu, "alpha": params.alpha.tolist()}
    return json.dumps(doc, sort_keys=True)


def params_from_json(text: str):
    doc = json.loads(text)
    model = doc.get("model")
    if model == "inar1":
        return Inar1Params(float(doc["mu"]), float(doc["alpha"]))
    if model == "typeA":
        return TypeAParams(float(doc["mu"]), np.asarray(doc["alpha"], dtype=float))
    if model == "typeB":
        return TypeBParams(float(doc["mu"]), np.asarray(doc["alpha"], dtype=float),
                           doc.get("w_divisor"))
    raise DomainError(f"unknown model {model!r}")
