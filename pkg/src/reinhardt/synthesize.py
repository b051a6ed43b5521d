"""Explicit power series attached to a prescribed log-convex complete Reinhardt domain.

Two constructions:

* :func:`synthesize_series` - a series converging precisely on the domain,
  with one strand of monomials per chosen direction and coefficients
  exp(-|J| h(alpha)).
* :func:`blowup_series` - a series converging on the domain whose values
  along a sequence approaching a given boundary point are unbounded.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import qmc

from .analyze import LimsupEstimate, support_estimate
from .coeffs import TableOracle, write_terms
from .lattice import MultiIndex
from .logconvex import (
    LARGE,
    ConvexLogDomain,
    SeparationError,
    as_direction,
    default_directions,
    rational_simplex_approx,
    separating_index,
)

log = logging.getLogger(__name__)

LOG2 = math.log(2.0)


class SynthesisError(RuntimeError):
    pass


@dataclass
class SeriesTermStream:
    """Ordered (J, log c_J) terms; a repeated J is merged by ``combine``."""

    dimension: int
    terms: dict = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)
    combine: str = "max"

    def add(self, J, log_c: float, origin) -> None:
        J = MultiIndex(J)
        if len(J) != self.dimension:
            raise ValueError("dimension mismatch")
        if not math.isfinite(log_c):
            raise ValueError(f"non-finite coefficient for {J}")
        key = tuple(J)
        if key not in self.terms:
            self.terms[key] = float(log_c)
            self.provenance[key] = origin
            return
        old = self.terms[key]
        if self.combine == "max":
            if log_c > old:
                self.terms[key] = float(log_c)
                self.provenance[key] = origin
        else:
            self.terms[key] = float(np.logaddexp(old, log_c))

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    @property
    def max_degree(self) -> int:
        return max((sum(J) for J in self.terms), default=0)

    def to_oracle(self) -> TableOracle:
        oracle = TableOracle(self.dimension, dict(self.terms))
        oracle.name = "synthesized"
        return oracle

    def write_jsonl(self, path) -> int:
        order = sorted(self.terms, key=lambda J: (sum(J), J))
        return write_terms(((J, self.terms[J]) for J in order), path)

    def log_eval(self, z) -> float:
        """log of sum |c_J| |z^J|, evaluated stably."""
        x = _log_abs(z)
        E = np.array(list(self.terms), dtype=float)
        lc = np.array(list(self.terms.values()))
        fin = np.isfinite(x)
        vals = E @ np.where(fin, x, 0.0)
        dead = (E[:, ~fin] > 0).any(axis=1) if (~fin).any() else np.zeros(len(E), bool)
        vals = np.where(dead, -np.inf, vals + lc)
        return float(np.logaddexp.reduce(vals))


@dataclass
class DomainSpec:
    """Target domain plus the directions along which strands are laid."""

    domain: ConvexLogDomain
    directions: np.ndarray | None = None
    seed: int = 0

    def direction_list(self, n_max: int) -> np.ndarray:
        if self.directions is not None:
            return np.asarray(self.directions, dtype=float)[:n_max]
        return generate_directions(self.domain, n_max, self.seed)


def sorted_gaps(u: np.ndarray) -> np.ndarray:
    """Map points of the unit cube [0,1]^(N-1) onto the simplex PS_N."""
    u = np.sort(np.atleast_2d(u), axis=1)
    edges = np.hstack([np.zeros((len(u), 1)), u, np.ones((len(u), 1))])
    return np.diff(edges, axis=1)


def generate_directions(domain: ConvexLogDomain, n_max: int, seed: int = 0) -> np.ndarray:
    """Directions where h is finite: vertices, half-space normals, then a Halton stream."""
    n = domain.dimension
    cands = [np.eye(n)[i] for i in range(n)]
    cands += [np.asarray(hs.gradient) for hs in domain.halfspaces]
    out: list[np.ndarray] = []

    def offer(a):
        if len(out) >= n_max or not math.isfinite(domain.support(a)):
            return
        if any(np.abs(a - b).sum() < 1e-12 for b in out):
            return
        out.append(a)

    for a in cands:
        offer(a)
    if n == 1:
        return np.array(out)
    sampler = qmc.Halton(d=n - 1, scramble=True, seed=seed)
    tries = 0
    while len(out) < n_max and tries < 64 * n_max:
        for a in sorted_gaps(sampler.random(n_max)):
            offer(a)
        tries += n_max
    return np.array(out).reshape(-1, n)


def synthesize_series(spec: DomainSpec, n_max: int, j_max: int) -> SeriesTermStream:
    """Lay one strand per direction: term z^J with log-coefficient -|J| h(alpha).

    J runs over the simplex approximants of alpha at precisions 1..j_max.
    """
    if n_max < 1 or j_max < 1:
        raise ValueError("n_max and j_max must be >= 1")
    dirs = spec.direction_list(n_max)
    if len(dirs) == 0:
        raise SynthesisError("no direction with finite support function")
    stream = SeriesTermStream(spec.domain.dimension)
    for n, alpha in enumerate(dirs):
        alpha = as_direction(alpha, tol=1e-9)
        h = spec.domain.support(alpha)
        if not math.isfinite(h):
            raise SynthesisError(f"direction outside PS_h: {alpha.tolist()}")
        for j in range(1, j_max + 1):
            J = rational_simplex_approx(alpha, j)
            stream.add(J, -J.degree() * h, (n, j))
    stream.directions = dirs
    return stream


@dataclass(frozen=True)
class RoundTripRow:
    alpha: tuple
    h: float
    h_hat: float
    estimate: LimsupEstimate

    @property
    def error(self) -> float:
        return abs(self.h_hat - self.h)


def round_trip(domain: ConvexLogDomain, stream: SeriesTermStream, directions=None,
               K: int | None = None, eps: float = 0.02) -> list[RoundTripRow]:
    """Re-analyse a synthesized stream and compare h-hat with h on its directions."""
    oracle = stream.to_oracle()
    K = K or stream.max_degree
    dirs = stream.directions if directions is None else directions
    rows = []
    for a in dirs:
        est = support_estimate(oracle, a, K, eps)
        rows.append(RoundTripRow(tuple(float(x) for x in a), domain.support(np.asarray(a)), est.value, est))
    return rows


# -- blow-up at a boundary point -------------------------------------------


def _log_abs(z) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.log(np.abs(np.asarray(z, dtype=complex)).astype(float))


def _finite_floor(x: np.ndarray) -> np.ndarray:
    return np.where(np.isfinite(x), x, -LARGE)


def _masked_dot(J, x) -> float:
    # <J, x> with 0 * (-inf) = 0
    J = np.asarray(J, dtype=float)
    x = np.asarray(x, dtype=float)
    fin = np.isfinite(x)
    if np.any(J[~fin] > 0):
        return -math.inf
    return float(J[fin] @ x[fin])


def inner_domain(domain: ConvexLogDomain, k: int) -> ConvexLogDomain:
    """Bound for G_k = {dist(s, boundary) > 1/k}: h_k(alpha) = h(alpha) - |alpha|_2 / k."""

    def support(a):
        a = np.asarray(a, dtype=float)
        return domain.support(a) - float(np.linalg.norm(a)) / k

    def defining(s):
        return 1.0 / k - domain.boundary_distance(_finite_floor(np.asarray(s, float)))

    return ConvexLogDomain(domain.dimension, support=support, defining=defining,
                           name=f"{domain.name}_inner({k})")


def exhaustion_sup_bound(domain: ConvexLogDomain, alpha, k: int) -> float:
    """Upper bound of <alpha, s> over G_k intersected with the box {s_i <= log k}."""
    alpha = np.asarray(alpha, dtype=float)
    return min(domain.support(alpha) - float(np.linalg.norm(alpha)) / k, math.log(k))


@dataclass(frozen=True)
class BlowupStage:
    k: int
    point: tuple  # p^k, moduli
    index: MultiIndex  # J of the separating monomial
    power: int  # n_k
    log_c: float  # log c_k (value of the stage term at p^k)
    log_sup_bound: float  # log of the sup bound over D_k


def blowup_series(spec: DomainSpec, p, k_max: int, boundary_tol: float = 1e-6) -> SeriesTermStream:
    """Series sum_k c_k (z^J_k / (p^k)^J_k)^(n_k) that converges on the domain
    and exceeds n - 1 at the n-th approach point p^n = (1 - 1/(n+1)) |p|.
    """
    dom = spec.domain
    if dom.defining is None:
        raise SynthesisError("blow-up needs a defining function")
    tau = np.abs(np.asarray(p, dtype=complex)).astype(float)
    with np.errstate(divide="ignore"):
        xp = np.log(tau)
    if abs(dom.psi(_finite_floor(xp))) > boundary_tol:
        raise SynthesisError(f"p={tau.tolist()} is not on the boundary (psi={dom.psi(_finite_floor(xp)):.3g})")
    stream = SeriesTermStream(dom.dimension, combine="sum")
    stages: list[BlowupStage] = []
    for k in range(1, k_max + 1):
        pk = (1.0 - 1.0 / (k + 1)) * tau
        with np.errstate(divide="ignore"):
            xk = np.log(pk)
        dist = dom.boundary_distance(_finite_floor(xk))
        if not (1.0 / (k + 1) < dist <= 1.0 / k + 1e-12):
            log.warning("stage %d skipped: approach point at distance %.3g not in (1/%d, 1/%d]",
                        k, dist, k + 1, k)
            continue
        try:
            J, _ = separating_index(inner_domain(dom, k), xk)
        except SeparationError as exc:
            raise SynthesisError(f"stage {k}: {exc}") from exc
        alpha = np.asarray(J, float) / J.degree()
        rate = J.degree() * (exhaustion_sup_bound(dom, alpha, k) - _masked_dot(alpha, xk))
        if not rate < 0:
            raise SynthesisError(f"stage {k}: monomial does not decay on D_{k}")
        prev = [
            st.log_c + st.power * (_masked_dot(st.index, xk) - _masked_dot(st.index, _log_abs(st.point)))
            for st in stages
        ]
        # c_k = k + |sum of earlier stages at p^k|, all terms positive at p^k
        log_c = float(np.logaddexp.reduce([math.log(k)] + prev))
        n_k = max(1, math.floor((log_c + k * LOG2) / -rate) + 1)
        stage = BlowupStage(k, tuple(pk), J, n_k, log_c, log_c + n_k * rate)
        stages.append(stage)
        stream.add(J * n_k, log_c - n_k * _masked_dot(J, xk), ("stage", k))
    stream.stages = stages
    return stream


def stage_log_value(stage: BlowupStage, z) -> float:
    """log |c_k m_k(z)^(n_k)| at z."""
    x = _log_abs(z)
    return stage.log_c + stage.power * (
        _masked_dot(stage.index, x) - _masked_dot(stage.index, _log_abs(stage.point))
    )


def sample_exhaustion(domain: ConvexLogDomain, k: int, count: int, rng: np.random.Generator,
                      depth: float = 8.0) -> np.ndarray:
    """Random log-space points of D_k = G_k intersected with {s_i < log k}."""
    n = domain.dimension
    D = default_directions(n)
    hs = domain.support_many(D)
    fin = np.isfinite(hs)
    D, hs = D[fin], hs[fin]
    norms = np.linalg.norm(D, axis=1)
    top = math.log(k)
    out = []
    while sum(len(o) for o in out) < count:
        S = rng.uniform(-depth, top, size=(4 * count, n))
        dist = np.min((hs[None, :] - S @ D.T) / norms[None, :], axis=1)
        out.append(S[dist > 1.0 / k])
    return np.vstack(out)[:count]


def partial_sum_log(stream: SeriesTermStream, z) -> float:
    return stream.log_eval(z)
