"""Convex analysis in logarithmic coordinates s = (log|z_1|, ..., log|z_N|).

Domains are described by their support function on the probability
simplex, optionally with a defining function psi (negative inside) and a
half-space list. Directions alpha are non-negative vectors with unit l1
norm.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull

from .lattice import MultiIndex, degree_block

LARGE = 1e15
SIMPLEX_TOL = 1e-12


class SeparationError(RuntimeError):
    """No rational separating hyperplane could be produced."""


class DegenerateDefiningFunction(ValueError):
    """Gradient of the defining function vanished at a sample."""


def as_direction(alpha, tol: float = SIMPLEX_TOL) -> np.ndarray:
    """Validate a point of the probability simplex and return it as an array."""
    a = np.asarray(alpha, dtype=float).ravel()
    if a.size == 0 or np.any(a < -tol) or abs(a.sum() - 1.0) > max(tol, 1e-12) * a.size:
        raise ValueError(f"not a simplex direction: {a}")
    return np.clip(a, 0.0, None)


def simplex_grid(n: int, m: int) -> np.ndarray:
    """All directions J/m with |J| = m, faces included."""
    return degree_block(n, m) / m


@dataclass(frozen=True)
class HalfSpace:
    """Open half-space {s : <gradient, s> + offset < 0} with gradient on the simplex."""

    gradient: tuple[float, ...]
    offset: float

    def __post_init__(self):
        object.__setattr__(self, "gradient", tuple(float(g) for g in self.gradient))

    def value(self, s) -> np.ndarray | float:
        s = np.asarray(s, dtype=float)
        return s @ np.asarray(self.gradient) + self.offset

    def contains(self, s):
        return self.value(s) < 0

    def linf_distance(self) -> float:
        """l-infinity distance from the origin to the bounding hyperplane."""
        return abs(self.offset) / float(np.abs(self.gradient).sum())

    def to_json(self) -> dict:
        return {"grad": list(self.gradient), "offset": self.offset}


@dataclass
class ConvexLogDomain:
    """Convex domain G in log space.

    ``support`` maps a simplex direction to h(alpha), possibly +inf.
    ``defining`` is an optional psi with G = {psi < 0}.
    """

    dimension: int
    support: Callable[[np.ndarray], float]
    defining: Callable[[np.ndarray], float] | None = None
    halfspaces: list[HalfSpace] = field(default_factory=list)
    finiteness_hint: str = "all of PS_N"
    name: str = "domain"

    def h(self, alpha) -> float:
        return float(self.support(as_direction(alpha)))

    def support_many(self, alphas) -> np.ndarray:
        return np.array([float(self.support(np.asarray(a, float))) for a in alphas])

    def psi(self, s) -> float:
        if self.defining is not None:
            return float(self.defining(np.asarray(s, float)))
        if self.halfspaces:
            return max(float(hs.value(s)) for hs in self.halfspaces)
        raise ValueError(f"{self.name}: no defining function or half-spaces")

    def contains(self, s) -> bool:
        return self.psi(s) < 0

    def boundary_distance(self, s, directions: np.ndarray | None = None) -> float:
        """Signed Euclidean distance to the boundary from the support function.

        Positive inside. Uses min over sampled alpha of
        (h(alpha) - <alpha, s>) / |alpha|_2.
        """
        if directions is None:
            directions = default_directions(self.dimension)
        hs = self.support_many(directions)
        s = np.asarray(s, dtype=float)
        gaps = (hs - directions @ s) / np.linalg.norm(directions, axis=1)
        return float(np.min(gaps))

    def to_json(self, alphas=None) -> dict:
        out = {"N": self.dimension, "halfspaces": [hs.to_json() for hs in self.halfspaces]}
        if alphas is not None:
            samples = []
            for a in alphas:
                hv = self.h(a)
                samples.append({"alpha": [float(x) for x in a], "h": hv if math.isfinite(hv) else "inf"})
            out["support_samples"] = samples
        return out


def default_directions(n: int) -> np.ndarray:
    m = {1: 1, 2: 2000, 3: 80, 4: 24}.get(n, 10)
    return simplex_grid(n, m)


def positive_extension(domain: ConvexLogDomain, u) -> float:
    """Positively homogeneous extension of h to the non-negative orthant."""
    u = np.asarray(u, dtype=float)
    norm = u.sum()
    if norm == 0:
        return 0.0
    return norm * domain.h(u / norm)


# -- builtin log-images ---------------------------------------------------


def polydisc_domain(log_radii) -> ConvexLogDomain:
    """Log-image of the polydisc with polyradius exp(log_radii): a shifted orthant."""
    p = np.asarray(log_radii, dtype=float)
    n = p.size
    hs = [HalfSpace(np.eye(n)[i], -p[i]) for i in range(n)]
    return ConvexLogDomain(
        n,
        support=lambda a: float(a @ p),
        defining=lambda s: float(np.max(s - p)),
        halfspaces=hs,
        name="polydisc",
    )


def _neg_entropy(a) -> float:
    a = np.asarray(a, dtype=float)
    pos = a > 0
    return float(np.sum(a[pos] * np.log(a[pos])))


def ball_domain(n: int = 2) -> ConvexLogDomain:
    """Log-image of the unit ball: {sum exp(2 s_i) < 1}."""
    return ConvexLogDomain(
        n,
        support=lambda a: 0.5 * _neg_entropy(a),
        defining=lambda s: 0.5 * float(np.logaddexp.reduce(2 * np.asarray(s, float))),
        name="ball",
    )


def e_half_domain(n: int = 2) -> ConvexLogDomain:
    """Log-image of {sum sqrt|z_i| < 1}: {sum exp(s_i / 2) < 1}."""
    return ConvexLogDomain(
        n,
        support=lambda a: 2.0 * _neg_entropy(a),
        defining=lambda s: 2.0 * float(np.logaddexp.reduce(0.5 * np.asarray(s, float))),
        name="e_half",
    )


def halfspace_domain(normal, offset: float) -> ConvexLogDomain:
    """{<normal, s> < offset} with ``normal`` on the simplex; h is finite only at ``normal``."""
    g = as_direction(normal, tol=1e-9)

    def support(a):
        return offset if np.abs(np.asarray(a) - g).sum() <= 1e-9 else math.inf

    return ConvexLogDomain(
        g.size,
        support=support,
        defining=lambda s: float(np.asarray(s) @ g - offset),
        halfspaces=[HalfSpace(g, -offset)],
        finiteness_hint=f"single direction {tuple(g)}",
        name="halfspace",
    )


def _lp_support(halfspaces: Sequence[HalfSpace], n: int):
    A = np.array([hs.gradient for hs in halfspaces])
    b = -np.array([hs.offset for hs in halfspaces])

    def support(a):
        res = linprog(-np.asarray(a, float), A_ub=A, b_ub=b, bounds=[(None, None)] * n, method="highs")
        if res.status == 3:
            return math.inf
        if res.status != 0:
            raise RuntimeError(f"support LP failed: {res.message}")
        return float(-res.fun)

    return support


def domain_from_halfspaces(halfspaces: Sequence[HalfSpace], name: str = "halfspaces") -> ConvexLogDomain:
    halfspaces = list(halfspaces)
    if not halfspaces:
        raise ValueError("need at least one half-space")
    n = len(halfspaces[0].gradient)
    return ConvexLogDomain(n, support=_lp_support(halfspaces, n), halfspaces=halfspaces, name=name)


def domain_from_json(data: dict) -> ConvexLogDomain:
    """Inverse of :meth:`ConvexLogDomain.to_json`.

    Half-spaces take precedence; otherwise the support samples define the
    intersection of their half-spaces.
    """
    n = int(data["N"])
    hss = [HalfSpace(h["grad"], float(h["offset"])) for h in data.get("halfspaces", [])]
    if not hss:
        for smp in data.get("support_samples", []):
            hv = smp["h"]
            if hv == "inf" or not math.isfinite(float(hv)):
                continue
            hss.append(HalfSpace(as_direction(smp["alpha"], tol=1e-9), -float(hv)))
    dom = domain_from_halfspaces(hss, name=data.get("name", "json"))
    if dom.dimension != n:
        raise ValueError("dimension mismatch in domain description")
    return dom


def load_domain(path) -> ConvexLogDomain:
    with open(path, encoding="utf-8") as fh:
        return domain_from_json(json.load(fh))


def domain_from_tag(tag: str, n: int = 2) -> ConvexLogDomain:
    """``polydisc[:r1,r2,...]``, ``ball``, ``e_half``, ``halfspace:a1,a2:offset``."""
    name, _, rest = tag.partition(":")
    name = name.lower()
    if name == "polydisc":
        radii = [float(r) for r in rest.split(",")] if rest else [1.0] * n
        return polydisc_domain(np.log(radii))
    if name == "ball":
        return ball_domain(n)
    if name in ("e_half", "entropy_e_half"):
        return e_half_domain(n)
    if name == "halfspace":
        normal, _, off = rest.partition(":")
        g = np.array([float(x) for x in normal.split(",")])
        return halfspace_domain(g / g.sum(), float(off))
    raise ValueError(f"unknown domain {tag!r}")


# -- operations ------------------------------------------------------------


def support_of_point_cloud(points, alpha) -> float:
    pts = np.asarray(points, dtype=float)
    if pts.size == 0:
        raise ValueError("empty point cloud")
    pts = pts.reshape(len(pts), -1)
    return float(np.max(pts @ np.asarray(alpha, dtype=float)))


def legendre_transform(axes, values, dual_axes, cap: float = LARGE, chunk: int = 4096) -> np.ndarray:
    """Discrete Legendre-Fenchel transform f*(y) = max_x <x, y> - f(x).

    ``axes`` are the 1-D coordinate vectors of the rectangular primal grid
    and ``values`` the samples of f on it (``+inf`` outside the effective
    domain). Returns f* on the grid spanned by ``dual_axes``; results above
    ``cap`` are reported as ``+inf``.
    """
    axes = [np.asarray(a, dtype=float) for a in axes]
    dual_axes = [np.asarray(a, dtype=float) for a in dual_axes]
    vals = np.asarray(values, dtype=float)
    if vals.size == 0 or any(a.size == 0 for a in axes) or any(a.size == 0 for a in dual_axes):
        raise ValueError("empty grid")
    X = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, len(axes))
    fx = vals.reshape(-1)
    keep = np.isfinite(fx)
    X, fx = X[keep], fx[keep]
    if len(fx) == 0:
        raise ValueError("f is +inf everywhere")
    Y = np.stack(np.meshgrid(*dual_axes, indexing="ij"), axis=-1).reshape(-1, len(dual_axes))
    out = np.empty(len(Y))
    for start in range(0, len(Y), chunk):
        y = Y[start:start + chunk]
        out[start:start + chunk] = np.max(y @ X.T - fx[None, :], axis=1)
    out[out > cap] = math.inf
    return out.reshape([a.size for a in dual_axes])


def _best_allocation(alpha: np.ndarray, q: int, floor: int) -> np.ndarray:
    # integer J, sum q, entries >= floor, minimising |J - q alpha|_1 (separable convex)
    n = alpha.size
    target = q * alpha
    J = np.maximum(np.floor(target).astype(np.int64), floor)
    diff = q - int(J.sum())

    def cost_up(i):
        return abs(J[i] + 1 - target[i]) - abs(J[i] - target[i])

    def cost_down(i):
        return abs(J[i] - 1 - target[i]) - abs(J[i] - target[i])

    while diff > 0:
        i = min(range(n), key=cost_up)
        J[i] += 1
        diff -= 1
    while diff < 0:
        cands = [i for i in range(n) if J[i] > floor]
        if not cands:
            return None
        i = min(cands, key=cost_down)
        J[i] -= 1
        diff += 1
    return J


def rational_simplex_approx(alpha, j: int, cap: int = 10**6, positive: bool = True) -> MultiIndex:
    """Lattice point J with |J/|J| - alpha|_1 < 1/j.

    Denominators q = |J| are scanned upward from ceil(2 N j); for each q the
    closest J with sum q is taken, and the first one within tolerance is
    returned. With ``positive`` every entry of J is at least one.
    """
    a = as_direction(alpha, tol=1e-9)
    if j < 1:
        raise ValueError("precision index must be >= 1")
    n = a.size
    floor = 1 if positive else 0
    q = max(math.ceil(2 * n * j), n * floor)
    while q <= cap:
        J = _best_allocation(a, q, floor)
        if J is not None and np.abs(J / q - a).sum() < 1.0 / j:
            return MultiIndex(J)
        q += 1
    raise ValueError(f"precision unreachable for alpha={a.tolist()}, j={j} within |J| <= {cap}")


def log_convex_hull(polyradii) -> ConvexLogDomain:
    """Log-convex hull of a union of polydiscs centred at the origin.

    The log-image of each polydisc is the open orthant below lambda(r); the
    hull is conv{lambda(r^i)} - R_+^N, with support max_i <alpha, lambda(r^i)>.
    """
    radii = np.asarray(polyradii, dtype=float)
    if radii.size == 0:
        raise ValueError("empty list of polydiscs")
    radii = radii.reshape(len(radii), -1)
    if np.any(radii <= 0):
        raise ValueError("polyradii must be positive")
    P = np.unique(np.log(radii), axis=0)
    n = P.shape[1]

    def support(a):
        return float(np.max(P @ np.asarray(a, float)))

    normals = _hull_normals(P)
    hss = [HalfSpace(g, -support(g)) for g in normals]
    dom = ConvexLogDomain(n, support=support, halfspaces=hss, name="log_convex_hull")
    dom.points = P
    return dom


def _hull_normals(P: np.ndarray) -> list[np.ndarray]:
    n = P.shape[1]
    if n == 1:
        return [np.ones(1)]
    spread = float(np.ptp(P, axis=0).max()) if len(P) > 1 else 0.0
    M = 10.0 * (spread + 1.0)
    pts = [P] + [P - M * np.eye(n)[i] for i in range(n)]
    cloud = np.vstack(pts)
    hull = ConvexHull(cloud)
    found: list[np.ndarray] = []
    for eq in hull.equations:
        g = eq[:n]
        if np.any(g < -1e-9):
            continue
        g = np.clip(g, 0.0, None)
        g = g / g.sum()
        # snap rounding noise so exactly rational normals stay exact
        g[np.abs(g) < 1e-13] = 0.0
        g = g / g.sum()
        if not any(np.abs(g - f).sum() < 1e-9 for f in found):
            found.append(g)
    found.sort(key=lambda g: tuple(-g))
    return found


def finite_difference_gradient(psi, s, step: float = 1e-6) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    grad = np.empty_like(s)
    for i in range(s.size):
        e = np.zeros_like(s)
        e[i] = step
        grad[i] = (psi(s + e) - psi(s - e)) / (2 * step)
    return grad


def boundary_points(psi, center, directions, horizon: float = 50.0, tol: float = 1e-10) -> np.ndarray:
    """Points of {psi = 0} on rays from an interior ``center``; rays that never exit are dropped."""
    center = np.asarray(center, dtype=float)
    if psi(center) >= 0:
        raise ValueError("center must satisfy psi < 0")
    out = []
    for d in np.asarray(directions, dtype=float):
        d = d / np.linalg.norm(d)
        if psi(center + horizon * d) <= 0:
            continue
        lo, hi = 0.0, horizon
        while hi - lo > tol * (1 + hi):
            mid = 0.5 * (lo + hi)
            if psi(center + mid * d) < 0:
                lo = mid
            else:
                hi = mid
        out.append(center + 0.5 * (lo + hi) * d)
    return np.array(out).reshape(-1, center.size)


def completeness_check(domain: ConvexLogDomain | Callable, samples, band: float = 1e-3,
                       tol: float = 1e-9, step: float = 1e-6):
    """Check that outward normals along the boundary lie in the closed positive orthant.

    Only samples with |psi| < ``band`` are inspected. Returns
    ``(ok, offending)`` where ``offending`` lists ``(point, unit_normal)``.
    """
    psi = domain.psi if isinstance(domain, ConvexLogDomain) else domain
    offending = []
    inspected = 0
    for s in np.asarray(samples, dtype=float):
        if abs(psi(s)) >= band:
            continue
        inspected += 1
        g = finite_difference_gradient(psi, s, step)
        norm = np.linalg.norm(g)
        if norm < 1e-12:
            raise DegenerateDefiningFunction(f"degenerate defining function at {s.tolist()}")
        u = g / norm
        if np.any(u < -tol):
            offending.append((s, u))
    if inspected == 0:
        raise ValueError("no samples within the boundary band")
    return not offending, offending


def _restricted_grid(n: int, active: np.ndarray, m: int) -> np.ndarray:
    k = int(active.sum())
    sub = simplex_grid(k, m) if k > 1 else np.ones((1, 1))
    full = np.zeros((len(sub), n))
    full[:, active] = sub
    return full


def separate(domain: ConvexLogDomain, x, tol: float = 1e-9, max_refine: int = 24) -> HalfSpace:
    """Rational half-space containing the domain and excluding the point ``x``.

    The gradient is J/|J| for a lattice point J that is positive on the
    coordinates where ``x`` is finite (coordinates equal to -inf, i.e.
    z_i = 0, are dropped). The offset is -h(J/|J|), so the half-space is a
    supporting one.
    """
    return separating_index(domain, x, tol=tol, max_refine=max_refine)[1]


def separating_index(domain: ConvexLogDomain, x, tol: float = 1e-9,
                     max_refine: int = 24) -> tuple[MultiIndex, HalfSpace]:
    """As :func:`separate`, also returning the lattice point J behind the gradient."""
    x = np.asarray(x, dtype=float)
    n = x.size
    active = np.isfinite(x)
    if not active.any():
        raise SeparationError("point has no finite log-coordinate")
    if domain.defining is not None and domain.psi(np.where(active, x, -LARGE)) <= tol:
        raise SeparationError(f"point {x.tolist()} is not verifiably outside the domain")
    xa = np.where(active, x, 0.0)

    def gap(a):
        hv = domain.support(a)
        return -math.inf if not math.isfinite(hv) else float(a @ xa) - hv

    grid = _restricted_grid(n, active, {1: 1, 2: 512, 3: 48}.get(int(active.sum()), 12))
    for hs in domain.halfspaces:
        g = np.asarray(hs.gradient)
        if np.all(g[~active] == 0):
            grid = np.vstack([grid, g])
    gaps = np.array([gap(a) for a in grid])
    if gaps.max() <= tol:
        raise SeparationError(f"point {x.tolist()} is not verifiably outside the domain")
    # prefer the direction farthest from x in Euclidean terms (nearest-point hyperplane)
    best = grid[int(np.argmax(gaps / np.linalg.norm(grid, axis=1)))][active]
    for r in range(max_refine):
        try:
            Jsub = rational_simplex_approx(best / best.sum(), 2 ** r)
        except ValueError:
            break
        J = np.zeros(n, dtype=np.int64)
        J[active] = np.asarray(Jsub)
        a = J / J.sum()
        if gap(a) > tol:
            return MultiIndex(J), HalfSpace(a, -domain.support(a))
    raise SeparationError(f"no rational separating direction found for {x.tolist()}")
