"""Ray casting on domains star-like with respect to the origin.

A :class:`StarDomain` is just a membership predicate on R^N; Reinhardt
domains are handled through the moduli of the coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

HORIZON = 1e6
BISECT_TOL = 1e-10


class StarDomainError(ValueError):
    pass


@dataclass
class StarDomain:
    contains: Callable[[np.ndarray], bool]
    dimension: int
    bounded: bool | None = None
    interior_radius: float = 1e-6
    horizon: float = HORIZON
    name: str = "star"

    def __call__(self, x) -> bool:
        return bool(self.contains(np.asarray(x, dtype=float)))

    def check_origin(self) -> None:
        r = self.interior_radius
        probes = [np.zeros(self.dimension)]
        for i in range(self.dimension):
            e = np.zeros(self.dimension)
            e[i] = r
            probes += [e, -e]
        if not all(self(p) for p in probes):
            raise StarDomainError(f"{self.name}: origin is not an interior point")


def ball(n: int = 2, radius: float = 1.0) -> StarDomain:
    return StarDomain(lambda x: float(np.linalg.norm(x)) < radius, n, bounded=True, name="ball")


def polydisc(radii) -> StarDomain:
    r = np.asarray(radii, dtype=float)
    return StarDomain(lambda x: bool(np.all(np.abs(x) < r)), r.size, bounded=True, name="polydisc")


def hartogs_h() -> StarDomain:
    """{|z_1 z_2| < 1}, unbounded along both axes."""
    return StarDomain(lambda x: abs(x[0] * x[1]) < 1.0, 2, bounded=False, name="H")


def from_gauge(gauge_fn: Callable[[np.ndarray], float], n: int, name: str = "gauge") -> StarDomain:
    return StarDomain(lambda x: gauge_fn(x) < 1.0, n, name=name)


def from_series(oracle, K: int, tail_fraction: float = 0.5) -> StarDomain:
    """Convergence domain of a power series, judged by the sign of psi-hat."""
    from .analyze import _psi_value, log_image

    return StarDomain(
        lambda x: _psi_value(oracle, log_image(x), K, tail_fraction) < 0,
        oracle.dimension,
        name=f"series({oracle.name})",
    )


def domain_from_tag(tag: str, n: int = 2) -> StarDomain:
    """``ball``, ``polydisc:r1,r2,...`` or ``H``."""
    name, _, rest = tag.partition(":")
    if name == "ball":
        return ball(n)
    if name == "polydisc":
        return polydisc([float(r) for r in rest.split(",")] if rest else [1.0] * n)
    if name in ("H", "h", "hartogs"):
        return hartogs_h()
    raise ValueError(f"unknown star domain {tag!r}")


def radial(d: StarDomain, v) -> float:
    """sup{t > 0 : t v in d} by bracketing and bisection; inf past the horizon."""
    v = np.asarray(v, dtype=float)
    if abs(np.linalg.norm(v) - 1.0) > 1e-9:
        raise ValueError("ray direction must be a unit vector")
    d.check_origin()
    lo, hi = 0.0, 1.0
    if d(hi * v):
        while d(hi * v):
            lo, hi = hi, 2 * hi
            if hi > d.horizon:
                return math.inf
    else:
        while not d(hi * v):
            hi /= 2
            if hi < d.interior_radius:
                return hi
        lo, hi = hi, 2 * hi
    while hi - lo > BISECT_TOL * (1 + hi):
        mid = 0.5 * (lo + hi)
        if d(mid * v):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def gauge(d: StarDomain, x) -> float:
    """Minkowski functional |x| / radial(x / |x|); zero at the origin."""
    x = np.asarray(x, dtype=float)
    norm = float(np.linalg.norm(x))
    if norm == 0:
        return 0.0
    rho = radial(d, x / norm)
    return 0.0 if math.isinf(rho) else norm / rho


@dataclass
class StarCheck:
    ok: bool
    offending: list = field(default_factory=list)
    reason: str = ""


def proper_star_check(d: StarDomain, rays, steps: int = 200, reach: float = 100.0,
                      tol: float = 1e-6) -> StarCheck:
    """Look for points of ``d`` beyond the first boundary crossing on each ray.

    Each ray is scanned on a geometric grid from radial(v)(1 + tol) out to
    ``reach`` times that radius.
    """
    try:
        d.check_origin()
    except StarDomainError as exc:
        return StarCheck(False, [], str(exc))
    bad = []
    for v in np.asarray(rays, dtype=float):
        v = v / np.linalg.norm(v)
        rho = radial(d, v)
        if math.isinf(rho):
            continue
        ts = rho * (1 + tol) * np.geomspace(1.0, reach, steps)
        if any(d(t * v) for t in ts):
            bad.append(v)
    return StarCheck(not bad, bad, "" if not bad else f"{len(bad)} ray(s) re-enter the domain")


def phi_map(d: StarDomain, x) -> np.ndarray:
    """|x| / (1 + 1/rho(x/|x|) - |x|) * x, with 1/rho = 0 on unbounded rays."""
    x = np.asarray(x, dtype=float)
    norm = float(np.linalg.norm(x))
    if norm >= 1:
        raise ValueError("phi_map is defined on the open unit ball")
    if norm == 0:
        return np.zeros_like(x)
    rho = radial(d, x / norm)
    inv = 0.0 if math.isinf(rho) else 1.0 / rho
    return norm / (1.0 + inv - norm) * x
