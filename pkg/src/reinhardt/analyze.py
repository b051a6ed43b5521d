"""Estimate the domain of convergence of sum c_J z^J from its coefficients.

Every estimator replaces the limsup over |J| -> infinity by a maximum over
the tail window ``tail_fraction * K <= |J| <= K``. Coordinates are handled
through two maps: tau(z) = (|z_1|, ..., |z_N|) and lambda(r) = log r, with
log 0 = -inf.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .coeffs import CoefficientOracle
from .lattice import DirectionWindow, MultiIndex

NEG_INF = float("-inf")


class EmptyWindowError(RuntimeError):
    """No non-zero coefficient in the inspected window."""


class Membership(str, enum.Enum):
    INSIDE = "inside"
    OUTSIDE = "outside"
    BOUNDARY_BAND = "boundary_band"


@dataclass(frozen=True)
class LimsupEstimate:
    value: float
    degree_cutoff: int
    window: float
    achieving_index: MultiIndex | None


def modulus(z) -> np.ndarray:
    return np.abs(np.asarray(z, dtype=complex)).astype(float)


def log_image(z) -> np.ndarray:
    """lambda(tau(z)); zero coordinates map to -inf."""
    r = modulus(z)
    with np.errstate(divide="ignore"):
        return np.log(r)


def _tail_bounds(K: int, tail_fraction: float) -> tuple[int, int]:
    if K < 4:
        raise ValueError("degree cutoff K must be >= 4")
    if not 0 < tail_fraction <= 1:
        raise ValueError("tail_fraction must lie in (0, 1]")
    return max(1, math.ceil(tail_fraction * K)), int(K)


@lru_cache(maxsize=32)
def _tail(oracle: CoefficientOracle, lo: int, hi: int):
    # non-zero coefficients in the window: (indices, directions, log|c|/|J|)
    block = oracle.indices(lo, hi)
    logs = oracle.log_modulus_array(block) if len(block) else np.zeros(0)
    keep = logs > NEG_INF
    block, logs = block[keep], logs[keep]
    deg = block.sum(axis=1)
    return block, block / deg[:, None], logs / deg


def tail_data(oracle: CoefficientOracle, K: int, tail_fraction: float = 0.5):
    lo, hi = _tail_bounds(K, tail_fraction)
    block, dirs, rate = _tail(oracle, lo, hi)
    if len(block) == 0:
        raise EmptyWindowError(f"empty tail: no non-zero coefficient with {lo} <= |J| <= {hi}")
    return block, dirs, rate


def _affine_values(dirs: np.ndarray, block: np.ndarray, S: np.ndarray) -> np.ndarray:
    # <J/|J|, s> for every (point, index); 0 * (-inf) is taken as 0
    S = np.atleast_2d(np.asarray(S, dtype=float))
    fin = np.isfinite(S)
    vals = np.where(fin, S, 0.0) @ dirs.T
    if not fin.all():
        hits = (~fin).astype(float) @ (block > 0).T.astype(float)
        vals = np.where(hits > 0, NEG_INF, vals)
    return vals


def psi_batch(c: CoefficientOracle, S, K: int, tail_fraction: float = 0.5) -> np.ndarray:
    """psi-hat at each row of ``S``; see :func:`psi_estimate`."""
    block, dirs, rate = tail_data(c, K, tail_fraction)
    return np.max(_affine_values(dirs, block, S) + rate[None, :], axis=1)


def psi_estimate(c: CoefficientOracle, s, K: int, tail_fraction: float = 0.5) -> LimsupEstimate:
    """Truncated limsup of <J/|J|, s> + log|c_J| / |J| over the tail window."""
    block, dirs, rate = tail_data(c, K, tail_fraction)
    vals = _affine_values(dirs, block, s)[0] + rate
    i = int(np.argmax(vals))
    return LimsupEstimate(float(vals[i]), int(K), float(tail_fraction), MultiIndex(block[i]))


def _psi_value(c, s, K, tail_fraction) -> float:
    # an oracle without coefficients in the window converges everywhere
    try:
        return psi_estimate(c, s, K, tail_fraction).value
    except EmptyWindowError:
        return NEG_INF


def phi_estimate(c: CoefficientOracle, z, K: int, tail_fraction: float = 0.5) -> float:
    """exp(psi-hat(lambda(tau(z)))) - 1; negative inside the domain."""
    return math.exp(_psi_value(c, log_image(z), K, tail_fraction)) - 1.0


def support_estimate(
    c: CoefficientOracle,
    alpha,
    K: int,
    eps: float,
    tail_fraction: float = 0.5,
    max_widen: float = 4.0,
) -> LimsupEstimate:
    """h-hat(alpha) = -max log|c_J| / |J| over the direction window around alpha.

    The window radius is doubled (up to ``max_widen * eps``) while it
    contains no non-zero coefficient.
    """
    alpha = np.asarray(alpha, dtype=float)
    lo, hi = _tail_bounds(K, tail_fraction)
    block, dirs, rate = _tail(c, lo, hi)
    radius = float(eps)
    while True:
        win = DirectionWindow(tuple(alpha), radius, lo, hi)
        mask = win.mask(block) if len(block) else np.zeros(0, bool)
        if mask.any():
            sub = np.flatnonzero(mask)
            i = sub[int(np.argmax(rate[sub]))]
            return LimsupEstimate(float(-rate[i]), int(K), radius, MultiIndex(block[i]))
        if radius >= max_widen * eps or radius == 0:
            raise EmptyWindowError(f"no strand near alpha={alpha.tolist()} (radius {radius:g})")
        radius = min(2 * radius, max_widen * eps)


def radial_estimate(c: CoefficientOracle, z, K: int, tail_fraction: float = 0.5) -> float:
    """Radius of convergence along the unit vector z: exp(-psi-hat(lambda(tau(z))))."""
    r = modulus(z)
    if abs(np.linalg.norm(r) - 1.0) > 1e-9:
        raise ValueError("direction must be a unit vector")
    psi = _psi_value(c, log_image(z), K, tail_fraction)
    return math.inf if psi == NEG_INF else math.exp(-psi)


def gauge_estimate(c: CoefficientOracle, z, K: int, tail_fraction: float = 0.5) -> float:
    """Minkowski gauge of the convergence domain at z, exp(psi-hat(lambda(tau(z))))."""
    r = modulus(z)
    if not np.any(r > 0):
        raise ValueError("gauge needs z != 0")
    return math.exp(_psi_value(c, log_image(z), K, tail_fraction))


def classify(psi: float, margin: float) -> Membership:
    if psi < -margin:
        return Membership.INSIDE
    if psi > margin:
        return Membership.OUTSIDE
    return Membership.BOUNDARY_BAND


def membership(c: CoefficientOracle, z, K: int, margin: float = 0.01,
               tail_fraction: float = 0.5) -> Membership:
    return classify(_psi_value(c, log_image(z), K, tail_fraction), margin)


def membership_batch(c: CoefficientOracle, S, K: int, margin: float = 0.01,
                     tail_fraction: float = 0.5) -> list[Membership]:
    """Classify log-space points (rows of ``S``) in one pass."""
    try:
        psi = psi_batch(c, S, K, tail_fraction)
    except EmptyWindowError:
        psi = np.full(len(np.atleast_2d(S)), NEG_INF)
    return [classify(float(p), margin) for p in psi]


def conjugate_radii_residual(c: CoefficientOracle, r, K: int, tail_fraction: float = 0.5) -> float:
    """max over the tail of |c_J r^J|^(1/|J|); equals 1 on conjugate radii."""
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise ValueError("polyradius must be positive")
    return math.exp(_psi_value(c, np.log(r), K, tail_fraction))


def holder_midpoint(p, q, t: float) -> np.ndarray:
    """Componentwise |p|^t |q|^(1-t)."""
    p, q = modulus(p), modulus(q)
    return p**t * q ** (1.0 - t)


def tail_rate_max(c: CoefficientOracle, K: int, tail_fraction: float = 0.5) -> float:
    """max over the tail window of log|c_J| / |J|."""
    return float(np.max(tail_data(c, K, tail_fraction)[2]))


def write_support_csv(path, rows, n: int) -> None:
    """rows: iterables of (alpha, LimsupEstimate)."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([f"alpha_{i + 1}" for i in range(n)] + ["h_hat", "achieving_J", "K", "epsilon"])
        for alpha, est in rows:
            J = " ".join(str(j) for j in est.achieving_index) if est.achieving_index else ""
            w.writerow([repr(float(a)) for a in alpha] + [repr(est.value), J, est.degree_cutoff, repr(est.window)])


def write_psi_csv(path, points, values) -> None:
    points = np.atleast_2d(points)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([f"s_{i + 1}" for i in range(points.shape[1])] + ["psi_hat"])
        for s, v in zip(points, values):
            w.writerow([repr(float(x)) for x in s] + [repr(float(v))])
