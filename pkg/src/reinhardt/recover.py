"""Coefficients of a function holomorphic on a polydisc from its values on the torus.

The integral over the distinguished boundary {|z_j| = r_j} is discretised
with the equispaced product rule, which is exact for trigonometric
polynomials of per-axis degree below the number of nodes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .coeffs import CoefficientOracle
from .lattice import MultiIndex


class AliasingError(ValueError):
    pass


@dataclass
class TorusSampler:
    """Samples ``f`` on z_j = r_j exp(2 pi i m_j / M), m_j = 0..M-1.

    ``f`` takes an ``(m, N)`` complex array and returns ``m`` values.
    Samples are computed once and reused for every coefficient.
    """

    f: Callable[[np.ndarray], np.ndarray]
    radii: tuple
    nodes_per_axis: int
    _samples: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        self.radii = tuple(float(r) for r in self.radii)
        if any(r <= 0 for r in self.radii):
            raise ValueError("polyradius must be positive")
        if self.nodes_per_axis < 1:
            raise ValueError("need at least one node per axis")

    @property
    def dimension(self) -> int:
        return len(self.radii)

    def nodes(self) -> np.ndarray:
        M, n = self.nodes_per_axis, self.dimension
        theta = 2 * np.pi * np.arange(M) / M
        grids = np.meshgrid(*([theta] * n), indexing="ij")
        Z = np.stack([r * np.exp(1j * g) for r, g in zip(self.radii, grids)], axis=-1)
        return Z.reshape(-1, n)

    def samples(self) -> np.ndarray:
        """f on the torus grid, shape (M,)*N."""
        if self._samples is None:
            vals = np.asarray(self.f(self.nodes()), dtype=complex)
            self._samples = vals.reshape((self.nodes_per_axis,) * self.dimension)
        return self._samples


def recover_coefficient(s: TorusSampler, K) -> complex:
    """c_K = r^-K * mean over the torus grid of f * exp(-i <K, theta>)."""
    K = MultiIndex(K)
    if len(K) != s.dimension:
        raise ValueError("index dimension does not match the sampler")
    M = s.nodes_per_axis
    if M <= 2 * max(K):
        raise AliasingError(f"aliasing risk: M={M} must exceed 2*max(K)={2 * max(K)}")
    vals = s.samples()
    m = np.arange(M)
    # separable phase factors, contracted one axis at a time in fixed order
    out = vals
    for k in K:
        out = np.tensordot(out, np.exp(-2j * np.pi * k * m / M), axes=([0], [0]))
    rK = float(np.prod(np.asarray(s.radii) ** np.asarray(K)))
    return complex(out) / M ** s.dimension / rK


def cauchy_estimate_check(s: TorusSampler, K, tol: float = 1e-12):
    """Check |c_K| <= max_T |f| / r^K on the sample grid.

    Returns ``(lhs, rhs, ok)``.
    """
    K = MultiIndex(K)
    lhs = abs(recover_coefficient(s, K))
    rK = float(np.prod(np.asarray(s.radii) ** np.asarray(K)))
    rhs = float(np.max(np.abs(s.samples()))) / rK
    return lhs, rhs, lhs <= rhs * (1 + tol)


# -- evaluators --------------------------------------------------------------


def geometric_product(Z: np.ndarray) -> np.ndarray:
    """prod_i 1 / (1 - z_i)."""
    return np.prod(1.0 / (1.0 - np.asarray(Z, dtype=complex)), axis=1)


def monomial(K) -> Callable[[np.ndarray], np.ndarray]:
    K = np.asarray(MultiIndex(K))
    return lambda Z: np.prod(np.asarray(Z, dtype=complex) ** K[None, :], axis=1)


def constant(value: complex = 1.0) -> Callable[[np.ndarray], np.ndarray]:
    return lambda Z: np.full(len(Z), complex(value))


def truncated_series(oracle: CoefficientOracle, max_degree: int) -> Callable[[np.ndarray], np.ndarray]:
    """Evaluator of the partial sum over |J| <= max_degree."""
    block = oracle.indices(0, max_degree)
    vals = oracle.value_array(block)
    if vals is None:
        vals = np.exp(oracle.log_modulus_array(block))

    def f(Z):
        Z = np.asarray(Z, dtype=complex)
        return (Z[:, None, :] ** block[None, :, :]).prod(axis=2) @ vals

    return f


def evaluator_from_tag(tag: str) -> Callable[[np.ndarray], np.ndarray]:
    """``geometric_product``, ``monomial:k1,k2,...`` or ``constant[:value]``."""
    name, _, rest = tag.partition(":")
    if name == "geometric_product":
        return geometric_product
    if name == "monomial":
        return monomial([int(k) for k in rest.split(",")])
    if name == "constant":
        return constant(complex(rest) if rest else 1.0)
    raise ValueError(f"unknown function tag {tag!r}")
