"""Coefficient oracles for power series sum c_J z^J about the origin.

Oracles report ``log|c_J|`` rather than ``c_J``; a zero coefficient is
``-inf``. Every oracle can be queried one index at a time or on an
``(m, N)`` block of indices at once.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Callable

import numpy as np

from .lattice import MultiIndex, degree_range

NEG_INF = float("-inf")


class CoefficientFileError(ValueError):
    """Raised for malformed or inconsistent JSONL coefficient files."""


class CoefficientOracle:
    """Base class: map multi-indices to log-moduli of coefficients.

    Subclasses implement :meth:`log_modulus_array`. Sparse oracles also
    override :meth:`support_array` so that estimators can skip the zero
    coefficients without enumerating the whole lattice.
    """

    name = "oracle"

    def __init__(self, dimension: int):
        if dimension < 1:
            raise ValueError("dimension must be >= 1")
        self.dimension = int(dimension)

    def log_modulus_array(self, block: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def value_array(self, block: np.ndarray) -> np.ndarray | None:
        """Complex coefficients on ``block``; None when only moduli are known."""
        return None

    def support_array(self, lo: int, hi: int) -> np.ndarray | None:
        """Indices with non-zero coefficient in the degree range, or None if dense."""
        return None

    def _check(self, J) -> MultiIndex:
        J = MultiIndex(J)
        if len(J) != self.dimension:
            raise ValueError(f"expected {self.dimension} entries, got {len(J)}")
        return J

    def log_modulus(self, J) -> float:
        J = self._check(J)
        return float(self.log_modulus_array(np.array([J], dtype=np.int64))[0])

    def value(self, J) -> complex | None:
        J = self._check(J)
        vals = self.value_array(np.array([J], dtype=np.int64))
        return None if vals is None else complex(vals[0])

    def indices(self, lo: int, hi: int) -> np.ndarray:
        """Candidate indices in ``[lo, hi]``: the support if sparse, else all."""
        sup = self.support_array(lo, hi)
        return degree_range(self.dimension, lo, hi) if sup is None else sup

    def __repr__(self):
        return f"{type(self).__name__}(N={self.dimension}, name={self.name!r})"


class RuleOracle(CoefficientOracle):
    """Oracle defined by a vectorised rule ``block -> log|c|``."""

    def __init__(
        self,
        dimension: int,
        log_rule: Callable[[np.ndarray], np.ndarray],
        value_rule: Callable[[np.ndarray], np.ndarray] | None = None,
        name: str = "rule",
    ):
        super().__init__(dimension)
        self._log_rule = log_rule
        self._value_rule = value_rule
        self.name = name

    def log_modulus_array(self, block):
        block = np.asarray(block, dtype=np.int64).reshape(-1, self.dimension)
        return np.asarray(self._log_rule(block), dtype=float)

    def value_array(self, block):
        if self._value_rule is None:
            return None
        block = np.asarray(block, dtype=np.int64).reshape(-1, self.dimension)
        return np.asarray(self._value_rule(block), dtype=complex)


def geometric(n: int) -> RuleOracle:
    """All coefficients equal to one; converges on the unit polydisc."""
    return RuleOracle(
        n,
        lambda b: np.zeros(len(b)),
        lambda b: np.ones(len(b), dtype=complex),
        name="geometric",
    )


def scaled_monomial(n: int, rho: float) -> RuleOracle:
    """c_J = rho^(-|J|); converges on the polydisc of polyradius (rho, ..., rho)."""
    if rho <= 0:
        raise ValueError("rho must be positive")
    log_rho = math.log(rho)
    return RuleOracle(
        n,
        lambda b: -b.sum(axis=1) * log_rho,
        lambda b: np.exp(-b.sum(axis=1) * log_rho).astype(complex),
        name=f"scaled_monomial({rho:g})",
    )


def _xlogx(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = x[pos] * np.log(x[pos])
    return out


def entropy_family(n: int, sign: int = 1, weight: float = 0.5) -> RuleOracle:
    """log|c_J| = sign * weight * (|J| log|J| - sum j_i log j_i).

    ``sign=+1, weight=1/2`` converges on the unit ball; ``sign=+1,
    weight=2`` on {sum sqrt|z_i| < 1}. The bracket is |J| times the Shannon
    entropy of J/|J|, so the log-coefficients are permutation symmetric.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if weight <= 0:
        raise ValueError("weight must be positive")

    def rule(b):
        return sign * weight * (_xlogx(b.sum(axis=1)) - _xlogx(b).sum(axis=1))

    return RuleOracle(
        n,
        rule,
        lambda b: np.exp(rule(b)).astype(complex),
        name=f"entropy({sign:+d},{weight:g})",
    )


def entropy_ball(n: int = 2) -> RuleOracle:
    oracle = entropy_family(n, +1, 0.5)
    oracle.name = "entropy_ball"
    return oracle


def entropy_e_half(n: int = 2) -> RuleOracle:
    oracle = entropy_family(n, +1, 2.0)
    oracle.name = "entropy_E_half"
    return oracle


class StrandOracle(CoefficientOracle):
    """Series sum_k c_k z^(k J0): coefficients vanish off the ray {k J0}."""

    def __init__(self, base, log_c: Callable[[int], float], name: str = "strand"):
        base = MultiIndex(base)
        super().__init__(len(base))
        if base.degree() == 0:
            raise ValueError("strand base must be non-zero")
        self.base = base
        self._log_c = log_c
        self.name = name

    def _multiple(self, block):
        # k such that row == k * base, or -1
        base = np.asarray(self.base, dtype=np.int64)
        lead = int(np.flatnonzero(base)[0])
        k = block[:, lead] // base[lead]
        on = np.all(block == k[:, None] * base[None, :], axis=1)
        return np.where(on, k, -1)

    def log_modulus_array(self, block):
        block = np.asarray(block, dtype=np.int64).reshape(-1, self.dimension)
        ks = self._multiple(block)
        out = np.full(len(block), NEG_INF)
        for i, k in enumerate(ks):
            if k >= 0:
                out[i] = float(self._log_c(int(k)))
        return out

    def value_array(self, block):
        return np.exp(self.log_modulus_array(block)).astype(complex)

    def support_array(self, lo, hi):
        deg = self.base.degree()
        ks = np.arange(max(-(-lo // deg), 0), hi // deg + 1)
        rows = ks[:, None] * np.asarray(self.base, dtype=np.int64)[None, :]
        if not len(rows):
            return rows.reshape(0, self.dimension)
        return rows[np.isfinite(self.log_modulus_array(rows))]


def strand(base, log_c: Callable[[int], float]) -> StrandOracle:
    return StrandOracle(base, log_c)


class TableOracle(CoefficientOracle):
    """Tabulated coefficients; absent indices are zero coefficients."""

    name = "table"

    def __init__(self, dimension: int, entries: dict, values: dict | None = None):
        super().__init__(dimension)
        self._log = {}
        for J, lc in entries.items():
            J = self._check(J)
            self._log[tuple(J)] = float(lc)
        self._values = {tuple(MultiIndex(J)): complex(v) for J, v in (values or {}).items()}
        finite = [J for J, lc in self._log.items() if lc > NEG_INF]
        if finite:
            arr = np.array(sorted(finite, key=lambda J: (sum(J), J)), dtype=np.int64)
        else:
            arr = np.zeros((0, dimension), dtype=np.int64)
        self._support = arr
        self._support_deg = arr.sum(axis=1)

    def __len__(self):
        return len(self._log)

    def items(self):
        return self._log.items()

    def log_modulus_array(self, block):
        block = np.asarray(block, dtype=np.int64).reshape(-1, self.dimension)
        return np.array([self._log.get(tuple(int(j) for j in row), NEG_INF) for row in block])

    def value_array(self, block):
        block = np.asarray(block, dtype=np.int64).reshape(-1, self.dimension)
        out = np.empty(len(block), dtype=complex)
        for i, row in enumerate(block):
            key = tuple(int(j) for j in row)
            if key in self._values:
                out[i] = self._values[key]
            else:
                out[i] = math.exp(self._log.get(key, NEG_INF))
        return out

    def support_array(self, lo, hi):
        keep = (self._support_deg >= lo) & (self._support_deg <= hi)
        return self._support[keep]

    @property
    def max_degree(self) -> int:
        return int(self._support_deg.max()) if len(self._support_deg) else 0


def _parse_log_c(raw, lineno):
    if raw == "-inf":
        return NEG_INF
    if isinstance(raw, bool) or not isinstance(raw, (int, float)):
        raise CoefficientFileError(f"line {lineno}: log_c must be a number or '-inf'")
    return float(raw)


def load_table(path) -> TableOracle:
    """Read a JSONL coefficient file (fields J, log_c, optional re/im)."""
    entries, values = {}, {}
    dimension = None
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
                J = MultiIndex(rec["J"])
                log_c = _parse_log_c(rec["log_c"], lineno)
            except CoefficientFileError:
                raise
            except (ValueError, KeyError, TypeError) as exc:
                raise CoefficientFileError(f"line {lineno}: {exc}") from exc
            if dimension is None:
                dimension = len(J)
            elif len(J) != dimension:
                raise CoefficientFileError(f"line {lineno}: dimension mismatch")
            key = tuple(J)
            if key in entries:
                raise CoefficientFileError(f"line {lineno}: duplicate index {key}")
            entries[key] = log_c
            if "re" in rec or "im" in rec:
                values[key] = complex(rec.get("re", 0.0), rec.get("im", 0.0))
    if dimension is None:
        raise CoefficientFileError(f"{path}: no coefficients")
    return TableOracle(dimension, entries, values)


def _record(J, log_c, value=None) -> str:
    rec = {"J": [int(j) for j in J], "log_c": log_c if math.isfinite(log_c) else "-inf"}
    if value is not None:
        rec["re"], rec["im"] = value.real, value.imag
    return json.dumps(rec)


def write_terms(terms, path) -> int:
    """Write ``(J, log_c)`` pairs as JSONL; returns the number of lines."""
    n = 0
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for J, log_c in terms:
            fh.write(_record(J, float(log_c)) + "\n")
            n += 1
    return n


def save_table(oracle: CoefficientOracle, max_degree: int, path) -> int:
    """Write every non-zero coefficient of degree <= ``max_degree``."""
    block = oracle.indices(0, max_degree)
    logs = oracle.log_modulus_array(block)
    vals = oracle.value_array(block)
    n = 0
    with open(Path(path), "w", encoding="utf-8", newline="\n") as fh:
        for i, row in enumerate(block):
            if logs[i] == NEG_INF:
                continue
            value = None if vals is None else complex(vals[i])
            fh.write(_record(row, float(logs[i]), value) + "\n")
            n += 1
    return n


def evaluate_truncated(oracle: CoefficientOracle, z, max_degree: int) -> complex:
    """Partial sum of sum c_J z^J over |J| <= max_degree."""
    z = np.asarray(z, dtype=complex)
    block = oracle.indices(0, max_degree)
    vals = oracle.value_array(block)
    if vals is None:
        vals = np.exp(oracle.log_modulus_array(block))
    mono = np.prod(z[None, :] ** block, axis=1)
    return complex(np.sum(vals * mono))


def from_tag(tag: str, n: int = 2) -> CoefficientOracle:
    """Build a builtin family from a short tag.

    Recognised: ``geometric``, ``scaled_monomial:RHO``, ``entropy_ball``,
    ``entropy_e_half``, ``entropy:SIGN:WEIGHT`` and ``strand:J0:SLOPE``
    (``J0`` comma separated, log c_k = SLOPE * k).
    """
    name, _, rest = tag.partition(":")
    name = name.lower()
    if name == "geometric":
        return geometric(n)
    if name == "scaled_monomial":
        return scaled_monomial(n, float(rest or 2.0))
    if name == "entropy_ball":
        return entropy_ball(n)
    if name in ("entropy_e_half", "e_half"):
        return entropy_e_half(n)
    if name == "entropy":
        sign, _, weight = rest.partition(":")
        return entropy_family(n, int(sign), float(weight))
    if name == "strand":
        base, _, slope = rest.partition(":")
        slope_v = float(slope or 0.0)
        return strand(tuple(int(j) for j in base.split(",")), lambda k: slope_v * k)
    raise ValueError(f"unknown coefficient family {tag!r}")
