"""Sparse multivariate polynomials with real coefficients.

A :class:`SparsePoly` maps exponent tuples to coefficients.  Coefficients
with magnitude below :data:`PRUNE_TOL` are dropped on construction, so the
zero polynomial has no terms.
"""

from __future__ import annotations

from collections import defaultdict
from typing import Callable, Iterable, Mapping

import numpy as np

from .matrix_core import DimensionError

PRUNE_TOL = 1e-13


def _grlex_key(alpha: tuple[int, ...]):
    # higher total degree first, then lexicographically larger first
    return (-sum(alpha), tuple(-a for a in alpha))


class SparsePoly:
    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[tuple[int, ...], float] | None = None):
        if nvars < 0:
            raise ValueError("nvars must be nonnegative")
        self.nvars = int(nvars)
        clean: dict[tuple[int, ...], float] = {}
        for alpha, c in (terms or {}).items():
            alpha = tuple(int(a) for a in alpha)
            if len(alpha) != self.nvars or any(a < 0 for a in alpha):
                raise DimensionError(f"bad exponent {alpha} for {self.nvars} variables")
            c = float(c)
            if abs(c) >= PRUNE_TOL:
                clean[alpha] = clean.get(alpha, 0.0) + c
        self.terms = {a: c for a, c in clean.items() if abs(c) >= PRUNE_TOL}

    # construction helpers

    @classmethod
    def zero(cls, nvars: int) -> "SparsePoly":
        return cls(nvars)

    @classmethod
    def constant(cls, nvars: int, c: float) -> "SparsePoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars: int, i: int, coeff: float = 1.0) -> "SparsePoly":
        alpha = [0] * nvars
        alpha[i] = 1
        return cls(nvars, {tuple(alpha): coeff})

    @classmethod
    def linear(cls, coeffs: Iterable[float]) -> "SparsePoly":
        coeffs = list(coeffs)
        n = len(coeffs)
        return cls(n, {tuple(int(j == i) for j in range(n)): c for i, c in enumerate(coeffs)})

    @classmethod
    def from_json(cls, nvars: int, items: list[dict]) -> "SparsePoly":
        terms: dict[tuple[int, ...], float] = defaultdict(float)
        for item in items:
            terms[tuple(item["alpha"])] += float(item["coeff"])
        return cls(nvars, terms)

    def to_json(self) -> list[dict]:
        return [{"alpha": list(a), "coeff": c} for a, c in self.sorted_terms()]

    # properties

    @property
    def degree(self) -> int:
        return max((sum(a) for a in self.terms), default=0)

    def is_zero(self) -> bool:
        return not self.terms

    def is_homogeneous(self) -> bool:
        return len({sum(a) for a in self.terms}) <= 1

    def sorted_terms(self) -> list[tuple[tuple[int, ...], float]]:
        return sorted(self.terms.items(), key=lambda kv: _grlex_key(kv[0]))

    def coeff(self, alpha) -> float:
        return self.terms.get(tuple(alpha), 0.0)

    def max_abs_coeff(self) -> float:
        return max((abs(c) for c in self.terms.values()), default=0.0)

    # arithmetic

    def _check(self, other: "SparsePoly"):
        if self.nvars != other.nvars:
            raise DimensionError(f"nvars mismatch: {self.nvars} vs {other.nvars}")

    def __add__(self, other: "SparsePoly") -> "SparsePoly":
        self._check(other)
        out = dict(self.terms)
        for a, c in other.terms.items():
            out[a] = out.get(a, 0.0) + c
        return SparsePoly(self.nvars, out)

    def __neg__(self) -> "SparsePoly":
        return SparsePoly(self.nvars, {a: -c for a, c in self.terms.items()})

    def __sub__(self, other: "SparsePoly") -> "SparsePoly":
        return self + (-other)

    def scale(self, s: float) -> "SparsePoly":
        return SparsePoly(self.nvars, {a: s * c for a, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return self.scale(float(other))
        return poly_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "SparsePoly":
        out = SparsePoly.constant(self.nvars, 1.0)
        for _ in range(k):
            out = poly_mul(out, self)
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, SparsePoly) and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, tuple(self.sorted_terms())))

    def allclose(self, other: "SparsePoly", atol: float = 1e-12) -> bool:
        self._check(other)
        keys = set(self.terms) | set(other.terms)
        return all(abs(self.coeff(k) - other.coeff(k)) <= atol for k in keys)

    def __call__(self, x):
        return poly_eval(self, x)

    def partial(self, i: int) -> "SparsePoly":
        out: dict[tuple[int, ...], float] = {}
        for a, c in self.terms.items():
            if a[i] == 0:
                continue
            b = list(a)
            b[i] -= 1
            out[tuple(b)] = out.get(tuple(b), 0.0) + c * a[i]
        return SparsePoly(self.nvars, out)

    def __repr__(self) -> str:
        if not self.terms:
            return "SparsePoly(0)"
        parts = []
        for a, c in self.sorted_terms():
            mono = "*".join(f"x{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(a) if e)
            parts.append(f"{c:g}" + (f"*{mono}" if mono else ""))
        return "SparsePoly(" + " + ".join(parts) + ")"


def poly_eval(p: SparsePoly, x) -> float | np.ndarray:
    """Evaluate ``p`` at a point, or row-wise at an array of shape ``(m, nvars)``."""
    x = np.asarray(x, dtype=float)
    if x.shape[-1:] != (p.nvars,) and not (p.nvars == 0 and x.size == 0):
        raise DimensionError(f"expected {p.nvars} coordinates, got shape {x.shape}")
    batch = x.shape[:-1]
    total = np.zeros(batch)
    for alpha, c in p.terms.items():
        term = np.full(batch, c)
        for i, e in enumerate(alpha):
            if e:
                term = term * x[..., i] ** e
        total = total + term
    return float(total) if not batch else total


def poly_mul(p: SparsePoly, q: SparsePoly) -> SparsePoly:
    p._check(q)
    out: dict[tuple[int, ...], float] = defaultdict(float)
    for a, c in p.terms.items():
        for b, d in q.terms.items():
            out[tuple(i + j for i, j in zip(a, b))] += c * d
    return SparsePoly(p.nvars, out)


def poly_directional_derivative(p: SparsePoly, a) -> SparsePoly:
    """``sum_j a_j dp/dx_j``."""
    a = np.asarray(a, dtype=float)
    if a.shape != (p.nvars,):
        raise DimensionError(f"direction has shape {a.shape}, expected ({p.nvars},)")
    out = SparsePoly.zero(p.nvars)
    for j, aj in enumerate(a):
        if aj != 0.0:
            out = out + p.partial(j).scale(float(aj))
    return out


def _divided_differences(values: np.ndarray, nodes: np.ndarray) -> np.ndarray:
    """Newton divided differences along axis 0."""
    c = np.array(values, dtype=float)
    m = len(nodes)
    for j in range(1, m):
        denom = (nodes[j:] - nodes[:-j]).reshape((-1,) + (1,) * (c.ndim - 1))
        c[j:] = (c[j:] - c[j - 1 : -1]) / denom
    return c


def _newton_to_monomial(c: np.ndarray, nodes: np.ndarray) -> np.ndarray:
    """Convert Newton-form coefficients (axis 0) to monomial coefficients, low degree first."""
    m = c.shape[0]
    out = np.zeros_like(c)
    out[0] = c[m - 1]
    # Horner: poly <- poly * (x - nodes[k]) + c[k]
    for k in range(m - 2, -1, -1):
        shifted = np.zeros_like(out)
        shifted[1:] = out[:-1]
        out = shifted - nodes[k] * out
        out[0] += c[k]
    return out


def coefficients_from_evaluator(
    f: Callable, N: int, n: int, vectorized: bool = False
) -> SparsePoly:
    """Recover a polynomial of degree <= N in n variables from evaluations.

    ``f`` is sampled on the centered integer grid
    ``{-floor(N/2), ..., ceil(N/2)}^n``; along each axis the samples are
    turned into monomial coefficients through Newton divided differences.
    Centering keeps the monomial conversion well conditioned; on ``{0..N}``
    the degree-8 case already loses every digit.  With ``vectorized=True`` ``f`` receives an array of shape
    ``(m, n)`` and must return ``m`` values.  Terms of total degree above
    ``N`` are interpolation noise for a true degree-``N`` input and are
    discarded.
    """
    if N < 0 or n < 0:
        raise ValueError("degree and nvars must be nonnegative")
    if n == 0:
        return SparsePoly.constant(0, float(f(np.zeros((1, 0)))[0] if vectorized else f(np.zeros(0))))
    nodes = np.arange(N + 1, dtype=float) - N // 2
    grid = np.stack(np.meshgrid(*([nodes] * n), indexing="ij"), axis=-1).reshape(-1, n)
    if vectorized:
        vals = np.asarray(f(grid), dtype=float)
    else:
        vals = np.array([f(x) for x in grid], dtype=float)
    vals = vals.reshape((N + 1,) * n)
    for axis in range(n):
        moved = np.moveaxis(vals, axis, 0)
        moved = _newton_to_monomial(_divided_differences(moved, nodes), nodes)
        vals = np.moveaxis(moved, 0, axis)
    terms = {}
    for alpha in np.ndindex(*vals.shape):
        if sum(alpha) <= N:
            terms[alpha] = vals[alpha]
    return SparsePoly(n, terms)


def is_homogeneous_of_degree(p: SparsePoly, N: int) -> bool:
    return all(sum(a) == N for a in p.terms)
