"""Homogeneous polynomial operators on symmetric matrices.

Every operator evaluates on a single ``(n, n)`` matrix or on a stack of
shape ``(..., n, n)``; :meth:`GardingOperator.values` is the vectorized
entry point and ``op(A)`` returns a float for one matrix.

Certification flags (``garding_dirichlet``, ``i_central``) follow the
closure results for products, radial derivatives, conjugations and linear
transforms.  They are bookkeeping only and are never used in place of the
numerical checks in :mod:`garding_lab.garding_analysis`.
"""

from __future__ import annotations

import itertools
import math
from functools import cached_property

import numpy as np

from .matrix_core import (
    DimensionError,
    entry_weights,
    from_entries,
    random_spd,
    random_symmetric,
    skew_hermitian_part,
    sym_eigen,
    sym_eigvals,
    sym_matrix,
    to_entries,
    trace_free_basis,
    upper_indices,
)
from .poly_core import SparsePoly, coefficients_from_evaluator, poly_eval

HOMOGENEITY_TRIALS = 50
HOMOGENEITY_TOL = 1e-9
ORTHOGONALITY_TOL = 1e-10


class HomogeneityError(ValueError):
    pass


class OrthogonalityError(ValueError):
    pass


def chebyshev_nodes(count: int) -> np.ndarray:
    k = np.arange(count)
    return np.cos((2 * k + 1) * np.pi / (2 * count))


def _vandermonde_inverse(nodes: np.ndarray) -> np.ndarray:
    V = np.vander(nodes, increasing=True)
    return np.linalg.inv(V)


class GardingOperator:
    """Base class: a real homogeneous polynomial ``g`` of degree ``N`` on S(n)."""

    kind = "abstract"

    def __init__(self, n: int, N: int, name: str, flags: dict | None = None):
        if n < 1 or N < 0:
            raise ValueError(f"invalid dimensions n={n}, N={N}")
        self.n = int(n)
        self.N = int(N)
        self.name = name
        self.flags = {"garding_dirichlet": False, "i_central": False}
        self.flags.update(flags or {})
        self.checks: dict = {}

    # evaluation

    def _values(self, A: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def values(self, A) -> np.ndarray:
        A = np.asarray(A, dtype=float)
        if A.shape[-2:] != (self.n, self.n):
            raise DimensionError(f"{self.name} acts on {self.n}x{self.n} matrices, got {A.shape}")
        return self._values(A)

    def signed_log(self, A) -> tuple[np.ndarray, np.ndarray]:
        """``(sign g(A), log|g(A)|)``; overridden where overflow is possible."""
        v = self.values(A)
        with np.errstate(divide="ignore"):
            return np.sign(v), np.log(np.abs(v))

    def __call__(self, A) -> float:
        A = np.asarray(A, dtype=float)
        if A.ndim != 2:
            raise DimensionError("call with a single matrix; use values() for stacks")
        return float(self.values(A))

    def at_identity(self) -> float:
        return self(np.eye(self.n))

    # metadata

    def spec(self) -> dict:
        raise NotImplementedError

    def summary(self) -> dict:
        out = {"name": self.name, "n": self.n, "N": self.N, "flags": dict(self.flags)}
        if self.checks:
            out["construction_checks"] = self.checks
        return out

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name} n={self.n} N={self.N}>"

    def certified(self) -> bool:
        return bool(self.flags.get("garding_dirichlet") and self.flags.get("i_central"))

    def check_homogeneity(self, trials: int = HOMOGENEITY_TRIALS, seed: int = 0) -> float:
        """Worst ``|g(cA) - c^N g(A)| / ((1 + |g(A)|) c^N)`` over random samples.

        Raises :class:`HomogeneityError` above the tolerance.
        """
        rng = np.random.default_rng([seed, self.n, self.N])
        As = np.stack([random_symmetric(self.n, rng) for _ in range(trials)])
        cs = rng.uniform(0.5, 2.0, size=trials)
        base = self.values(As)
        scaled = self.values(cs[:, None, None] * As)
        cN = cs**self.N
        err = np.abs(scaled - cN * base) / ((1.0 + np.abs(base)) * cN)
        worst = float(np.max(err))
        if not worst <= HOMOGENEITY_TOL:
            raise HomogeneityError(f"{self.name} is not homogeneous of degree {self.N} (error {worst:.3g})")
        return worst


class SymbolicOperator(GardingOperator):
    """Polynomial in the upper-triangle entries ``a_ij`` (``i <= j``).

    Off-diagonal variables stand for ``a_ij`` itself, so ``a11*a22 - c*a12^2``
    is written with exponent vectors over ``(a11, a12, a22)``.
    """

    kind = "symbolic"

    def __init__(self, n: int, poly: SparsePoly, name: str | None = None, flags: dict | None = None,
                 check: bool = True):
        d = n * (n + 1) // 2
        if poly.nvars != d:
            raise DimensionError(f"symbolic operator on S({n}) needs {d} variables, got {poly.nvars}")
        if not poly.is_homogeneous():
            raise HomogeneityError("symbolic operator must be homogeneous")
        super().__init__(n, poly.degree, name or "symbolic", flags)
        if self.N < 1:
            raise ValueError("operator degree must be at least 1")
        self.poly = poly
        if check:
            self.checks["homogeneity_error"] = self.check_homogeneity()

    def _values(self, A):
        return np.asarray(poly_eval(self.poly, to_entries(A)), dtype=float)

    @cached_property
    def entry_gradient(self) -> list[SparsePoly]:
        return [self.poly.partial(i) for i in range(self.poly.nvars)]

    def exact_gradient(self, A: np.ndarray) -> np.ndarray:
        v = to_entries(A)
        d = np.array([float(poly_eval(q, v)) for q in self.entry_gradient])
        # off-diagonal partials are split between (i, j) and (j, i)
        return from_entries(d / entry_weights(self.n), self.n)

    def spec(self):
        return {"op": "symbolic", "nvars_n": self.n, "terms": self.poly.to_json()}


def entry_variable(n: int, i: int, j: int) -> SparsePoly:
    """The entry ``a_ij`` as a polynomial in the upper-triangle variables."""
    i, j = min(i, j), max(i, j)
    iu = upper_indices(n)
    idx = int(np.flatnonzero((iu[0] == i) & (iu[1] == j))[0])
    return SparsePoly.variable(len(iu[0]), idx)


def symbolic_det(n: int) -> SymbolicOperator:
    """Leibniz expansion of det on S(n) in entry variables (small n only)."""
    if n > 4:
        raise ValueError("symbolic determinant only for n <= 4")
    d = n * (n + 1) // 2
    total = SparsePoly.zero(d)
    for perm in itertools.permutations(range(n)):
        sign = _perm_sign(perm)
        term = SparsePoly.constant(d, float(sign))
        for i, j in enumerate(perm):
            term = term * entry_variable(n, i, j)
        total = total + term
    return SymbolicOperator(n, total, name=f"det{n}[symbolic]")


def symbolic_norm2(n: int) -> SymbolicOperator:
    d = n * (n + 1) // 2
    w = entry_weights(n)
    terms = {}
    for k in range(d):
        alpha = [0] * d
        alpha[k] = 2
        terms[tuple(alpha)] = w[k]
    return SymbolicOperator(n, SparsePoly(d, terms), name=f"norm2[{n}]")


def _perm_sign(perm) -> int:
    sign, seen = 1, [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


# built-in spectral operators


class Det(GardingOperator):
    kind = "det"

    def __init__(self, n: int):
        super().__init__(n, n, f"det{n}", {"garding_dirichlet": True, "i_central": True})

    def _values(self, A):
        return np.prod(sym_eigvals(A), axis=-1)

    def signed_log(self, A):
        w = sym_eigvals(np.asarray(A, dtype=float))
        with np.errstate(divide="ignore"):
            return np.prod(np.sign(w), axis=-1), np.sum(np.log(np.abs(w)), axis=-1)

    def exact_gradient(self, A: np.ndarray) -> np.ndarray:
        # adjugate, computed spectrally so singular A is fine
        dec = sym_eigen(A)
        w = dec.eigenvalues
        cof = np.array([np.prod(np.delete(w, i)) for i in range(self.n)])
        return (dec.basis * cof) @ dec.basis.T

    def spec(self):
        return {"op": "det", "n": self.n}


def elementary_symmetric(lam: np.ndarray, k: int) -> np.ndarray:
    """``e_k`` of the last axis of ``lam``."""
    e = np.zeros(lam.shape[:-1] + (k + 1,))
    e[..., 0] = 1.0
    for i in range(lam.shape[-1]):
        e[..., 1:] = e[..., 1:] + lam[..., i, None] * e[..., :-1]
    return e[..., k]


class SigmaK(GardingOperator):
    kind = "sigma_k"

    def __init__(self, n: int, k: int):
        if not 1 <= k <= n:
            raise ValueError(f"sigma_k needs 1 <= k <= n, got k={k}, n={n}")
        super().__init__(n, k, f"sigma{k}[{n}]", {"garding_dirichlet": True, "i_central": True})
        self.k = k

    def _values(self, A):
        return elementary_symmetric(sym_eigvals(A), self.k)

    def exact_gradient(self, A: np.ndarray) -> np.ndarray:
        # d sigma_k / d lambda_i = sigma_{k-1} of the other eigenvalues
        dec = sym_eigen(A)
        w = dec.eigenvalues
        d = np.array([elementary_symmetric(np.delete(w, i), self.k - 1) for i in range(self.n)])
        return (dec.basis * d) @ dec.basis.T

    def spec(self):
        return {"op": "sigma_k", "n": self.n, "k": self.k}


def sign_patterns(m: int) -> np.ndarray:
    """All ``2^m`` vectors in ``{+1, -1}^m`` (row order fixed)."""
    if m == 0:
        return np.zeros((1, 0))
    return np.array(list(itertools.product((1.0, -1.0), repeat=m)))


class MaLag(GardingOperator):
    """Lagrangian Monge-Ampere operator on S(2m), degree ``2^m``.

    ``g(A) = prod over signs of (tr A / 2 + sum_j +-lambda_j)`` where the
    ``lambda_j`` are the nonnegative eigenvalues of the part of ``A``
    anticommuting with the complex structure.
    """

    kind = "ma_lag"

    def __init__(self, n: int):
        if n < 2 or n % 2:
            raise DimensionError(f"ma_lag needs even n >= 2, got {n}")
        self.m = n // 2
        super().__init__(n, 2**self.m, f"ma_lag[{n}]", {"garding_dirichlet": True, "i_central": True})
        self._signs = sign_patterns(self.m)

    def factors(self, A) -> np.ndarray:
        A = np.asarray(A, dtype=float)
        _, lam = skew_hermitian_part(A)
        half_tr = 0.5 * np.trace(A, axis1=-2, axis2=-1)
        return half_tr[..., None] + lam @ self._signs.T

    def _values(self, A):
        return np.prod(self.factors(A), axis=-1)

    def signed_log(self, A):
        f = self.factors(A)
        with np.errstate(divide="ignore"):
            return np.prod(np.sign(f), axis=-1), np.sum(np.log(np.abs(f)), axis=-1)

    def spec(self):
        return {"op": "ma_lag", "n": self.n}


class QuadC(GardingOperator):
    """``a11*a22 - c*a12^2`` on S(2)."""

    kind = "quad_c"

    def __init__(self, c: float):
        self.c = float(c)
        gd = 0.0 <= self.c <= 1.0
        super().__init__(2, 2, f"quad_c[{self.c:g}]", {"garding_dirichlet": gd, "i_central": True})

    def _values(self, A):
        return A[..., 0, 0] * A[..., 1, 1] - self.c * A[..., 0, 1] ** 2

    def spec(self):
        return {"op": "quad_c", "c": self.c}


class Norm2Det(GardingOperator):
    """``||A||_F^2 * det A``: I-central with nonnegative diagonal coefficients, not hyperbolic."""

    kind = "norm2_det"

    def __init__(self, n: int):
        super().__init__(n, n + 2, f"norm2_det[{n}]", {"garding_dirichlet": False, "i_central": True})

    def _values(self, A):
        return np.sum(A * A, axis=(-2, -1)) * np.prod(sym_eigvals(A), axis=-1)

    def signed_log(self, A):
        A = np.asarray(A, dtype=float)
        w = sym_eigvals(A)
        nrm = np.sum(A * A, axis=(-2, -1))
        with np.errstate(divide="ignore"):
            return (np.prod(np.sign(w), axis=-1) * np.sign(nrm),
                    np.log(nrm) + np.sum(np.log(np.abs(w)), axis=-1))

    def spec(self):
        return {"op": "norm2_det", "n": self.n}


# composites


class Product(GardingOperator):
    kind = "product"

    def __init__(self, g1: GardingOperator, g2: GardingOperator, check: bool = True):
        if g1.n != g2.n:
            raise DimensionError(f"cannot multiply operators on S({g1.n}) and S({g2.n})")
        flags = {
            "garding_dirichlet": bool(g1.flags["garding_dirichlet"] and g2.flags["garding_dirichlet"]),
            "i_central": bool(g1.flags["i_central"] and g2.flags["i_central"]),
        }
        super().__init__(g1.n, g1.N + g2.N, f"({g1.name})*({g2.name})", flags)
        self.factors = (g1, g2)
        if check:
            self.checks["homogeneity_error"] = self.check_homogeneity()

    def _values(self, A):
        return self.factors[0].values(A) * self.factors[1].values(A)

    def signed_log(self, A):
        s1, l1 = self.factors[0].signed_log(A)
        s2, l2 = self.factors[1].signed_log(A)
        return s1 * s2, l1 + l2

    def spec(self):
        return {"op": "product", "args": [f.spec() for f in self.factors]}


def product(g1: GardingOperator, g2: GardingOperator) -> Product:
    return Product(g1, g2)


class RadialDerivative(GardingOperator):
    """``g'(A) = d/dt g(tI + A)`` at ``t = 0``.

    The derivative is the linear coefficient of the degree-``N`` profile
    ``t -> g(tI + A)``, read off from Chebyshev-node interpolation on
    ``[-R, R]`` with ``R = 1 + ||A||``.  This is exact for polynomials, so
    repeated relaxation does not compound finite-difference error.
    """

    kind = "radial_derivative"

    def __init__(self, g: GardingOperator, check: bool = True):
        if g.N < 2:
            raise ValueError("radial derivative needs degree >= 2")
        gd = bool(g.flags["garding_dirichlet"])
        flags = {"garding_dirichlet": gd, "i_central": bool(gd and g.flags["i_central"])}
        super().__init__(g.n, g.N - 1, f"d/dt {g.name}", flags)
        self.inner = g
        self._nodes = chebyshev_nodes(g.N + 1)
        self._weights = _vandermonde_inverse(self._nodes)[1]
        if check:
            self.checks["homogeneity_error"] = self.check_homogeneity()

    def _values(self, A):
        R = 1.0 + np.sqrt(np.sum(A * A, axis=(-2, -1)))
        t = self._nodes.reshape((-1,) + (1,) * (A.ndim - 2)) * R[None]
        shifted = A[None] + t[..., None, None] * np.eye(self.n)
        vals = self.inner.values(shifted)
        return np.tensordot(self._weights, vals, axes=(0, 0)) / R

    def spec(self):
        return {"op": "radial_derivative", "args": [self.inner.spec()]}


def radial_derivative(g: GardingOperator) -> RadialDerivative:
    return RadialDerivative(g)


class Conjugate(GardingOperator):
    """``g_h(A) = g(h A h^T)`` for orthogonal ``h``."""

    kind = "conjugate"

    def __init__(self, g: GardingOperator, h, check: bool = True):
        h = np.array(h, dtype=float)
        if h.shape != (g.n, g.n):
            raise DimensionError(f"h must be {g.n}x{g.n}, got {h.shape}")
        err = float(np.max(np.abs(h.T @ h - np.eye(g.n))))
        if err > ORTHOGONALITY_TOL:
            raise OrthogonalityError(f"h is not orthogonal (|h^T h - I| = {err:.3g})")
        super().__init__(g.n, g.N, f"conj({g.name})", dict(g.flags))
        self.inner = g
        self.h = h
        self.checks["orthogonality_error"] = err
        if check:
            self.checks["homogeneity_error"] = self.check_homogeneity()

    def transform(self, A):
        return self.h @ A @ self.h.T

    def _values(self, A):
        return self.inner.values(self.transform(A))

    def signed_log(self, A):
        return self.inner.signed_log(self.transform(np.asarray(A, dtype=float)))

    def spec(self):
        return {"op": "conjugate", "h": self.h.tolist(), "args": [self.inner.spec()]}


def conjugate(g: GardingOperator, h) -> Conjugate:
    return Conjugate(g, h)


class LinearMap:
    """Linear endomorphism of S(n) acting on upper-triangle entry coordinates.

    ``action`` is a ``d x d`` matrix (``d = n(n+1)/2``) with
    ``to_entries(L(A)) = action @ to_entries(A)``.
    """

    def __init__(self, n: int, action):
        action = np.array(action, dtype=float)
        d = n * (n + 1) // 2
        if action.shape != (d, d):
            raise DimensionError(f"action on S({n}) must be {d}x{d}, got {action.shape}")
        self.n = n
        self.action = action

    @classmethod
    def identity(cls, n: int) -> "LinearMap":
        d = n * (n + 1) // 2
        return cls(n, np.eye(d))

    @classmethod
    def from_function(cls, n: int, fn) -> "LinearMap":
        """Tabulate a linear matrix function on the entry basis."""
        d = n * (n + 1) // 2
        cols = [to_entries(fn(from_entries(np.eye(d)[k], n))) for k in range(d)]
        return cls(n, np.column_stack(cols))

    def __call__(self, A):
        A = np.asarray(A, dtype=float)
        return from_entries(to_entries(A) @ self.action.T, self.n)

    def adjoint(self) -> "LinearMap":
        """Adjoint for the trace inner product ``<A, B> = tr(AB)``."""
        w = entry_weights(self.n)
        return LinearMap(self.n, (self.action.T * w) / w[:, None])

    def norm(self) -> float:
        return float(np.linalg.norm(self.action, 2))

    def to_dict(self) -> dict:
        return {"action": self.action.tolist()}


def trace_shift_map(n: int, s: float = 1.0) -> LinearMap:
    """``A -> A + s * tr(A) * I``."""
    return LinearMap.from_function(n, lambda A: A + s * np.trace(A) * np.eye(n))


class LinearTransform(GardingOperator):
    """``g_L(A) = g(L(A))`` with advisory checks recorded at construction."""

    kind = "linear_transform"

    def __init__(self, g: GardingOperator, L: LinearMap, check: bool = True, seed: int = 0):
        if L.n != g.n:
            raise DimensionError(f"linear map on S({L.n}) cannot feed operator on S({g.n})")
        super().__init__(g.n, g.N, f"{g.name}oL")
        self.inner = g
        self.L = L
        if check:
            self.checks["homogeneity_error"] = self.check_homogeneity()
            self._advisory_checks(seed)
        gd = bool(g.flags["garding_dirichlet"] and self.checks.get("positive_image", {}).get("pass", False))
        central = bool(
            g.flags["i_central"]
            and self.checks.get("identity_ray", {}).get("pass", False)
            and self.checks.get("trace_free", {}).get("pass", False)
        )
        self.flags = {"garding_dirichlet": gd, "i_central": central}

    def _advisory_checks(self, seed: int, samples: int = 200):
        from .garding_analysis import SpectrumError, in_garding_cone

        n = self.n
        rng = np.random.default_rng([seed, 31])
        positive = {"pass": True, "samples": samples, "note": "sampled, not proven"}
        worst = math.inf
        for i in range(samples):
            P = random_spd(n, rng=rng, spread=1.0 + i % 3)
            try:
                cert = in_garding_cone(self.inner, self.L(P))
                worst = min(worst, cert.margin)
                ok = cert.margin > -1e-9 and cert.g_value >= -1e-12
            except (SpectrumError, ValueError):
                ok = False
            if not ok:
                positive.update({"pass": False, "witness": P.tolist()})
                break
        positive["min_margin"] = worst
        self.checks["positive_image"] = positive

        LI = self.L(np.eye(n))
        k = float(np.trace(LI) / n)
        dev = float(np.max(np.abs(LI - k * np.eye(n))))
        self.checks["identity_ray"] = {"pass": bool(k > 0 and dev <= 1e-10 * max(1.0, abs(k))), "k": k,
                                       "deviation": dev}

        Lnorm = self.L.norm()
        worst_tr = 0.0
        for E in trace_free_basis(n):
            worst_tr = max(worst_tr, abs(float(np.trace(self.L(E)))) / (np.linalg.norm(E) * max(Lnorm, 1e-300)))
        self.checks["trace_free"] = {"pass": bool(worst_tr <= 1e-10), "max_relative_trace": worst_tr}

    def _values(self, A):
        return self.inner.values(self.L(A))

    def signed_log(self, A):
        return self.inner.signed_log(self.L(A))

    def spec(self):
        return {"op": "linear_transform", "L": self.L.to_dict(), "args": [self.inner.spec()]}


def linear_transform(g: GardingOperator, L: LinearMap) -> LinearTransform:
    return LinearTransform(g, L)


def evaluate(g: GardingOperator, A) -> float:
    A = sym_matrix(A)
    if A.shape[0] != g.n:
        raise DimensionError(f"{g.name} acts on S({g.n}), got {A.shape[0]}x{A.shape[0]}")
    return g(A)


def diagonal_restriction(g: GardingOperator, h=None) -> SparsePoly:
    """Coefficients of ``p_h(x) = g(h diag(x) h^T)`` (``h = I`` when omitted).

    ``p_h`` is homogeneous of degree ``N``, so it is recovered from its
    dehomogenization ``x_n = 1`` on ``n - 1`` variables and then lifted back.
    """
    n, N = g.n, g.N
    h = None if h is None else np.asarray(h, dtype=float)
    eye = np.eye(n)

    def f(Y: np.ndarray) -> np.ndarray:
        X = np.concatenate([Y, np.ones((len(Y), 1))], axis=1)
        out = np.empty(len(X))
        step = 20000
        for s in range(0, len(X), step):
            D = X[s : s + step, :, None] * eye
            out[s : s + step] = g.values(D if h is None else h @ D @ h.T)
        return out

    q = coefficients_from_evaluator(f, N, n - 1, vectorized=True)
    return SparsePoly(n, {a + (N - sum(a),): c for a, c in q.terms.items()})


# spec trees


class SpecError(ValueError):
    def __init__(self, message: str, path: str = "$"):
        super().__init__(f"{path}: {message}")
        self.path = path


def _args(node: dict, path: str, count: int) -> list[dict]:
    args = node.get("args")
    if not isinstance(args, list) or len(args) != count:
        raise SpecError(f"'{node.get('op')}' needs exactly {count} argument(s) in 'args'", path)
    return args


def _need(node: dict, key: str, path: str):
    if key not in node:
        raise SpecError(f"missing field '{key}'", path)
    return node[key]


def from_spec(node, path: str = "$") -> GardingOperator:
    """Build an operator from a JSON construction tree (already decoded)."""
    if not isinstance(node, dict):
        raise SpecError("operator node must be an object", path)
    op = node.get("op")
    try:
        if op == "det":
            return Det(int(_need(node, "n", path)))
        if op == "sigma_k":
            return SigmaK(int(_need(node, "n", path)), int(_need(node, "k", path)))
        if op == "ma_lag":
            return MaLag(int(_need(node, "n", path)))
        if op == "quad_c":
            return QuadC(float(_need(node, "c", path)))
        if op == "norm2_det":
            return Norm2Det(int(_need(node, "n", path)))
        if op == "symbolic":
            n = int(_need(node, "nvars_n", path))
            poly = SparsePoly.from_json(n * (n + 1) // 2, _need(node, "terms", path))
            return SymbolicOperator(n, poly, name=node.get("name"))
        if op == "product":
            a, b = _args(node, path, 2)
            return Product(from_spec(a, f"{path}.args[0]"), from_spec(b, f"{path}.args[1]"))
        if op == "radial_derivative":
            (a,) = _args(node, path, 1)
            return RadialDerivative(from_spec(a, f"{path}.args[0]"))
        if op == "conjugate":
            (a,) = _args(node, path, 1)
            return Conjugate(from_spec(a, f"{path}.args[0]"), _need(node, "h", path))
        if op == "linear_transform":
            (a,) = _args(node, path, 1)
            inner = from_spec(a, f"{path}.args[0]")
            L = _need(node, "L", path)
            action = L.get("action") if isinstance(L, dict) else None
            if action is None:
                raise SpecError("'L' must be an object with an 'action' matrix", path)
            return LinearTransform(inner, LinearMap(inner.n, action))
    except SpecError:
        raise
    except (DimensionError, HomogeneityError, OrthogonalityError, ValueError, TypeError, KeyError) as exc:
        raise SpecError(f"{type(exc).__name__}: {exc}", path) from exc
    raise SpecError(f"unknown op {op!r}", path)
