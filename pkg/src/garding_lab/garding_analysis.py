"""Garding eigenvalues, cones, gradients and the central-ray test.

The eigenvalues of ``A`` in direction ``B`` are the reals ``lambda_j`` with
``g(tB + A) = g(B) * prod_j (t + lambda_j)``.  They are found by sampling
the univariate profile ``t -> g(tB + A)`` at Chebyshev nodes, converting to
monomial coefficients, and taking companion-matrix eigenvalues.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .matrix_core import (
    DimensionError,
    frobenius,
    random_orthogonal,
    random_spd,
    random_symmetric,
    sym_matrix,
    trace_free_basis,
)
from .operator import (
    Conjugate,
    GardingOperator,
    RadialDerivative,
    chebyshev_nodes,
)
from .report import CheckReport

HYPERBOLICITY_TOL = 1e-6
MEMBERSHIP_TOL = 1e-9
PROFILE_LEAD_TOL = 1e-8
PROFILE_RESIDUAL_TOL = 1e-7
# assumed relative accuracy of profile coefficients, used to size root clusters
COEFF_NOISE = 1e-10
CLUSTER_FACTOR = 2.0


class SpectrumError(ValueError):
    pass


class DegenerateDirectionError(SpectrumError):
    pass


class NotPolynomialError(SpectrumError):
    pass


class NonRealSpectrumError(SpectrumError):
    def __init__(self, residual: float, roots=None):
        super().__init__(f"non-real spectrum (realness residual {residual:.3g})")
        self.residual = residual
        self.roots = roots


@dataclass(frozen=True)
class EigenList:
    values: np.ndarray
    realness_residual: float

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class ConeCertificate:
    member: bool
    margin: float
    g_value: float


@dataclass
class CentralityResult:
    central: bool
    k: float
    gradient_at_I: np.ndarray
    offdiag_residual: float
    diag_spread: float
    laplacian_ratio_spread: float
    laplacian_factor: float
    trace_free_laplacian_max: float
    euler_residual: float
    g_identity: float

    def to_report(self) -> CheckReport:
        notes = []
        if not self.central:
            notes.append("gradient at I is not a positive multiple of I")
        return CheckReport(
            suite="central",
            passed=self.central,
            margins={
                "k": self.k,
                "offdiag_residual": self.offdiag_residual,
                "diag_spread": self.diag_spread,
                "laplacian_factor": self.laplacian_factor,
                "laplacian_ratio_spread": self.laplacian_ratio_spread,
                "trace_free_laplacian_max": self.trace_free_laplacian_max,
                "euler_residual": self.euler_residual,
            },
            witness=None if self.central else self.gradient_at_I.tolist(),
            notes=notes,
            details={"gradient_at_I": self.gradient_at_I.tolist()},
        )


def _check_dims(g: GardingOperator, *mats):
    for M in mats:
        if M.shape != (g.n, g.n):
            raise DimensionError(f"{g.name} acts on S({g.n}), got shape {M.shape}")


def univariate_profile(g: GardingOperator, B, A) -> np.ndarray:
    """Coefficients of ``t -> g(tB + A)``, highest degree first."""
    B = np.asarray(B, dtype=float)
    A = np.asarray(A, dtype=float)
    _check_dims(g, A, B)
    coeffs_s, R = _profile_scaled(g, B, A)
    return coeffs_s[::-1] / R ** np.arange(g.N + 1)[::-1]


def _profile_scaled(g: GardingOperator, B: np.ndarray, A: np.ndarray):
    """Profile in the scaled variable ``s = t / R``, lowest degree first."""
    N = g.N
    nb = frobenius(B)
    if nb == 0.0:
        raise DegenerateDirectionError("direction B is zero")
    R = 2.0 * (1.0 + frobenius(A) / nb)
    s = chebyshev_nodes(N + 1)
    s_check = np.array([0.0, 0.3819660112501051])
    all_s = np.concatenate([s, s_check])
    vals = g.values(A[None] + (R * all_s)[:, None, None] * B[None])
    coeffs = np.polynomial.chebyshev.cheb2poly(np.polynomial.chebyshev.chebfit(s, vals[: N + 1], N))
    coeffs = np.concatenate([coeffs, np.zeros(N + 1 - len(coeffs))])
    size = float(np.sum(np.abs(coeffs)))
    predicted = np.polynomial.polynomial.polyval(s_check, coeffs)
    resid = float(np.max(np.abs(predicted - vals[N + 1 :])))
    if resid > PROFILE_RESIDUAL_TOL * max(size, 1e-300):
        raise NotPolynomialError(f"profile of {g.name} is not a polynomial of degree {N} (residual {resid:.3g})")
    gB = g(B)
    lead = coeffs[N] / R**N
    lead_scale = max(abs(gB), size / R**N)
    if abs(gB) <= 1e-12 * size / R**N:
        raise DegenerateDirectionError(f"g(B) = {gB:.3g} vanishes; B is not a hyperbolic direction")
    if abs(lead - gB) > PROFILE_LEAD_TOL * lead_scale:
        raise NotPolynomialError(f"profile leading coefficient {lead:.17g} disagrees with g(B) = {gB:.17g}")
    return coeffs, R


def _cluster(roots: np.ndarray) -> list[list[int]]:
    """Group roots that are a perturbed multiple root.

    A group of ``k`` roots is accepted when its radius is within
    ``CLUSTER_FACTOR * COEFF_NOISE**(1/k)``, the spread a ``k``-fold root
    acquires from coefficient noise; larger groups are split by shrinking
    the single-linkage threshold.
    """
    N = len(roots)

    def components(idx: list[int], thr: float) -> list[list[int]]:
        parent = {i: i for i in idx}

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for a in range(len(idx)):
            for b in range(a + 1, len(idx)):
                if abs(roots[idx[a]] - roots[idx[b]]) <= thr:
                    parent[find(idx[a])] = find(idx[b])
        groups: dict[int, list[int]] = {}
        for i in idx:
            groups.setdefault(find(i), []).append(i)
        return list(groups.values())

    def split(idx: list[int], thr: float) -> list[list[int]]:
        out = []
        for comp in components(idx, thr):
            k = len(comp)
            if k == 1:
                out.append(comp)
                continue
            c = roots[comp].mean()
            radius = float(np.max(np.abs(roots[comp] - c)))
            if radius <= CLUSTER_FACTOR * COEFF_NOISE ** (1.0 / k) or thr < 1e-14:
                out.append(comp)
            else:
                out.extend(split(comp, thr / 2))
        return out

    return split(list(range(N)), 2 * CLUSTER_FACTOR * COEFF_NOISE ** (1.0 / max(N, 1)))


def _real_roots(coeffs_s: np.ndarray, R: float) -> tuple[np.ndarray, float, np.ndarray]:
    """Roots in ``t`` of the scaled profile, with multiple roots consolidated."""
    N = len(coeffs_s) - 1
    monic = coeffs_s / coeffs_s[N]
    C = np.zeros((N, N))
    C[0, :] = -monic[N - 1 :: -1]
    if N > 1:
        C[1:, :-1] = np.eye(N - 1)
    raw = np.linalg.eigvals(C)  # LAPACK geev balances the matrix first
    roots = raw.astype(complex)
    t_raw = R * roots
    nonreal = np.abs(t_raw.imag) / (1.0 + np.abs(t_raw.real)) > HYPERBOLICITY_TOL
    for group in _cluster(roots):
        if len(group) > 1 and np.any(nonreal[group]):
            roots[group] = roots[group].mean()
    t = R * roots
    residual = float(np.max(np.abs(t.imag) / (1.0 + np.abs(t.real)))) if N else 0.0
    return t.real, residual, R * raw


def garding_eigenvalues(g: GardingOperator, B, A) -> EigenList:
    """Eigenvalues of ``A`` for ``g`` in direction ``B``, nonincreasing.

    Raises :class:`NonRealSpectrumError` when the profile has non-real roots.
    """
    B = np.asarray(B, dtype=float)
    A = np.asarray(A, dtype=float)
    _check_dims(g, A, B)
    if g.N == 0:
        return EigenList(np.zeros(0), 0.0)
    coeffs_s, R = _profile_scaled(g, B, A)
    real, residual, raw = _real_roots(coeffs_s, R)
    if residual > HYPERBOLICITY_TOL:
        raise NonRealSpectrumError(residual, raw)
    return EigenList(np.sort(-real)[::-1], residual)


def _eye(g):
    return np.eye(g.n)


def check_hyperbolic(g: GardingOperator, B=None, samples: int = 500, seed: int = 0) -> CheckReport:
    B = _eye(g) if B is None else sym_matrix(B)
    rng = np.random.default_rng([seed, 101])
    worst = 0.0
    for i in range(samples):
        A = random_symmetric(g.n, rng)
        try:
            ev = garding_eigenvalues(g, B, A)
        except NonRealSpectrumError as exc:
            return CheckReport("hyperbolic", False, {"realness_residual": exc.residual, "failed_at_sample": i},
                               witness=A.tolist(), notes=["non-real roots of t -> g(tB + A)"])
        except SpectrumError as exc:
            return CheckReport("hyperbolic", False, {"failed_at_sample": i}, witness=A.tolist(), notes=[str(exc)])
        worst = max(worst, ev.realness_residual)
    return CheckReport("hyperbolic", True, {"max_realness_residual": worst, "samples": samples},
                       notes=["sampled, not proven"])


def in_garding_cone(g: GardingOperator, A, B=None) -> ConeCertificate:
    A = np.asarray(A, dtype=float)
    B = _eye(g) if B is None else np.asarray(B, dtype=float)
    ev = garding_eigenvalues(g, B, A)
    gA = g(A)
    margin = float(ev.values[-1]) if len(ev.values) else math.inf
    return ConeCertificate(member=bool(margin > MEMBERSHIP_TOL and gA > 0), margin=margin, g_value=gA)


def check_dirichlet(g: GardingOperator, samples: int = 500, seed: int = 0) -> CheckReport:
    """Every sampled positive definite matrix must lie in the Garding cone."""
    rng = np.random.default_rng([seed, 102])
    worst = math.inf
    for i in range(samples):
        P = random_spd(g.n, rng=rng, spread=(1.0, 2.0, 3.0)[i % 3])
        try:
            cert = in_garding_cone(g, P)
        except SpectrumError as exc:
            return CheckReport("dirichlet", False, {"failed_at_sample": i}, witness=P.tolist(), notes=[str(exc)])
        worst = min(worst, cert.margin)
        if not cert.member:
            return CheckReport("dirichlet", False, {"margin": cert.margin, "g_value": cert.g_value,
                                                    "failed_at_sample": i},
                               witness=P.tolist(), notes=["positive definite matrix outside the Garding cone"])
    return CheckReport("dirichlet", True, {"min_margin": worst, "samples": samples}, notes=["sampled, not proven"])


def _unit_directions(n: int) -> list[tuple[int, int, np.ndarray]]:
    out = []
    for i in range(n):
        for j in range(i, n):
            E = np.zeros((n, n))
            E[i, j] = E[j, i] = 1.0
            out.append((i, j, E))
    return out


def gradient(g: GardingOperator, A) -> np.ndarray:
    """Gradient of ``g`` at ``A`` for the trace inner product.

    Operators with an ``exact_gradient`` method (symbolic, det, sigma_k)
    are differentiated exactly.  Anything else uses
    central differences with step ``1e-5 (1 + ||A||)`` and one Richardson
    extrapolation level.
    """
    A = np.asarray(A, dtype=float)
    _check_dims(g, A)
    if hasattr(g, "exact_gradient"):
        return g.exact_gradient(A)
    n = g.n
    h = 1e-5 * (1.0 + frobenius(A))
    dirs = _unit_directions(n)
    E = np.stack([d[2] for d in dirs])
    steps = np.array([h, -h, h / 2, -h / 2])
    stack = A[None, None] + steps[None, :, None, None] * E[:, None]
    v = g.values(stack.reshape(-1, n, n)).reshape(len(dirs), 4)
    d1 = (v[:, 0] - v[:, 1]) / (2 * h)
    d2 = (v[:, 2] - v[:, 3]) / h
    deriv = (4 * d2 - d1) / 3
    G = np.zeros((n, n))
    for (i, j, _), d in zip(dirs, deriv):
        if i == j:
            G[i, i] = d
        else:
            G[i, j] = G[j, i] = d / 2
    return G


def garding_laplacian(g: GardingOperator, A, B=None) -> float:
    """Sum of the Garding eigenvalues of ``A`` (direction ``B``, default ``I``)."""
    B = _eye(g) if B is None else np.asarray(B, dtype=float)
    return float(np.sum(garding_eigenvalues(g, B, np.asarray(A, dtype=float)).values))


def check_central(g: GardingOperator, seed: int = 0, samples: int = 20) -> CentralityResult:
    """Central-ray test in gradient form, cross-checked in Laplacian form."""
    n, N = g.n, g.N
    I = np.eye(n)
    G = gradient(g, I)
    k = float(np.mean(np.diag(G)))
    scale = max(abs(k), 1e-300)
    off = float(np.max(np.abs(G - np.diag(np.diag(G))))) if n > 1 else 0.0
    spread = float(np.max(np.diag(G)) - np.min(np.diag(G)))
    gradient_ok = k > 0 and off <= 1e-7 * scale and spread <= 1e-7 * scale
    gI = g(I)
    euler = abs(N * gI - k * n) / max(abs(N * gI), 1e-300)

    rng = np.random.default_rng([seed, 103])
    tf_max = math.nan
    ratio_spread = math.nan
    factor = k / gI if gI else math.nan
    try:
        worst = 0.0
        basis = trace_free_basis(n)
        for _ in range(samples):
            coeffs = rng.standard_normal(len(basis))
            A0 = sum(c * E for c, E in zip(coeffs, basis)) if basis else np.zeros((n, n))
            lap = garding_laplacian(g, A0)
            worst = max(worst, abs(lap) / (max(frobenius(A0), 1e-300) * N))
        tf_max = worst
        ratios = []
        while len(ratios) < samples:
            A = random_symmetric(n, rng)
            tr = float(np.trace(A))
            if abs(tr) < 0.5:
                continue
            ratios.append(garding_laplacian(g, A) / tr)
        ratios = np.array(ratios)
        ratio_spread = float(np.max(ratios) - np.min(ratios))
    except SpectrumError:
        pass
    return CentralityResult(
        central=bool(gradient_ok),
        k=k,
        gradient_at_I=G,
        offdiag_residual=off,
        diag_spread=spread,
        laplacian_ratio_spread=ratio_spread,
        laplacian_factor=factor,
        trace_free_laplacian_max=tf_max,
        euler_residual=euler,
        g_identity=gI,
    )


def interlace_check(g: GardingOperator, A, derivative: GardingOperator | None = None) -> CheckReport:
    """Eigenvalues of the radial derivative must separate those of ``g``."""
    if g.N < 2:
        raise ValueError("interlacing needs degree >= 2")
    A = np.asarray(A, dtype=float)
    I = _eye(g)
    gp = derivative if derivative is not None else RadialDerivative(g, check=False)
    lam = garding_eigenvalues(g, I, A).values
    mu = garding_eigenvalues(gp, I, A).values
    slack = 1e-8 * (1.0 + float(np.max(np.abs(lam))))
    upper = lam[:-1] - mu
    lower = mu - lam[1:]
    margin = float(min(upper.min(), lower.min()))
    ok = margin >= -slack
    return CheckReport("interlace", bool(ok), {"margin": margin},
                       witness=None if ok else A.tolist(),
                       details={"g_eigenvalues": lam.tolist(), "derivative_eigenvalues": mu.tolist()})


def interlace_suite(g: GardingOperator, samples: int = 200, seed: int = 0) -> CheckReport:
    rng = np.random.default_rng([seed, 104])
    gp = RadialDerivative(g, check=False)
    worst = math.inf
    for i in range(samples):
        A = random_symmetric(g.n, rng)
        try:
            rep = interlace_check(g, A, derivative=gp)
        except SpectrumError as exc:
            return CheckReport("interlace", False, {"failed_at_sample": i}, witness=A.tolist(), notes=[str(exc)])
        worst = min(worst, rep.margins["margin"])
        if not rep.passed:
            rep.margins["failed_at_sample"] = i
            return rep
    return CheckReport("interlace", True, {"min_margin": worst, "samples": samples})


def _diag_partials_fd(f, x: np.ndarray) -> np.ndarray:
    """Richardson-extrapolated central differences of ``f: R^n -> R``."""
    n = len(x)
    h = 1e-5 * (1.0 + np.linalg.norm(x))
    out = np.zeros(n)
    for j in range(n):
        e = np.zeros(n)
        e[j] = 1.0
        d1 = (f(x + h * e) - f(x - h * e)) / (2 * h)
        d2 = (f(x + h / 2 * e) - f(x - h / 2 * e)) / h
        out[j] = (4 * d2 - d1) / 3
    return out


def lemma22_check(g: GardingOperator, trials: int = 50, seed: int = 0) -> CheckReport:
    """Gradient at I transforms as ``h^T (D_I g) h`` under conjugation by ``h``.

    When ``g`` passes the central test, also checks that each restriction
    ``p_h`` to the diagonal has ``D_e p_h = k e``.
    """
    rng = np.random.default_rng([seed, 105])
    I = _eye(g)
    G = gradient(g, I)
    central = check_central(g, seed=seed)
    gscale = max(float(np.linalg.norm(G)), 1e-300)
    worst_a = 0.0
    worst_c = 0.0
    witness = None
    for _ in range(trials):
        h = random_orthogonal(g.n, rng=rng)
        gh = Conjugate(g, h, check=False)
        lhs = gradient(gh, I)
        err = float(np.linalg.norm(lhs - h.T @ G @ h)) / gscale
        if err > worst_a:
            worst_a = err
            if err > 1e-6:
                witness = h.tolist()
        if central.central:
            p = lambda x, gh=gh: gh(np.diag(x))
            De = _diag_partials_fd(p, np.ones(g.n))
            worst_c = max(worst_c, float(np.max(np.abs(De - central.k))) / abs(central.k))
    margins = {"gradient_transfer_max_rel_error": worst_a}
    notes = []
    passed = worst_a <= 1e-6
    if central.central:
        margins["diagonal_gradient_max_rel_error"] = worst_c
        passed = passed and worst_c <= 1e-6
    else:
        notes.append("diagonal gradient check: not applicable (operator is not I-central)")
    return CheckReport("lemma22", bool(passed), margins, witness=witness, notes=notes)


def check_cone_transfer(gL, samples: int = 200, seed: int = 0) -> CheckReport:
    """``A`` in the cone of ``g o L`` iff ``L(A)`` is in the cone of ``g``."""
    rng = np.random.default_rng([seed, 106])
    g, L = gL.inner, gL.L
    agree = 0
    members = 0
    for i in range(samples):
        A = random_symmetric(g.n, rng) + rng.uniform(-2.0, 3.0) * np.eye(g.n)
        left = in_garding_cone(gL, A).member
        right = in_garding_cone(g, L(A)).member
        members += left
        if left != right:
            return CheckReport("cone_transfer", False, {"failed_at_sample": i}, witness=A.tolist())
        agree += 1
    return CheckReport("cone_transfer", True, {"samples": agree, "members": members})
