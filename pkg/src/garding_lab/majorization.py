"""Numerical checks of determinant majorization and its companion lemmas.

All checks sample and search; they can falsify an inequality or build
confidence in it, never prove it.  Ratios are computed in log space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .garding_analysis import SpectrumError, gradient, in_garding_cone
from .matrix_core import (
    expm_sym,
    random_orthogonal,
    random_spd,
    sqrtm_spd,
    sym_eigvals,
    symmetrize_upper,
)
from .operator import Conjugate, GardingOperator, diagonal_restriction
from .poly_core import SparsePoly, poly_directional_derivative, poly_eval
from .report import CheckReport

MAJORIZATION_TOL = 1e-6
EQUALITY_BAND = 1e-6


class DomainError(ValueError):
    """g(A) <= 0 at a positive definite A: the operator is not Dirichlet there."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclass
class MajorizationReport:
    min_ratio: float
    argmin: np.ndarray
    samples_used: int
    refinement_steps: int
    sharp_at_identity: bool
    gamma: float
    ratio_at_identity: float
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.min_ratio >= 1.0 - MAJORIZATION_TOL

    def to_report(self) -> CheckReport:
        notes = [f"numerically certified at {self.samples_used} samples, min margin {self.min_ratio - 1.0:.3e}"]
        if abs(self.min_ratio - 1.0) <= EQUALITY_BAND:
            notes.append("equality regime")
        notes.extend(self.notes)
        return CheckReport(
            suite="majorization",
            passed=self.passed,
            margins={
                "min_ratio": self.min_ratio,
                "ratio_at_identity": self.ratio_at_identity,
                "gamma": self.gamma,
                "samples": self.samples_used,
                "refinement_steps": self.refinement_steps,
            },
            witness=self.argmin.tolist(),
            notes=notes,
        )


def _log_ratio(g: GardingOperator, A: np.ndarray, log_gI: float) -> np.ndarray:
    """``log`` of ``g(A)^(1/N) / (g(I)^(1/N) det(A)^(1/n))`` for a stack of SPD matrices."""
    sign, log_g = g.signed_log(A)
    w = sym_eigvals(A)
    log_det = np.sum(np.log(w), axis=-1)
    bad = ~(sign > 0)
    if np.any(bad):
        idx = int(np.flatnonzero(np.atleast_1d(bad))[0])
        witness = A if A.ndim == 2 else A[idx]
        raise DomainError(f"{g.name} is not positive at a positive definite matrix", witness.tolist())
    return (log_g - log_gI) / g.N - log_det / g.n


def _log_g_identity(g: GardingOperator) -> float:
    sign, lg = g.signed_log(np.eye(g.n))
    if not sign > 0:
        raise DomainError(f"{g.name}(I) is not positive")
    return float(lg)


def ratio(g: GardingOperator, A) -> float:
    A = np.asarray(A, dtype=float)
    if np.min(sym_eigvals(A)) <= 0:
        raise ValueError("ratio needs a positive definite matrix")
    return float(np.exp(_log_ratio(g, A, _log_g_identity(g))))


def _random_trace_free(n: int, rng: np.random.Generator) -> np.ndarray:
    S = rng.standard_normal((n, n))
    S = symmetrize_upper(S)
    S = S - np.trace(S) / n * np.eye(n)
    nrm = np.linalg.norm(S)
    return S / nrm if nrm > 0 else S


def check_majorization(g: GardingOperator, samples: int = 2000, refine_iters: int = 500,
                       seed: int = 0) -> MajorizationReport:
    """Search for the minimum of the majorization ratio over positive definite A.

    The identity is always included.  Random draws use spreads 1, 2, 3 in
    rotation; the best candidate is then refined by multiplicative steps
    ``A <- A^(1/2) exp(-eta S) A^(1/2)`` along random trace-free ``S``.
    """
    n = g.n
    rng = np.random.default_rng([seed, 201])
    log_gI = _log_g_identity(g)
    I = np.eye(n)
    r_I = float(np.exp(_log_ratio(g, I, log_gI)))
    mats = [I] + [random_spd(n, rng=rng, spread=(1.0, 2.0, 3.0)[i % 3]) for i in range(samples)]
    stack = np.stack(mats)
    logs = np.empty(len(stack))
    chunk = 4096
    for s in range(0, len(stack), chunk):
        logs[s : s + chunk] = _log_ratio(g, stack[s : s + chunk], log_gI)
    best = int(np.argmin(logs))
    A = stack[best]
    cur = float(logs[best])

    eta = 0.5
    steps = 0
    for _ in range(refine_iters):
        S = _random_trace_free(n, rng) if n > 1 else np.zeros((1, 1))
        root = sqrtm_spd(A)
        accepted = False
        for sgn in (1.0, -1.0):
            cand = symmetrize_upper(root @ expm_sym(-sgn * eta * S) @ root)
            cand = cand / np.exp(np.mean(np.log(sym_eigvals(cand))))  # fix det = 1; ratio is scale-free
            val = float(_log_ratio(g, cand, log_gI))
            if val < cur:
                A, cur, accepted = cand, val, True
                break
        steps += 1
        if not accepted:
            eta *= 0.5
            if eta < 1e-8:
                eta = 0.5
    return MajorizationReport(
        min_ratio=float(np.exp(cur)),
        argmin=A,
        samples_used=samples + 1,
        refinement_steps=steps,
        sharp_at_identity=bool(abs(r_I - 1.0) <= 1e-9),
        gamma=float(np.exp(n * log_gI / g.N) / n**n),
        ratio_at_identity=r_I,
    )


@dataclass(frozen=True)
class GradientDetBound:
    det_value: float
    gamma: float
    passed: bool
    min_eigenvalue: float


def gradient_det_bound(g: GardingOperator, B) -> GradientDetBound:
    """``M = D_B g^(1/N)`` must be positive definite with ``det M >= g(I)^(n/N) / n^n``."""
    B = np.asarray(B, dtype=float)
    cert = in_garding_cone(g, B)
    if not cert.member:
        raise ValueError(f"B is not inside the Garding cone of {g.name} (margin {cert.margin:.3g})")
    N, n = g.N, g.n
    M = gradient(g, B) * (cert.g_value ** ((1.0 - N) / N) / N)
    w = sym_eigvals(symmetrize_upper(M))
    det_M = float(np.prod(w))
    gamma = float(g.at_identity() ** (n / N) / n**n)
    ok = bool(w[-1] > 0 and det_M >= gamma * (1.0 - MAJORIZATION_TOL))
    return GradientDetBound(det_value=det_M, gamma=gamma, passed=ok, min_eigenvalue=float(w[-1]))


def _cone_points(g: GardingOperator, count: int, rng: np.random.Generator) -> list[np.ndarray]:
    """Interior cone points: random positive definite matrices plus shifted indefinite ones."""
    pts = []
    attempts = 0
    while len(pts) < count and attempts < 50 * count:
        attempts += 1
        if len(pts) % 2 == 0:
            B = random_spd(g.n, rng=rng, spread=2.0)
        else:
            B = symmetrize_upper(rng.standard_normal((g.n, g.n))) + rng.uniform(0.0, 3.0) * np.eye(g.n)
        try:
            if in_garding_cone(g, B).margin > 1e-3:
                pts.append(B)
        except SpectrumError:
            continue
    return pts


def gradient_det_suite(g: GardingOperator, samples: int = 200, seed: int = 0) -> CheckReport:
    rng = np.random.default_rng([seed, 202])
    worst = math.inf
    gamma = math.nan
    for i, B in enumerate(_cone_points(g, samples, rng)):
        res = gradient_det_bound(g, B)
        gamma = res.gamma
        rel = res.det_value / res.gamma - 1.0
        if rel < worst:
            worst = rel
        if not res.passed:
            return CheckReport("gradient-det", False,
                               {"relative_margin": rel, "min_eigenvalue": res.min_eigenvalue, "failed_at_sample": i},
                               witness=B.tolist())
    notes = ["equality regime"] if abs(worst) <= EQUALITY_BAND else []
    return CheckReport("gradient-det", True, {"min_relative_margin": worst, "gamma": gamma, "samples": samples},
                       notes=notes)


def check_gradient_form_consistency(g: GardingOperator, samples: int = 200, seed: int = 0,
                                    refine_iters: int = 100) -> CheckReport:
    """Majorization and the gradient-determinant bound must agree (both hold or both fail)."""
    maj = check_majorization(g, samples=samples, refine_iters=refine_iters, seed=seed)
    grad = gradient_det_suite(g, samples=samples, seed=seed)
    ok = maj.passed == grad.passed
    return CheckReport("gradient-form-consistency", bool(ok),
                       {"min_ratio": maj.min_ratio, "gradient_det_margin": grad.margins.get("min_relative_margin",
                                                                                           math.nan)},
                       details={"majorization": maj.passed, "gradient_det": grad.passed})


def basic_lemma_check(p: SparsePoly, samples: int = 500, seed: int = 0) -> CheckReport:
    """Nonnegative coefficients and ``D_e p = k e`` imply
    ``p(x)^(1/N) >= p(e)^(1/N) (x_1...x_n)^(1/n)`` on the positive orthant.

    Hypothesis failures are reported separately and the conclusion is then
    not asserted.
    """
    n, N = p.nvars, p.degree
    if p.is_zero() or not p.is_homogeneous() or N == 0:
        return CheckReport("basic-lemma", False, notes=["polynomial is not homogeneous of positive degree"])
    e = np.ones(n)
    min_coeff = min(p.terms.values())
    hyp1 = min_coeff >= -1e-12
    De = np.array([float(poly_eval(p.partial(j), e)) for j in range(n)])
    k = float(np.mean(De))
    hyp2 = k > 0 and float(np.max(np.abs(De - k))) <= 1e-8 * max(1.0, abs(k))
    pe = float(poly_eval(p, e))
    euler_lhs = float(poly_eval(poly_directional_derivative(p, e), e))
    margins = {"min_coeff": min_coeff, "k": k, "De_spread": float(np.max(De) - np.min(De)),
               "euler_residual": abs(N * pe - euler_lhs), "central_relation_residual": abs(N * pe - k * n)}
    notes = []
    if not hyp1:
        notes.append("hypothesis (1) fails: negative coefficient")
    if not hyp2:
        notes.append("hypothesis (2) fails: D_e p is not a positive multiple of e")
    if not (hyp1 and hyp2):
        notes.append("conclusion not asserted")
        return CheckReport("basic-lemma", False, margins, witness=De.tolist(), notes=notes,
                           details={"hypothesis_1": bool(hyp1), "hypothesis_2": bool(hyp2)})
    rng = np.random.default_rng([seed, 203])
    X = np.exp(rng.uniform(-3.0, 3.0, size=(samples, n)))
    X[0] = e
    lhs = np.log(poly_eval(p, X)) / N
    rhs = math.log(pe) / N + np.mean(np.log(X), axis=1)
    gap = lhs - rhs
    i = int(np.argmin(gap))
    ok = gap[i] >= -1e-9
    margins["min_log_gap"] = float(gap[i])
    return CheckReport("basic-lemma", bool(ok), margins, witness=None if ok else X[i].tolist(),
                       notes=notes + ["sampled, not proven"],
                       details={"hypothesis_1": True, "hypothesis_2": True})


def diag_coefficient_check(g: GardingOperator, h_samples: int = 20, seed: int = 0,
                           extra_h: list | None = None) -> CheckReport:
    """Coefficients of every diagonal restriction ``p_h`` must be nonnegative."""
    rng = np.random.default_rng([seed, 204])
    hs = [np.eye(g.n)] + [np.asarray(h, dtype=float) for h in (extra_h or [])]
    hs += [random_orthogonal(g.n, rng=rng) for _ in range(h_samples)]
    worst = math.inf
    worst_resid = 0.0
    for h in hs:
        gh = g if np.array_equal(h, np.eye(g.n)) else Conjugate(g, h, check=False)
        p = diagonal_restriction(g, h)
        scale = 1.0 + p.max_abs_coeff()
        low = min(p.terms.values(), default=0.0) / scale
        # spot-check the recovered polynomial off the interpolation grid
        X = np.exp(rng.uniform(-1.0, 1.0, size=(8, g.n)))
        direct = gh.values(X[:, :, None] * np.eye(g.n))
        resid = float(np.max(np.abs(poly_eval(p, X) - direct) / (1.0 + np.abs(direct))))
        worst_resid = max(worst_resid, resid)
        worst = min(worst, low)
        if low < -1e-8:
            return CheckReport("diag-coeffs", False, {"min_scaled_coeff": low, "reconstruction_residual": resid},
                               witness=h.tolist(), details={"p_h": p.to_json()})
    return CheckReport("diag-coeffs", True, {"min_scaled_coeff": worst, "reconstruction_residual": worst_resid,
                                             "h_count": len(hs)})
