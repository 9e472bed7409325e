"""Command-line interface: ``garding-lab check | eval | eigen | restrict-diag``.

Exit codes: 0 when every requested suite passes, 1 when one fails, 2 on a
configuration, parse or I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .garding_analysis import (
    SpectrumError,
    check_central,
    check_dirichlet,
    check_hyperbolic,
    garding_eigenvalues,
    interlace_suite,
    lemma22_check,
)
from .majorization import (
    DomainError,
    basic_lemma_check,
    check_majorization,
    diag_coefficient_check,
    gradient_det_suite,
)
from .matrix_core import load_matrix
from .operator import GardingOperator, SpecError, diagonal_restriction, evaluate, from_spec
from .report import CheckReport, dumps

# fixed expansion order of "all"
SUITES = (
    "hyperbolic",
    "dirichlet",
    "central",
    "majorization",
    "gradient-det",
    "interlace",
    "diag-coeffs",
    "lemma22",
    "basic-lemma",
)
DEFAULT_SEED = 0


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    spec_path: str
    suites: list[str] = field(default_factory=lambda: ["all"])
    seed: int = DEFAULT_SEED
    samples: int = 2000
    refine_iters: int = 500
    output_path: str | None = None

    def expanded_suites(self) -> list[str]:
        if not self.suites:
            raise ConfigError("at least one suite is required")
        out: list[str] = []
        for s in self.suites:
            names = SUITES if s == "all" else (s,)
            for name in names:
                if name not in SUITES:
                    raise ConfigError(f"unknown suite {name!r}; choose from {', '.join(SUITES + ('all',))}")
                if name not in out:
                    out.append(name)
        return out

    def validate(self):
        if self.samples < 1:
            raise ConfigError("samples must be at least 1")
        if self.refine_iters < 0:
            raise ConfigError("refine must be nonnegative")
        self.expanded_suites()


def parse_spec(text: str) -> GardingOperator:
    """Parse a JSON operator construction tree."""
    try:
        node = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return from_spec(node)


def _run_suite(name: str, g: GardingOperator, cfg: RunConfig) -> CheckReport:
    seed, samples = cfg.seed, cfg.samples
    try:
        if name == "hyperbolic":
            return check_hyperbolic(g, samples=samples, seed=seed)
        if name == "dirichlet":
            return check_dirichlet(g, samples=samples, seed=seed)
        if name == "central":
            return check_central(g, seed=seed).to_report()
        if name == "majorization":
            return check_majorization(g, samples=samples, refine_iters=cfg.refine_iters, seed=seed).to_report()
        if name == "gradient-det":
            return gradient_det_suite(g, samples=min(samples, 200), seed=seed)
        if name == "interlace":
            if g.N < 2:
                return CheckReport("interlace", True, notes=["not applicable: degree 1"])
            return interlace_suite(g, samples=min(samples, 200), seed=seed)
        if name == "diag-coeffs":
            return diag_coefficient_check(g, h_samples=min(samples, 20), seed=seed)
        if name == "lemma22":
            return lemma22_check(g, trials=min(samples, 50), seed=seed)
        if name == "basic-lemma":
            rep = basic_lemma_check(diagonal_restriction(g), samples=samples, seed=seed)
            rep.notes.append("applied to the diagonal restriction p(x) = g(diag(x))")
            return rep
    except DomainError as exc:
        return CheckReport(name, False, witness=exc.witness, notes=[str(exc)])
    except (SpectrumError, ValueError) as exc:
        return CheckReport(name, False, notes=[f"{type(exc).__name__}: {exc}"])
    raise ConfigError(f"unknown suite {name!r}")


def run(cfg: RunConfig) -> tuple[int, dict]:
    cfg.validate()
    with open(cfg.spec_path, encoding="utf-8") as fh:
        g = parse_spec(fh.read())
    reports = [_run_suite(name, g, cfg) for name in cfg.expanded_suites()]
    all_pass = all(r.passed for r in reports)
    doc = {
        "operator": g.summary(),
        "spec": g.spec(),
        "config": {
            "suites": cfg.expanded_suites(),
            "samples": cfg.samples,
            "refine_iters": cfg.refine_iters,
        },
        "seed": cfg.seed,
        "pass": all_pass,
        "suites": [r.to_dict() for r in reports],
        "versions": {"garding_lab": __version__, "numpy": np.__version__},
    }
    return (0 if all_pass else 1), doc


def _default_seed() -> int:
    env = os.environ.get("GARDING_LAB_SEED")
    if env is None:
        return DEFAULT_SEED
    try:
        return int(env)
    except ValueError:
        raise ConfigError(f"GARDING_LAB_SEED must be an integer, got {env!r}")


def _load_spec(path: str) -> GardingOperator:
    with open(path, encoding="utf-8") as fh:
        return parse_spec(fh.read())


def _emit(doc, out: str | None = None):
    text = dumps(doc)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="garding-lab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="run verification suites on an operator")
    p.add_argument("--spec", required=True, help="operator construction tree (JSON file)")
    p.add_argument("--suite", action="append", dest="suites",
                   help=f"suite to run (repeatable): {', '.join(SUITES)}, all")
    p.add_argument("--seed", type=int, default=None, help="RNG seed (default: $GARDING_LAB_SEED or 0)")
    p.add_argument("--samples", type=int, default=2000)
    p.add_argument("--refine", type=int, default=500, help="majorization refinement steps")
    p.add_argument("--out", help="write the JSON report here instead of stdout")

    p = sub.add_parser("eval", help="evaluate the operator at a matrix")
    p.add_argument("--spec", required=True)
    p.add_argument("--matrix", required=True, help="JSON array-of-arrays")

    p = sub.add_parser("eigen", help="Garding eigenvalues of a matrix")
    p.add_argument("--spec", required=True)
    p.add_argument("--matrix", required=True)
    p.add_argument("--direction", help="direction matrix B (default: identity)")

    p = sub.add_parser("restrict-diag", help="coefficients of the diagonal restriction")
    p.add_argument("--spec", required=True)
    p.add_argument("--h", help="orthogonal matrix to conjugate by first")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        if args.command == "check":
            cfg = RunConfig(
                spec_path=args.spec,
                suites=args.suites or ["all"],
                seed=args.seed if args.seed is not None else _default_seed(),
                samples=args.samples,
                refine_iters=args.refine,
                output_path=args.out,
            )
            code, doc = run(cfg)
            _emit(doc, cfg.output_path)
            return code
        g = _load_spec(args.spec)
        if args.command == "eval":
            value = evaluate(g, load_matrix(args.matrix))
            _emit({"operator": g.name, "value": value})
            return 0
        if args.command == "eigen":
            A = load_matrix(args.matrix)
            B = load_matrix(args.direction) if args.direction else np.eye(g.n)
            try:
                ev = garding_eigenvalues(g, B, A)
            except SpectrumError as exc:
                _emit({"operator": g.name, "error": str(exc)})
                return 1
            _emit({"operator": g.name, "eigenvalues": ev.values.tolist(),
                   "realness_residual": ev.realness_residual})
            return 0
        if args.command == "restrict-diag":
            h = load_matrix_any(args.h) if args.h else None
            p = diagonal_restriction(g, h)
            _emit({"operator": g.name, "nvars": p.nvars, "degree": p.degree, "terms": p.to_json()})
            return 0
    except (SpecError, ConfigError, OSError, ValueError) as exc:
        print(f"garding-lab: error: {exc}", file=sys.stderr)
        return 2
    return 2


def load_matrix_any(path: str) -> np.ndarray:
    """Read a (not necessarily symmetric) square matrix literal."""
    with open(path, encoding="utf-8") as fh:
        M = np.array(json.load(fh), dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix in {path}")
    return M


if __name__ == "__main__":
    sys.exit(main())
