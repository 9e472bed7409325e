"""Named operators used by the acceptance suite and the examples."""

from __future__ import annotations

from .operator import (
    Det,
    GardingOperator,
    LinearTransform,
    MaLag,
    Norm2Det,
    Product,
    QuadC,
    RadialDerivative,
    SigmaK,
    trace_shift_map,
)


def certified_catalog() -> dict[str, GardingOperator]:
    """Operators for which determinant majorization is expected to hold.

    All are I-central.  ``norm2_det[3]`` is the one member that is not
    hyperbolic; it satisfies the diagonal coefficient condition instead.
    """
    ops: list[GardingOperator] = [
        Det(2), Det(3), Det(4),
        SigmaK(3, 2), SigmaK(4, 2), SigmaK(4, 3),
        MaLag(4), MaLag(6),
        QuadC(0.0), QuadC(0.5), QuadC(0.9),
        Norm2Det(3),
        LinearTransform(Det(2), trace_shift_map(2)),
        LinearTransform(Det(3), trace_shift_map(3)),
        Product(SigmaK(3, 2), Det(3)),
        RadialDerivative(Det(4)),
    ]
    return {g.name: g for g in ops}


def hyperbolic_catalog() -> dict[str, GardingOperator]:
    return {k: g for k, g in certified_catalog().items() if g.flags["garding_dirichlet"]}
