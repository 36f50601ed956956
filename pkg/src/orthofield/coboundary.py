"""Orthomartingale coboundary decomposition of banded centered functionals.

A functional of order ``m`` (measurable within level ``m`` and conditionally
centered below level ``-m`` on every axis) splits into ``2^d`` components
indexed by axis subsets: for each subset the component is a martingale
difference along the member axes, and the remaining axes contribute telescoping
one-step difference operators.  Both building operators are exact finite sums
for finite-range inputs, with ranges read off the window; decomposition always
verifies the reconstruction identity before returning.
"""

from __future__ import annotations

from dataclasses import dataclass

from .functional import FiniteRangeFunctional, zero
from .lattice import unit
from .projection import Halfspace, cond_expect, kernel_sum, project_line

# Verified bounds enforced by decompose().
RESIDUAL_TOL = 1e-9
MARTINGALE_TOL = 1e-10
_CHECK_TOL = 1e-10


def check_order(f: FiniteRangeFunctional, m: int) -> bool:
    """True iff ``f`` is banded at order ``m`` on every axis.

    Two conditions per axis: conditioning at level ``-m`` annihilates ``f``,
    and conditioning at level ``m`` reproduces it.
    """
    return not order_violations(f, m)


def order_violations(f: FiniteRangeFunctional, m: int) -> list[tuple[int, str, float]]:
    """All per-axis violations of the order-``m`` band conditions."""
    if m < 1:
        raise ValueError("order must be a positive integer")
    out = []
    for axis in range(f.dim):
        low = cond_expect(f, Halfspace(axis, -m)).deviation()
        if low > _CHECK_TOL:
            out.append((axis, "conditional expectation below level -m is nonzero", low))
        high = f.deviation(cond_expect(f, Halfspace(axis, m)))
        if high > _CHECK_TOL:
            out.append((axis, "not measurable at level m", high))
    return out


def center(g: FiniteRangeFunctional, m: int) -> FiniteRangeFunctional:
    """Project ``g`` into the order-``m`` band by removing each axis's deep past.

    Applies ``I`` minus the level ``-m`` conditioning on every axis in turn;
    idempotent on inputs already in the band.  The window must lie within
    ``[-m, m]^d``.
    """
    if m < 1:
        raise ValueError("order must be a positive integer")
    if any(abs(c) > m for s in g.window for c in s):
        raise ValueError(f"window {g.window} exceeds the box [-{m}, {m}]^{g.dim}")
    out = g
    for axis in range(g.dim):
        out = out - cond_expect(out, Halfspace(axis, -m))
    return out


def martingale_op(f: FiniteRangeFunctional, axis: int) -> FiniteRangeFunctional:
    """Sum of origin line projections over all shifts of ``f`` along one axis.

    The output is a martingale difference along ``axis``: its one-step past
    conditional expectation vanishes and its window keeps nonpositive
    coordinates on that axis.
    """
    if not 0 <= axis < f.dim:
        raise ValueError(f"axis {axis} out of range for dimension {f.dim}")
    e = unit(f.dim, axis)
    out = zero(f.law, f.dim)
    for c in f.axis_coords(axis):
        shifted = f.shift(tuple(-c * x for x in e))
        out = out + project_line(shifted, axis, 0)
    return out


def transfer_op(f: FiniteRangeFunctional, axis: int) -> FiniteRangeFunctional:
    """The transfer component along one axis: the generator of the telescoping part.

    Exact finite double sum over (level, shift) pairs read off the window:
    nonnegative levels collect the negatively shifted projections with a minus
    sign, negative levels collect the nonnegatively shifted ones with a plus
    sign.
    """
    if not 0 <= axis < f.dim:
        raise ValueError(f"axis {axis} out of range for dimension {f.dim}")
    coords = f.axis_coords(axis)
    if not coords:
        return zero(f.law, f.dim)
    e = unit(f.dim, axis)
    w_lo, w_hi = coords[0], coords[-1]
    out = zero(f.law, f.dim)
    for level in range(0, w_hi):
        for c in coords:
            k = level - c
            if k <= -1:
                shifted = f.shift(tuple(k * x for x in e))
                out = out - project_line(shifted, axis, level)
    for level in range(w_lo, 0):
        for c in coords:
            k = level - c
            if k >= 0:
                shifted = f.shift(tuple(k * x for x in e))
                out = out + project_line(shifted, axis, level)
    return out


@dataclass(frozen=True)
class CoboundaryParts:
    """Verified coboundary components of one functional.

    ``components`` maps the d-bit axis-subset mask (bit q set means axis q
    carries the martingale operator) to its component.  ``residual`` is the
    verified bound on the reconstruction deviation, ``kernel_residual`` the
    deviation of the all-axes component from the summed origin projections,
    and ``martingale_violation`` the largest one-step conditional expectation
    across components and their martingale axes.
    """

    order: int
    dim: int
    components: dict[int, FiniteRangeFunctional]
    residual: float
    kernel_residual: float
    martingale_violation: float

    def component(self, axes: frozenset[int] | set[int]) -> FiniteRangeFunctional:
        return self.components[sum(1 << q for q in axes)]


def decompose(
    f: FiniteRangeFunctional,
    m: int,
    residual_tol: float = RESIDUAL_TOL,
    martingale_tol: float = MARTINGALE_TOL,
) -> CoboundaryParts:
    """Compute and verify all ``2^d`` coboundary components of an order-``m`` functional.

    Raises ``ValueError`` naming the violated axis and condition when ``f`` is
    not banded at order ``m``, and ``ArithmeticError`` if any verified bound
    exceeds its tolerance (callers never receive unverified parts).
    """
    violations = order_violations(f, m)
    if violations:
        axis, what, size = violations[0]
        raise ValueError(f"order-{m} band condition fails on axis {axis}: {what} ({size:.3e})")

    d = f.dim
    components: dict[int, FiniteRangeFunctional] = {}
    for mask in range(1 << d):
        h = f
        for axis in range(d):
            h = martingale_op(h, axis) if mask >> axis & 1 else transfer_op(h, axis)
        components[mask] = h

    residual = reconstruct_sum(components, f.dim).deviation(f)
    kernel_residual = components[(1 << d) - 1].deviation(kernel_sum(f))
    martingale_violation = 0.0
    for mask, h in components.items():
        for axis in range(d):
            if mask >> axis & 1:
                one_step = cond_expect(h, Halfspace(axis, -1)).deviation()
                martingale_violation = max(martingale_violation, one_step)
                over = [s for s in h.essential_window() if s[axis] > 0]
                if over:
                    raise ArithmeticError(
                        f"component {mask:b} reads sites {over} above level 0 on axis {axis}"
                    )

    if residual > residual_tol:
        raise ArithmeticError(f"reconstruction residual {residual:.3e} exceeds {residual_tol}")
    if kernel_residual > residual_tol:
        raise ArithmeticError(f"kernel identity residual {kernel_residual:.3e} exceeds {residual_tol}")
    if martingale_violation > martingale_tol:
        raise ArithmeticError(
            f"martingale property violation {martingale_violation:.3e} exceeds {martingale_tol}"
        )
    return CoboundaryParts(
        order=m,
        dim=d,
        components=components,
        residual=residual,
        kernel_residual=kernel_residual,
        martingale_violation=martingale_violation,
    )


def reconstruct(parts: CoboundaryParts) -> FiniteRangeFunctional:
    """Reassemble the functional from verified parts."""
    return reconstruct_sum(parts.components, parts.dim)


def reconstruct_sum(
    components: dict[int, FiniteRangeFunctional], dim: int
) -> FiniteRangeFunctional:
    """Sum each component through the one-step difference operators of its complement axes.

    The empty product of difference operators is the identity, so the all-axes
    component enters as is.
    """
    if set(components) != set(range(1 << dim)):
        missing = sorted(set(range(1 << dim)) - set(components))
        raise ValueError(f"missing components for masks {missing}")
    law = components[0].law
    total = zero(law, dim)
    for mask in range(1 << dim):
        g = components[mask]
        for axis in range(dim):
            if not mask >> axis & 1:
                g = g - g.shift(unit(dim, axis))
        total = total + g
    return total
