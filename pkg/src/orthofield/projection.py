"""Exact conditional expectations and projection operators for the Bernoulli filtration.

The filtration at lattice index ``j`` is generated by all innovations at sites
coordinatewise at most ``j``; the one-axis filtration at level ``l`` along axis
``q`` is generated by all sites whose q-th coordinate is at most ``l``.  Under
the product law, conditioning on either is exact partial integration: every
window site outside the conditioning set is averaged out.  Filtrations are
never materialized; a conditioning index plus the law determines the operator.
Levels beyond the window's coordinate range act as the infinite-level
sentinels (conditioning on everything / on nothing).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .functional import FiniteRangeFunctional, zero
from .lattice import Site, leq


class Corner(NamedTuple):
    """Condition on all innovations at sites coordinatewise at most ``site``."""

    site: Site


class Halfspace(NamedTuple):
    """Condition on all innovations whose ``axis`` coordinate is at most ``level``."""

    axis: int
    level: int


ConditioningIndex = Corner | Halfspace


def cond_expect(f: FiniteRangeFunctional, cond: ConditioningIndex) -> FiniteRangeFunctional:
    """Exact conditional expectation; integrates out all non-measurable sites."""
    if isinstance(cond, Corner):
        corner = tuple(int(c) for c in cond.site)
        if len(corner) != f.dim:
            raise ValueError(f"corner {corner} has wrong dimension")
        return f.integrate_sites(lambda s: leq(s, corner))
    axis, level = int(cond.axis), int(cond.level)
    if not 0 <= axis < f.dim:
        raise ValueError(f"axis {axis} out of range for dimension {f.dim}")
    return f.integrate_sites(lambda s: s[axis] <= level)


def project_line(f: FiniteRangeFunctional, axis: int, level: int) -> FiniteRangeFunctional:
    """One-axis projection: conditional expectation at ``level`` minus at ``level - 1``.

    Vanishes identically when no window site has the given coordinate, since
    both conditionings then integrate out the same sites.
    """
    if not 0 <= axis < f.dim:
        raise ValueError(f"axis {axis} out of range for dimension {f.dim}")
    if level not in f.axis_coords(axis):
        return zero(f.law, f.dim)
    return cond_expect(f, Halfspace(axis, level)) - cond_expect(f, Halfspace(axis, level - 1))


def project_full(f: FiniteRangeFunctional, j: Site) -> FiniteRangeFunctional:
    """Full projection at lattice index ``j``: the composition over all axes.

    In dimension two this is the four-term inclusion-exclusion of corner
    conditional expectations.
    """
    j = tuple(int(c) for c in j)
    if len(j) != f.dim:
        raise ValueError(f"index {j} has wrong dimension")
    out = f
    for axis in range(f.dim):
        out = project_line(out, axis, j[axis])
        if out.is_zero:
            return out
    return out


def projective_decomposition(f: FiniteRangeFunctional) -> dict[Site, FiniteRangeFunctional]:
    """All lattice indices with a nonzero projection of ``f``, with their projections.

    Only indices whose every coordinate appears in the window can contribute.
    The projections sum back to ``f`` minus its mean (projections annihilate
    constants), so they reconstruct every centered functional exactly.
    """
    if f.is_zero:
        return {}
    drop = 1e-12 * (1.0 + f.norm())
    out: dict[Site, FiniteRangeFunctional] = {}
    for j in itertools.product(*(f.axis_coords(axis) for axis in range(f.dim))):
        g = project_full(f, j)
        if not g.is_zero and g.norm() > drop:
            out[j] = g
    return out


def kernel_shift_candidates(f: FiniteRangeFunctional) -> Iterable[Site]:
    """Shifts ``i`` for which the projection at the origin of the shifted field can be nonzero.

    The shifted window must meet every coordinate hyperplane through the
    origin, so each coordinate of ``i`` ranges over the negated window
    coordinates of its axis.
    """
    if f.is_zero:
        return ()
    axes = [tuple(-c for c in f.axis_coords(axis)) for axis in range(f.dim)]
    return itertools.product(*axes)


def kernel_sum(f: FiniteRangeFunctional) -> FiniteRangeFunctional:
    """The exact finite sum of origin projections over all shifts of ``f``.

    For finite-range inputs this is the martingale kernel generating the
    approximating orthomartingale.
    """
    origin = (0,) * f.dim
    out = zero(f.law, f.dim)
    for i in kernel_shift_candidates(f):
        out = out + project_full(f.shift(i), origin)
    return out


@dataclass(frozen=True)
class ProjectionIdentityReport:
    """Max violations observed across the projection identity suite."""

    commutation: float
    orthogonality: float
    annihilation: float
    idempotence: float
    pairs_checked: int

    @property
    def max_violation(self) -> float:
        return max(self.commutation, self.orthogonality, self.annihilation, self.idempotence)


def projection_identity_report(
    f: FiniteRangeFunctional,
    g: FiniteRangeFunctional,
    indices: Iterable[Site],
) -> ProjectionIdentityReport:
    """Check commutation, orthogonality, annihilation, and idempotence of projections.

    For every ordered pair of distinct indices ``i, j`` from ``indices``:
    ``<P_i f, P_j g> = 0`` and ``P_i (P_j f) = 0``; line projections along
    different axes commute; and the full projection is idempotent at each
    index.
    """
    idx = [tuple(int(c) for c in i) for i in indices]
    proj_f = {i: project_full(f, i) for i in idx}
    proj_g = {i: project_full(g, i) for i in idx}

    commutation = 0.0
    for i, j in itertools.combinations(idx, 2):
        for q1, q2 in itertools.combinations(range(f.dim), 2):
            a = project_line(project_line(f, q1, i[q1]), q2, j[q2])
            b = project_line(project_line(f, q2, j[q2]), q1, i[q1])
            commutation = max(commutation, a.deviation(b))

    orthogonality = 0.0
    annihilation = 0.0
    pairs = 0
    for i, j in itertools.permutations(idx, 2):
        pairs += 1
        orthogonality = max(orthogonality, abs(proj_f[i].inner(proj_g[j])))
        annihilation = max(annihilation, project_full(proj_f[j], i).deviation())

    idempotence = 0.0
    for i in idx:
        idempotence = max(idempotence, project_full(proj_f[i], i).deviation(proj_f[i]))

    return ProjectionIdentityReport(
        commutation=commutation,
        orthogonality=orthogonality,
        annihilation=annihilation,
        idempotence=idempotence,
        pairs_checked=pairs,
    )
