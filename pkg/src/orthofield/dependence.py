"""Weak-dependence coefficients of finite-range stationary fields.

All sums here are exact and finite: a finite window means only finitely many
lattice shifts produce a nonzero projection, a nonzero conditional norm, or a
nonzero resampling distance, and each term is an exact L2 quantity under the
product law.  No truncation heuristics enter anywhere.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import prod, sqrt

import numpy as np

from .functional import Factor, FiniteRangeFunctional
from .lattice import Site
from .projection import (
    Corner,
    Halfspace,
    cond_expect,
    kernel_shift_candidates,
    kernel_sum,
    project_full,
)

# Scale-aware centering tolerance.
_CENTER_RTOL = 1e-12

# Dependence terms below this relative size are treated as the exact zeros they are.
_TERM_DROP = 1e-14


def _require_centered(f: FiniteRangeFunctional) -> None:
    if abs(f.expectation()) > _CENTER_RTOL * (1.0 + f.norm()):
        raise ValueError("functional must be centered")


@dataclass(frozen=True)
class MartingaleKernel:
    """The summed origin projections of a centered functional.

    ``d0`` generates the approximating orthomartingale via its lattice shifts;
    ``sigma2`` is its squared L2 norm, the limit variance of normalized partial
    sums.  ``martingale_violation`` records the largest deviation of the
    one-step conditional expectations from zero (an exact-zero diagnostic).
    """

    d0: FiniteRangeFunctional
    sigma2: float
    martingale_violation: float


def hannan_profile(f: FiniteRangeFunctional) -> dict[Site, float]:
    """Hannan coefficients: L2 norms of the origin projections of all shifts.

    Keys are the shifts with a nonzero projection; the Hannan sum is the sum
    of the values.  Requires a centered functional.
    """
    _require_centered(f)
    drop = _TERM_DROP * (1.0 + f.norm())
    origin = (0,) * f.dim
    out: dict[Site, float] = {}
    for i in kernel_shift_candidates(f):
        value = project_full(f.shift(i), origin).norm()
        if value > drop:
            out[i] = value
    return out


def martingale_kernel(f: FiniteRangeFunctional) -> MartingaleKernel:
    """Kernel of the orthomartingale approximation, with its exact variance."""
    _require_centered(f)
    d0 = kernel_sum(f)
    violation = 0.0
    for axis in range(f.dim):
        violation = max(violation, cond_expect(d0, Halfspace(axis, -1)).deviation())
    return MartingaleKernel(d0=d0, sigma2=d0.inner(d0), martingale_violation=violation)


def physical_dependence(f: FiniteRangeFunctional) -> dict[Site, float]:
    """Physical dependence measure: L2 distance after resampling one site.

    For each window site the innovation there is replaced by an independent
    copy; the copy lives on a fresh site outside the window so the joint law
    of the pair is enumerated exactly.  Sites outside the window contribute
    zero and are omitted.
    """
    if f.is_zero:
        return {}
    drop = _TERM_DROP * (1.0 + f.norm())
    spare = max(s[0] for s in f.window) + 1
    out: dict[Site, float] = {}
    for site in f.window:
        star = (spare,) + site[1:]
        relocated = FiniteRangeFunctional(
            f.law,
            f.dim,
            tuple(
                (
                    c,
                    tuple(
                        Factor(star, fac.kind, fac.arg) if fac.site == site else fac
                        for fac in factors
                    ),
                )
                for c, factors in f.terms
            ),
        )
        value = (f - relocated).norm()
        if value > drop:
            out[site] = value
    return out


def maxwell_woodroofe_profile(f: FiniteRangeFunctional) -> dict[Site, float]:
    """Normalized conditional-norm coefficients over the positive orthant.

    For each positive lattice index ``k`` the value is the L2 norm of the
    conditional expectation of the field at ``k`` given the origin corner,
    divided by the square root of the index product.  Once every coordinate of
    ``k`` exceeds the window diameter the conditional expectation integrates
    the whole window out and the term vanishes, so the support is finite.
    """
    _require_centered(f)
    if f.is_zero:
        return {}
    drop = _TERM_DROP * (1.0 + f.norm())
    window = f.window
    kmax = [max((-s[axis] for s in window), default=0) for axis in range(f.dim)]
    if any(k < 1 for k in kmax):
        return {}
    origin = Corner((0,) * f.dim)
    out: dict[Site, float] = {}
    for k in itertools.product(*(range(1, m + 1) for m in kmax)):
        if not any(all(kq <= -sq for kq, sq in zip(k, s)) for s in window):
            continue
        g = cond_expect(f.shift(k), origin)
        value = g.norm()
        if value > drop:
            out[k] = value / sqrt(prod(k))
    return out


@dataclass(frozen=True)
class DependenceProfile:
    """All per-site dependence coefficients of one functional, with totals."""

    hannan_terms: dict[Site, float]
    hannan_total: float
    delta_terms: dict[Site, float]
    delta_total: float
    wm_terms: dict[Site, float]
    wm_total: float
    sigma2: float


def dependence_profile(f: FiniteRangeFunctional) -> DependenceProfile:
    """Bundle the Hannan, physical-dependence, and conditional-norm coefficients."""
    hannan = hannan_profile(f)
    delta = physical_dependence(f)
    wm = maxwell_woodroofe_profile(f)
    return DependenceProfile(
        hannan_terms=hannan,
        hannan_total=sum(hannan.values()),
        delta_terms=delta,
        delta_total=sum(delta.values()),
        wm_terms=wm,
        wm_total=sum(wm.values()),
        sigma2=martingale_kernel(f).sigma2,
    )


def tail_sum_inequality(a: np.ndarray) -> tuple[float, float, bool]:
    """Check that weighted tail-RMS sums dominate the plain sum of an array.

    For a nonnegative array over ``[1, N]^d``, compares
    ``sum_n |n|^{-1/2} (sum_{k >= n} a_k^2)^{1/2}`` (lhs) against
    ``2^{-d} sum_k a_k`` (rhs) and reports whether ``lhs >= rhs``.
    """
    arr = np.asarray(a, dtype=np.float64)
    if arr.ndim < 1:
        raise ValueError("array must have at least one axis")
    if np.any(arr < 0):
        raise ValueError("array entries must be nonnegative")
    # Suffix sums of squares: reverse, accumulate, reverse, per axis.
    tails = arr**2
    for axis in range(arr.ndim):
        tails = np.flip(np.cumsum(np.flip(tails, axis=axis), axis=axis), axis=axis)
    grids = np.meshgrid(
        *(np.arange(1, s + 1, dtype=np.float64) for s in arr.shape), indexing="ij"
    )
    sizes = np.ones_like(tails)
    for g in grids:
        sizes = sizes * g
    lhs = float(np.sum(np.sqrt(tails) / np.sqrt(sizes)))
    rhs = float(np.sum(arr)) / 2**arr.ndim
    return lhs, rhs, bool(lhs >= rhs * (1.0 - 1e-12))
