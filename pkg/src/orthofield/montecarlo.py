"""Seeded simulation of partial-sum and orthomartingale fields with maximal statistics.

Every replicate derives its own innovation stream from ``(seed, replicate)``
and evaluates the field and its orthomartingale approximation on the same
sample, so pathwise comparisons are genuinely coupled.  Aggregation folds
replicates in index order, which makes every statistic a pure function of
``(functional, grid, seed, replicates)`` regardless of worker count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import floor, prod, sqrt

import numpy as np

from .dependence import MartingaleKernel, hannan_profile, martingale_kernel
from .functional import INDICATOR, VALUE, FiniteRangeFunctional
from .innovation import FieldSample, sample_region
from .lattice import Rectangle, Site, SummedAreaTable, prefix_sum

# Declared Monte Carlo slack for population inequalities: 10 percent plus
# three standard errors of the estimated side.
MC_SLACK_FACTOR = 1.10
MC_SLACK_SE = 3.0


def _map_replicates(fn, replicates: int, threads: int = 1) -> list:
    """Run ``fn(0..replicates-1)``, folding results in replicate order."""
    if threads <= 1:
        return [fn(r) for r in range(replicates)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, range(replicates)))


def window_radius(f: FiniteRangeFunctional) -> int:
    """Sampling margin that covers the window of ``f`` and of its kernel."""
    r = 0
    for axis in range(f.dim):
        coords = f.axis_coords(axis)
        if coords:
            r = max(r, abs(coords[0]), abs(coords[-1]), coords[-1] - coords[0])
    return r


def sample_rect(f: FiniteRangeFunctional, n: Site) -> Rectangle:
    """The region whose innovations determine the field on ``[1, n]``."""
    r = window_radius(f)
    return Rectangle(tuple(1 - r for _ in n), tuple(c + r for c in n))


def _grid_values(f: FiniteRangeFunctional, sample: FieldSample, n: Site) -> np.ndarray:
    """Evaluate the shifted functional at every grid point of ``[1, n]``."""
    shape = tuple(int(c) for c in n)
    lo = sample.region.lo
    out = np.zeros(shape, dtype=np.float64)
    for coeff, factors in f.terms:
        arr = np.full(shape, coeff, dtype=np.float64)
        for fac in factors:
            sl = tuple(
                slice(s - l + 1, s - l + 1 + nq) for s, l, nq in zip(fac.site, lo, shape)
            )
            vals = sample.values[sl]
            if fac.kind == VALUE:
                v = vals
            elif fac.kind == INDICATOR:
                v = (vals == fac.arg).astype(np.float64)
            else:
                v = vals**fac.arg
            arr = arr * v
        out += arr
    return out


def simulate_field(
    f: FiniteRangeFunctional, n: Site, seed: int, replicate: int = 0
) -> tuple[SummedAreaTable, np.ndarray]:
    """One replicate of the stationary field on ``[1, n]``: prefix table and raw values."""
    n = tuple(int(c) for c in n)
    sample = sample_region(sample_rect(f, n), f.law, seed, replicate)
    x = _grid_values(f, sample, n)
    return prefix_sum(x), x


def simulate_orthomartingale(
    f: FiniteRangeFunctional,
    n: Site,
    seed: int,
    replicate: int = 0,
    kernel: MartingaleKernel | None = None,
) -> SummedAreaTable:
    """The approximating orthomartingale on the same innovation sample as the field."""
    n = tuple(int(c) for c in n)
    if kernel is None:
        kernel = martingale_kernel(f)
    sample = sample_region(sample_rect(f, n), f.law, seed, replicate)
    return prefix_sum(_grid_values(kernel.d0, sample, n))


def _coupled(f, kernel, n, seed, replicate) -> tuple[np.ndarray, np.ndarray]:
    sample = sample_region(sample_rect(f, n), f.law, seed, replicate)
    s = prefix_sum(_grid_values(f, sample, n)).values
    m = prefix_sum(_grid_values(kernel.d0, sample, n)).values
    return s, m


@dataclass(frozen=True)
class GapStatistic:
    """Normalized maximal gaps between the field's partial sums and its orthomartingale."""

    grid_n: Site
    replicates: int
    samples: tuple[float, ...]
    mean: float
    median: float
    q75: float
    max: float


def approximation_gap(
    f: FiniteRangeFunctional, n: Site, replicates: int, seed: int, threads: int = 1
) -> GapStatistic:
    """Sample ``max_m |S_m - M_m| / |n|^(1/2)`` over coupled replicates."""
    n = tuple(int(c) for c in n)
    kernel = martingale_kernel(f)
    norm = sqrt(prod(n))

    def one(r: int) -> float:
        s, m = _coupled(f, kernel, n, seed, r)
        return float(np.max(np.abs(s - m))) / norm

    samples = _map_replicates(one, replicates, threads)
    arr = np.asarray(samples)
    return GapStatistic(
        grid_n=n,
        replicates=replicates,
        samples=tuple(samples),
        mean=float(arr.mean()),
        median=float(np.median(arr)),
        q75=float(np.quantile(arr, 0.75)),
        max=float(arr.max()),
    )


@dataclass(frozen=True)
class CairoliCheck:
    """Monte Carlo ratio of the maximal moment to the corner moment of an orthomartingale."""

    ratio: float
    bound: float
    se_ratio: float
    num: float
    den: float
    replicates: int

    @property
    def holds(self) -> bool:
        return self.ratio <= self.bound * MC_SLACK_FACTOR + MC_SLACK_SE * self.se_ratio


def cairoli_ratio(
    f: FiniteRangeFunctional,
    n: Site,
    replicates: int,
    seed: int,
    p: float = 2.0,
    threads: int = 1,
) -> CairoliCheck:
    """Estimate ``E (max |M_i|)^p / E |M_n|^p`` against the ``(p/(p-1))^(dp)`` bound."""
    n = tuple(int(c) for c in n)
    kernel = martingale_kernel(f)
    if kernel.sigma2 <= 0.0:
        raise ValueError("degenerate kernel: sigma2 is zero")
    bound = (p / (p - 1.0)) ** (len(n) * p)

    def one(r: int) -> tuple[float, float]:
        m = simulate_orthomartingale(f, n, seed, r, kernel=kernel).values
        return float(np.max(np.abs(m)) ** p), float(abs(m[tuple(c - 1 for c in n)]) ** p)

    pairs = _map_replicates(one, replicates, threads)
    num = np.asarray([a for a, _ in pairs])
    den = np.asarray([b for _, b in pairs])
    ratio = float(num.mean() / den.mean())
    # Delta-method standard error of a ratio of dependent means.
    r_reps = len(pairs)
    cov = np.cov(num, den, ddof=1)
    grad = np.array([1.0 / den.mean(), -num.mean() / den.mean() ** 2])
    se = float(sqrt(max(grad @ cov @ grad, 0.0) / r_reps))
    return CairoliCheck(
        ratio=ratio, bound=bound, se_ratio=se, num=float(num.mean()), den=float(den.mean()),
        replicates=replicates,
    )


@dataclass(frozen=True)
class TruncatedMomentRow:
    """One cell of the uniform-integrability table."""

    grid_n: Site
    level: float
    value: float


def uniform_integrability_diagnostic(
    f: FiniteRangeFunctional,
    n_list,
    levels,
    replicates: int,
    seed: int,
    threads: int = 1,
) -> list[TruncatedMomentRow]:
    """Truncated second moments of normalized orthomartingale maxima.

    For each grid and each truncation level ``a``, estimates
    ``E[Y^2; Y^2 > a]`` with ``Y`` the normalized rectangular maximum; rows
    are nonincreasing in ``a`` by construction.
    """
    kernel = martingale_kernel(f)
    if kernel.sigma2 <= 0.0:
        raise ValueError("degenerate kernel: sigma2 is zero")
    rows: list[TruncatedMomentRow] = []
    for n in n_list:
        n = tuple(int(c) for c in n)
        norm = sqrt(prod(n))

        def one(r: int) -> float:
            m = simulate_orthomartingale(f, n, seed, r, kernel=kernel).values
            return float(np.max(np.abs(m))) / norm

        y = np.asarray(_map_replicates(one, replicates, threads))
        y2 = y**2
        for a in levels:
            rows.append(
                TruncatedMomentRow(
                    grid_n=n, level=float(a), value=float(np.mean(y2 * (y2 > a)))
                )
            )
    return rows


@dataclass(frozen=True)
class MaximalInequalityCheck:
    """Monte Carlo maximal-partial-sum norm against its exact projective bound."""

    lhs: float
    rhs: float
    se_lhs: float
    grid_n: Site
    replicates: int

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs * MC_SLACK_FACTOR + MC_SLACK_SE * self.se_lhs


def maximal_inequality_check(
    f: FiniteRangeFunctional, n: Site, replicates: int, seed: int, threads: int = 1
) -> MaximalInequalityCheck:
    """Compare ``|| max_m S_m ||_2`` against ``2^d |n|^(1/2)`` times the Hannan sum."""
    n = tuple(int(c) for c in n)
    rhs = 2 ** len(n) * sqrt(prod(n)) * sum(hannan_profile(f).values())

    def one(r: int) -> float:
        s, _ = simulate_field(f, n, seed, r)
        return float(np.max(s.values)) ** 2

    v = np.asarray(_map_replicates(one, replicates, threads))
    mean = float(v.mean())
    lhs = sqrt(max(mean, 0.0))
    se_mean = float(v.std(ddof=1)) / sqrt(len(v))
    se_lhs = se_mean / (2.0 * lhs) if lhs > 0 else se_mean
    return MaximalInequalityCheck(
        lhs=lhs, rhs=rhs, se_lhs=se_lhs, grid_n=n, replicates=replicates
    )


@dataclass(frozen=True)
class PathSample:
    """One replicate of the normalized partial-sum path on a time grid in [0,1]^d."""

    grid_n: Site
    t_grid: tuple[tuple[float, ...], ...]
    values: dict[tuple[float, ...], float]
    replicate: int
    seed: int

    def value_at(self, t) -> float:
        return self.values[tuple(float(c) for c in t)]


def uniform_grid(dim: int, resolution: int) -> tuple[tuple[float, ...], ...]:
    """The dyadic-style grid ``{0, 1/res, ..., 1}^d`` in row-major order."""
    if resolution < 1:
        raise ValueError("resolution must be at least 1")
    axis = [i / resolution for i in range(resolution + 1)]
    out = [()]
    for _ in range(dim):
        out = [t + (a,) for t in out for a in axis]
    return tuple(out)


def sample_paths(
    f: FiniteRangeFunctional,
    n: Site,
    t_grid,
    replicates: int,
    seed: int,
    threads: int = 1,
) -> list[PathSample]:
    """Normalized path samples ``S_{floor(n t)} / |n|^(1/2)`` at the given times.

    A time with any coordinate hitting index zero evaluates to the empty sum.
    """
    n = tuple(int(c) for c in n)
    grid = tuple(tuple(float(c) for c in t) for t in t_grid)
    norm = sqrt(prod(n))

    def one(r: int) -> PathSample:
        s, _ = simulate_field(f, n, seed, r)
        values = {
            t: s.corner(tuple(floor(nq * tq) for nq, tq in zip(n, t))) / norm for t in grid
        }
        return PathSample(grid_n=n, t_grid=grid, values=values, replicate=r, seed=seed)

    return _map_replicates(one, replicates, threads)
