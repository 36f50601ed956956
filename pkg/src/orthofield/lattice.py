"""Integer lattice geometry: sites, rectangles, and d-dimensional prefix sums.

All partial-sum machinery works with dense arrays indexed by rectangles
``[lo, hi]`` in the coordinatewise order on Z^d.  Prefix tables store the
running sums ``S_m`` over ``[1, m]`` for every ``m`` up to the extent, and
arbitrary rectangular sums are recovered by inclusion-exclusion.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import prod

import numpy as np

Site = tuple[int, ...]

# Dense tables are capped well below addressable memory; desk-scale grids only.
MAX_TABLE_ENTRIES = 2**31


def as_site(coords) -> Site:
    """Coerce a coordinate sequence to a canonical site tuple."""
    site = tuple(int(c) for c in coords)
    if not site:
        raise ValueError("a lattice site needs at least one coordinate")
    return site


def unit(dim: int, axis: int) -> Site:
    """Canonical unit vector along ``axis`` (0-based) in dimension ``dim``."""
    if not 0 <= axis < dim:
        raise ValueError(f"axis {axis} out of range for dimension {dim}")
    return tuple(1 if q == axis else 0 for q in range(dim))


def add(i: Site, j: Site) -> Site:
    _check_dims(i, j)
    return tuple(a + b for a, b in zip(i, j))


def sub(i: Site, j: Site) -> Site:
    _check_dims(i, j)
    return tuple(a - b for a, b in zip(i, j))


def scale(k: int, i: Site) -> Site:
    return tuple(k * a for a in i)


def leq(i: Site, j: Site) -> bool:
    """Coordinatewise partial order: true iff ``i_q <= j_q`` for every axis."""
    _check_dims(i, j)
    return all(a <= b for a, b in zip(i, j))


def meet(i: Site, j: Site) -> Site:
    """Coordinatewise minimum (the lattice meet ``i ^ j``)."""
    _check_dims(i, j)
    return tuple(min(a, b) for a, b in zip(i, j))


def _check_dims(i: Site, j: Site) -> None:
    if len(i) != len(j):
        raise ValueError(f"dimension mismatch: {len(i)} vs {len(j)}")


@dataclass(frozen=True)
class Rectangle:
    """The discrete box ``[lo, hi] = {i : lo <= i <= hi}``, both ends included."""

    lo: Site
    hi: Site

    def __post_init__(self) -> None:
        _check_dims(self.lo, self.hi)
        if not leq(self.lo, self.hi):
            raise ValueError(f"empty rectangle: lo={self.lo} hi={self.hi}")
        if self.cardinality > MAX_TABLE_ENTRIES:
            raise ValueError(f"rectangle too large: {self.cardinality} points")

    @property
    def dim(self) -> int:
        return len(self.lo)

    @property
    def shape(self) -> Site:
        return tuple(h - l + 1 for l, h in zip(self.lo, self.hi))

    @property
    def cardinality(self) -> int:
        return prod(self.shape)

    def contains(self, site: Site) -> bool:
        return leq(self.lo, site) and leq(site, self.hi)

    def index_of(self, site: Site) -> Site:
        """0-based array index of ``site`` inside the box."""
        if not self.contains(site):
            raise ValueError(f"site {site} outside rectangle [{self.lo}, {self.hi}]")
        return sub(site, self.lo)

    def sites(self):
        """Iterate all sites in row-major (lexicographic) order."""
        ranges = [range(l, h + 1) for l, h in zip(self.lo, self.hi)]
        for coords in itertools.product(*ranges):
            yield coords


def box(lo, hi) -> Rectangle:
    return Rectangle(as_site(lo), as_site(hi))


@dataclass(frozen=True, eq=False)
class SummedAreaTable:
    """Accumulated sums over ``[1, extent]``: entry at ``m`` equals sum over ``[1, m]``."""

    values: np.ndarray

    @property
    def extent(self) -> Site:
        return tuple(self.values.shape)

    @property
    def dim(self) -> int:
        return self.values.ndim

    def corner(self, m: Site) -> float:
        """Prefix sum ``S_m``; zero when any coordinate of ``m`` is below 1."""
        if len(m) != self.dim:
            raise ValueError(f"dimension mismatch: {len(m)} vs {self.dim}")
        if any(c < 1 for c in m):
            return 0.0
        if any(c > e for c, e in zip(m, self.extent)):
            raise ValueError(f"index {m} beyond extent {self.extent}")
        return float(self.values[tuple(c - 1 for c in m)])


def prefix_sum(src: np.ndarray) -> SummedAreaTable:
    """Build the summed-area table of a dense array indexed over ``[1, n]``.

    Runs one cumulative sum per axis, so the cost is ``O(d * |n|)`` with
    64-bit float accumulation.
    """
    arr = np.asarray(src, dtype=np.float64)
    if arr.ndim < 1:
        raise ValueError("source array must have at least one axis")
    if arr.size > MAX_TABLE_ENTRIES:
        raise ValueError(f"table too large: {arr.size} entries")
    out = arr.copy()
    for axis in range(arr.ndim):
        np.cumsum(out, axis=axis, out=out)
    return SummedAreaTable(out)


def rect_sum(table: SummedAreaTable, rect: Rectangle) -> float:
    """Sum of the source array over ``rect`` by 2^d-term inclusion-exclusion."""
    if rect.dim != table.dim:
        raise ValueError(f"dimension mismatch: {rect.dim} vs {table.dim}")
    if any(l < 1 for l in rect.lo) or any(h > e for h, e in zip(rect.hi, table.extent)):
        raise ValueError(f"rectangle [{rect.lo}, {rect.hi}] outside [1, {table.extent}]")
    total = 0.0
    for mask in itertools.product((0, 1), repeat=rect.dim):
        corner = tuple(
            h if bit == 0 else l - 1 for bit, l, h in zip(mask, rect.lo, rect.hi)
        )
        total += (-1) ** sum(mask) * table.corner(corner)
    return total
