"""Finite-range functionals of the innovation field and their exact L2 geometry.

A functional is a finite linear combination of product terms; each factor reads
one lattice site through an elementary map (the raw value, an indicator of one
alphabet point, or an integer power).  Because innovation sites are
independent, every expectation of a product term factorizes over sites, which
makes conditional expectations, inner products, and norms exact finite sums
without enumerating the window.  Dense value tables are kept for equality
testing only: syntactically different but equal functionals must compare equal.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from math import prod, sqrt
from typing import Callable, Iterable

import numpy as np

from .innovation import (
    DEFAULT_ENUM_CAP,
    Configuration,
    InnovationLaw,
    check_enum_cap,
)
from .lattice import Site, add as site_add

VALUE = "value"
INDICATOR = "indicator"
POWER = "power"

_KINDS = (VALUE, INDICATOR, POWER)

# Default tolerance for table comparisons; all exact identities leave orders of
# magnitude of headroom below it.
DEFAULT_TOL = 1e-10

# Mass budget that deviation() may attribute to negligible terms without
# materializing their sites.
DEFAULT_DEVIATION_BUDGET = 1e-12


@dataclass(frozen=True)
class Factor:
    """One elementary read of a single site."""

    site: Site
    kind: str = VALUE
    arg: float | int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "site", tuple(int(c) for c in self.site))
        if self.kind not in _KINDS:
            raise ValueError(f"unknown factor kind {self.kind!r}")
        if self.kind == VALUE and self.arg is not None:
            raise ValueError("value factors take no argument")
        if self.kind == INDICATOR:
            if self.arg is None:
                raise ValueError("indicator factors need a target value")
            object.__setattr__(self, "arg", float(self.arg))
        if self.kind == POWER:
            if self.arg is None or int(self.arg) < 0:
                raise ValueError("power factors need a nonnegative integer exponent")
            object.__setattr__(self, "arg", int(self.arg))

    def _sort_key(self):
        return (self.site, self.kind, float(self.arg) if self.arg is not None else float("-inf"))

    def values_on(self, law: InnovationLaw) -> np.ndarray:
        """The factor evaluated at every alphabet point."""
        base = np.asarray(law.values, dtype=np.float64)
        if self.kind == VALUE:
            return base
        if self.kind == INDICATOR:
            return (base == self.arg).astype(np.float64)
        return base**self.arg

    def evaluate(self, value: float) -> float:
        if self.kind == VALUE:
            return value
        if self.kind == INDICATOR:
            return 1.0 if value == self.arg else 0.0
        return value**self.arg


Term = tuple[float, tuple[Factor, ...]]


def _merge_terms(items: Iterable[tuple[float, Iterable[Factor]]]) -> tuple[Term, ...]:
    acc: dict[tuple[Factor, ...], float] = {}
    for coeff, factors in items:
        key = tuple(sorted(factors, key=Factor._sort_key))
        acc[key] = acc.get(key, 0.0) + float(coeff)
    merged = [(c, fs) for fs, c in acc.items() if c != 0.0]
    merged.sort(key=lambda t: tuple(f._sort_key() for f in t[1]))
    return tuple(merged)


@dataclass(frozen=True, eq=False)
class FiniteRangeFunctional:
    """A finite-range function of the innovation field.

    Instances are immutable value objects; build them with the module helpers
    (:func:`innovation_at`, :func:`indicator_at`, ...) or combine existing ones
    with ``+``, ``-``, ``*`` and :meth:`shift`.  Terms are always merged into a
    canonical order, so construction paths do not leak into results.
    """

    law: InnovationLaw
    dim: int
    terms: tuple[Term, ...]

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise ValueError("dimension must be at least 1")
        for _, factors in self.terms:
            for f in factors:
                if len(f.site) != self.dim:
                    raise ValueError(
                        f"factor site {f.site} has dimension {len(f.site)}, expected {self.dim}"
                    )

    # -- structure -----------------------------------------------------------

    @cached_property
    def window(self) -> tuple[Site, ...]:
        """Sorted distinct sites the terms read."""
        return tuple(sorted({f.site for _, fs in self.terms for f in fs}))

    @property
    def is_zero(self) -> bool:
        """Structurally zero (no terms); table-level zero is tested via deviation."""
        return not self.terms

    def axis_coords(self, axis: int) -> tuple[int, ...]:
        """Sorted distinct coordinates of the window along one axis."""
        return tuple(sorted({s[axis] for s in self.window}))

    @cached_property
    def _term_data(self):
        """Per term: (coeff, {site: alphabet vector}, {site: mean}, bound).

        The vector at a site is the product of all factor reads there; the mean
        is its expectation under the law; the bound is ``|coeff|`` times the
        product of max absolute vector entries (a sup-norm bound on the term).
        """
        probs = np.asarray(self.law.probs, dtype=np.float64)
        data = []
        for coeff, factors in self.terms:
            vecs: dict[Site, np.ndarray] = {}
            for f in factors:
                v = f.values_on(self.law)
                vecs[f.site] = vecs[f.site] * v if f.site in vecs else v
            means = {s: float(probs @ v) for s, v in vecs.items()}
            bound = abs(coeff) * prod(float(np.max(np.abs(v))) for v in vecs.values())
            data.append((coeff, vecs, means, bound))
        return data

    # -- algebra ---------------------------------------------------------------

    def _like(self, items) -> "FiniteRangeFunctional":
        return FiniteRangeFunctional(self.law, self.dim, _merge_terms(items))

    def _check_compatible(self, other: "FiniteRangeFunctional") -> None:
        if self.law != other.law:
            raise ValueError("functionals built on different innovation laws")
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def shift(self, i: Site) -> "FiniteRangeFunctional":
        """The shifted functional reading site ``s + i`` wherever this one reads ``s``."""
        i = tuple(int(c) for c in i)
        if len(i) != self.dim:
            raise ValueError(f"shift vector {i} has wrong dimension")
        return self._like(
            (c, [Factor(site_add(f.site, i), f.kind, f.arg) for f in fs])
            for c, fs in self.terms
        )

    def __add__(self, other: "FiniteRangeFunctional") -> "FiniteRangeFunctional":
        self._check_compatible(other)
        return self._like(itertools.chain(self.terms, other.terms))

    def __sub__(self, other: "FiniteRangeFunctional") -> "FiniteRangeFunctional":
        return self + (-other)

    def __neg__(self) -> "FiniteRangeFunctional":
        return self._like((-c, fs) for c, fs in self.terms)

    def __mul__(self, other):
        if isinstance(other, FiniteRangeFunctional):
            self._check_compatible(other)
            return self._like(
                (c1 * c2, fs1 + fs2)
                for c1, fs1 in self.terms
                for c2, fs2 in other.terms
            )
        return self._like((float(other) * c, fs) for c, fs in self.terms)

    __rmul__ = __mul__

    # -- evaluation ------------------------------------------------------------

    def evaluate(self, config: Configuration) -> float:
        """Evaluate on one configuration; every window site must be assigned."""
        assignment = config.assignment
        total = 0.0
        for coeff, factors in self.terms:
            val = coeff
            for f in factors:
                if f.site not in assignment:
                    raise ValueError(f"configuration does not assign site {f.site}")
                val *= f.evaluate(assignment[f.site])
            total += val
        return total

    # -- exact integration -------------------------------------------------------

    def integrate_sites(self, keep: Callable[[Site], bool]) -> "FiniteRangeFunctional":
        """Average out every window site for which ``keep`` is false.

        Exact: sites are independent, so each term's dropped sites contribute
        the expectation of their combined factor read.  This is the primitive
        behind all conditional expectations.
        """
        items = []
        for (coeff, factors), (_, _, means, _) in zip(self.terms, self._term_data):
            c = coeff
            kept = []
            dropped = set()
            for f in factors:
                if keep(f.site):
                    kept.append(f)
                else:
                    dropped.add(f.site)
            for site in dropped:
                c *= means[site]
            items.append((c, kept))
        return self._like(items)

    # -- L2 geometry ---------------------------------------------------------------

    def expectation(self) -> float:
        """Exact mean under the product law."""
        return float(
            sum(c * prod(means.values()) for (c, _, means, _) in self._term_data)
        )

    def inner(self, other: "FiniteRangeFunctional") -> float:
        """Exact inner product ``E[f g]``; factorizes over the union window."""
        self._check_compatible(other)
        probs = np.asarray(self.law.probs, dtype=np.float64)
        total = 0.0
        for c1, vecs1, means1, _ in self._term_data:
            for c2, vecs2, means2, _ in other._term_data:
                val = c1 * c2
                for site, v1 in vecs1.items():
                    v2 = vecs2.get(site)
                    val *= float(probs @ (v1 * v2)) if v2 is not None else means1[site]
                for site, m2 in means2.items():
                    if site not in vecs1:
                        val *= m2
                if val == 0.0:
                    continue
                total += val
        return total

    def norm(self) -> float:
        """Exact L2 norm."""
        return sqrt(max(self.inner(self), 0.0))

    # -- tables and comparison -------------------------------------------------------

    def materialize(self, cap: int = DEFAULT_ENUM_CAP) -> "ValueTable":
        """Dense value table over the window (canonical form for comparisons)."""
        sites = self.window
        check_enum_cap(len(sites), self.law, cap)
        return ValueTable(sites, self.law, _table_array(self, sites))

    def deviation(
        self,
        other: "FiniteRangeFunctional | None" = None,
        budget: float = DEFAULT_DEVIATION_BUDGET,
        cap: int = DEFAULT_ENUM_CAP,
    ) -> float:
        """Upper bound on the max pointwise difference from ``other`` (or from zero).

        Terms whose sup-norm bound is below ``budget / n_terms`` are not
        materialized; their bounds are added to the result instead, so the
        returned value always dominates the true max deviation while keeping
        the enumerated window small.
        """
        diff = self if other is None else self - other
        if diff.is_zero:
            return 0.0
        threshold = budget / len(diff.terms)
        big = []
        tiny_mass = 0.0
        for (coeff, factors), (_, _, _, bound) in zip(diff.terms, diff._term_data):
            if bound <= threshold:
                tiny_mass += bound
            else:
                big.append((coeff, factors))
        if not big:
            return tiny_mass
        core = FiniteRangeFunctional(diff.law, diff.dim, _merge_terms(big))
        sites = core.window
        check_enum_cap(len(sites), diff.law, cap)
        return float(np.max(np.abs(_table_array(core, sites)))) + tiny_mass

    def equal(
        self,
        other: "FiniteRangeFunctional",
        tol: float = DEFAULT_TOL,
        cap: int = DEFAULT_ENUM_CAP,
    ) -> bool:
        """Semantic equality: max table deviation at most ``tol``."""
        return self.deviation(other, budget=tol * 1e-3, cap=cap) <= tol

    def essential_window(self, budget: float = DEFAULT_DEVIATION_BUDGET) -> tuple[Site, ...]:
        """Window of the terms that carry more than negligible mass."""
        if self.is_zero:
            return ()
        threshold = budget / len(self.terms)
        sites = {
            f.site
            for (_, factors), (_, _, _, bound) in zip(self.terms, self._term_data)
            if bound > threshold
            for f in factors
        }
        return tuple(sorted(sites))


def _table_array(f: FiniteRangeFunctional, sites: tuple[Site, ...]) -> np.ndarray:
    """Dense evaluation over all configurations of ``sites`` (one axis per site)."""
    n = len(sites)
    pos = {s: k for k, s in enumerate(sites)}
    shape = (f.law.size,) * n
    out = np.zeros(shape, dtype=np.float64)
    for coeff, vecs, _, _ in f._term_data:
        arr = np.full(shape, coeff, dtype=np.float64) if n else np.float64(coeff)
        for site, v in vecs.items():
            axis_shape = [1] * n
            axis_shape[pos[site]] = f.law.size
            arr = arr * v.reshape(axis_shape)
        out = out + arr
    return out


@dataclass(frozen=True, eq=False)
class ValueTable:
    """Canonical dense form of a functional on a sorted site list.

    ``values[i1, ..., ik]`` is the functional evaluated on the configuration
    assigning alphabet point ``law.values[ij]`` to the j-th site.
    """

    sites: tuple[Site, ...]
    law: InnovationLaw
    values: np.ndarray

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values))) if self.values.size else 0.0

    def _expand(self, union: tuple[Site, ...]) -> np.ndarray:
        shape = [1] * len(union)
        src_axes = []
        for s in self.sites:
            src_axes.append(union.index(s))
        arr = self.values
        if not self.sites:
            return np.broadcast_to(arr, (self.law.size,) * len(union)) if union else arr
        order = np.argsort(src_axes)
        arr = np.transpose(arr, order)
        for k, axis in enumerate(sorted(src_axes)):
            shape[axis] = self.law.size
        arr = arr.reshape(shape)
        return np.broadcast_to(arr, (self.law.size,) * len(union))

    def max_deviation(self, other: "ValueTable") -> float:
        if self.law != other.law:
            raise ValueError("tables built on different laws")
        union = tuple(sorted(set(self.sites) | set(other.sites)))
        a = self._expand(union)
        b = other._expand(union)
        return float(np.max(np.abs(a - b))) if union else abs(float(a) - float(b))


# -- builders ----------------------------------------------------------------------


def zero(law: InnovationLaw, dim: int) -> FiniteRangeFunctional:
    return FiniteRangeFunctional(law, dim, ())


def constant(law: InnovationLaw, dim: int, value: float) -> FiniteRangeFunctional:
    return FiniteRangeFunctional(law, dim, _merge_terms([(float(value), ())]))


def innovation_at(law: InnovationLaw, site) -> FiniteRangeFunctional:
    """The coordinate functional reading the raw innovation at ``site``."""
    site = tuple(int(c) for c in site)
    return FiniteRangeFunctional(law, len(site), _merge_terms([(1.0, (Factor(site),))]))


def indicator_at(law: InnovationLaw, site, target: float) -> FiniteRangeFunctional:
    site = tuple(int(c) for c in site)
    return FiniteRangeFunctional(
        law, len(site), _merge_terms([(1.0, (Factor(site, INDICATOR, target),))])
    )


def power_at(law: InnovationLaw, site, exponent: int) -> FiniteRangeFunctional:
    site = tuple(int(c) for c in site)
    return FiniteRangeFunctional(
        law, len(site), _merge_terms([(1.0, (Factor(site, POWER, exponent),))])
    )


def from_terms(law: InnovationLaw, dim: int, spec) -> FiniteRangeFunctional:
    """Build from a declarative term list.

    ``spec`` is a sequence of ``{"coeff": float, "factors": [...]}`` entries;
    each factor is ``{"site": [...], "kind": "value"|"indicator"|"power",
    "arg": ...}`` (``arg`` omitted for plain values).  This is the wire format
    used by experiment configuration files.
    """
    items = []
    for entry in spec:
        factors = [
            Factor(tuple(int(c) for c in fd["site"]), fd.get("kind", VALUE), fd.get("arg"))
            for fd in entry.get("factors", [])
        ]
        items.append((float(entry["coeff"]), factors))
    return FiniteRangeFunctional(law, dim, _merge_terms(items))
