"""A martingale difference whose projective sum stays bounded while its
resampling sums diverge.

Stacked indicator patterns of growing depth keep the Hannan total below
sqrt(zeta(2)) at every truncation, yet the physical-dependence total grows
without bound: summability of origin projections is strictly weaker than
summability of resampling distances.
"""

from orthofield import comparison_report, embed_diagonal, truncated_martingale
from orthofield.counterexample import HANNAN_CEILING
from orthofield.dependence import hannan_profile, physical_dependence

## Exact dependence totals per truncation depth.
report = comparison_report([2, 3, 4, 5, 8, 10])
print(f"hannan ceiling sqrt(zeta(2)) = {HANNAN_CEILING:.6f}")
print(f"{'N':>3} {'hannan':>10} {'delta':>10} {'delta lower bound':>18}  mode")
for row in report.rows:
    delta = f"{row.delta_total:10.4f}" if row.delta_total is not None else "       n/a"
    print(f"{row.n_max:3d} {row.hannan_total:10.6f} {delta} "
          f"{row.delta_lower_bound:18.4f}  {row.mode}")

print("doubling ratios of the resampling total:")
for n, ratio in sorted(report.growth_ratios.items()):
    print(f"  N={n} -> 2N: {ratio:.3f}")

## The truncations are adapted martingale differences with a single Hannan
## term: all the dependence sits at the origin projection.
f4 = truncated_martingale(4)
print("hannan profile of the depth-4 truncation:", hannan_profile(f4))
print("number of sites with nonzero resampling distance:",
      len(physical_dependence(f4)))

## The same construction transfers to higher dimension along the diagonal,
## which is totally ordered, so every filtration argument carries over.
g = embed_diagonal(f4, 2)
print("diagonal embedding window (first three sites):", g.window[:3])
print("embedded hannan profile:", hannan_profile(g))
