"""Weak-dependence coefficients of finite-range fields, all computed exactly.

Shows the three coefficient families side by side (projective, resampling,
conditional-norm) and the martingale kernel whose variance drives the
Gaussian limit.
"""

from orthofield import (
    InnovationLaw,
    dependence_profile,
    hannan_profile,
    innovation_at,
    martingale_kernel,
    maxwell_woodroofe_profile,
    physical_dependence,
)

law = InnovationLaw.rademacher()

## A one-dimensional moving average: innovation plus 0.5 times its lag.
f = innovation_at(law, (0,)) + 0.5 * innovation_at(law, (-1,))

print("Hannan coefficients (norms of origin projections of shifts):")
for site, value in sorted(hannan_profile(f).items()):
    print(f"  shift {site}: {value}")

print("physical dependence (resampling one site):")
for site, value in sorted(physical_dependence(f).items()):
    print(f"  site {site}: {value}")

print("conditional-norm coefficients over the positive orthant:")
for site, value in sorted(maxwell_woodroofe_profile(f).items()):
    print(f"  index {site}: {value}")

## The martingale kernel sums the origin projections of all shifts; for a
## linear functional the variance collapses to (sum of coefficients)^2.
kernel = martingale_kernel(f)
print("kernel terms:", kernel.d0.terms)
print("sigma^2 =", kernel.sigma2, "(exact value 2.25)")
print("one-step martingale violation:", kernel.martingale_violation)

## The bundled profile serializes everything at once.
profile = dependence_profile(f)
print("totals: hannan", profile.hannan_total, "delta", profile.delta_total,
      "wm", profile.wm_total)

## The same machinery in two dimensions.
g = innovation_at(law, (0, 0)) + 0.5 * innovation_at(law, (-1, 0))
print("d=2 kernel sigma^2:", martingale_kernel(g).sigma2)
print("d=2 hannan terms:", sorted(hannan_profile(g)))
