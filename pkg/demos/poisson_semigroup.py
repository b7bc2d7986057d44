"""The Poisson kernel family: exact self-convolution and the mass-1/2 edge.

f_{a,t} has transform a exp(-2 pi |k| t), so f_{a,t} * f_{a,t} equals
f_{a^2, 2t} exactly.  On the grid the identity holds to a fraction of a
percent, and the slack f_{a,t} - f_{a^2,2t} stays nonnegative exactly up
to mass a = 1/2.  Above that the tails flip sign: the kernels still
dominate near the origin, but the far field violates the bound.
"""

import numpy as np

from autoconv import (
    GridSpec,
    PoissonParams,
    convolve,
    integrate,
    poisson,
    poisson_inequality_margin,
    sample,
    verify,
)

spec = GridSpec(dim=1, extent=100.0, points_per_axis=2**14)
nodes = spec.axis_nodes()

f = sample(spec, poisson(PoissonParams(a=0.5, t=1.0)))
target = sample(spec, poisson(PoissonParams(a=0.25, t=2.0)))
got = convolve(f, f)

sel = np.abs(nodes) <= 50.0
rel = np.abs(got.values[sel] - target.values[sel]) / target.values[sel]
print(f"self-convolution of f(a=1/2, t=1) vs f(a=1/4, t=2) on |x| <= 50:")
print(f"  max relative error {rel.max():.2e}   masses {integrate(f):.4f} -> {integrate(got):.4f}")

print("\nverifier verdicts across the mass threshold:")
for a in (0.3, 0.5, 0.55, 0.6):
    report = verify(sample(spec, poisson(PoissonParams(a=a, t=1.0))))
    print(
        f"  a = {a:<5}: verdict {report.verdict:<10} "
        f"min slack {report.min_residual:+.3e} at x = {report.worst_location[0]:+.1f}"
    )

print("\nwhere the a = 0.6 violation lives (slack ~ a(1-2a)/x^2 < 0 far out):")
margin = poisson_inequality_margin(0.6, 1.0)
for x in (0.0, 1.0, 5.0, 30.0):
    print(f"  slack at x = {x:>4}: {float(margin(np.array(x))):+.6e}")
