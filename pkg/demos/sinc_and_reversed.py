"""Two boundary cases: sign change outside L^1, and the reversed bound.

The band-limited sinc profile satisfies f = f*f exactly (its transform is
an indicator), yet it changes sign; it escapes the positivity law only
because it is not integrable.  In the other direction, f <= f*f admits
genuinely sign-changing solutions: a doubled Gaussian with a small -1 dip
keeps the reversed bound strict everywhere.
"""

import numpy as np

from autoconv import (
    GridSpec,
    SincParams,
    convolve,
    dft,
    positivity_check,
    reverse_example,
    sample,
    sinc_counterexample,
)

spec = GridSpec(dim=1, extent=64.0, points_per_axis=2**13)
g = sample(spec, sinc_counterexample(SincParams(a=1.0)))
report = positivity_check(g)
print("sinc profile sin(2 pi x)/(pi x):")
print(f"  sign changing: {not report.nonnegative}, deepest lobe at x = {report.location[0]:+.3f}")

spectrum = dft(g).values.real
k = spec.axis_frequencies()
away = np.abs(np.abs(k) - 1.0) > 4.0 / spec.extent
dev = np.abs(spectrum - (np.abs(k) <= 1.0))[away].max()
print(f"  transform vs indicator of [-1, 1], off the band edges: max deviation {dev:.4f}")
print(f"  so fhat^2 = fhat and f = f*f, with both signs present")

print("\nreversed bound f <= f*f for the dipped double Gaussian:")
rspec = GridSpec(dim=1, extent=8.0, points_per_axis=2**10)
for a, delta in ((2.0, 0.0), (2.0, 0.01), (1.0, 0.0)):
    f = reverse_example(rspec, a=a, delta=delta)
    margin = convolve(f, f).values - f.values
    scan = np.abs(rspec.axis_nodes()) <= 7.0
    worst = float(margin[scan].min())
    verdict = "strict" if worst > 0 else "fails"
    print(f"  a = {a}, dip half-width {delta}: min(f*f - f) = {worst:+.3e} -> {verdict}")
