"""Escape of mass: the central limit theorem at infinite variance.

The rescaled n-fold self-convolution of a unit-variance density piles its
mass into the Gaussian ball law.  For a mean-zero density with infinite
variance the opposite happens: the mass in any fixed ball drains to zero,
however slowly.  The grid route (characteristic-function powers) and an
exact-sampler Monte Carlo must agree cell by cell, since window
truncation alone would fake a finite variance.
"""

import math

from autoconv import run_experiment

print("finite variance (uniform summands, sigma^2 = 1), ball radius 1:")
finite = run_experiment("finite_variance", mc_samples=100_000, seed=0)
print(f"  gaussian limit erf(1/sqrt(2)) = {finite.gaussian_target:.6f}")
print(f"  {'n':>5} {'p_grid':>10} {'p_mc':>10} {'3*stderr':>10} {'phi':>8}")
for i, n in enumerate(finite.n_list):
    print(
        f"  {n:>5} {finite.p_values[i]:>10.5f} {finite.mc_values[i]:>10.5f} "
        f"{3 * finite.mc_stderr[i]:>10.5f} {finite.phi_values[i]:>8.5f}"
    )

print("\ninfinite variance ((1+|x|)^-3 summands), ball radius 1:")
infinite = run_experiment("infinite_variance", mc_samples=100_000, seed=0)
print(f"  {'n':>5} {'p_grid':>10} {'p_mc':>10} {'3*stderr':>10} {'phi':>8}")
for i, n in enumerate(infinite.n_list):
    print(
        f"  {n:>5} {infinite.p_values[i]:>10.5f} {infinite.mc_values[i]:>10.5f} "
        f"{3 * infinite.mc_stderr[i]:>10.5f} {infinite.phi_values[i]:>8.5f}"
    )

decreasing = all(a > b for a, b in zip(infinite.p_values, infinite.p_values[1:]))
print(f"\n  ball mass strictly decreasing: {decreasing}")
print("  phi = integral min(1,|x|) density -> 1 as the mass escapes any ball;")
print(f"  the gaussian reference value is {0.6312541:.5f} and phi(n=256) = "
      f"{infinite.phi_values[-1]:.5f}")
