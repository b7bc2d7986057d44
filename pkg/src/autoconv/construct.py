"""Build solutions of f >= f*f from a nonnegative residual.

Every integrable solution is parameterized by its slack u = f - f*f >= 0
with mass at most 1/4.  Two independent routes realize f from u:

* the series route sums (1/2) c_n 4^n (n-fold convolution of u) with the
  sqrt(1-x) coefficients c_n, truncated once a certified L^1 tail bound
  drops below a target;
* the spectral route evaluates (1 - sqrt(1 - 4 uhat)) / 2 on the grid
  frequencies and inverts, exact in the number of terms.

Their agreement, within the certified tail plus grid budget, is itself a
diagnostic and is exercised by crosscheck.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .coeffs import CoeffTable, build_coeffs, tail_bound, terms_for_tail
from .grids import (
    GridFunction,
    GridSpec,
    Spectrum,
    convolve,
    dft,
    idft,
    integrate,
    sample,
)

# Pointwise floor below which negative input values are treated as noise
# and clamped to zero (with a warning).
NEGATIVE_CLAMP = 1e-12

# Mass tolerance: residual masses up to (1 + MASS_RTOL)/4 are accepted.
MASS_RTOL = 1e-6

# Magnitude of the k = 0 clamp in the spectral route.  Discretization can
# push 1 - 4 uhat(0) slightly negative in the critical case; anything
# below -SPECTRAL_CLAMP means the mass genuinely exceeds 1/4.
SPECTRAL_CLAMP = 1e-9

DEFAULT_TERM_CAP = 100_000

_coeff_cache: dict[int, CoeffTable] = {}


def _coeff_table(n_max: int) -> CoeffTable:
    if n_max not in _coeff_cache:
        _coeff_cache[n_max] = build_coeffs(n_max)
    return _coeff_cache[n_max]


@dataclass(frozen=True)
class SeriesBuild:
    """Record of one truncated series construction."""

    residual: GridFunction
    residual_mass: float
    ratio: float
    n_terms: int
    tail_l1: float
    tail_sup: float
    solution: GridFunction


def default_epsilon(ratio: float) -> float:
    """L^1 truncation target by regime.

    Near ratio = 1 the tail only decays like 1/sqrt(pi N), so tight
    targets are quadratically expensive; the default backs off in steps.
    """
    if ratio <= 0.9:
        return 1e-4
    if ratio <= 0.99:
        return 1e-3
    return 1e-2


def _validated_residual(u: GridFunction) -> GridFunction:
    low = float(u.values.min())
    if low < 0.0:
        if low < -NEGATIVE_CLAMP:
            raise ValueError(
                f"residual must be nonnegative; min value {low:.3e} is below the "
                f"-{NEGATIVE_CLAMP:.0e} noise floor"
            )
        warnings.warn(
            f"clamping tiny negative residual values (min {low:.3e}) to zero",
            stacklevel=3,
        )
        u = GridFunction(spec=u.spec, values=np.maximum(u.values, 0.0))
    return u


def build_series(
    u: GridFunction,
    epsilon: float | None = None,
    term_cap: int = DEFAULT_TERM_CAP,
) -> SeriesBuild:
    """Sum the coefficient-weighted convolution powers of the residual.

    Powers are computed incrementally, one linear convolution per term, on
    the scaled residual 4u so every intermediate has mass ratio^n <= 1 and
    nothing overflows.  Truncation stops at the smallest N whose certified
    tail is at most epsilon (default by regime, see default_epsilon).

    Raises if the residual mass exceeds 1/4 beyond tolerance, or if the
    target would need more than term_cap terms (which only happens near
    the critical mass with a tiny epsilon); the error reports the bound
    that was achievable.
    """
    u = _validated_residual(u)
    b = integrate(u)
    if b > 0.25 * (1.0 + MASS_RTOL):
        raise ValueError(
            f"residual mass {b:.8f} exceeds 1/4: the construction requires "
            f"0 <= mass <= 1/4"
        )
    ratio = 4.0 * b
    capped_ratio = min(ratio, 1.0)
    if epsilon is None:
        epsilon = default_epsilon(capped_ratio)
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")

    table = _coeff_table(4096 if capped_ratio < 1.0 else 65536)
    n_terms = terms_for_tail(table, capped_ratio, 2.0 * epsilon)
    if n_terms is None:
        table = _coeff_table(max(2 * term_cap, 131072))
        n_terms = terms_for_tail(table, capped_ratio, 2.0 * epsilon)
    if n_terms is None or n_terms > term_cap:
        achieved = 0.5 * tail_bound(table, min(term_cap, table.n_max - 1), capped_ratio)
        raise ValueError(
            f"epsilon {epsilon:.3e} needs more than {term_cap} terms "
            f"(achievable tail at the cap: {achieved:.3e})"
        )

    coeffs = table.values
    scaled = GridFunction(spec=u.spec, values=4.0 * u.values)
    power = scaled
    acc = 0.5 * coeffs[0] * power.values
    for n in range(2, n_terms + 1):
        # Convolution powers of a nonnegative density are nonnegative;
        # FFT dust of order 1e-16 would otherwise leak sign noise into f.
        raw = convolve(power, scaled)
        power = GridFunction(spec=u.spec, values=np.maximum(raw.values, 0.0))
        acc += 0.5 * coeffs[n - 1] * power.values

    tl1 = 0.5 * tail_bound(table, n_terms, capped_ratio)
    if capped_ratio > 0.0:
        tls = 2.0 * float(u.values.max()) * tail_bound(table, n_terms, capped_ratio) / capped_ratio
    else:
        tls = 0.0
    return SeriesBuild(
        residual=u,
        residual_mass=b,
        ratio=ratio,
        n_terms=n_terms,
        tail_l1=tl1,
        tail_sup=tls,
        solution=GridFunction(spec=u.spec, values=acc),
    )


def build_spectral(u: GridFunction) -> GridFunction:
    """Invert fhat = (1 - sqrt(1 - 4 uhat)) / 2 on the grid.

    The principal branch of the square root is the correct one: for a
    nonnegative residual, |uhat(k)| <= uhat(0) <= 1/4, so 1 - 4 uhat stays
    in the closed right half plane and never crosses the cut.  A jump
    between adjacent frequency samples that looks like a sign flip is
    therefore an integrity failure and raises instead of being patched.
    """
    u = _validated_residual(u)
    b = integrate(u)
    if b > 0.25 * (1.0 + MASS_RTOL):
        raise ValueError(
            f"residual mass {b:.8f} exceeds 1/4: the construction requires "
            f"0 <= mass <= 1/4"
        )
    spec = u.spec
    uhat = dft(u).values
    center = (spec.points_per_axis // 2,) * spec.dim

    mag = np.abs(uhat)
    mag_off = mag.copy()
    mag_off[center] = 0.0
    worst = float(mag_off.max())
    if worst > 0.25 + 1e-6:
        raise ValueError(
            f"|uhat| reaches {worst:.8f} > 1/4 away from k = 0, a discretization "
            f"artifact; enlarge the grid window"
        )

    z = 1.0 - 4.0 * uhat
    z0 = z[center]
    if z0.real < 0.0:
        if z0.real < -SPECTRAL_CLAMP:
            raise ValueError(
                f"1 - 4 uhat(0) = {z0.real:.3e} is negative beyond the "
                f"{SPECTRAL_CLAMP:.0e} clamp; the residual mass exceeds 1/4"
            )
        z[center] = 0.0 + 1j * z0.imag

    root = np.sqrt(z)
    _check_branch_continuity(root, spec)
    fhat = 0.5 - 0.5 * root
    return idft(Spectrum(spec=spec, values=fhat))


def _check_branch_continuity(root: np.ndarray, spec: GridSpec) -> None:
    """Flag adjacent-sample jumps that resemble a square-root sign flip.

    A flip shows up as s[i+1] close to -s[i] with both magnitudes well
    away from zero; legitimate jumps through the critical zero at k = 0
    have a small magnitude on at least one side.
    """
    floor = 1e-6
    for axis in range(spec.dim):
        lead = np.moveaxis(root, axis, 0)
        a, bnext = lead[:-1], lead[1:]
        suspect = (np.abs(bnext - a) > np.abs(bnext + a)) & (
            np.minimum(np.abs(a), np.abs(bnext)) > floor
        )
        if bool(suspect.any()):
            raise RuntimeError(
                "square-root branch discontinuity detected between adjacent "
                "frequency samples; refusing to patch the sign"
            )


def crosscheck(series: SeriesBuild, spectral: GridFunction) -> float:
    """L^1 distance between the two construction routes.

    Contract: at most tail_l1 of the series build plus the grid error
    budget, since the spectral route is exact in the term count.
    """
    if series.solution.spec != spectral.spec:
        raise ValueError("grid specs do not match")
    diff = np.abs(series.solution.values - spectral.values)
    return float(diff.sum() * spectral.spec.cell_volume)


def bump_residual(spec: GridSpec, mass: float, profile: str = "indicator") -> GridFunction:
    """Nonnegative residual supported in [-1, 1]^d with exact grid mass.

    profile "indicator" is flat; "cosine" is the smooth 1 + cos(pi x)
    taper.  Values are rescaled so the Riemann sum equals mass exactly.
    """
    if profile == "indicator":

        def evaluator(*coords):
            inside = np.ones_like(np.asarray(coords[0]), dtype=np.float64)
            for c in coords:
                inside = inside * (np.abs(np.asarray(c)) <= 1.0)
            return inside

    elif profile == "cosine":

        def evaluator(*coords):
            out = np.ones_like(np.asarray(coords[0]), dtype=np.float64)
            for c in coords:
                c = np.asarray(c)
                out = out * np.where(np.abs(c) <= 1.0, 1.0 + np.cos(np.pi * c), 0.0)
            return out

    else:
        raise ValueError(f"unknown bump profile {profile!r}")

    raw = sample(spec, evaluator)
    total = integrate(raw)
    if total <= 0:
        raise ValueError("bump has no mass on this grid; refine the spacing")
    return GridFunction(spec=spec, values=raw.values * (mass / total))


def build_exponential_example(
    spec: GridSpec,
    mass: float,
    profile: str = "indicator",
    epsilon: float = 1e-7,
) -> SeriesBuild:
    """Series build from a compactly supported residual of subcritical mass.

    With mass strictly below 1/4 the Laplace transform of the residual
    stays below 1/4 in a neighborhood of the origin, which forces the
    solution to have finite exponential moments; downstream tail fits
    quantify the empirical decay rate.  Masses >= 1/4 are refused because
    the argument needs strict subcriticality.
    """
    if not 0.0 < mass < 0.25:
        raise ValueError(
            f"mass must lie strictly between 0 and 1/4, got {mass} "
            f"(the exponential-moment construction needs strict subcriticality)"
        )
    u = bump_residual(spec, mass, profile)
    return build_series(u, epsilon=epsilon)
