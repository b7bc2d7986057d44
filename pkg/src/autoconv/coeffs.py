"""Taylor coefficients of sqrt(1 - x) and certified tail bounds.

The expansion sqrt(1 - x) = 1 - sum_{n>=1} c_n x^n has positive
coefficients c_n = (2n-3)!!/(2^n n!), with (-1)!! = 1 so that c_1 = 1/2.
They satisfy the ratio recurrence c_{n+1} = c_n (2n-1)/(2n+2), sum to 1,
and decay like 1/(2 sqrt(pi) n^{3/2}).  The series constructor weights its
n-fold convolution terms by these coefficients, so both the values and
tight bounds on their tails matter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# The recurrence step c*(2n-1)/(2n+2) is exact in float64 while the odd
# numerator (a Catalan number) fits in 53 bits, which holds up to n ~ 30.
# A scalar loop over the first EXACT_PREFIX terms keeps that evaluation
# order; the remainder is vectorized with one extra rounding per term.
EXACT_PREFIX = 64

_SUM_BLOCK = 65536


@dataclass(frozen=True)
class CoeffTable:
    """Coefficients c_1..c_n_max with compensated partial sums."""

    n_max: int
    values: np.ndarray
    partial_sums: np.ndarray

    def __post_init__(self):
        self.values.flags.writeable = False
        self.partial_sums.flags.writeable = False


def build_coeffs(n_max: int) -> CoeffTable:
    """Build the coefficient table by the ratio recurrence.

    Factorials overflow float64 near n = 85, so the table is always grown
    multiplicatively.  Partial sums are accumulated blockwise with exact
    (fsum) block totals, keeping the tail 1 - S_N meaningful at the 1e-8
    level even for n_max = 10^6.
    """
    if not isinstance(n_max, (int, np.integer)) or n_max < 1:
        raise ValueError(f"n_max must be a positive integer, got {n_max!r}")
    n_max = int(n_max)

    values = np.empty(n_max)
    c = 0.5
    values[0] = c
    prefix = min(n_max, EXACT_PREFIX)
    for n in range(1, prefix):
        c = c * (2 * n - 1) / (2 * n + 2)
        values[n] = c
    if n_max > prefix:
        n = np.arange(prefix, n_max, dtype=np.float64)
        values[prefix:] = values[prefix - 1] * np.cumprod((2 * n - 1) / (2 * n + 2))

    partial_sums = np.empty(n_max)
    carry = 0.0
    for i in range(0, n_max, _SUM_BLOCK):
        block = values[i : i + _SUM_BLOCK]
        partial_sums[i : i + _SUM_BLOCK] = carry + np.cumsum(block)
        carry += math.fsum(block)

    return CoeffTable(n_max=n_max, values=values, partial_sums=partial_sums)


def tail_bound(table: CoeffTable, n_terms: int, ratio: float) -> float:
    """Certified upper bound on sum_{n > n_terms} c_n ratio^n.

    Two valid majorants are combined: the geometric bound
    c_{n_terms+1} ratio^{n_terms+1} / (1 - ratio) (the coefficients
    decrease) and the full remainder 1 - S_{n_terms} (valid for every
    ratio <= 1 since the coefficients sum to 1).  The smaller one is
    returned; at ratio = 1 only the remainder is finite and the tail
    equals it exactly.
    """
    if not 0.0 <= ratio <= 1.0:
        raise ValueError(f"ratio must lie in [0, 1], got {ratio}")
    if not 1 <= n_terms < table.n_max:
        raise ValueError(
            f"n_terms must satisfy 1 <= n_terms < n_max = {table.n_max}, got {n_terms}"
        )
    if ratio == 0.0:
        return 0.0
    remainder = float(1.0 - table.partial_sums[n_terms - 1])
    if ratio == 1.0:
        return remainder
    geometric = float(table.values[n_terms] * ratio ** (n_terms + 1) / (1.0 - ratio))
    return min(geometric, remainder)


def terms_for_tail(table: CoeffTable, ratio: float, bound: float) -> int | None:
    """Smallest N with tail_bound(table, N, ratio) <= bound, or None.

    Scans the whole table vectorized; None means the table is too short
    and the caller should retry with a larger one.
    """
    if not 0.0 <= ratio <= 1.0:
        raise ValueError(f"ratio must lie in [0, 1], got {ratio}")
    if ratio == 0.0:
        return 1
    n = np.arange(1, table.n_max)
    tails = 1.0 - table.partial_sums[:-1]
    if ratio < 1.0:
        with np.errstate(under="ignore"):
            tails = np.minimum(
                tails, table.values[1:] * ratio ** (n + 1) / (1.0 - ratio)
            )
    ok = tails <= bound
    idx = int(np.argmax(ok))
    if not ok[idx]:
        return None
    return idx + 1


def dump_csv(table: CoeffTable, path) -> None:
    """Write rows (n, c_n, S_n) in full float precision."""
    with open(path, "w") as fh:
        fh.write("n,c_n,partial_sum\n")
        for i in range(table.n_max):
            fh.write(f"{i + 1},{table.values[i]:.17g},{table.partial_sums[i]:.17g}\n")
