"""The square-root series coefficients and how their tail is controlled.

The constructor weighs n-fold self-convolutions by the Taylor
coefficients of sqrt(1 - x).  This script prints the exact dyadic prefix,
cross-checks the Catalan identity c_n 2^(2n-1) = Catalan(n-1), and shows
the slow 1/sqrt(pi N) law of the remainder, which is what makes truncation
near the critical mass expensive.
"""

import math

from autoconv import build_coeffs, tail_bound

table = build_coeffs(10**6)

print("first coefficients (exact dyadic rationals):")
catalan = 1
for n in range(1, 9):
    if n > 1:
        catalan = catalan * 2 * (2 * (n - 1) - 1) // n
    print(
        f"  c_{n} = {table.values[n - 1]:<12.10g} "
        f"c_n 2^(2n-1) = {table.values[n - 1] * 2.0 ** (2 * n - 1):.10g} "
        f"(Catalan {catalan})"
    )

print("\nremainder 1 - S_N against the 1/sqrt(pi N) law:")
for n in (10**3, 10**4, 10**5, 10**6):
    tail = 1.0 - table.partial_sums[n - 1]
    law = 1.0 / math.sqrt(math.pi * n)
    print(f"  N = {n:>7}: 1 - S_N = {tail:.6e}   law = {law:.6e}   ratio = {tail / law:.6f}")

print("\ncertified geometric tail bounds sum_{n>N} c_n q^n:")
for q in (0.5, 0.9, 0.99, 1.0):
    bound = tail_bound(table, 50, q)
    print(f"  q = {q:<5}: bound after 50 terms = {bound:.3e}")

print("\nthe first-moment weighted sum diverges (slow decay at criticality):")
partial = 0.0
for n in (10**2, 10**4, 10**6):
    import numpy as np

    idx = np.arange(1, n + 1, dtype=float)
    partial = float(np.dot(idx, table.values[:n]))
    print(f"  sum n c_n up to N = {n:>7}: {partial:10.3f}")
