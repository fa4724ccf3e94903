#!/usr/bin/env python3
"""Higher-order asymptotics of log det T_n(a) and the remainder decay.

log det T_n(a) grows linearly in n with rate log G(a) (the geometric
mean) and constant term log E(a) (the strong Szego constant).  Adding
correction terms built from the Wiener-Hopf factorization refines the
constant and accelerates the remainder decay.
"""
import numpy as np

import toepasym as tp

a = tp.scalar_symbol({0: 1.25, 1: -0.5, -1: -0.5})

g = tp.geometric_mean(a)
e = tp.szego_constant(a)
print(f"G(a) = {g.real:.12f}   (log-average of the symbol, here exactly 1)")
print(f"E(a) = {e.real:.12f}   (strong Szego constant, here 4/3)")
print(f"series oracle for E: {tp.strong_szego_series(a).real:.12f}")

# Order-1 prediction: (n+1) log G + log E.  The residual for this fixture
# is log(1 - 0.25^(n+2)), tiny and explicitly known.
print("\norder-1 expansion of log det T_n(a):")
for n in (4, 8, 16):
    rep = tp.logdet_expansion(a, n, p=1)
    print(f"  n = {n:3d}: predicted {rep.predicted.real:+.12f} "
          f"direct {rep.direct.real:+.12f}  residual {rep.residual.real:+.3e}")

# Order-2 adds the correction sum; the constant term is re-pinned so the
# p = 1 case is matched in the limit.
w = tp.scalar_wiener_hopf(a)
print("\norder 1 versus order 2 residuals:")
for n in (8, 16, 24):
    r1 = tp.logdet_expansion(a, n, p=1, factors=w)
    r2 = tp.logdet_expansion(a, n, p=2, factors=w)
    print(f"  n = {n:3d}: |res p=1| {abs(r1.residual):.3e}   "
          f"|res p=2| {abs(r2.residual):.3e}")

# For an analytic (rational) symbol the remainder decays geometrically:
fit = tp.logdet_remainder_scan(a, [4, 6, 8, 10, 12, 14, 16, 24, 32], p=1)
print(f"\nanalytic fixture: fitted log-log slope {fit.slope:.2f} "
      f"(flag: {fit.flag})")

# A lacunary symbol with Hoelder exponent gamma shows the predicted
# algebraic decay 1/n^(2 gamma - 1) of the order-1 remainder.
gamma = 0.75
z = tp.zygmund_symbol(gamma, 10)
fit_z = tp.logdet_remainder_scan(z, [8, 16, 32, 64, 128, 256, 512], p=1)
print(f"\nlacunary symbol, gamma = {gamma}:")
for n, mag in fit_z.points:
    print(f"  n = {n:3d}: |residual| = {mag:.3e}")
print(f"fitted slope {fit_z.slope:.3f} (prediction: at most -(2 gamma - 1) "
      f"= {-(2 * gamma - 1):.2f})")
