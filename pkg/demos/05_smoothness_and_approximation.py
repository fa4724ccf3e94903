#!/usr/bin/env python3
"""Moduli of smoothness, Zygmund seminorms, and near-best approximation.

The remainder rates in the determinant and trace expansions are governed
by the Hoelder-Zygmund exponent gamma of the symbol.  This demo measures
gamma from the decay of near-best uniform approximation errors (Jackson
rate) and shows the smoothness diagnostics behind it.
"""
import numpy as np

import toepasym as tp

cos_symbol = tp.scalar_symbol({1: 0.5, -1: 0.5})

# Classical sanity values for g = cos: the first modulus at s = pi is 2,
# the second is 4, and the Zygmund seminorm is dominated by 4/pi.
w1 = tp.modulus_of_smoothness(cos_symbol, 1, np.pi)
w2 = tp.modulus_of_smoothness(cos_symbol, 2, np.pi)
sem = tp.zygmund_seminorm(cos_symbol, 1.0, grid_size=1024, sweep=128)
print(f"cos: omega_1(pi) = {w1:.6f}, omega_2(pi) = {w2:.6f}, "
      f"[cos]_1 = {sem:.4f} (4/pi = {4 / np.pi:.4f})")

# Near-best uniform approximation by Laurent polynomials of degree n.
# Degree-n polynomials are reproduced exactly; cos((n+1) theta) is left
# with its full amplitude, which is the best possible error.
poly = tp.scalar_symbol({0: 1.0, 2: 0.3, -2: 0.3})
_, err = tp.near_best_approximation(poly, 3)
print(f"\ndegree-3 approximant of a degree-2 polynomial: error {err:.1e}")
hard = tp.scalar_symbol({5: 0.5, -5: 0.5})  # cos(5 theta), degree budget 4
_, err = tp.near_best_approximation(hard, 4)
print(f"degree-4 approximant of cos(5 theta): error {err:.3f} (best is 1)")

# Lacunary test symbols: amplitude 2^(-gamma j) at frequency 2^j mimics a
# function with Hoelder exponent exactly gamma.  The approximation error
# at degree n then decays like n^(-gamma), and the fit recovers gamma.
grid = [4, 8, 16, 32, 64]
print("\nJackson rate recovery on lacunary symbols (levels = 8):")
for gamma in (0.75, 1.0, 1.5):
    z = tp.zygmund_symbol(gamma, 8)
    report = tp.jackson_decay_check(z, gamma, grid)
    errs = ", ".join(f"{e:.3e}" for _, e in report.per_n_errors)
    print(f"  gamma = {gamma:4.2f}: estimate {report.gamma_estimate:.3f}, "
          f"seminorm {report.seminorm_estimate:.3f}")
    print(f"      errors over n = {grid}: {errs}")

# The error trail is what the approx-scan CLI subcommand emits as CSV.
print("\nsame data via the library, as the CLI would write it:")
z = tp.zygmund_symbol(0.75, 8)
errors = [tp.near_best_approximation(z, n)[1] for n in grid]
c = max(e * n**0.75 for n, e in zip(grid, errors))
print("n,error,bound")
for n, e in zip(grid, errors):
    print(f"{n},{e:.6e},{c * n ** -0.75:.6e}")
