"""
Exact q-expansions of level-one and level-two forms
===================================================

Eisenstein series, the discriminant, theta nulls and the level-two forms
delta/epsilon, all as exact truncated series.  Nothing is floating point.
"""

from fractions import Fraction

import twistsig as ts

# Eisenstein series come straight from Bernoulli numbers and divisor sums
for k in (1, 2, 3):
    print(f"E{2 * k} =", ts.eisenstein_series(k, 5))

# Delta is built twice (from E4, E6 and from the eta product); the
# constructor refuses to return if the two disagree
delta = ts.discriminant_series(6).expansion
print("Delta =", delta)

# E4^3 - E6^2 = 1728 Delta, exactly, to q^10
e4 = ts.eisenstein_series(2, 10).expansion
e6 = ts.eisenstein_series(3, 10).expansion
print("E4^3 - E6^2 == 1728 Delta:", e4 ** 3 - e6 ** 2 == ts.discriminant_series(10).expansion * 1728)

# Level two forms live on a half-integer lattice
for name in ("delta1", "eps1", "delta2", "eps2"):
    print(f"{name:7s}", ts.delta_epsilon_series(name, 2))

# A weight-12 form on SL2(Z) is m E4^3 + n Delta.  -E4^3 + 5 Delta:
s = -(e4 ** 3) + ts.discriminant_series(10).expansion * 5
fit = ts.fit_weight12_sl2z(s)
print("fit:", fit.to_json())

# The Gamma^0(2) basis (8 delta2)^(6-2r) eps2^r is triangular in q^{1/2}
basis = ts.gamma_upper0_2_basis(Fraction(2))
for r, b in enumerate(basis):
    print(f"r={r}:", b)
