"""
Characteristic numbers of B8, HP2 and M08 and their products
============================================================

A manifold is represented by its Pontryagin numbers.  Twisted signatures
and Dirac indices come out of exact integration in the Pontryagin ring.
"""

import twistsig as ts

names = ("B8", "HP2", "M08")
print(f"{'':5s}{'Sig':>6s}{'Sig(T)':>9s}{'Sig(L2T)':>10s}{'Ahat':>6s}")
for name in names:
    m = ts.catalog_manifold(name)
    row = [ts.twisted_signature(m), ts.twisted_signature(m, "T"),
           ts.twisted_signature(m, "L2T"), ts.dirac_index(m)]
    print(f"{name:5s}" + "".join(f"{int(v):>{w}d}" for v, w in zip(row, (6, 9, 10, 6))))

# the same numbers in closed form from (p1^2, p2)
b8 = ts.catalog_manifold("B8").factors[0].numbers
print("closed forms for B8:", ", ".join(str(ts.oracle_8d(q, b8)) for q in ("sig", "sig_T", "sig_L2T", "ahat")))

# B8's numbers are forced by Ahat = 1 and Sig = 0
print("B8 (p1^2, p2) from Ahat = 1, Sig = 0:", tuple(int(v) for v in ts.derive_b8_table()))

# the plumbing M08: signature from Bernoulli numbers, Witten genus -E4
sig, ahat, w = ts.almost_parallelizable(2, 5)
print("M08: Sig =", sig, " Ahat =", ahat, " W =", w)

# 24-dimensional products
x = ts.product_manifold([ts.catalog_manifold(n) for n in ("B8", "HP2", "HP2")])
m3 = ts.product_manifold([ts.catalog_manifold("M08")] * 3)
for m in (x, m3):
    s = ts.twisted_signature(m, "L2T")
    print(f"{m.name}: Sig(L2T) = {s}  mod 3 = {s % 3}  mod 9 = {s % 9}  Ind(T) = {ts.dirac_index(m, 'T')}")

# the Witten genus of M08^3 is -E4^3; that of B8 x HP2 x HP2 is not modular
print("W(M08^3)      =", ts.witten_genus(m3, 4))
print("W(B8xHP2xHP2) =", ts.witten_genus(x, 4))
print("fit of the latter:", ts.fit_weight12_sl2z(ts.witten_genus(x, 4)).to_json())
