"""Exact extremal numbers at desk scale.

Sperner's theorem says the largest antichain in 2^[n] is a middle level.
The solver confirms this, then counts every C_2-free family (the Dedekind
numbers) and computes a few grid analogues.
"""
from math import comb

from posetfree import ex_star, ex_star_gapped, forb_star_count, la_star, standard_poset

C2, C3, V = standard_poset("chain", 2), standard_poset("chain", 3), standard_poset("v")

for n in range(1, 6):
    res = la_star(n, C2)
    print(f"La*({n}, C_2) = {res.value:>2}   middle binomial {comb(n, n // 2)}")

for n in range(2, 6):
    print(f"La*({n}, C_3) = {la_star(n, C3).value}")

print("antichain counts:", [forb_star_count(n, C2) for n in range(0, 5)])

for sides in [(3, 3), (2, 2, 2), (4, 4)]:
    plain = ex_star(sides, V).value
    gapped = [ex_star_gapped(sides, V, t).value for t in range(4)]
    print(f"grid {sides}: ex*(V) = {plain}, gapped t=0..3 -> {gapped}")
