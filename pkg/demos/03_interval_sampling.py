"""How often does a random interval of the cube contain a fixed family?

The probability depends only on the spread of the family.  We check the
exact count against the closed form and then estimate it by sampling.
"""
from posetfree import SetFamily, containment_probability, gap_d
from posetfree.lattice import estimate_containment, verify_containment_lemma

S = SetFamily(8, [0b00000011, 0b00010011, 0b00000111])
for m in range(0, 9):
    exact, formula = verify_containment_lemma(S, m)
    est = estimate_containment(S, m, 20_000, seed=m)
    print(f"m={m}: exact {str(exact):>8}  formula {str(formula):>8}  sampled {est:.4f}")
print("spread d(S) =", gap_d(S), " closed form at m=5:", containment_probability(8, 5, gap_d(S)))
