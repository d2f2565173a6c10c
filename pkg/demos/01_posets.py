"""Small posets: build them, measure them, and ask how deep a cube they need."""
from posetfree import d_star, dimension_of, height, mu, standard_poset, width
from posetfree.poset import format_poset

for spec in [("chain", 3), ("antichain", 2), ("v",), ("diamond", 2), ("butterfly",), ("boolean", 2)]:
    P = standard_poset(*spec)
    print(f"{P.name:>10}: |P|={P.size} height={height(P)} width={width(P)} "
          f"dim={dimension_of(P)} d*={d_star(P)} mu={mu(P)}")

# Posets can also be written out as text and read back.
print()
print(format_poset(standard_poset("butterfly")))
