"""Cutting the cube into grids of chains.

A symmetric chain decomposition of each coordinate block is split into
chains of bounded length; products of those chains tile 2^[n] exactly.
"""
from posetfree import grid_partition, scd
from posetfree.decomposition import estimate_grid_pair_probability, grid_pair_probability_bound

chains = scd(4)
print(f"SCD of 2^[4]: {len(chains.chains)} chains of lengths {sorted(chains.lengths())}")

n, d = 9, 3
L = 3  # the default from default_side_length is 1 at this n, which is dull
gp = grid_partition(n, d, L)
print(f"grid partition n={n} d={d} L={L}: {len(gp)} grids, side violations {len(gp.violations)}")

A, B = 0b000000011, 0b000000111
bound = grid_pair_probability_bound(2, 3, n, d)
freq = estimate_grid_pair_probability(gp, A, B, 10_000, seed=1)
print(f"P[A, B share a grid after a random relabelling] ~ {freq:.4f}, bound {float(bound):.4f}")
