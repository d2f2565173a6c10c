"""Brute-force guards and default constants.

Everything exponential in this package checks one of these before it starts.
"""

# poset-core
DIMENSION_GUARD = 8          # |P| for the linear-extension search
AUTOMORPHISM_GUARD = 8

# boolean lattice
WORD_GUARD = 30              # ground set size for one-word bitmasks
ENUMERATION_GUARD = 12       # n for full interval enumeration

# embedding
D_STAR_GUARD = 8
MU_GUARD = 7

# extremal solver
LA_STAR_GUARD = 5
LA_STAR_CHAIN_GUARD = 8      # chains get a chain-partition bound and go further
EX_STAR_GUARD = 1 << 20      # product of sides
FORB_GUARD = 5
FORB_UNCONDITIONAL = 4       # above this a timeout is recommended

# decomposition
SCD_GUARD = 20
CHAIN_PARTITION_GUARD = 16
GRID_BLOCK_GUARD = 16

# containers
CONTAINER_EXHAUSTIVE_V = 20
CONTAINER_TREE_GUARD = 5
CONTAINER_TREE_CHAIN2_GUARD = 6
CONTAINER_TREE_MAX_DEPTH = 12

# supersaturation / pipeline
GRID_EXACT_GUARD = 25        # grids up to this many points get exact ex*_t values
DEFAULT_C = 1.0              # side-length constant of the grid partition
