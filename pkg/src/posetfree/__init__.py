"""Induced-poset-free families in the Boolean lattice and in grids."""

__version__ = "0.1.0"

from .errors import (CorruptRecordError, CoverError, CycleError, EmptyFamilyError,
                     EmptyHypergraphError, InfeasibleParamsWarning, PosetfreeError, RangeError,
                     SizeGuardError, SwapVerificationError, UnknownNameError, VerificationError)
from .lattice import (IntervalSublattice, SetFamily, containment_probability, full_lattice,
                      gap_d, parse_family_text, format_family)
from .poset import (Poset, dimension_of, height, load_poset, poset_from_spec, standard_poset,
                    width)
from .embedding import (EmbeddingMap, GridFamily, count_induced_copies, d_star,
                        find_induced_copies, full_grid, mu)
from .decomposition import ChainPartition, GridPartition, grid_partition, scd
from .extremal import (SolverTimeout, ex_star, ex_star_gapped, forb_star_count, is_free,
                       la_star)
from .cache import ExtremalRecord, ResultCache
