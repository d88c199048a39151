"""Even graph complex, its trivalent quotient A_k and the surgery pairing."""

from .complex import DifferentialMatrix, GraphVector, contract_edge, delta, delta_matrix
from . import links, surgery
from .graphs import (
    NAMED_GRAPHS,
    CanonicalGraph,
    GraphFormatError,
    GradedBasis,
    LabelledGraph,
    ResourceLimitError,
    automorphisms,
    canonical_form,
    canonicalize,
    enumerate_basis,
    parse_graph,
)
from .homology import AkSpace, ak_space, dim_cohomology, euler_characteristic_check, reduce_to_ak
from .linalg import SparseRationalMatrix, kernel_basis, rank, reduce_mod_image

__version__ = "0.1.0"
