"""Exact digit sets and connectivity certificates for self-affine tiles.

For an integer dilation matrix ``A`` with integer spectrum the library
builds centered canonical digit sets, tests lattice connectivity of the
attractor ``T(A, D)``, and constructs a digit set with connected attractor
through the Jordan form of ``A``.
"""

from ._kernels import backend_name
from .attractor import (
    RasterImage,
    TileCloud,
    approximate,
    diameter_bound,
    export_points,
    radius_bound,
    rasterize,
)
from .connectivity import (
    AdjacencyBasis,
    ConnectivityVerdict,
    LevelSet,
    PipelineResult,
    ShellCertificate,
    check_level_connectivity,
    components,
    edge_neighbors,
    is_B_connected,
    level_set,
    neighbor_set_bounded,
    pipeline_connected_digits,
    shell_certificate,
    sufficient_condition,
)
from .digitset import (
    DigitSet,
    block_digit_set,
    centered_digit_set,
    is_complete_residue_system,
    map_digit_set,
    parallelepiped_corners,
    product_digit_set,
)
from .errors import *  # noqa: F401,F403
from .jordan import JordanDecomposition, jordan_decompose, verify_similarity
from .lattice import (
    Lattice,
    digits_contain_standard_basis,
    is_invariant_lattice,
    lattice_contains,
    translation_lattice,
)
from .ratmath import Matrix, char_poly, det, hnf, inverse, solve_linear
from .spectrum import EigenStructure, integer_eigenvalues, is_dilation

__version__ = "0.1.0"
