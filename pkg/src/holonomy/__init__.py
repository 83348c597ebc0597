"""Combinatorial holonomy of simplicial and cubical complexes.

Complexes and their face posets, flip groupoids with holonomy groups,
signed-permutation parity invariants with a curvature obstruction for
cubical maps, Hom complexes with parallel transport, exact integer
homology, and chromatic machinery.  A FastAPI service and a CLI expose
the same operations over JSON.
"""

from .complexes import (
    Cube,
    CubicalComplex,
    CubicalMap,
    FacePoset,
    SimplicialComplex,
    SimplicialMap,
    build_cubical,
    build_simplicial,
    clique_complex,
    complete_graph,
    complex_from_json,
    complex_to_json,
    cube_skeleton,
    cycle,
    face_poset,
    generate,
    glue,
    is_flag,
    is_nondegenerate,
    load_complex,
    map_from_json,
    path_complex,
    simplex,
    skeleton,
    square_ring,
    standard_simplex_on,
)
from .coloring import (
    ColoringCertificate,
    CollapseResult,
    PhiVerdict,
    chi,
    chi_family,
    is_phi_complex,
    max_clique,
    random_tree_like,
    vertex_collapsible,
)
from .cubical import (
    CurvatureReport,
    ObstructionReport,
    SignedPermMatrix,
    bubble_move,
    curvature_CC,
    embed_obstruction,
    flip_parity,
    invariant_I,
    local_Z,
    parity,
    signed_matrix,
    subcomplex_Z,
)
from .errors import HolonomyError, SizeLimitError, ValidationError
from .groupoid import (
    HolonomyGroup,
    Projectivity,
    RidgeGraph,
    compose_path,
    flip,
    holonomy_group,
    induced_holonomy_map,
    ridge_graph,
)
from .homcomplex import (
    CellMap,
    HomComplex,
    TransportResult,
    hom0,
    hom0_exists,
    hom_betti,
    hom_chain_complex,
    hom_complex,
    induced_postcompose,
    induced_precompose,
    order_complex,
    order_complex_map,
    transport,
)
from .homology import (
    BettiProfile,
    ChainComplex,
    betti,
    betti_mod2,
    chain_complex_of,
    chain_map_columns,
    homology_connectivity,
    homology_space,
    induced_homology_map,
)

__version__ = "0.1.0"
