"""Decomposition complexes of finite posets: closures, realizations, products, nested sets and Bergman fans."""

from .catalog import boolean_lattice, chain, antichain, partition_lattice, quadrangle_plus_bottom
from .complexes import (
    Face,
    FacePoset,
    chain_classes,
    decomposition_complex,
    is_face,
    is_graded,
    order_complex_face_poset,
    verify_face_lattice,
)
from .decomp import (
    Decomposition,
    DecompositionSet,
    closure,
    decomposition_set_from_triples,
    maximal_decomposition_set,
    normalize,
    trivial_decomposition_set,
)
from .errors import InvariantError, ParseError, PosetDecompError, PreconditionError, ResourceError
from .geometry import (
    PseudoComplex,
    Realization,
    ZeroOnePolytope,
    canonical_min_realization,
    gamma,
    identity_realization,
    realize_complex,
    verify_realization,
)
from .matroid import Matroid, lattice_of_flats, matroid_from, matroid_type
from .poset import Poset, parse_poset, product, coproduct, dual

__all__ = [
    "antichain",
    "boolean_lattice",
    "canonical_min_realization",
    "chain",
    "chain_classes",
    "closure",
    "coproduct",
    "Decomposition",
    "decomposition_complex",
    "decomposition_set_from_triples",
    "DecompositionSet",
    "dual",
    "Face",
    "FacePoset",
    "gamma",
    "identity_realization",
    "InvariantError",
    "is_face",
    "is_graded",
    "lattice_of_flats",
    "Matroid",
    "matroid_from",
    "matroid_type",
    "maximal_decomposition_set",
    "normalize",
    "order_complex_face_poset",
    "parse_poset",
    "ParseError",
    "partition_lattice",
    "Poset",
    "PosetDecompError",
    "PreconditionError",
    "product",
    "PseudoComplex",
    "quadrangle_plus_bottom",
    "Realization",
    "realize_complex",
    "ResourceError",
    "trivial_decomposition_set",
    "verify_face_lattice",
    "verify_realization",
    "ZeroOnePolytope",
]
