"""
pmhprism

Perfect-Matching-Hamiltonian checks for prism and crossed prism graphs:
family builders, an exhaustive matching oracle, the witness matchings and
the case-split extension construction, each verified against the oracle.
"""

__version__ = "0.1.0"
__author__ = "PMH Prism Team"
__description__ = "PMH checks and constructions for prism and crossed prism graphs"

from pmhprism.constructive import (
    CaseTrace,
    ExtensionResult,
    Subcase,
    extend_crossed_prism,
    extend_cut0,
    extend_cut2,
    extend_cut4,
    obstruction_check,
    witness_crossed_prism_odd,
    witness_prism,
)
from pmhprism.errors import PmhError
from pmhprism.families import (
    C4PoleView,
    ChainSide,
    CrossedPrismGraph,
    PrincipalCut,
    PrismGraph,
    SymmetryClass,
    build_crossed_prism,
    build_prism,
    c4_pole,
    classify_two_chain,
    phi_product,
)
from pmhprism.graph import (
    Edge,
    EdgeSet,
    Graph,
    PerfectMatching,
    TwoFactor,
    VertexId,
    complement_two_factor,
    cycle_decomposition,
    is_hamiltonian_union,
    validate_perfect_matching,
)
from pmhprism.matching import (
    E2fVerdict,
    PmhVerdict,
    check_pmh,
    enumerate_perfect_matchings,
    extends_to_3ec,
    find_extension,
    proposition_e2f_check,
)

__all__ = [
    "PmhError",
    "Graph",
    "Edge",
    "EdgeSet",
    "VertexId",
    "PerfectMatching",
    "TwoFactor",
    "validate_perfect_matching",
    "complement_two_factor",
    "cycle_decomposition",
    "is_hamiltonian_union",
    "PrismGraph",
    "CrossedPrismGraph",
    "PrincipalCut",
    "C4PoleView",
    "ChainSide",
    "SymmetryClass",
    "build_prism",
    "build_crossed_prism",
    "c4_pole",
    "classify_two_chain",
    "phi_product",
    "PmhVerdict",
    "E2fVerdict",
    "enumerate_perfect_matchings",
    "find_extension",
    "check_pmh",
    "extends_to_3ec",
    "proposition_e2f_check",
    "CaseTrace",
    "ExtensionResult",
    "Subcase",
    "witness_prism",
    "witness_crossed_prism_odd",
    "obstruction_check",
    "extend_cut2",
    "extend_cut4",
    "extend_cut0",
    "extend_crossed_prism",
]
