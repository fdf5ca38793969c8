"""Dihedral equiangular tight frames ETF(2n, n) via two-negacirculant
skew Hadamard matrices: construction, verification, exhaustive search,
and classification up to Gram matrix equivalence."""

from .algebra import (
    CycloPoly,
    ExactComplexMatrix,
    GaussianRational,
    RootIndex,
    circulant,
    circulant_eigenvalue,
    cyclotomic_idempotent,
    is_circulant,
    is_negacirculant,
    nega_cyclotomic_idempotent,
    negacirculant,
    negacirculant_eigenvalue,
)
from .frames import (
    Configuration,
    DihedralFlavor,
    GramMatrix,
    NotFactorableError,
    StructureReport,
    analyze_gram_structure,
    coherence,
    configuration_from_gram,
    dihedral_orbit,
    frame_potential,
    gram,
    is_etf,
    is_regular,
    is_tight,
    welch_bound,
)
from .grambuild import (
    InvalidPairsError,
    InvalidPartitionError,
    SpectralPartition,
    UnitPairAssignment,
    build_tight_gram,
    full_root_set,
    is_regular_gram,
    random_pairs,
    tight_idempotent,
    upper_block_real_part,
)
from .hadamard import (
    AmbiguousEntryError,
    BlockSkewHadamard,
    ExactifyFailure,
    NotDihedralETFError,
    assemble,
    block_etf_gram,
    double,
    etf_gram,
    exactify,
    extract_sign_blocks,
    hex_decode,
    hex_encode,
    is_hadamard,
    is_skew_hadamard,
)
from .paley import (
    ConstructionError,
    FiniteField,
    conj_double_paley_gram,
    double_paley_gram,
    paley_gram,
    paley_hadamard,
    projective_line,
    quadratic_character,
)
from .equiv import (
    EquivalenceCertificate,
    EquivalenceResult,
    NormalizedGram,
    NotEtfGramError,
    are_equivalent,
    canonical_profile,
    invariant_signature,
    normalize,
)
from .search import (
    SolutionRecord,
    canonicalize_b,
    classify,
    enumerate_2circulant,
    load_records,
    save_records,
)
from .search import enumerate as enumerate_solutions
from .numopt import (
    DiscoveryFailure,
    MinimizeConfig,
    MinimizeResult,
    discover,
    minimize_fiducial,
)
