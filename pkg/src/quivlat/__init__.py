"""Exact homological invariants of quiver representations over commutative rings."""

from .errors import (
    AmbiguousDecomposition,
    BoundExceeded,
    CyclicQuiver,
    DimensionMismatch,
    Inconclusive,
    IncompatibleBase,
    IncompatibleRing,
    NeitherMonoNorEpi,
    NonFreeCokernel,
    NotComputable,
    NotNilpotentKernel,
    NotProjective,
    NotRigid,
    NotSchurRoot,
    ParseError,
    PeelFailure,
    PreconditionViolated,
    QuivlatError,
    RankMismatch,
    TheoremViolation,
)
from .rings import (
    ExactMatrix,
    Feps,
    GF,
    ModulePresentation,
    NormalFormResult,
    QQ,
    RingHom,
    RingSpec,
    ZZ,
    Zmod,
    apply_hom,
    block_diag,
    canonical_hom,
    cokernel,
    cokernel_data,
    cokernel_projection,
    constant_rank,
    howell_rows,
    identity_hom,
    invert,
    is_invertible,
    kernel_basis,
    normal_form,
    presentation_base_change,
    solve,
)
from .quiver import (
    Quiver,
    Rep,
    RepMorphism,
    base_change,
    cokernel_rep,
    direct_sum,
    direct_sum_injections,
    direct_sum_many,
    direct_sum_projections,
    euler_form,
    is_isomorphic_rigid,
    kernel_rep,
    projective_rep,
    tensor_free,
    tits_form,
)
from .homology import (
    HomExtResult,
    check_base_change,
    differential,
    hom_ext,
    is_exceptional,
    is_rigid,
    rigid_hom_ext_ranks,
)
from .mutation import (
    ExcSequence,
    MutationResult,
    braid_act,
    is_exceptional_pair,
    left_mutate,
    orbit_search,
    right_mutate,
    standard_sequence,
)
from .structure import (
    SCHUR_BOUNDED_FALSE,
    SCHUR_PREFILTER_FALSE,
    SCHUR_REAL,
    GenericDims,
    RigidDecomposition,
    decompose_rigid,
    exceptional_lattice,
    generic_dims,
    is_real_schur_root,
    lift_rigid,
    schur_root_status,
)
from .verify import SUITES, run_suite

__version__ = "0.1.0"
