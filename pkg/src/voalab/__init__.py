"""Exact arithmetic for lattice vertex operator algebras, their automorphisms, commutants and orbifolds"""

from .autos import (
    AutGroup,
    Automorphism,
    check_homomorphism,
    compose,
    fixed_space,
    identity,
    inner,
    lifted,
    order_of,
    perm,
    sigma,
    square_is_scalar_on,
    theta,
    transport,
)
from .commutant import (
    ComputedSubspace,
    annihilator,
    commutant,
    coset_space,
    fixed_subspace,
    image_subspace,
    orbifold,
    sublattice_space,
    verify_nested,
    verify_orbifold_coset,
    whole_space,
)
from .config import EngineConfig, get_default_config, set_default_config
from .exceptions import (
    CheckFailure,
    CutoffExceededError,
    DSLSyntaxError,
    GaussDivisionByZeroError,
    GradeMismatchError,
    GroupTooLargeError,
    HeadroomError,
    InternalConsistencyError,
    LatticeError,
    LatticeMismatchError,
    NotAnAffineTripleError,
    NotAnAutomorphismError,
    NotAnIsometryError,
    NotConformalError,
    NotFullRankError,
    NotGeneratedError,
    NotPositiveDefiniteError,
    NotPreservedError,
    OddLatticeError,
    OrderExceededError,
    ScalarParseError,
    ScenarioError,
    UnknownNameError,
    UnrepresentablePhaseError,
    UnsupportedLiftError,
    VoalabError,
)
from .fock import GradedBasis, StateVector, Subspace, build_basis
from .lattice import (
    Isometry,
    Lattice,
    QVec,
    Sublattice,
    coset_decomposition,
    isometry_from_images,
    lattice_automorphism,
    restricts_to,
    vectors_in_coset,
)
from .parsing import load_lattice_file, parse_expression
from .qseries import IntSeries, burnside_orbifold_dims, twisted_character, voa_character
from .report import CheckRow, Report
from .scalar import I, GaussScalar, format_scalar, parse_scalar, phase
from .scenario import Scenario, Session, builtin_scenario, register_check
from .source_location import SourceLocation
from .vertex import (
    ConformalCertificate,
    LatticeVOA,
    check_affine_triple,
    check_axioms,
    commuting_pair,
    is_conformal,
    lattice_virasoro,
    sugawara_sl2,
)

__version__ = "0.4.0"
__all__ = [
    "GaussScalar",
    "I",
    "phase",
    "format_scalar",
    "parse_scalar",
    "Lattice",
    "Sublattice",
    "QVec",
    "Isometry",
    "isometry_from_images",
    "lattice_automorphism",
    "restricts_to",
    "vectors_in_coset",
    "coset_decomposition",
    "StateVector",
    "GradedBasis",
    "Subspace",
    "build_basis",
    "LatticeVOA",
    "ConformalCertificate",
    "lattice_virasoro",
    "sugawara_sl2",
    "check_affine_triple",
    "is_conformal",
    "commuting_pair",
    "check_axioms",
    "Automorphism",
    "AutGroup",
    "compose",
    "identity",
    "lifted",
    "inner",
    "theta",
    "perm",
    "sigma",
    "transport",
    "order_of",
    "square_is_scalar_on",
    "fixed_space",
    "check_homomorphism",
    "ComputedSubspace",
    "whole_space",
    "commutant",
    "fixed_subspace",
    "orbifold",
    "image_subspace",
    "coset_space",
    "sublattice_space",
    "annihilator",
    "verify_nested",
    "verify_orbifold_coset",
    "IntSeries",
    "voa_character",
    "twisted_character",
    "burnside_orbifold_dims",
    "load_lattice_file",
    "parse_expression",
    "Scenario",
    "Session",
    "builtin_scenario",
    "register_check",
    "CheckRow",
    "Report",
    "EngineConfig",
    "get_default_config",
    "set_default_config",
    "SourceLocation",
    "VoalabError",
    "UnrepresentablePhaseError",
    "GaussDivisionByZeroError",
    "ScalarParseError",
    "LatticeError",
    "NotPositiveDefiniteError",
    "OddLatticeError",
    "LatticeMismatchError",
    "NotFullRankError",
    "NotAnIsometryError",
    "CutoffExceededError",
    "GradeMismatchError",
    "HeadroomError",
    "NotAnAffineTripleError",
    "NotConformalError",
    "UnsupportedLiftError",
    "NotGeneratedError",
    "NotAnAutomorphismError",
    "OrderExceededError",
    "GroupTooLargeError",
    "NotPreservedError",
    "InternalConsistencyError",
    "CheckFailure",
    "ScenarioError",
    "UnknownNameError",
    "DSLSyntaxError",
    "__version__",
]
