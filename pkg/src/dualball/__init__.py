"""Exact reconstruction and certification of dual unit balls of
integer-valued seminorms on R^d.

Ray probes along integer directions recover the dual ball's vertices from
forward differences of the seminorm; the adaptive loop certifies that the
hull of the recovered (always integer) vertices reproduces the seminorm as
a max of finitely many integer linear functionals.
"""

from ._kernels import HAVE_SPEEDUPS, active_kernel
from .errors import (
    DimensionMismatchError,
    DualballError,
    IntegralityError,
    LemmaChainError,
    OracleError,
    OracleUndefinedError,
    PolarUndefinedError,
    SpecFormatError,
)
from .exact import dot, nearest_lattice, primitive
from .geometry import (
    Facet,
    Polytope,
    SupportResult,
    convex_hull,
    dump_polytope,
    equal,
    exposed_points,
    exposure_witness,
    load_polytope,
    minkowski_sum,
    polar,
    support,
)
from .reconstruct import (
    Budget,
    CertificationReport,
    ExposureCertificate,
    RayProbe,
    ReconstructionResult,
    Unstable,
    certify,
    lemma_trace,
    perturb_direction,
    probe_vertex,
    reconstruct,
)
from .seminorm import (
    Max,
    Pullback,
    SeminormSpec,
    Sum,
    Table,
    ValidationReport,
    Vertices,
    WeightedL1,
    WeightedLinf,
    dump_spec,
    evaluate,
    load_spec,
    parse_spec,
    validate_axioms,
    validate_integrality,
)

__version__ = "0.1.0"

__all__ = [
    "Budget",
    "CertificationReport",
    "DimensionMismatchError",
    "DualballError",
    "ExposureCertificate",
    "Facet",
    "HAVE_SPEEDUPS",
    "IntegralityError",
    "LemmaChainError",
    "Max",
    "OracleError",
    "OracleUndefinedError",
    "PolarUndefinedError",
    "Polytope",
    "Pullback",
    "RayProbe",
    "ReconstructionResult",
    "SeminormSpec",
    "SpecFormatError",
    "Sum",
    "SupportResult",
    "Table",
    "Unstable",
    "ValidationReport",
    "Vertices",
    "WeightedL1",
    "WeightedLinf",
    "active_kernel",
    "certify",
    "convex_hull",
    "dot",
    "dump_polytope",
    "dump_spec",
    "equal",
    "evaluate",
    "exposed_points",
    "exposure_witness",
    "lemma_trace",
    "load_polytope",
    "load_spec",
    "minkowski_sum",
    "nearest_lattice",
    "parse_spec",
    "perturb_direction",
    "polar",
    "primitive",
    "probe_vertex",
    "reconstruct",
    "support",
    "validate_axioms",
    "validate_integrality",
]
