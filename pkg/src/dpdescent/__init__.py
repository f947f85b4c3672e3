"""Galois descent data for del Pezzo surfaces, read off from the Galois action on Pic."""

from .classifier import (
    CTKM_LIST,
    Flag,
    SurfaceReport,
    amitsur_constraints,
    classify,
    degeneracy_quintic,
    kang_dimension,
    kang_report,
)
from .cohomology import CohGroup, IntegerRep, h1, h1_bar, h1_cyclic, h1_sylow_bound, invariant_lattice
from .errors import DelPezzoError, FeasibilityError, ValidationError
from .jobs import Job, emit_job, emit_report, parse_job, run_job, run_survey
from .lattice import (
    DivClass,
    PicLattice,
    class_name,
    conic_classes,
    distinguished_classes,
    exceptional_classes,
    make_lattice,
    pair,
    parse_class,
    plane_classes,
    root_classes,
    sum_exceptional,
)
from .weyl import (
    GaloisSubgroup,
    LatticeAut,
    aut_from_class_map,
    aut_from_matrix,
    generate_group,
    orbits,
    subgroups_up_to_conjugacy,
    weyl_group,
    weyl_order,
)

__version__ = "0.1.0"

__all__ = [
    "CTKM_LIST",
    "CohGroup",
    "DelPezzoError",
    "DivClass",
    "FeasibilityError",
    "Flag",
    "GaloisSubgroup",
    "IntegerRep",
    "Job",
    "LatticeAut",
    "PicLattice",
    "SurfaceReport",
    "ValidationError",
    "amitsur_constraints",
    "aut_from_class_map",
    "aut_from_matrix",
    "class_name",
    "classify",
    "conic_classes",
    "degeneracy_quintic",
    "distinguished_classes",
    "emit_job",
    "emit_report",
    "exceptional_classes",
    "generate_group",
    "h1",
    "h1_bar",
    "h1_cyclic",
    "h1_sylow_bound",
    "invariant_lattice",
    "kang_dimension",
    "kang_report",
    "make_lattice",
    "orbits",
    "pair",
    "parse_class",
    "parse_job",
    "plane_classes",
    "root_classes",
    "run_job",
    "run_survey",
    "subgroups_up_to_conjugacy",
    "sum_exceptional",
    "weyl_group",
    "weyl_order",
]
