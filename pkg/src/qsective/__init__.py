"""Decide when prod (x^q - a_j) has a root modulo every positive integer."""

__version__ = "0.1.0"

from .classifier import ClassificationReport, check_residue_everywhere, classify, lower_bound_check
from .covering import CoveringReport, check_covering, min_covering_size
from .errors import (
    BoundExceeded,
    ConsistencyError,
    DomainError,
    HenselError,
    QsectiveError,
    WidthError,
    WitnessNotFound,
)
from .oracle import WitnessCertificate, find_witness, scan_solvability
from .qfree import ProblemInstance, rad_q_abs, rad_q_signed, validate_instance
from .residue import RootCertificate, hensel_lift, root_mod

__all__ = [
    "BoundExceeded",
    "ClassificationReport",
    "ConsistencyError",
    "CoveringReport",
    "DomainError",
    "HenselError",
    "ProblemInstance",
    "QsectiveError",
    "RootCertificate",
    "WidthError",
    "WitnessCertificate",
    "WitnessNotFound",
    "check_covering",
    "check_residue_everywhere",
    "classify",
    "find_witness",
    "hensel_lift",
    "lower_bound_check",
    "min_covering_size",
    "rad_q_abs",
    "rad_q_signed",
    "root_mod",
    "scan_solvability",
    "validate_instance",
]
