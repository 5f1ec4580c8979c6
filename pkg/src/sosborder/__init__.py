"""Bounds, Hilbert functions and Gram spectrahedra of forms on the SOS boundary."""

from .analyze import (
    DualCertificate,
    SpectraReport,
    analyze,
    certificate_search,
    functional_space,
    max_rank_estimate,
    moment_matrix,
    psd_exact,
    strict_positivity,
)
from .bounds import BoundData, bound_data, table_N
from .core import Polynomial, format_poly, parse_poly
from .gram import GramFrame, GramParam, SosDecomposition, expand_sos, spectrahedron
from .ideals import IdealGens, MonomialIdeal, hilbert_table
from .sdp import LmiModel, SdpOptions, SdpOutcome, max_min_eig, numeric_rank, optimize_linear

__all__ = [
    "BoundData", "DualCertificate", "GramFrame", "GramParam", "IdealGens", "LmiModel",
    "MonomialIdeal", "Polynomial", "SdpOptions", "SdpOutcome", "SosDecomposition",
    "SpectraReport", "analyze", "bound_data", "certificate_search", "expand_sos",
    "format_poly", "functional_space", "hilbert_table", "max_min_eig", "max_rank_estimate",
    "moment_matrix", "numeric_rank", "optimize_linear", "parse_poly", "psd_exact",
    "spectrahedron", "strict_positivity", "table_N",
]
__version__ = "0.1.0"
