"""Exact and certified spectral computations for the Basilica Schreier graphs G_n.

Submodules:

* :mod:`basilica.graphs`: Schreier graphs, G_n, decompositions, Laplacians;
* :mod:`basilica.exact`: integer polynomials, determinants, Sturm and sign-count root isolation;
* :mod:`basilica.recursion`: recursions for c_n, the factors gamma_n and eta_n, zeta dynamics;
* :mod:`basilica.spectrum`: certified isolation of every root through level 14;
* :mod:`basilica.measure`: normalised counting measures and their tail estimates;
* :mod:`basilica.gaps`: certified gaps from the escape criterion;
* :mod:`basilica.eigenmodes`: localized eigenfunctions and blowup patches;
* :mod:`basilica.cli`: the ``basilica`` command.
"""

from .eigenmodes import (
    BlowupPatch,
    EigenFunction,
    build_patch,
    dn_construct,
    extend_by_zero,
    localized_span_ratio,
    multiplicity_crosscheck,
)
from .exact.poly import LAMBDA, IntPoly
from .exact.roots import IsolatingInterval
from .gaps import GapCertificate, GapFailure, certify_gap, gap_enumerate, gap_side
from .graphs import Address, Mask, MultiGraph, build_g, build_gamma, laplacian, vertex_count_formula
from .measure import SpectralAtom, limit_proportion, mass_horizon, spectral_measure, tail_sum, weight_bound
from .recursion import SpectralSequence, SpectrumFactorization, multiplicity_S
from .spectrum import SpectrumIsolation

__version__ = "0.1.0"

__all__ = [
    "Address",
    "BlowupPatch",
    "EigenFunction",
    "GapCertificate",
    "GapFailure",
    "IntPoly",
    "IsolatingInterval",
    "LAMBDA",
    "Mask",
    "MultiGraph",
    "SpectralAtom",
    "SpectralSequence",
    "SpectrumFactorization",
    "SpectrumIsolation",
    "build_g",
    "build_gamma",
    "build_patch",
    "certify_gap",
    "dn_construct",
    "extend_by_zero",
    "gap_enumerate",
    "gap_side",
    "laplacian",
    "limit_proportion",
    "localized_span_ratio",
    "mass_horizon",
    "multiplicity_S",
    "multiplicity_crosscheck",
    "spectral_measure",
    "tail_sum",
    "vertex_count_formula",
    "weight_bound",
]
