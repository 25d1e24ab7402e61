"""Exact and numeric verification of the Higgs/Hahn operator algebras built from four oscillators."""

from .weyl import WeylElement, NormalMonomial, normal_product, commutator, anticommutator, is_zero
from .realizations import (
    exact_catalog,
    build_catalog,
    number,
    E,
    hamiltonian,
    L,
    metaplectic,
    pair,
    total,
    casimir,
    commutant_basis,
    higgs_constants,
    hahn_triple,
    hahn_deltas,
)
from .identities import IdentityCheck, SuiteReport, run_suite, REGISTRY
from .diffop import DiffOpElement, radial_product, radial_commutator, reduced_hahn, run_diffop_suite
from .fock import to_matrix, residual, sector_decompose, jacobi_matrix, overlaps, numeric_catalog
from .hahn import HahnParams, hahn_eval, fit_hahn_parameters, match_overlaps

__version__ = "0.1.0"

__all__ = [
    "WeylElement",
    "NormalMonomial",
    "normal_product",
    "commutator",
    "anticommutator",
    "is_zero",
    "exact_catalog",
    "build_catalog",
    "number",
    "E",
    "hamiltonian",
    "L",
    "metaplectic",
    "pair",
    "total",
    "casimir",
    "commutant_basis",
    "higgs_constants",
    "hahn_triple",
    "hahn_deltas",
    "IdentityCheck",
    "SuiteReport",
    "run_suite",
    "REGISTRY",
    "DiffOpElement",
    "radial_product",
    "radial_commutator",
    "reduced_hahn",
    "run_diffop_suite",
    "to_matrix",
    "residual",
    "sector_decompose",
    "jacobi_matrix",
    "overlaps",
    "numeric_catalog",
    "HahnParams",
    "hahn_eval",
    "fit_hahn_parameters",
    "match_overlaps",
]
