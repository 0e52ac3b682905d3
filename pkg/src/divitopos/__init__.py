"""Exact finite topos computations over divisor lattices."""

from .errors import DivitoposError, DomainError, IsoError, PresheafError, SieveError, TopologyError
from .heyting import check_negation_laws, implies, is_boolean, neg
from .lattice import AmbientLattice, DualOrderView, check_distributive, divisors, is_squarefree
from .omega import build_omega, char_map, is_closed_sieve, true_arrow, verify_classifier
from .presheaf import Presheaf, amalgamations, is_sheaf, matching_families, validate_presheaf
from .sieves import Sieve, Topology, build_topology, check_topology_axioms, enumerate_sieves, make_sieve

__all__ = [
    "AmbientLattice",
    "DivitoposError",
    "DomainError",
    "DualOrderView",
    "IsoError",
    "Presheaf",
    "PresheafError",
    "Sieve",
    "SieveError",
    "Topology",
    "TopologyError",
    "amalgamations",
    "build_omega",
    "build_topology",
    "char_map",
    "check_distributive",
    "check_negation_laws",
    "check_topology_axioms",
    "divisors",
    "enumerate_sieves",
    "implies",
    "is_boolean",
    "is_closed_sieve",
    "is_sheaf",
    "is_squarefree",
    "make_sieve",
    "matching_families",
    "neg",
    "true_arrow",
    "validate_presheaf",
    "verify_classifier",
]
