"""Finite cover systems, locales with operators and their representation."""
from .poset import FinitePoset, PosetError, SizeGuardExceeded, bits, mask_of, up_sets
from .system import (
    FLAGS, Classification, CoverSystem, CoverSystemError, Witness, classify_cover_system,
    diamond, heyting_arrow, j_op, propositions, validate_cover_system,
)
from .locale import (
    Completion, FiniteLattice, FiniteLocale, IsoReport, LatticeError, alt_mult_holds,
    build_SL, classify_operator, dedekind_macneille, double_negation, extend_lower,
    extend_upper, identity_op, is_join_meet_dense, lattice_from_pairs, locale_from_pairs,
    monotone_maps, principal, representation_iso, validate_locale,
)
from .lattices import (
    all_distributive_lattices, chain, diamond_lattice, distributive_lattices,
    distributive_lattices_bruteforce,
)
from .model import ModelError, PredicateModel, propositional_valuations, truth_set

__all__ = [name for name in dir() if not name.startswith("_")]
