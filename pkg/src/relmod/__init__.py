"""Relation-module towers, Zassenhaus filtrations and bounded quasirationality checks."""
from .dsl import ParseError, format_presentation, parse_presentation
from .enumerator import coset_enumerate, finite_quotient, quotient_order, schreier_generators
from .intlinalg import abelian_invariants, smith_normal_form
from .magnus import ResourceError, eval_magnus, exact_zassenhaus_degree, free_quotient_order_by_magnus, mn_generators
from .presentation import Presentation, PresentationError
from .tower import (DivisorProfile, Limits, QRVerdict, TowerCell, divisor_profile, gn_quotient, qr_certify,
                    rationalization_tower, tower_cell)
from .words import Word, commutator, reduce

__all__ = [
    "ParseError", "format_presentation", "parse_presentation", "coset_enumerate", "finite_quotient",
    "quotient_order", "schreier_generators", "abelian_invariants", "smith_normal_form", "ResourceError",
    "eval_magnus", "exact_zassenhaus_degree", "free_quotient_order_by_magnus", "mn_generators",
    "Presentation", "PresentationError", "DivisorProfile", "Limits", "QRVerdict", "TowerCell",
    "divisor_profile", "gn_quotient", "qr_certify", "rationalization_tower", "tower_cell", "Word",
    "commutator", "reduce",
]
