"""guk: a finite category theory engine with brute-force oracles.

Validates explicitly tabulated categories, computes finite (co)limits,
enumerates lex set-models, checks Grothendieck-topology and sheaf conditions,
evaluates global sections against limits of stalks, and validates clans, all
on desk-scale data with verified universality and counterexample reporting.
"""

from .category import (
    CategoryPresentation,
    FinCategory,
    compile_presentation,
    hom_set,
    opposite,
    validate_category,
)
from .functors import (
    Functor,
    NatTransform,
    SetFunctor,
    check_fully_faithful,
    covariant_hom,
    nat_transforms_between,
    validate_functor,
    validate_nat,
    validate_set_functor,
    yoneda,
)
from .limits import (
    Cocone,
    Cone,
    Diagram,
    check_lex_functor,
    find_colimit,
    find_limit,
    has_all_finite_limits,
    set_colimit,
    set_limit,
)
from .verdict import Verdict

__all__ = [
    "CategoryPresentation", "FinCategory", "compile_presentation", "hom_set",
    "opposite", "validate_category", "Functor", "NatTransform", "SetFunctor",
    "check_fully_faithful", "covariant_hom", "nat_transforms_between",
    "validate_functor", "validate_nat", "validate_set_functor", "yoneda",
    "Cocone", "Cone", "Diagram", "check_lex_functor", "find_colimit",
    "find_limit", "has_all_finite_limits", "set_colimit", "set_limit",
    "Verdict",
]
