"""Exact algebra kernel: fields, Laurent polynomials, polynomial matrices, normal forms."""
from .fields import GF, QQ, Field, FieldElem, PrimeField, RationalField, field_from_spec, is_prime
from .laurent import LaurentPoly, lp_degree, lp_normalize
from .matrix import PolyMatrix
from .normal_forms import (
    ContractError,
    IntSmith,
    ModuleOrder,
    SmithDecomposition,
    coker_invariants,
    coker_order,
    determinant,
    homology_presentation,
    int_smith,
    rank_and_minor,
    smith_divisors,
    smith_normal_form,
    torsion_order,
)

__all__ = [
    "GF", "QQ", "Field", "FieldElem", "PrimeField", "RationalField", "field_from_spec", "is_prime",
    "LaurentPoly", "lp_degree", "lp_normalize", "PolyMatrix",
    "ContractError", "IntSmith", "ModuleOrder", "SmithDecomposition", "coker_invariants",
    "coker_order", "determinant", "homology_presentation", "int_smith", "rank_and_minor", "smith_divisors",
    "smith_normal_form", "torsion_order",
]
