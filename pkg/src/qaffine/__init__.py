"""q-characters of simple modules in category O for quantum affine algebras,
least affinizations of (parabolic) Verma modules and their character formulas."""
from .cartan import CartanData, build_cartan, parse_algebra
from .characters import ClassicalCharacter, QCharacter
from .charform import (
    ConjSpec,
    charconj_exponents,
    charconj_validate,
    denominator_product,
    lagpvm_exponents,
    lagv_exponents,
    weyl_character,
)
from .expand import BudgetExceeded, ExpansionError, engine_character, stabilization_check, truncated_qchar
from .lweights import LMonomial, QExponent, RationalFunction, RationalLWeight, SpectralParam, dagger, simple_lroot, wt
from .minaff import HighestWeightSpec, affinization_order, kr_lweight, least_affinization
from .sl2 import StringDesc, factor_into_strings, general_position, ratio_irreducible, string_qchar, tensor_irreducible

__version__ = "0.1.0"
