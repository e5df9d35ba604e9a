"""Exact arithmetic for the Jordan superalgebra Kan(n), its bimodules V(alpha) and the tensor brackets."""
from .analysis import (OperatorWord, check_irreducible, check_isomorphic, classify, closure, special_elements,
                       witness_word, witness_word_bar)
from .bimodule import (BimoduleAction, build_V_alpha, check_jordan_bimodule, direct_sum, opposite,
                       peirce_decompose, regular_bimodule, split_null_extension)
from .config import CheckConfig, SweepConfig
from .grassmann import Grassmann, GrassmannElement, poisson_bracket, wedge
from .kantor import (DotBracketAlgebra, build_kan, check_kantor_conditions, check_poisson, grassmann_poisson,
                     kantor_double, speciality_witness)
from .lemmas import check_lemmas
from .report import CheckReport, Violation
from .scalars import QQ, FieldContext
from .superalg import (Element, StructureTable, check_jordan_superidentity, check_operator_relations,
                       check_super_associator, check_supercommutative)
from .tensor import build_J_GnT_alpha, embed_V_alpha, grassmann_tensor, jordan_bracket_tensor

__version__ = "0.1.0"
