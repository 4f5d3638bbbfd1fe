"""exactkit: executable homological algebra over F_p[x]/(x^N).

Short exact sequences, Yoneda Ext groups, and additive subfunctors of
Ext as finite, fully checkable matrix data.
"""

__version__ = "0.1.0"

from .errors import BudgetError, ExactKitError, InputError, ValidationError
from .kernels import BACKEND
from .linalg import Matrix, Subspace
from .modules import (
    CategoryConfig,
    LambdaModule,
    ModuleMorphism,
    canonical_iso,
    direct_sum,
    hom_basis,
    indecomposable,
    jordan_type,
    make_module,
)
from .ses import ShortExactSeq, SesMorphism, baer_sum, make_ses, split_ses
from .ext import ExtBasis, ExtClass, classify, ext_basis, realize
from .subfunctors import Skeleton, SubfunctorData, build_skeleton

__all__ = [
    "BACKEND",
    "BudgetError",
    "CategoryConfig",
    "ExactKitError",
    "ExtBasis",
    "ExtClass",
    "InputError",
    "LambdaModule",
    "Matrix",
    "ModuleMorphism",
    "SesMorphism",
    "ShortExactSeq",
    "Skeleton",
    "SubfunctorData",
    "Subspace",
    "ValidationError",
    "__version__",
    "baer_sum",
    "build_skeleton",
    "canonical_iso",
    "classify",
    "direct_sum",
    "ext_basis",
    "hom_basis",
    "indecomposable",
    "jordan_type",
    "make_module",
    "make_ses",
    "realize",
    "split_ses",
]
