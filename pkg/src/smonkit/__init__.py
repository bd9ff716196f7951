"""Exact computations with separated monic representations over bound quivers.

The package builds up in layers: exact F_p linear algebra (``exactla``),
path combinatorics of bound quivers (``quiver``), modules over monomial
bound quiver algebras (``bqa``), layered representations of tensor
algebras (``layered``), named verification suites (``harness``), and a
text-format CLI (``cli``).
"""

from .exactla import FpMatrix, Subspace
from .quiver import Arrow, MonomialIdeal, Path, Quiver, make_path
from .bqa import Algebra, Certificate, Hom, Module
from .layered import ClassPredicate, LayeredHom, LayeredModule, TensorContext, Triple

__version__ = "0.1.0"

__all__ = [
    "FpMatrix",
    "Subspace",
    "Arrow",
    "MonomialIdeal",
    "Path",
    "Quiver",
    "make_path",
    "Algebra",
    "Certificate",
    "Hom",
    "Module",
    "ClassPredicate",
    "LayeredHom",
    "LayeredModule",
    "TensorContext",
    "Triple",
    "__version__",
]
