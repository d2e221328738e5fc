"""Exact Hopf-cyclic homology: para-(co)cyclic modules from structure constants,
their comonad and cyclic approximations, and (co)homology tables."""

from .linalg import FieldSpec, Matrix, Subspace
from .hopf import Bialgebra, CoefficientDatum, Kind, SymmetryDatum
from .lambda_cat import Flavor
from .paracyclic import ParaCyclicModule, build_T, certify_relations
from .approximation import comonad_approximation, cyclic_approximation, full_pipeline
from .homology import (coinvariants, cotensor, cyclic_homology, cocyclic_cohomology,
                       hochschild_homology, hopf_hochschild)

__version__ = "0.1.0"
