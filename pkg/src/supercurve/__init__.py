"""Exact computations on genus-zero supercurves over finite-dimensional superalgebras."""
from __future__ import annotations

from .scalars import GaussianRational, LogScalar, formal_log
from .superalgebra import AlgebraError, BaseAlgebra, LambdaAlgebra, SuperElement
from .superfunction import INF, LogFunction, PointP1, SuperRationalFunction
from .superlinalg import BModuleRep, SuperMatrix, berezinian
from .berezin import (
    BerSection, DifferentialOperator, LocalAutomorphism, change_of_variables, lift_to_Dsharp,
    residue, super_jacobian,
)
from .curve import (
    LineBundle, SuperCurve, TruncationBounds, TruncationInstabilityError, h0, h0_ber, h1,
    serre_pairing, verify_duality,
)

__version__ = "0.1.0"
