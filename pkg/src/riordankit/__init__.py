"""Exact truncated Riordan groups: involutions, commutators, and involution factorizations."""

from .fps import Series
from .riordan import FgPair, RiordanMatrix, pascal
from .involution import InvolutionSpec, Klein, build_involution, is_involution, klein
from .decompose import (
    FactorizationCertificate,
    commutator_decompose,
    factor_involutions,
    factor_three,
    semidirect_decompose,
)

__version__ = "0.1.0"
