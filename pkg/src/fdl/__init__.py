"""Residually finite doubles ``F *_(H_s) F̄`` of the rank-2 free group.

Submodules: ``words`` (run-length words), ``stallings`` (folded subgroup
graphs), ``family`` (multiplying sequences, H_s and S_k), ``abelian``
(Smith normal form and friends), ``homology`` (quotient invariants and the
distinguisher), ``double`` (word problem in G_s) and ``cli``.
"""

from .family import MultiplyingSequence, validate
from .words import Word, reduce

__all__ = ["MultiplyingSequence", "Word", "reduce", "validate"]
__version__ = "0.1.0"
