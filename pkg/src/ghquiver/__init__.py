"""Noncommutative symplectic geometry of doubled zigzag quivers.

Symbolic path-algebra and necklace calculus, symplectomorphism groups of the
two-vertex doubled quivers, the GL_r(C[a]) embedding, the commutator
primitive solver, and the action on Gibbons-Hermsen phase spaces.
"""

from .quiver import NCPoly, PathWord, QuiverSpec, build_quiver
from .scalars import Gauss

__all__ = ["Gauss", "NCPoly", "PathWord", "QuiverSpec", "build_quiver"]
__version__ = "0.1.0"
