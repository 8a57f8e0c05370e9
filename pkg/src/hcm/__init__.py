"""Computational mod-2 stable homotopy around highly connected manifolds.

Submodules: f2linalg (bit-packed GF(2) linear algebra), steenrod (the
admissible-basis Steenrod algebra), stmodule (windowed graded modules),
extpower (quadratic extended powers), resolution (minimal resolutions
and Ext charts), barpage (the bar-filtration first page), bounds
(exact filtration arithmetic), classify (the theorem database and stems
data), render and cli (output front ends).
"""

from .groups import AbelianGroup

__all__ = ["AbelianGroup"]
__version__ = "0.1.0"
