"""Finite-group computations around cellular covers.

Groups are dense Cayley tables (``grpcore``); finite abelian groups live in
``abelian``; Hom-set search and the generalized-subgroup and cellular-cover
tests in ``homlab``; Schur multipliers and central extensions in
``homology``; the classification of covers and the sets Idem(G) in
``covers``; the command line in ``cli``.
"""
from .abelian import AbelianGroup, abelian_group
from .grpcore import FiniteGroup, GroupHom, Subgroup

__version__ = "0.1.0"

__all__ = ["AbelianGroup", "FiniteGroup", "GroupHom", "Subgroup", "abelian_group", "__version__"]
