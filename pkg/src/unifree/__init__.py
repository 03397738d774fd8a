"""Monoid actions, free objects and surjectively universal self-maps.

Modules: :mod:`monoid` (finite and word monoids), :mod:`action` (set actions
and the free action on ``M x S``), :mod:`funcgraph` (self-maps described by
component templates), :mod:`freecat` (free functors on concrete categories),
:mod:`ellone` (exact l1 operators) and :mod:`cli`.
"""

from .errors import UnifreeError
from .monoid import EnumerationBound, Monoid, monoid_by_name

__all__ = ["EnumerationBound", "Monoid", "UnifreeError", "monoid_by_name"]
__version__ = "0.1.0"
