"""Toggleability spaces of diagram posets: order ideals, rowmotion, and the
exact intersections of toggle spans with indicator spans."""

from .diagrams import (
    Cell,
    Diagram,
    Partition,
    diagram_from_json,
    diagram_from_text,
    family_diagram,
    ferrers,
    load_diagram,
    predicates,
    rectangle,
    shifted_staircase,
    type_a_root,
    type_b_root,
)
from .errors import CapExceeded, TogglelabError
from .lattice import IdealLattice, enumerate_ideals, rowmotion
from .poset import Poset, poset_from_diagram
from .rooks import reduced_rook, rook, se_chain_rooks
from .spaces import antichain_space, basis_B1, basis_B2, dim_AT, dim_IT, order_ideal_space, verify_main_theorems
from .statistics import Generator, Statistic

__version__ = "0.1.0"
