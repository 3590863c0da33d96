"""Tabulation of bonded knots up to singularity number 7.

The subpackages split the work the way the tabulation runs:

* :mod:`bondedknots.diagram` -- PD codes, faces, canonical codes;
* :mod:`bondedknots.yamada` -- the Yamada polynomial and its graph layer;
* :mod:`bondedknots.moves` and :mod:`bondedknots.search` -- Reidemeister
  moves and budgeted searches;
* :mod:`bondedknots.generate` and :mod:`bondedknots.planar_code` -- shadows;
* :mod:`bondedknots.pipeline` and :mod:`bondedknots.tables` -- the run and its output.
"""

from bondedknots.diagram import (
    Diagram,
    Multigraph,
    canonical_code,
    component_count,
    faces,
    mirror,
    parse_pd,
    perfect_matchings,
    singularity_number,
    underlying_graph,
    write_pd,
)
from bondedknots.poly import LaurentPolynomial, canon_poly, parse_poly, poly_mirror
from bondedknots.search import SearchBudget, reduce_equivalent, simplify
from bondedknots.yamada import bond_deleted_invariant, flow_eval, h_value, yamada, yamada_raw

__version__ = "0.1.0"

__all__ = [
    "Diagram",
    "Multigraph",
    "LaurentPolynomial",
    "SearchBudget",
    "parse_pd",
    "write_pd",
    "faces",
    "canonical_code",
    "mirror",
    "underlying_graph",
    "component_count",
    "perfect_matchings",
    "singularity_number",
    "canon_poly",
    "parse_poly",
    "poly_mirror",
    "flow_eval",
    "h_value",
    "yamada_raw",
    "yamada",
    "bond_deleted_invariant",
    "simplify",
    "reduce_equivalent",
]
