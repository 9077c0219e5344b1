"""Exact calculator for the filtered sl(2) link cohomology of knot and link diagrams.

The pipeline: parse a PD code or braid word into a LinkDiagram, build the
filtered cube-of-resolutions complex over exact rationals for a choice of
Frobenius parameters (a, h) with distinct rational roots, then compute
Khovanov homology (the first page of the filtration spectral sequence),
the full list of pages, the filtered homology with its quantum-filtration
invariants s_min / s_max / s_bar, canonical generators, and induced maps
of elementary link cobordisms.
"""

from .algebra import FrobeniusParams, AlgebraElement, PRESETS
from .diagram import (
    LinkDiagram,
    Resolution,
    DiagramError,
    ParseError,
    parse_pd,
    parse_braid,
    read_diagram_text,
    mirror,
    resolve,
    circle_depth,
    is_clockwise,
)
from .complexes import FilteredComplex, ResourceCapError, build_complex
from .homology import (
    khovanov_homology,
    filtered_homology,
    filtration_levels,
    slice_bounds,
    SInvariants,
)
from .spectral import SpectralPage, page, all_pages, compare_pages
from .canonical import (
    CanonicalGenerator,
    canonical_states,
    canonical_vertex,
    circle_invariant,
    canonical_generator,
    canonical_generators,
)
from .cobordism import (
    Movie,
    InducedMap,
    parse_movie_text,
    apply_event,
    induced_map,
    elementary_map,
)

__version__ = "0.1.0"
