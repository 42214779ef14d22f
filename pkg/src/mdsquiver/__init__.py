"""Quivers of sections on Cox-ring presentations and the reconstruction check."""

from .pipeline import (
    Strategy,
    VerificationReport,
    VerifyOptions,
    build_collection,
    delta,
    il_ideal,
    iltilde_ideal,
    iq_ideal,
    iqtilde_ideal,
    verify,
)
from .presentation import Collection, CoxPresentation, load_document, parse_document
from .quiver import Quiver, bq_ideal, build_quiver, enumerate_paths, to_dot, weight_data
from .sections import (
    basepoint_free,
    global_sections,
    graded_piece,
    irreducible_sections,
    mult_map_surjective,
)

__version__ = "0.1.0"
