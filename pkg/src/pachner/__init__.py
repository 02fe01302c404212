"""Closed 3-manifold triangulations, Pachner moves, isomorphism signatures,
census enumeration and Pachner graph searches."""

from .census import (UNPROVEN, CensusSet, enumerate_census, enumerate_face_pairings, recognize_s3,
                     simplify)
from .graphs import (connectivity_classes, find_path, height_bound, height_bound_two_phase, length_bound,
                     min_height, min_length)
from .homology import AbelianGroup, homology_h1
from .isosig import SignatureError, canonical_labellings, decode, encode_labelled, isomorphic, isosig
from .moves import MoveSite, apply_move, enumerate_moves, flip, pachner_14, pachner_23, pachner_32, pachner_41
from .perm import Perm4, perm_from_index, perm_index
from .triangulation import Triangulation, is_orientable, validate

__all__ = [
    "UNPROVEN", "CensusSet", "enumerate_census", "enumerate_face_pairings", "recognize_s3", "simplify",
    "connectivity_classes", "find_path", "height_bound", "height_bound_two_phase", "length_bound",
    "min_height", "min_length", "AbelianGroup", "homology_h1", "SignatureError", "canonical_labellings",
    "decode", "encode_labelled", "isomorphic", "isosig", "MoveSite", "apply_move", "enumerate_moves", "flip",
    "pachner_14", "pachner_23", "pachner_32", "pachner_41", "Perm4", "perm_from_index", "perm_index",
    "Triangulation", "is_orientable", "validate",
]
