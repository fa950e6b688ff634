"""Mesh unfolding toolkit: turn a triangular manifold mesh into a single
overlap-free 2D net via edge-collapse simplification, tabu-search overlap
resolution, and progressive restoration."""

from ._core import (
    Mesh,
    MeshError,
    Outcome,
    decimate,
    hausdorff,
    load,
    save_obj,
    tabu_capacity,
    target_face_count,
    unfold,
)

__all__ = [
    "Mesh",
    "MeshError",
    "Outcome",
    "decimate",
    "hausdorff",
    "load",
    "save_obj",
    "tabu_capacity",
    "target_face_count",
    "unfold",
]

__version__ = "0.1.0"
