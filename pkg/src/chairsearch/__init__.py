"""Multimodal chair retrieval: a part-colored chair database searched
interactively by constrained text queries, 3D color sketches, or both."""

__version__ = "0.1.0"

from .dataset import (
    ChairInstance,
    ColorAssignment,
    DatasetManifest,
    build_dataset,
    build_reference_manifest,
    enumerate_assignments,
    load_manifest,
    make_placeholder,
    reference_shapes,
    save_manifest,
    semantic_vector,
)
from .dictionary import Dictionary, default_dictionary
from .errors import ChairSearchError
from .geometry import ChairShape, PartMesh, StyleParams, generate_parametric_shape
from .index import ResultSet, SearchIndex, build_index, knn_semantic, knn_visual
from .palette import ColorId, PartKind
from .query import interpret, normalize, segment, sync_from_selection
from .session import Mode, Outcome, Session, SessionEngine, SessionState
from .sketch import (
    ChairModel,
    Sketch,
    Snapshot,
    Stroke,
    ViewCamera,
    encode_view,
    pool_views,
    rasterize,
    sketch_descriptor,
    snapshot_views,
)
from .stats import friedman_test, wilcoxon_signed_rank
from .vectors import AttributeVector

__all__ = [
    "AttributeVector",
    "ChairInstance",
    "ChairModel",
    "ChairSearchError",
    "ChairShape",
    "ColorAssignment",
    "ColorId",
    "DatasetManifest",
    "Dictionary",
    "Mode",
    "Outcome",
    "PartKind",
    "PartMesh",
    "ResultSet",
    "SearchIndex",
    "Session",
    "SessionEngine",
    "SessionState",
    "Sketch",
    "Snapshot",
    "Stroke",
    "StyleParams",
    "ViewCamera",
    "build_dataset",
    "build_index",
    "build_reference_manifest",
    "default_dictionary",
    "encode_view",
    "enumerate_assignments",
    "friedman_test",
    "generate_parametric_shape",
    "interpret",
    "knn_semantic",
    "knn_visual",
    "load_manifest",
    "make_placeholder",
    "normalize",
    "pool_views",
    "rasterize",
    "reference_shapes",
    "save_manifest",
    "segment",
    "semantic_vector",
    "sketch_descriptor",
    "snapshot_views",
    "sync_from_selection",
    "wilcoxon_signed_rank",
]
