"""Variational chair database: shapes x injective part colorings.

A shape contributes one instance per injective assignment of the six
palette colors to its present parts (360 for four parts, 120 for three).
Instance ids are deterministic: shape_id * 360 + assignment rank, where
ranks follow lexicographic (part code, color code) order.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .dictionary import Dictionary
from .errors import (
    ChecksumMismatchError,
    InvalidInputError,
    NotFoundError,
    VersionMismatchError,
)
from .geometry import (
    ChairShape,
    N_STYLE_FIELDS,
    PartMesh,
    StyleParams,
    attribute_levels,
    generate_parametric_shape,
)
from .palette import ALL_COLORS, ColorId, PartKind, REQUIRED_PARTS
from .vectors import AttributeVector

MANIFEST_VERSION = "1"
MAX_VARIATIONS = 360  # injective assignments for a full four-part chair
REFERENCE_SHAPE_COUNT = 45
REFERENCE_SEED = 20451


@dataclass(frozen=True)
class ColorAssignment:
    """Injective map from present parts to palette colors."""

    assignment: tuple[tuple[PartKind, ColorId], ...]

    def __post_init__(self) -> None:
        parts = [p for p, _ in self.assignment]
        colors = [c for _, c in self.assignment]
        if len(set(parts)) != len(parts):
            raise InvalidInputError("duplicate part in color assignment")
        if len(set(colors)) != len(colors):
            raise InvalidInputError("two parts share a color")

    @classmethod
    def from_mapping(cls, mapping: dict[PartKind, ColorId]) -> "ColorAssignment":
        items = tuple(sorted(mapping.items(), key=lambda kv: int(kv[0])))
        return cls(items)

    def as_dict(self) -> dict[PartKind, ColorId]:
        return dict(self.assignment)

    def color_of(self, part: PartKind) -> ColorId:
        for p, c in self.assignment:
            if p == part:
                return c
        raise NotFoundError(f"part {part.label} not colored")

    @property
    def parts(self) -> tuple[PartKind, ...]:
        return tuple(p for p, _ in self.assignment)


@dataclass(frozen=True)
class ChairInstance:
    chair_id: int
    shape_id: int
    assignment: ColorAssignment


def enumerate_assignments(parts: set[PartKind] | frozenset[PartKind]) -> list[ColorAssignment]:
    """All injective colorings of the given parts, in lexicographic order.

    Order is by (part code, color code): parts are sorted by code and the
    color tuples enumerate like digits, so ranks are stable across runs.
    """
    if not parts:
        raise InvalidInputError("part set must be non-empty")
    if not set(parts) <= set(PartKind):
        raise InvalidInputError("unknown part kind in part set")
    ordered = sorted(parts, key=int)
    out = []
    for combo in itertools.permutations(ALL_COLORS, len(ordered)):
        out.append(ColorAssignment(tuple(zip(ordered, combo))))
    return out


@dataclass
class DatasetManifest:
    version: str
    dictionary_checksum: str
    shapes: list[ChairShape]
    instances: list[ChairInstance]
    shape_count: int = 0
    instance_count: int = 0
    _shape_by_id: dict[int, ChairShape] = field(default_factory=dict, repr=False)
    _instance_by_id: dict[int, ChairInstance] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        self.shape_count = len(self.shapes)
        self.instance_count = len(self.instances)
        self._shape_by_id = {s.shape_id: s for s in self.shapes}
        self._instance_by_id = {i.chair_id: i for i in self.instances}
        if len(self._shape_by_id) != len(self.shapes):
            raise InvalidInputError("duplicate shape_id in manifest")
        if len(self._instance_by_id) != len(self.instances):
            raise InvalidInputError("duplicate chair_id in manifest")
        for inst in self.instances:
            if inst.shape_id not in self._shape_by_id:
                raise InvalidInputError(f"instance {inst.chair_id} references unknown shape")

    def shape_by_id(self, shape_id: int) -> ChairShape:
        try:
            return self._shape_by_id[shape_id]
        except KeyError:
            raise NotFoundError(f"unknown shape_id {shape_id}") from None

    def instance_by_id(self, chair_id: int) -> ChairInstance:
        try:
            return self._instance_by_id[chair_id]
        except KeyError:
            raise NotFoundError(f"unknown chair_id {chair_id}") from None

    def has_instance(self, chair_id: int) -> bool:
        return chair_id in self._instance_by_id


def build_dataset(shapes: list[ChairShape], dictionary: Dictionary) -> DatasetManifest:
    """Expand shapes into all color-variation instances, deterministically."""
    seen: set[int] = set()
    for shape in shapes:
        if shape.shape_id in seen:
            raise InvalidInputError(f"duplicate shape_id {shape.shape_id}")
        seen.add(shape.shape_id)
    instances: list[ChairInstance] = []
    for shape in sorted(shapes, key=lambda s: s.shape_id):
        for rank, assignment in enumerate(enumerate_assignments(set(shape.parts))):
            instances.append(
                ChairInstance(
                    chair_id=shape.shape_id * MAX_VARIATIONS + rank,
                    shape_id=shape.shape_id,
                    assignment=assignment,
                )
            )
    return DatasetManifest(
        version=MANIFEST_VERSION,
        dictionary_checksum=dictionary.checksum,
        shapes=sorted(shapes, key=lambda s: s.shape_id),
        instances=instances,
    )


def reference_shapes(count: int = REFERENCE_SHAPE_COUNT, seed: int = REFERENCE_SEED) -> list[ChairShape]:
    """The deterministic generated shape set: four-part chairs with pairwise
    distinct attribute-level tuples, styles sitting at level centers."""
    rng = np.random.default_rng(seed)
    shapes: list[ChairShape] = []
    seen: set[tuple[int, ...]] = set()
    while len(shapes) < count:
        levels = rng.integers(0, 5, size=N_STYLE_FIELDS)
        levels[0] = rng.integers(2, 5)  # arms always present in the reference set
        key = tuple(int(v) for v in levels)
        if key in seen:
            continue
        seen.add(key)
        style = StyleParams.from_levels(levels)
        shapes.append(generate_parametric_shape(style, shape_id=len(shapes)))
    return shapes


def build_reference_manifest(dictionary: Dictionary,
                             count: int = REFERENCE_SHAPE_COUNT) -> DatasetManifest:
    return build_dataset(reference_shapes(count), dictionary)


PLACEHOLDER_CHAIR_ID = -1
PLACEHOLDER_SHAPE_ID = -1


def make_placeholder() -> tuple[ChairShape, ChairInstance]:
    """Fixed non-database chair shown before the first selection.

    Its ids are negative, so it can never equal a database chair and a
    fresh session can never score as an immediate success.
    """
    style = StyleParams()  # all parameters at 0.5
    shape = generate_parametric_shape(style, shape_id=PLACEHOLDER_SHAPE_ID)
    assignment = ColorAssignment.from_mapping(
        {
            PartKind.ARMS: ColorId.RED,
            PartKind.BACK: ColorId.GREEN,
            PartKind.SEAT: ColorId.BLUE,
            PartKind.LEGS: ColorId.MAGENTA,
        }
    )
    instance = ChairInstance(PLACEHOLDER_CHAIR_ID, PLACEHOLDER_SHAPE_ID, assignment)
    return shape, instance


def semantic_vector(instance: ChairInstance, manifest: DatasetManifest,
                    dictionary: Dictionary) -> AttributeVector:
    """Ground-truth attribute vector for a database chair."""
    if dictionary.checksum != manifest.dictionary_checksum:
        raise ChecksumMismatchError("dictionary does not match the manifest")
    shape = manifest.shape_by_id(instance.shape_id)
    return attribute_vector_for(shape, instance.assignment)


def attribute_vector_for(shape: ChairShape, assignment: ColorAssignment) -> AttributeVector:
    """Attribute vector of any shape + coloring, database or not."""
    vec = AttributeVector.zeros()
    for part, color in assignment.assignment:
        vec.set_part_color(part, color)
    vec.levels[:] = shape.attributes
    return vec


# --- manifest persistence -------------------------------------------------

def _mesh_doc(mesh: PartMesh) -> dict:
    return {
        "vertices": [[float(x) for x in v] for v in mesh.vertices],
        "triangles": [[int(i) for i in t] for t in mesh.triangles],
    }


def _manifest_doc(manifest: DatasetManifest) -> dict:
    return {
        "version": manifest.version,
        "dictionary_checksum": manifest.dictionary_checksum,
        "counts": {"shapes": manifest.shape_count, "instances": manifest.instance_count},
        "shapes": [
            {
                "shape_id": s.shape_id,
                "style": [float(v) for v in s.style.as_array()],
                "attributes": [int(v) for v in s.attributes],
                "parts": {p.label: _mesh_doc(m) for p, m in sorted(s.parts.items(), key=lambda kv: int(kv[0]))},
            }
            for s in manifest.shapes
        ],
        "instances": [
            {
                "chair_id": i.chair_id,
                "shape_id": i.shape_id,
                "colors": {p.label: c.label for p, c in i.assignment.assignment},
            }
            for i in manifest.instances
        ],
    }


def manifest_to_text(manifest: DatasetManifest) -> str:
    body = json.dumps(_manifest_doc(manifest), sort_keys=True, separators=(",", ":"))
    digest = hashlib.sha256(body.encode("utf-8")).hexdigest()
    return json.dumps({"manifest_checksum": digest}) + "\n" + body + "\n"


def save_manifest(manifest: DatasetManifest, path: str | Path) -> None:
    Path(path).write_text(manifest_to_text(manifest), encoding="utf-8")


def load_manifest(path: str | Path) -> DatasetManifest:
    text = Path(path).read_text(encoding="utf-8")
    return manifest_from_text(text)


def manifest_from_text(text: str) -> DatasetManifest:
    header, _, body = text.partition("\n")
    body = body.rstrip("\n")
    expected = json.loads(header).get("manifest_checksum")
    actual = hashlib.sha256(body.encode("utf-8")).hexdigest()
    if expected != actual:
        raise ChecksumMismatchError("manifest checksum does not match its contents")
    doc = json.loads(body)
    if doc.get("version") != MANIFEST_VERSION:
        raise VersionMismatchError(f"unsupported manifest version {doc.get('version')!r}")
    shapes = []
    for sd in doc["shapes"]:
        parts = {
            PartKind.from_label(label): PartMesh(
                np.array(md["vertices"], dtype=np.float64),
                np.array(md["triangles"], dtype=np.int32),
            )
            for label, md in sd["parts"].items()
        }
        shapes.append(
            ChairShape(
                shape_id=sd["shape_id"],
                parts=parts,
                style=StyleParams.from_array(np.array(sd["style"])),
                attributes=np.array(sd["attributes"], dtype=np.int64),
            )
        )
    instances = [
        ChairInstance(
            chair_id=idoc["chair_id"],
            shape_id=idoc["shape_id"],
            assignment=ColorAssignment.from_mapping(
                {PartKind.from_label(p): ColorId.from_label(c) for p, c in idoc["colors"].items()}
            ),
        )
        for idoc in doc["instances"]
    ]
    manifest = DatasetManifest(
        version=doc["version"],
        dictionary_checksum=doc["dictionary_checksum"],
        shapes=shapes,
        instances=instances,
    )
    counts = doc.get("counts", {})
    if counts.get("shapes") != manifest.shape_count or counts.get("instances") != manifest.instance_count:
        raise InvalidInputError("manifest counts do not match its contents")
    return manifest


# --- pre-segmented mesh import ---------------------------------------------

def load_part_mesh_file(path: str | Path) -> dict[PartKind, PartMesh]:
    """Read the plain-text part mesh format.

    Blocks start with ``part <Name>``; ``v x y z`` lines add vertices and
    ``f i j k`` lines add triangles with 0-based indices local to the block.
    Blank lines and ``#`` comments are ignored.
    """
    parts: dict[PartKind, PartMesh] = {}
    current: PartKind | None = None
    verts: list[list[float]] = []
    tris: list[list[int]] = []

    def flush() -> None:
        nonlocal verts, tris
        if current is not None:
            parts[current] = PartMesh(np.array(verts, dtype=np.float64),
                                      np.array(tris, dtype=np.int32))
        verts, tris = [], []

    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tag, *rest = line.split()
        if tag == "part":
            flush()
            try:
                current = PartKind.from_label(rest[0])
            except (KeyError, IndexError):
                raise InvalidInputError(f"line {lineno}: unknown part header {raw!r}") from None
        elif tag == "v":
            if current is None or len(rest) != 3:
                raise InvalidInputError(f"line {lineno}: malformed vertex line")
            verts.append([float(x) for x in rest])
        elif tag == "f":
            if current is None or len(rest) != 3:
                raise InvalidInputError(f"line {lineno}: malformed face line")
            tris.append([int(x) for x in rest])
        else:
            raise InvalidInputError(f"line {lineno}: unknown directive {tag!r}")
    flush()
    missing = [p.label for p in REQUIRED_PARTS if p not in parts]
    if missing:
        raise InvalidInputError(f"imported mesh is missing required parts: {', '.join(missing)}")
    return parts


def imported_shape(shape_id: int, parts: dict[PartKind, PartMesh],
                   style: StyleParams) -> ChairShape:
    """Wrap imported part meshes as a shape; attributes derive from style."""
    copied = {p: m.copy() for p, m in parts.items()}
    return ChairShape(shape_id=shape_id, parts=copied, style=style,
                      attributes=attribute_levels(style))
