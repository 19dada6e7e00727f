"""Constrained text queries, step by step.

Shows tokenizing/stemming against the dictionary, n-gram chunking with
protected pairs, incremental attribute updates with clamping, and a top-5
retrieval in the semantic space.
"""

from chairsearch import (
    PartKind,
    build_dataset,
    default_dictionary,
    knn_semantic,
    normalize,
    reference_shapes,
    segment,
    interpret,
    build_index,
    semantic_vector,
)
from chairsearch.vectors import AttributeVector

dictionary = default_dictionary()

print("== normalize ==")
for text in (
    "the legs are red stop anything after this is ignored",
    "curvier backs",
    "a plush, ROOMY seat!",
    "purple unicorn",
):
    parsed = normalize(text, dictionary)
    print(f"  {text!r} -> {parsed.pairs}"
          + (f"  ({parsed.unknown_count} unknown)" if parsed.unknown_count else ""))

print("\n== segmentation (n-gram sizes 2/4/6) ==")
parsed = normalize("red seat blue back curvy thin", dictionary)
for n in (2, 4, 6):
    chunks = segment(parsed.pairs, n)
    print(f"  n={n}: " + " | ".join(",".join(t[0] for t in c.tokens) for c in chunks))

print("\n== interpretation ==")
vec = AttributeVector.zeros()
vec.levels[:] = 2
for text in ("curvy curvy stop", "curvy curvy stop", "red seat thin legs stop"):
    parsed = normalize(text, dictionary)
    vec = interpret(segment(parsed.pairs, 6), vec, dictionary)
    curvy = next(c.concept_id for c in dictionary.concepts if c.canonical == "curvy")
    print(f"  after {text!r}: curvy level {vec.levels[curvy]}, "
          f"seat color {vec.part_color(PartKind.SEAT)}")

print("\n== retrieval ==")
print("building the 45-shape database and index (about 15 seconds)...")
manifest = build_dataset(reference_shapes(), dictionary)
index = build_index(manifest, dictionary)
results = knn_semantic(index, vec.flatten())
print("top-5 chairs for the running descriptor:")
for chair_id, distance in results.entries:
    inst = manifest.instance_by_id(chair_id)
    colors = ", ".join(f"{p.label}={c.label}" for p, c in inst.assignment.assignment)
    print(f"  chair {chair_id} (shape {inst.shape_id}) at {distance:.3f}: {colors}")

target = manifest.instances[4242]
exact = semantic_vector(target, manifest, dictionary)
print(f"\nquerying with chair {target.chair_id}'s own vector:")
print(f"  rank 1 = {knn_semantic(index, exact.flatten()).entries[0]}")
