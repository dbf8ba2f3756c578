"""Shared hypothesis strategies and seeded generators for the suite."""

from __future__ import annotations

import random

from hypothesis import strategies as st

from tbnlab.core import Domain, MonomerCollection, MonomerType

LABELS = ("a", "b", "g|0", "turn[x]", "_")


@st.composite
def domains_st(draw, labels=LABELS):
    label = draw(st.sampled_from(labels))
    orient = draw(st.sampled_from(("", "h", "v")))
    loc = None
    if orient and draw(st.booleans()):
        loc = (draw(st.integers(-2, 2)), draw(st.integers(-2, 2)))
    star = draw(st.booleans())
    return Domain(label, orient, loc, star)


@st.composite
def collections_st(draw, max_types=4, max_count=3, max_domains=4, labels=LABELS):
    n = draw(st.integers(1, max_types))
    pairs = []
    for k in range(n):
        doms = draw(
            st.lists(domains_st(labels=labels), min_size=1, max_size=max_domains)
        )
        count = draw(st.integers(1, max_count))
        pairs.append((MonomerType(f"t{k}", tuple(doms)), count))
    return MonomerCollection.from_pairs(pairs)


def draw_valid_bonds(draw, collection, saturate=False):
    """Draw a valid partial (or maximum) matching over the collection."""
    by_name: dict = {}
    for iid, t in collection.instances():
        for slot, d in enumerate(t.domains):
            by_name.setdefault(d.name, ([], []))[1 if d.star else 0].append(
                (iid, slot)
            )
    bonds = []
    for plain, stars in by_name.values():
        cap = min(len(plain), len(stars))
        k = cap if saturate else draw(st.integers(0, cap))
        chosen_p = draw(st.permutations(plain))[:k]
        chosen_s = draw(st.permutations(stars))[:k]
        bonds.extend(zip(chosen_p, chosen_s))
    return bonds


def random_collection(
    rng: random.Random, max_monomers: int = 6, max_names: int = 3
) -> MonomerCollection:
    """Seeded small random collection for solver cross-checks."""
    labels = ["a", "b", "c"][: rng.randint(1, max_names)]
    total = rng.randint(1, max_monomers)
    pairs = []
    remaining, k = total, 0
    while remaining > 0:
        count = rng.randint(1, remaining)
        doms = tuple(
            Domain(rng.choice(labels), star=rng.random() < 0.5)
            for _ in range(rng.randint(1, 3))
        )
        pairs.append((MonomerType(f"m{k}", doms), count))
        remaining -= count
        k += 1
    return MonomerCollection.from_pairs(pairs)
