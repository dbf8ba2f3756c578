"""Unit-square lattice geometry: placed monomers, rigid polymers, and the
geometric notions of binding, saturation, and stability.

Monomers are unit squares carrying at most one domain per face, centred on
that face.  A placed monomer has an integer position and one of four
rotations (no reflection).  Bonds join complementary domains on the shared
edge of two adjacent cells; bonds are rigid, so every polymer is a rigid
arrangement of cells.  Within one polymer bonding is taken maximal: any
adjacent complementary face pair counts as a bond (skipping it could only
lower the bond count of an otherwise identical configuration).

A configuration is a multiset of polymers, each free to move rigidly in
its own frame.  Enthalpy H counts bonds, entropy S counts polymers, and a
configuration is effectively saturated when every unbound complementary
pair is geometrically prevented from binding.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

from ..core import Domain
from ..errors import BudgetExceeded, StructureUnverifiable

FACES = ("N", "E", "S", "W")

# Unit vector of each face direction (x east, y north).
_DIR = {"N": (0, 1), "E": (1, 0), "S": (0, -1), "W": (-1, 0)}
_FACE_OF_DIR = {v: k for k, v in _DIR.items()}

ROTATIONS = (0, 90, 180, 270)


def rotate_dir(direction: tuple[int, int], rotation: int) -> tuple[int, int]:
    """Rotate a unit vector counterclockwise by a multiple of 90 degrees."""
    x, y = direction
    for _ in range((rotation // 90) % 4):
        x, y = -y, x
    return (x, y)


def world_face(local_face: str, rotation: int) -> str:
    """World direction that a monomer's local face points after rotation."""
    return _FACE_OF_DIR[rotate_dir(_DIR[local_face], rotation)]


def opposite(face: str) -> str:
    return FACES[(FACES.index(face) + 2) % 4]


@dataclass(frozen=True)
class GeometricMonomerType:
    """A unit square with at most one domain per face (``None`` for a bare
    face) and at least one face occupied."""

    name: str
    north: Optional[Domain] = None
    east: Optional[Domain] = None
    south: Optional[Domain] = None
    west: Optional[Domain] = None
    family: str = ""

    def __post_init__(self) -> None:
        if all(d is None for d in self.faces().values()):
            raise ValueError(f"monomer {self.name!r} has no domains")
        for d in self.faces().values():
            if d is not None and (d.orient or d.loc is not None):
                raise ValueError(
                    f"monomer {self.name!r} carries an oriented domain; "
                    "face domains are plain labels"
                )

    def faces(self) -> dict[str, Optional[Domain]]:
        return {
            "N": self.north,
            "E": self.east,
            "S": self.south,
            "W": self.west,
        }

    def face(self, name: str) -> Optional[Domain]:
        return self.faces()[name]

    def inputs(self) -> list[tuple[str, Domain]]:
        """(face, domain) pairs for the plain (unstarred) domains."""
        return [
            (f, d) for f, d in self.faces().items()
            if d is not None and not d.star
        ]

    def outputs(self) -> list[tuple[str, Domain]]:
        """(face, domain) pairs for the starred domains."""
        return [
            (f, d) for f, d in self.faces().items()
            if d is not None and d.star
        ]


@dataclass(frozen=True)
class PlacedMonomer:
    """A monomer type at an integer cell with one of the four rotations."""

    mtype: GeometricMonomerType
    position: tuple[int, int]
    rotation: int = 0

    def __post_init__(self) -> None:
        if self.rotation not in ROTATIONS:
            raise ValueError(f"bad rotation {self.rotation!r}")

    def domain_toward(self, world: str) -> Optional[Domain]:
        """Domain on the face that points in the given world direction."""
        for local in FACES:
            if world_face(local, self.rotation) == world:
                return self.mtype.face(local)
        raise AssertionError(world)

    def world_faces(self) -> dict[str, Optional[Domain]]:
        return {
            world_face(local, self.rotation): self.mtype.face(local)
            for local in FACES
        }

    def moved(self, dx: int, dy: int) -> "PlacedMonomer":
        return PlacedMonomer(
            self.mtype, (self.position[0] + dx, self.position[1] + dy),
            self.rotation,
        )

    def rotated(self, by: int, pivot: tuple[int, int] = (0, 0)) -> "PlacedMonomer":
        """Rotate counterclockwise about a pivot cell (pivot maps to pivot)."""
        dx = self.position[0] - pivot[0]
        dy = self.position[1] - pivot[1]
        rx, ry = rotate_dir((dx, dy), by) if (dx, dy) != (0, 0) else (0, 0)
        return PlacedMonomer(
            self.mtype, (pivot[0] + rx, pivot[1] + ry),
            (self.rotation + by) % 360,
        )


Bondsite = tuple[int, str]  # (index into placements, local face)


class GeometricPolymer:
    """A rigid, connected, non-overlapping set of placed monomers.

    Bonds are derived: every pair of edge-adjacent placements whose facing
    domains are complementary is bonded.  Construction validates overlap
    and connectivity (``connected=False`` skips the connectivity check for
    transient intermediates).
    """

    __slots__ = ("placements", "_by_cell", "bonds", "_canon")

    def __init__(
        self, placements: Iterable[PlacedMonomer], connected: bool = True
    ) -> None:
        placed = tuple(placements)
        if not placed:
            raise ValueError("empty polymer")
        by_cell: dict[tuple[int, int], int] = {}
        for n, p in enumerate(placed):
            if p.position in by_cell:
                raise StructureUnverifiable(
                    f"cell {p.position} holds two monomers "
                    f"({placed[by_cell[p.position]].mtype.name} and "
                    f"{p.mtype.name})"
                )
            by_cell[p.position] = n
        object.__setattr__(self, "placements", placed)
        object.__setattr__(self, "_by_cell", by_cell)
        object.__setattr__(self, "bonds", self._derive_bonds())
        object.__setattr__(self, "_canon", None)
        if connected and not self._is_connected():
            raise StructureUnverifiable("polymer is not connected")

    def __setattr__(self, *a):  # pragma: no cover - immutability guard
        raise AttributeError("GeometricPolymer is immutable")

    def _derive_bonds(self) -> tuple[tuple[Bondsite, Bondsite], ...]:
        bonds = []
        for n, p in enumerate(self.placements):
            x, y = p.position
            # Look east and north only, so each bond is recorded once.
            for world in ("E", "N"):
                dx, dy = _DIR[world]
                m = self._by_cell.get((x + dx, y + dy))
                if m is None:
                    continue
                mine = p.domain_toward(world)
                theirs = self.placements[m].domain_toward(opposite(world))
                if (
                    mine is not None and theirs is not None
                    and mine.name == theirs.name
                    and mine.star != theirs.star
                ):
                    bonds.append(
                        ((n, self._local_face(n, world)),
                         (m, self._local_face(m, opposite(world))))
                    )
        return tuple(bonds)

    def _local_face(self, index: int, world: str) -> str:
        rot = self.placements[index].rotation
        for local in FACES:
            if world_face(local, rot) == world:
                return local
        raise AssertionError(world)

    def _is_connected(self) -> bool:
        if len(self.placements) == 1:
            return True
        adj: dict[int, set[int]] = {n: set() for n in range(len(self.placements))}
        for (a, _), (b, _) in self.bonds:
            adj[a].add(b)
            adj[b].add(a)
        seen = {0}
        queue = [0]
        while queue:
            for m in adj[queue.pop()]:
                if m not in seen:
                    seen.add(m)
                    queue.append(m)
        return len(seen) == len(self.placements)

    # ------------------------------------------------------------ queries

    @property
    def cells(self) -> frozenset[tuple[int, int]]:
        return frozenset(self._by_cell)

    def at(self, cell: tuple[int, int]) -> Optional[PlacedMonomer]:
        n = self._by_cell.get(cell)
        return None if n is None else self.placements[n]

    @property
    def bond_count(self) -> int:
        return len(self.bonds)

    def __len__(self) -> int:
        return len(self.placements)

    def type_names(self) -> list[str]:
        return [p.mtype.name for p in self.placements]

    def unbound_sites(self) -> list[tuple[int, str, Domain]]:
        """(placement index, local face, domain) for every domain whose
        facing cell is empty or holds a non-complementary face."""
        bound = set()
        for (a, fa), (b, fb) in self.bonds:
            bound.add((a, fa))
            bound.add((b, fb))
        out = []
        for n, p in enumerate(self.placements):
            for local in FACES:
                d = p.mtype.face(local)
                if d is not None and (n, local) not in bound:
                    out.append((n, local, d))
        return out

    def exposed_outputs_into(
        self, cell: tuple[int, int]
    ) -> list[tuple[str, Domain]]:
        """Unbound starred domains on neighbouring monomers that point into
        the given empty cell, as (world direction of arrival, domain).

        The direction is the face of the *cell* the domain arrives at:
        a domain pointing east out of the west neighbour arrives at the
        cell's ``W`` side.
        """
        if cell in self._by_cell:
            raise ValueError(f"cell {cell} is occupied")
        found = []
        for world in FACES:
            dx, dy = _DIR[world]
            n = self._by_cell.get((cell[0] + dx, cell[1] + dy))
            if n is None:
                continue
            d = self.placements[n].domain_toward(opposite(world))
            if d is not None and d.star:
                found.append((world, d))
        return found

    # ------------------------------------------------------ rigid motions

    def transformed(self, rotation: int, dx: int, dy: int) -> "GeometricPolymer":
        """Rotate about the origin, then translate."""
        return GeometricPolymer(
            p.rotated(rotation).moved(dx, dy) for p in self.placements
        )

    def canonical_key(self) -> tuple:
        """Identity up to translation and rotation (reflection excluded)."""
        if self._canon is not None:
            return self._canon
        best = None
        for rot in ROTATIONS:
            placed = [p.rotated(rot) for p in self.placements]
            min_x = min(p.position[0] for p in placed)
            min_y = min(p.position[1] for p in placed)
            key = tuple(sorted(
                (p.position[0] - min_x, p.position[1] - min_y,
                 p.rotation, p.mtype.name)
                for p in placed
            ))
            if best is None or key < best:
                best = key
        object.__setattr__(self, "_canon", best)
        return best

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GeometricPolymer)
            and self.canonical_key() == other.canonical_key()
        )

    def __hash__(self) -> int:
        return hash(self.canonical_key())

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        names = ",".join(sorted(self.type_names()))
        return f"GeometricPolymer({len(self)} monomers: {names})"


def single(mtype: GeometricMonomerType) -> GeometricPolymer:
    """The one-monomer polymer at the origin."""
    return GeometricPolymer([PlacedMonomer(mtype, (0, 0), 0)])


@dataclass(frozen=True)
class GeometricConfiguration:
    """A multiset of polymers: (polymer, count) pairs, counts positive.

    Equal polymers (up to rigid motion) may appear as one entry with a
    count; enthalpy and entropy weigh entries by count.
    """

    polymers: tuple[tuple[GeometricPolymer, int], ...]
    # Descriptive step metadata, not part of the configuration identity.
    note: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        if any(count <= 0 for _, count in self.polymers):
            raise ValueError("polymer counts must be positive")

    @classmethod
    def from_counts(
        cls, pairs: Iterable[tuple[GeometricPolymer, int]], note: str = ""
    ) -> "GeometricConfiguration":
        merged: dict[GeometricPolymer, int] = {}
        for poly, count in pairs:
            if count:
                merged[poly] = merged.get(poly, 0) + count
        entries = sorted(
            merged.items(), key=lambda e: (e[0].canonical_key(), e[1])
        )
        return cls(tuple(entries), note=note)

    @property
    def enthalpy(self) -> int:
        return sum(poly.bond_count * count for poly, count in self.polymers)

    @property
    def entropy(self) -> int:
        return sum(count for _, count in self.polymers)

    def monomer_census(self) -> dict[str, int]:
        census: dict[str, int] = {}
        for poly, count in self.polymers:
            for p in poly.placements:
                census[p.mtype.name] = census.get(p.mtype.name, 0) + count
        return census

    def find(self, predicate) -> list[tuple[GeometricPolymer, int]]:
        return [(p, c) for p, c in self.polymers if predicate(p)]


# -------------------------------------------------------------- can_place


def forced_motion(
    poly_a: GeometricPolymer,
    poly_b: GeometricPolymer,
    site_a: Bondsite,
    site_b: Bondsite,
) -> Optional[GeometricPolymer]:
    """The unique rigid placement of B against A that forms the candidate
    bond, or None when the domains do not pair or cells would overlap.

    Aligning one face against another fixes B completely: the rotation is
    the one putting B's face opposite A's face's world direction, and the
    translation is the one making the two cells adjacent.  (This replaces
    an exhaustive motion sweep: for centre-face unit squares every motion
    forming the bond is this one.)
    """
    na, fa = site_a
    nb, fb = site_b
    pa = poly_a.placements[na]
    pb = poly_b.placements[nb]
    da = pa.mtype.face(fa)
    db = pb.mtype.face(fb)
    if da is None or db is None:
        return None
    if da.name != db.name or da.star == db.star:
        return None
    world_a = world_face(fa, pa.rotation)
    want = opposite(world_a)
    rotation = next(
        r for r in ROTATIONS if world_face(fb, (pb.rotation + r) % 360) == want
    )
    pivot_after = pb.rotated(rotation).position
    dxy = _DIR[world_a]
    target = (pa.position[0] + dxy[0], pa.position[1] + dxy[1])
    dx = target[0] - pivot_after[0]
    dy = target[1] - pivot_after[1]
    moved = [p.rotated(rotation).moved(dx, dy) for p in poly_b.placements]
    if any(p.position in poly_a._by_cell for p in moved):
        return None
    return GeometricPolymer(list(poly_a.placements) + moved)


def can_place(
    poly_a: GeometricPolymer,
    poly_b: GeometricPolymer,
    site_a: Bondsite,
    site_b: Bondsite,
) -> bool:
    """True when a rigid motion of B forms the candidate bond against A
    with no cell overlap."""
    return forced_motion(poly_a, poly_b, site_a, site_b) is not None


# ------------------------------------------------- effective saturation


def _unbound_by_label(
    config: GeometricConfiguration,
) -> tuple[dict[str, list], dict[str, list]]:
    """Unbound plain and starred sites keyed by label.

    Each site is (entry index, placement index, local face, count).
    """
    plains: dict[str, list] = {}
    stars: dict[str, list] = {}
    for e, (poly, count) in enumerate(config.polymers):
        for n, face, d in poly.unbound_sites():
            side = stars if d.star else plains
            side.setdefault(d.label, []).append((e, n, face, count))
    return plains, stars


def effectively_saturated(
    config: GeometricConfiguration,
    collection: Optional[dict[str, int]] = None,
) -> bool:
    """Saturated, or every unbound complementary pair is geometrically
    blocked from binding.

    ``collection`` (type name -> monomer count), when given, is checked
    against the configuration's census first; a mismatch means the
    configuration does not cover the collection and is rejected.
    """
    if collection is not None:
        census = config.monomer_census()
        if census != dict(collection):
            raise StructureUnverifiable(
                "configuration census does not match the collection: "
                f"{census} != {dict(collection)}"
            )
    plains, stars = _unbound_by_label(config)
    for label, plain_sites in plains.items():
        for star_sites in (stars.get(label, []),):
            for (ep, np_, fp, cp), (es, ns, fs, cs) in itertools.product(
                plain_sites, star_sites
            ):
                if ep == es and cp < 2:
                    # One copy of one rigid polymer cannot fold onto itself.
                    continue
                poly_p = config.polymers[ep][0]
                poly_s = config.polymers[es][0]
                if can_place(poly_p, poly_s, (np_, fp), (ns, fs)):
                    return False
    return True


def assert_no_rotation(
    config: GeometricConfiguration, seed_family: str = "seed"
) -> None:
    """Check the rigidity corollary: within each polymer, any two monomers
    joined by a bond path avoiding seed-family monomers share a rotation.

    Raises StructureUnverifiable when violated.
    """
    for poly, _ in config.polymers:
        adj: dict[int, set[int]] = {
            n: set() for n in range(len(poly.placements))
        }
        for (a, _), (b, _) in poly.bonds:
            if (
                poly.placements[a].mtype.family == seed_family
                or poly.placements[b].mtype.family == seed_family
            ):
                continue
            adj[a].add(b)
            adj[b].add(a)
        seen: set[int] = set()
        for start in adj:
            if start in seen or poly.placements[start].mtype.family == seed_family:
                continue
            group = {start}
            queue = [start]
            while queue:
                for m in adj[queue.pop()]:
                    if m not in group:
                        group.add(m)
                        queue.append(m)
            seen |= group
            rotations = {poly.placements[n].rotation for n in group}
            if len(rotations) > 1:
                names = sorted(poly.placements[n].mtype.name for n in group)
                raise StructureUnverifiable(
                    "seed-avoiding component mixes rotations "
                    f"{sorted(rotations)}: {names}"
                )


# ----------------------------------------------- exhaustive stable search


@dataclass(frozen=True)
class GeoLimits:
    max_monomers: int = 12
    max_states: int = 200_000


def enumerate_stable_geometric(
    pot: Iterable[tuple[GeometricPolymer, int]],
    limits: GeoLimits = GeoLimits(),
) -> list[GeometricConfiguration]:
    """All stable configurations reachable from a pot of starting polymers.

    The pot lists pre-assembled rigid pieces (supertiles enter already
    formed) with counts.  The search merges polymer pairs along every
    placeable complementary bond, visiting every partition of the pot into
    connected placements; stability is maximal bond count, then maximal
    polymer count among those.  Intended for fixtures only: the state
    space explodes beyond about a dozen monomers.
    """
    start = GeometricConfiguration.from_counts(pot)
    total = sum(len(p) * c for p, c in start.polymers)
    if total > limits.max_monomers:
        raise BudgetExceeded(
            f"{total} monomers exceeds the {limits.max_monomers}-monomer "
            "fixture bound"
        )
    seen: set[tuple] = set()
    best: list[GeometricConfiguration] = []

    def state_key(config: GeometricConfiguration) -> tuple:
        return tuple(
            (poly.canonical_key(), count) for poly, count in config.polymers
        )

    stack = [start]
    seen.add(state_key(start))
    while stack:
        if len(seen) > limits.max_states:
            raise BudgetExceeded(
                f"state space exceeds {limits.max_states} configurations"
            )
        config = stack.pop()
        if not best or config.enthalpy > best[0].enthalpy:
            best = [config]
        elif config.enthalpy == best[0].enthalpy:
            best.append(config)
        for merged in _merge_moves(config):
            key = state_key(merged)
            if key not in seen:
                seen.add(key)
                stack.append(merged)

    h_max = max(c.enthalpy for c in best)
    best = [c for c in best if c.enthalpy == h_max]
    s_max = max(c.entropy for c in best)
    out = {
        state_key(c): c for c in best if c.entropy == s_max
    }
    return sorted(out.values(), key=state_key)


def _merge_moves(
    config: GeometricConfiguration,
) -> Iterator[GeometricConfiguration]:
    entries = config.polymers
    for ia, (poly_a, count_a) in enumerate(entries):
        for ib in range(ia, len(entries)):
            poly_b, count_b = entries[ib]
            if ia == ib and count_a < 2:
                continue
            for na, fa, da in poly_a.unbound_sites():
                for nb, fb, db in poly_b.unbound_sites():
                    if da.label != db.label or da.star == db.star:
                        continue
                    merged = forced_motion(poly_a, poly_b, (na, fa), (nb, fb))
                    if merged is None:
                        continue
                    rest = []
                    for ic, (poly, count) in enumerate(entries):
                        drop = (ic == ia) + (ic == ib)
                        if count - drop > 0:
                            rest.append((poly, count - drop))
                    rest.append((merged, 1))
                    yield GeometricConfiguration.from_counts(rest)
