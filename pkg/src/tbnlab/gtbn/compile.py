"""Compiler from a Turing machine to a geometric monomer system.

The simulation is oriented vertically: each tape snapshot is a row, rows
alternate direction (right-moving, then left-moving) and grow upward.  The
system's pieces:

* a seed supertile encoding the input word between two blank pads, with a
  start-state marker over the first input cell, an ``R*`` output that
  launches the first row, extension anchors on both flanks, and a
  ``halt``/``EXT_RIGHT`` input pair at its far right used only when two
  complete computations pair up;
* passive monomers that copy a tape value from one row to the next;
* transition monomers per machine transition: ``skip`` carries the
  state/symbol pair upward when the row runs opposite to the head's move,
  ``move1`` rewrites the cell and emits the new state sideways, ``move2``
  absorbs that state over the neighbouring cell and raises the new
  state/symbol pair (shared across transitions: it depends only on the
  target state, the value passed over, and the direction);
* two four-monomer tape-extension supertiles that terminate each row, add
  one blank tape cell, and start the next row in the other direction;
* end monomers that turn the halting pair into a rightward ``halt`` signal
  finishing the top row;
* a three-monomer L-shaped cap per piece type, presenting the two matching
  codomains so that every unused piece is enthalpy-neutrally parked.

Every input (plain) domain in the system sits on a piece and is covered by
its cap; caps expose only codomains, so caps never bind each other.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..core import Domain
from ..errors import CountsViolation, InvalidTM
from ..zigzag import LEFT, TMSpec
from .geometry import (
    FACES,
    GeometricMonomerType,
    GeometricPolymer,
    PlacedMonomer,
    _DIR,
    opposite,
)

EXT_LEFT = "EXT_LEFT"
EXT_RIGHT = "EXT_RIGHT"
HALT_SIGNAL = "halt"

SEED_NAME = "seed"
EXTL_NAME = "extL"
EXTR_NAME = "extR"


def value_domain(sym: str, row_dir: str, star: bool = False) -> Domain:
    """Tape value passed up to a row moving in ``row_dir`` ('l'/'r')."""
    return Domain(f"[{sym}.{row_dir}]", star=star)


def head_domain(state: str, sym: str, row_dir: str, star: bool = False) -> Domain:
    """State/symbol pair passed up to a row moving in ``row_dir``."""
    return Domain(f"[{state}.{sym}.{row_dir}]", star=star)


def state_domain(state: str, star: bool = False) -> Domain:
    """Sideways state signal emitted while the head changes cells."""
    return Domain(f"st.{state}", star=star)


def _d(label: str, star: bool = False) -> Domain:
    return Domain(label, star=star)


# ------------------------------------------------------------- the tables


def seed_types(tm: TMSpec, word: str) -> tuple[GeometricMonomerType, ...]:
    """The seed monomers, west to east: S1 sits on S2, then the bottom row
    S2, S3 (left pad), I1..In (input, I1 marked with the start state),
    S4 (right pad), S5 (extension anchor), S6..S8 (spacers), S9 (pairing
    inputs)."""
    n = len(word)
    link = [f"sd.{k}" for k in range(n + 9)]  # link[1..n+8] used

    def gmt(name, north=None, east=None, south=None, west=None):
        return GeometricMonomerType(
            name, north=north, east=east, south=south, west=west,
            family="seed",
        )

    types = [
        gmt("S1", north=_d(EXT_LEFT, True), east=_d("R", True),
            south=_d(link[1])),
        gmt("S2", north=_d(link[1], True), east=_d(link[2])),
        gmt("S3", north=value_domain(tm.blank, "r", True),
            east=_d(link[3]), west=_d(link[2], True)),
    ]
    for k, ch in enumerate(word, start=1):
        mark = (
            head_domain(tm.start_state, ch, "r", True)
            if k == 1 else value_domain(ch, "r", True)
        )
        types.append(gmt(
            f"I{k}", north=mark,
            east=_d(link[3 + k]), west=_d(link[2 + k], True),
        ))
    types += [
        gmt("S4", north=value_domain(tm.blank, "r", True),
            east=_d(link[4 + n]), west=_d(link[3 + n], True)),
        gmt("S5", north=_d(EXT_RIGHT, True),
            east=_d(link[5 + n]), west=_d(link[4 + n], True)),
        gmt("S6", east=_d(link[6 + n]), west=_d(link[5 + n], True)),
        gmt("S7", east=_d(link[7 + n]), west=_d(link[6 + n], True)),
        gmt("S8", east=_d(link[8 + n]), west=_d(link[7 + n], True)),
        gmt("S9", north=_d(EXT_RIGHT), east=_d(HALT_SIGNAL),
            west=_d(link[8 + n], True)),
    ]
    return tuple(types)


def passive_types(tm: TMSpec) -> tuple[GeometricMonomerType, ...]:
    """Value-copying monomers, one per tape symbol and row direction."""
    out = []
    for sym in sorted(tm.tape_alphabet):
        out.append(GeometricMonomerType(
            f"passive[{sym},L]",
            north=value_domain(sym, "r", True), east=_d("L"),
            south=value_domain(sym, "l"), west=_d("L", True),
            family="comp",
        ))
        out.append(GeometricMonomerType(
            f"passive[{sym},R]",
            north=value_domain(sym, "l", True), east=_d("R", True),
            south=value_domain(sym, "r"), west=_d("R"),
            family="comp",
        ))
    return tuple(out)


def transition_types(tm: TMSpec) -> tuple[GeometricMonomerType, ...]:
    """skip/move1 per transition and move2 per (target state, passed
    value, direction); move2 entries are shared between transitions."""
    skips, move1s, move2s = [], [], {}
    for (q, s) in sorted(tm.delta):
        q2, s2, d = tm.delta[(q, s)]
        if d == LEFT:
            skips.append(GeometricMonomerType(
                f"skip[{q},{s}]",
                north=head_domain(q, s, "l", True), east=_d("R", True),
                south=head_domain(q, s, "r"), west=_d("R"),
                family="comp",
            ))
            move1s.append(GeometricMonomerType(
                f"move1[{q},{s}]",
                north=value_domain(s2, "r", True), east=_d("L"),
                south=head_domain(q, s, "l"), west=state_domain(q2, True),
                family="comp",
            ))
            for v in sorted(tm.tape_alphabet):
                move2s[(q2, v, "L")] = GeometricMonomerType(
                    f"move2[{q2},{v},L]",
                    north=head_domain(q2, v, "r", True),
                    east=state_domain(q2),
                    south=value_domain(v, "l"), west=_d("L", True),
                    family="comp",
                )
        else:
            skips.append(GeometricMonomerType(
                f"skip[{q},{s}]",
                north=head_domain(q, s, "r", True), east=_d("L"),
                south=head_domain(q, s, "l"), west=_d("L", True),
                family="comp",
            ))
            move1s.append(GeometricMonomerType(
                f"move1[{q},{s}]",
                north=value_domain(s2, "l", True),
                east=state_domain(q2, True),
                south=head_domain(q, s, "r"), west=_d("R"),
                family="comp",
            ))
            for v in sorted(tm.tape_alphabet):
                move2s[(q2, v, "R")] = GeometricMonomerType(
                    f"move2[{q2},{v},R]",
                    north=head_domain(q2, v, "l", True),
                    east=_d("R", True),
                    south=value_domain(v, "r"), west=state_domain(q2),
                    family="comp",
                )
    shared = [move2s[key] for key in sorted(move2s)]
    return tuple(skips + move1s + shared)


def extension_types(tm: TMSpec) -> tuple[GeometricMonomerType, ...]:
    """The eight tape-extension monomers: two 2x2 supertiles, each ending a
    row, contributing one blank cell to the next row, and re-arming its
    flank's extension anchor."""
    b = tm.blank
    return (
        GeometricMonomerType(
            "extL1", north=_d("xl.41", True), east=_d("xl.12"),
            family="ext"),
        GeometricMonomerType(
            "extL2", north=_d("xl.23"), east=_d("L"),
            south=_d(EXT_LEFT), west=_d("xl.12", True), family="ext"),
        GeometricMonomerType(
            "extL3", north=value_domain(b, "l", True), east=_d("R", True),
            south=_d("xl.23", True), west=_d("xl.34"), family="ext"),
        GeometricMonomerType(
            "extL4", north=_d(EXT_LEFT, True), east=_d("xl.34", True),
            south=_d("xl.41"), family="ext"),
        GeometricMonomerType(
            "extR1", north=_d("xr.41", True), west=_d("xr.12"),
            family="ext"),
        GeometricMonomerType(
            "extR2", north=_d("xr.23"), east=_d("xr.12", True),
            south=_d(EXT_RIGHT), west=_d("R"), family="ext"),
        GeometricMonomerType(
            "extR3", north=value_domain(b, "r", True), east=_d("xr.34"),
            south=_d("xr.23", True), west=_d("L", True), family="ext"),
        GeometricMonomerType(
            "extR4", north=_d(EXT_RIGHT, True), south=_d("xr.41"),
            west=_d("xr.34", True), family="ext"),
    )


def end_types(tm: TMSpec) -> tuple[GeometricMonomerType, ...]:
    """Halt-row monomers.  The halting pair arrives either over a
    left-moving row (haltL re-raises it for the next, right-moving row) or
    directly over a right-moving row, where haltR converts it into a
    rightward halt signal; haltpass monomers carry that signal over the
    remaining cells, leaving no north outputs, so the top row is always
    right-growing."""
    out = []
    for bit in ("0", "1"):
        if bit not in tm.tape_alphabet:
            continue
        out.append(GeometricMonomerType(
            f"haltL[{bit}]",
            north=head_domain(tm.halt_state, bit, "r", True), east=_d("L"),
            south=head_domain(tm.halt_state, bit, "l"), west=_d("L", True),
            family="end",
        ))
        out.append(GeometricMonomerType(
            f"haltR[{bit}]",
            east=_d(HALT_SIGNAL, True),
            south=head_domain(tm.halt_state, bit, "r"), west=_d("R"),
            family="end",
        ))
    for sym in sorted(tm.tape_alphabet):
        out.append(GeometricMonomerType(
            f"haltpass[{sym}]",
            east=_d(HALT_SIGNAL, True),
            south=value_domain(sym, "r"), west=_d(HALT_SIGNAL),
            family="end",
        ))
    return tuple(out)


# ----------------------------------------------------------------- pieces


@dataclass(frozen=True)
class CapSpec:
    """A piece's cap: three monomers forming an L around the corner shared
    by the piece's two input faces, presenting the matching codomains."""

    name: str
    members: tuple[GeometricMonomerType, ...]
    polymer: GeometricPolymer

    @property
    def bond_count(self) -> int:
        return self.polymer.bond_count  # the two glue bonds


@dataclass(frozen=True)
class Piece:
    """One cappable unit: the seed, a computation or end monomer, or a
    tape-extension supertile.  The polymer is assembled with the
    input-bearing monomer at the origin."""

    name: str
    kind: str  # "seed" | "comp" | "ext" | "end"
    polymer: GeometricPolymer
    input_faces: tuple[tuple[str, Domain], ...]  # on the origin monomer
    cap: CapSpec
    capped: GeometricPolymer  # piece with its cap attached


def _build_cap(
    target: str, inputs: tuple[tuple[str, Domain], ...], glue_index: int
) -> CapSpec:
    """The L-shaped cap for a piece whose two inputs sit on the origin
    cell: an arm opposite each input face and a corner joining the arms
    with two unique glue pairs."""
    (face1, dom1), (face2, dom2) = inputs
    glue_a = f"cg.{glue_index}.a"
    glue_b = f"cg.{glue_index}.b"
    arm1_faces = {opposite(face1): dom1.complement(), face2: _d(glue_a)}
    corner_faces = {
        opposite(face2): _d(glue_a, True), opposite(face1): _d(glue_b),
    }
    arm2_faces = {face1: _d(glue_b, True), opposite(face2): dom2.complement()}

    def gmt(suffix, faces):
        kw = {f.lower(): None for f in ("North", "East", "South", "West")}
        for f, d in faces.items():
            kw[{"N": "north", "E": "east", "S": "south", "W": "west"}[f]] = d
        return GeometricMonomerType(
            f"cap[{target}].{suffix}", family="cap", **kw
        )

    members = (gmt(1, arm1_faces), gmt(2, corner_faces), gmt(3, arm2_faces))
    d1, d2 = _DIR[face1], _DIR[face2]
    polymer = GeometricPolymer([
        PlacedMonomer(members[0], d1, 0),
        PlacedMonomer(members[1], (d1[0] + d2[0], d1[1] + d2[1]), 0),
        PlacedMonomer(members[2], d2, 0),
    ])
    return CapSpec(f"cap[{target}]", members, polymer)


def _make_piece(
    name: str,
    kind: str,
    polymer: GeometricPolymer,
    glue_index: int,
) -> Piece:
    origin = polymer.at((0, 0))
    if origin is None:
        raise AssertionError(f"piece {name} has no origin monomer")
    unbound_plains = [
        (poly_face, d)
        for n, poly_face, d in polymer.unbound_sites()
        if not d.star
    ]
    inputs = [
        (face, d) for face, d in
        ((f, origin.mtype.face(f)) for f in FACES)
        if d is not None and not d.star
    ]
    if len(inputs) != 2 or len(unbound_plains) != 2:
        raise AssertionError(
            f"piece {name} must expose exactly two inputs on its origin "
            f"monomer, found {inputs} / {unbound_plains}"
        )
    if opposite(inputs[0][0]) == inputs[1][0]:
        raise AssertionError(
            f"piece {name} has opposite-face inputs; no L cap reaches both"
        )
    cap = _build_cap(name, tuple(inputs), glue_index)
    capped = GeometricPolymer(
        list(polymer.placements) + list(cap.polymer.placements)
    )
    expected = polymer.bond_count + cap.polymer.bond_count + 2
    if capped.bond_count != expected:
        raise AssertionError(
            f"cap for {name} makes {capped.bond_count - polymer.bond_count - cap.polymer.bond_count} bonds, wanted 2"
        )
    return Piece(name, kind, polymer, tuple(inputs), cap, capped)


def _assemble_seed(types: tuple[GeometricMonomerType, ...]) -> GeometricPolymer:
    """Bottom row S2,S3,I*,S4..S9 left to right with S1 on top of S2; the
    whole row shifted so S9 (the input-bearing member) is at the origin."""
    bottom = [t for t in types if t.name != "S1"]
    width = len(bottom)
    placements = [
        PlacedMonomer(t, (x - (width - 1), 0), 0)
        for x, t in enumerate(bottom)
    ]
    s1 = next(t for t in types if t.name == "S1")
    placements.append(PlacedMonomer(s1, (-(width - 1), 1), 0))
    return GeometricPolymer(placements)


def _assemble_extension(
    types: tuple[GeometricMonomerType, ...], side: str
) -> GeometricPolymer:
    by_name = {t.name: t for t in types}
    if side == "L":
        layout = {"extL2": (0, 0), "extL1": (-1, 0),
                  "extL3": (0, 1), "extL4": (-1, 1)}
    else:
        layout = {"extR2": (0, 0), "extR1": (1, 0),
                  "extR3": (0, 1), "extR4": (1, 1)}
    return GeometricPolymer(
        PlacedMonomer(by_name[n], pos, 0) for n, pos in layout.items()
    )


# ----------------------------------------------------------- construction


@dataclass(frozen=True)
class GtbnCounts:
    """Relative counts: seeds <= pieces < caps, so that every piece can
    keep its own cap and still leave spares."""

    seed_count: int = 2
    piece_count: int = 8
    cap_count: int = 9

    def __post_init__(self) -> None:
        if not 1 <= self.seed_count <= self.piece_count:
            raise CountsViolation(
                f"need 1 <= seeds ({self.seed_count}) <= pieces "
                f"({self.piece_count})"
            )
        if self.cap_count <= self.piece_count:
            raise CountsViolation(
                f"caps ({self.cap_count}) must outnumber pieces "
                f"({self.piece_count})"
            )

    def of(self, piece: Piece) -> int:
        return self.seed_count if piece.kind == "seed" else self.piece_count


@dataclass(frozen=True)
class GtbnConstruction:
    """Every monomer type and pre-assembled piece for one machine+input."""

    tm: TMSpec
    word: str
    seed_members: tuple[GeometricMonomerType, ...]
    passive_members: tuple[GeometricMonomerType, ...]
    transition_members: tuple[GeometricMonomerType, ...]
    extension_members: tuple[GeometricMonomerType, ...]
    end_members: tuple[GeometricMonomerType, ...]
    pieces: tuple[Piece, ...]

    def piece(self, name: str) -> Piece:
        for p in self.pieces:
            if p.name == name:
                return p
        raise KeyError(name)

    @property
    def seed(self) -> Piece:
        return self.piece(SEED_NAME)

    @property
    def transition_type_count(self) -> int:
        return len(self.transition_members)

    def monomer_types(self) -> tuple[GeometricMonomerType, ...]:
        caps = tuple(m for p in self.pieces for m in p.cap.members)
        return (
            self.seed_members + self.passive_members
            + self.transition_members + self.extension_members
            + self.end_members + caps
        )

    def census(self, counts: GtbnCounts) -> dict[str, int]:
        """Monomer counts implied by the counts policy (supertile members
        move in lockstep)."""
        out: dict[str, int] = {}
        for piece in self.pieces:
            for placed in piece.polymer.placements:
                out[placed.mtype.name] = counts.of(piece)
            for member in piece.cap.members:
                out[member.name] = counts.cap_count
        return out


def compile_tm_gtbn(tm: TMSpec, word: str) -> GtbnConstruction:
    """Compile the machine and input into the geometric monomer system."""
    tm.check_input(word)
    if not word:
        raise InvalidTM("the seed needs at least one input monomer")
    seeds = seed_types(tm, word)
    passives = passive_types(tm)
    transitions = transition_types(tm)
    extensions = extension_types(tm)
    ends = end_types(tm)

    pieces = []
    glue = iter(range(10_000))
    pieces.append(_make_piece(
        SEED_NAME, "seed", _assemble_seed(seeds), next(glue)))
    for t in passives + transitions:
        pieces.append(_make_piece(
            t.name, "comp", GeometricPolymer([PlacedMonomer(t, (0, 0), 0)]),
            next(glue)))
    pieces.append(_make_piece(
        EXTL_NAME, "ext", _assemble_extension(extensions, "L"), next(glue)))
    pieces.append(_make_piece(
        EXTR_NAME, "ext", _assemble_extension(extensions, "R"), next(glue)))
    for t in ends:
        pieces.append(_make_piece(
            t.name, "end", GeometricPolymer([PlacedMonomer(t, (0, 0), 0)]),
            next(glue)))
    return GtbnConstruction(
        tm=tm,
        word=word,
        seed_members=seeds,
        passive_members=passives,
        transition_members=transitions,
        extension_members=extensions,
        end_members=ends,
        pieces=tuple(pieces),
    )
