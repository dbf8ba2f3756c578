"""Turing-machine interpreter and zig-zag tile self-assembly.

A space-s, time-t bounded machine run is laid out as a rectangle: tape
cell n sits at row y = n, each column applies one full tape pass, and
columns alternate growth direction (even columns ascend, odd descend).
The head transition fires only in a column whose growth direction
matches the move (R ascending, L descending), which guarantees at
least one step per column pair; a pending transition simply rides
along as a head-marked cell value until a matching column arrives.

Glue label namespace (also the domain namespace of the compiler built
on top of this module):

  value glues   v|tok   vT|tok (top row)   vB|tok (bottom row)
                vE|tok (current top, unbounded mode)
  turn glues    tu|tok (into ascending col)  td|tok (into descending)
                ts?|tok (height-1 solo columns)  tuE|tok (unbounded)
  chain glues   u|C and d|C with C in {pre, post, halt, carry.q}
  grow glue     gr|C (unbounded column extension, strength 2)
  input column  ic|y (strength 2 spine)

Cell tokens are "sym" or "sym.state" for a head-marked cell.  All
states and symbols are restricted to [A-Za-z0-9_]+ so every label
stays inside the domain-token grammar.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Iterator, NamedTuple, Optional

from .errors import (
    BudgetExceeded,
    FormatError,
    InvalidTM,
    NondeterministicAttachment,
    NotHaltingWithinBounds,
)

_WORD = re.compile(r"^[A-Za-z0-9_]+$")

LEFT = "L"
RIGHT = "R"
BLANK = "_"

# chain states of a column pass
PRE = "pre"  # head not seen yet
POST = "post"  # head seen (or deferred); copy the rest
HALT = "halt"  # head seen and the machine has halted (no-pad tilesets)


def _carry(state: str) -> tuple[str, str]:
    return ("carry", state)


def chain_str(chain) -> str:
    if isinstance(chain, tuple):
        return f"carry.{chain[1]}"
    return chain


Token = tuple[str, Optional[str]]  # (symbol, head state or None)


def token_str(tok: Token) -> str:
    sym, mark = tok
    return sym if mark is None else f"{sym}.{mark}"


def parse_token(text: str) -> Token:
    if "." in text:
        sym, mark = text.split(".", 1)
        return sym, mark
    return text, None


# --------------------------------------------------------------- machine


@dataclass(frozen=True)
class TMSpec:
    """A deterministic single-tape machine with a total transition
    function on (Q minus halt) x Gamma."""

    states: tuple[str, ...]
    input_alphabet: tuple[str, ...]
    tape_alphabet: tuple[str, ...]
    delta: dict[tuple[str, str], tuple[str, str, str]]
    start_state: str
    halt_state: str
    blank: str = BLANK

    def __post_init__(self) -> None:
        q, g = set(self.states), set(self.tape_alphabet)
        for name in (*self.states, *self.tape_alphabet):
            if not _WORD.match(name):
                raise InvalidTM(f"bad state/symbol {name!r}: need [A-Za-z0-9_]+")
        if len(q) != len(self.states) or len(g) != len(self.tape_alphabet):
            raise InvalidTM("duplicate states or tape symbols")
        if not set(self.input_alphabet) <= g:
            raise InvalidTM("input alphabet must be a subset of the tape alphabet")
        if self.blank not in g:
            raise InvalidTM(f"blank {self.blank!r} missing from the tape alphabet")
        if self.start_state not in q or self.halt_state not in q:
            raise InvalidTM("start/halt state not in the state set")
        need = {(s, a) for s in q - {self.halt_state} for a in g}
        have = set(self.delta)
        if have != need:
            missing = sorted(need - have)[:3]
            extra = sorted(have - need)[:3]
            raise InvalidTM(
                f"delta must be total and only on non-halt states; "
                f"missing {missing}, extra {extra}"
            )
        for (s, a), (s2, a2, d) in self.delta.items():
            if s2 not in q or a2 not in g or d not in (LEFT, RIGHT):
                raise InvalidTM(f"bad transition {(s, a)} -> {(s2, a2, d)}")

    def check_input(self, word: str) -> None:
        for ch in word:
            if ch not in self.input_alphabet:
                raise InvalidTM(f"input symbol {ch!r} not in the input alphabet")


def parse_tm(text: str) -> TMSpec:
    """Parse the textual machine format::

        states: A,B,H      input: 0,1       tape: 0,1,_
        start: A           halt: H
        A,0 -> B,1,R

    '#' starts a comment; blank lines are skipped."""
    headers: dict[str, str] = {}
    delta: dict[tuple[str, str], tuple[str, str, str]] = {}
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "->" in line:
            lhs, rhs = (part.strip() for part in line.split("->", 1))
            try:
                s, a = (p.strip() for p in lhs.split(","))
                s2, a2, d = (p.strip() for p in rhs.split(","))
            except ValueError:
                raise InvalidTM(f"line {ln}: want 'q,a -> q2,a2,L|R': {raw!r}")
            if (s, a) in delta:
                raise InvalidTM(f"line {ln}: duplicate transition for ({s},{a})")
            delta[(s, a)] = (s2, a2, d)
        elif ":" in line:
            key, val = (p.strip() for p in line.split(":", 1))
            if key in headers:
                raise InvalidTM(f"line {ln}: duplicate header {key!r}")
            headers[key] = val
        else:
            raise InvalidTM(f"line {ln}: unrecognized line {raw!r}")
    missing = {"states", "input", "tape", "start", "halt"} - set(headers)
    if missing:
        raise InvalidTM(f"missing headers: {sorted(missing)}")

    def split(key: str) -> tuple[str, ...]:
        return tuple(p.strip() for p in headers[key].split(",") if p.strip())

    return TMSpec(
        states=split("states"),
        input_alphabet=split("input"),
        tape_alphabet=split("tape"),
        delta=delta,
        start_state=headers["start"],
        halt_state=headers["halt"],
    )


def dump_tm(tm: TMSpec) -> str:
    lines = [
        f"states: {','.join(tm.states)}",
        f"input: {','.join(tm.input_alphabet)}",
        f"tape: {','.join(tm.tape_alphabet)}",
        f"start: {tm.start_state}",
        f"halt: {tm.halt_state}",
    ]
    for (s, a) in sorted(tm.delta):
        s2, a2, d = tm.delta[(s, a)]
        lines.append(f"{s},{a} -> {s2},{a2},{d}")
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------- interpreter


@dataclass(frozen=True)
class TmRun:
    """Result of a direct head-by-head run (the reference the column
    passes are checked against)."""

    tape: str  # window cells_lo..cells_hi
    halted: bool
    steps_used: int
    cells_used: int
    state: str
    head: int
    cells_lo: int
    cells_hi: int
    cells: dict[int, str] = field(repr=False, default_factory=dict)

    def window(self, start: int, stop: int, blank: str = BLANK) -> str:
        return "".join(self.cells.get(n, blank) for n in range(start, stop))


def tm_steps(tm: TMSpec, word: str) -> Iterator[tuple[str, int, dict[int, str]]]:
    """Yield (state, head, tape) before each step, then after the last."""
    tm.check_input(word)
    tape = {n: ch for n, ch in enumerate(word)}
    state, head = tm.start_state, 0
    while True:
        yield state, head, dict(tape)
        if state == tm.halt_state:
            return
        sym = tape.get(head, tm.blank)
        state, sym2, move = tm.delta[(state, sym)]
        tape[head] = sym2
        head += 1 if move == RIGHT else -1


def run_tm(tm: TMSpec, word: str, max_steps: int) -> TmRun:
    """Run to the halt state, raising the budget error if max_steps
    transitions do not reach it."""
    steps = -1
    lo = hi = 0
    if word:
        hi = len(word) - 1
    state, head, tape = tm.start_state, 0, {}
    for steps, (state, head, tape) in enumerate(tm_steps(tm, word)):
        lo, hi = min(lo, head), max(hi, head)
        if state == tm.halt_state:
            break
        if steps >= max_steps:
            raise BudgetExceeded(
                f"machine not halted after {max_steps} steps"
            )
    window = "".join(tape.get(n, tm.blank) for n in range(lo, hi + 1))
    return TmRun(
        tape=window,
        halted=True,
        steps_used=steps,
        cells_used=hi - lo + 1,
        state=state,
        head=head,
        cells_lo=lo,
        cells_hi=hi,
        cells=tape,
    )


# ------------------------------------------------------------ pass rules


def pass_step(
    tm: TMSpec, fires_right: bool, chain, cell: Token, pad: bool
) -> Optional[tuple[Token, object]]:
    """One cell of a column pass: (chain in, cell) -> (cell out, chain
    out), or None where no tile exists (a second head, or an absorbed
    head meeting another mark)."""
    sym, mark = cell
    want = RIGHT if fires_right else LEFT
    if chain == PRE:
        if mark is None:
            return cell, PRE
        if mark == tm.halt_state:
            return cell, (POST if pad else HALT)
        state2, sym2, move = tm.delta[(mark, sym)]
        if move == want:
            return (sym2, None), _carry(state2)
        return cell, POST  # deferred: the mark rides along
    if isinstance(chain, tuple):  # carry: the head lands here
        if mark is not None:
            return None
        state2 = chain[1]
        halted = state2 == tm.halt_state
        return (sym, state2), (HALT if halted and not pad else POST)
    if chain in (POST, HALT):
        if mark is not None:
            return None
        return cell, chain
    raise ValueError(f"bad chain state {chain!r}")


class RoleRec(NamedTuple):
    """One bounded-column tile in role terms; the tile builder and the
    monomer compiler both consume these."""

    role: str  # uf um ul df dm dl
    tok_in: Token
    chain_in: object  # PRE for first roles
    tok_out: Token
    chain_out: object


def _tokens(tm: TMSpec) -> list[Token]:
    plain = [(a, None) for a in tm.tape_alphabet]
    marked = [(a, q) for q in tm.states for a in tm.tape_alphabet]
    return plain + marked


def _chains(tm: TMSpec, pad: bool) -> list:
    base: list = [PRE, POST]
    if not pad:
        base.append(HALT)
    return base + [_carry(q) for q in tm.states]


def _chain_valid(chain, tok: Token) -> bool:
    if chain == PRE:
        return True
    return tok[1] is None  # post/halt/carry only ever see plain cells


def role_records(tm: TMSpec, pad: bool) -> list[RoleRec]:
    """Every bounded-column tile for heights >= 2, in role terms.  A
    first role always starts its pass at PRE; a last role drops the
    case where the pending move would step off the tape."""
    out: list[RoleRec] = []
    for parity, (first, mid, last) in (
        (True, ("uf", "um", "ul")),
        (False, ("df", "dm", "dl")),
    ):
        for tok in _tokens(tm):
            step = pass_step(tm, parity, PRE, tok, pad)
            out.append(RoleRec(first, tok, PRE, *step))
        for chain in _chains(tm, pad):
            for tok in _tokens(tm):
                if not _chain_valid(chain, tok):
                    continue
                step = pass_step(tm, parity, chain, tok, pad)
                if step is None:
                    continue
                out.append(RoleRec(mid, tok, chain, *step))
                if chain == PRE and isinstance(step[1], tuple):
                    continue  # a fire at the boundary cell escapes: no last tile
                out.append(RoleRec(last, tok, chain, *step))
    return out


def tile_name(role: str, tok: Token, chain) -> str:
    if role in ("uf", "df"):
        return f"{role}[{token_str(tok)}]"
    return f"{role}[{token_str(tok)},{chain_str(chain)}]"


# ------------------------------------------------------------- tile types


class Glue(NamedTuple):
    label: str
    strength: int


class TileType(NamedTuple):
    name: str
    north: Optional[Glue] = None
    east: Optional[Glue] = None
    south: Optional[Glue] = None
    west: Optional[Glue] = None

    def glue(self, side: str) -> Optional[Glue]:
        return getattr(self, side)


def value_label(tag: str, tok: Token) -> str:
    return f"{tag}|{token_str(tok)}"


def chain_label(up: bool, chain) -> str:
    return f"{'u' if up else 'd'}|{chain_str(chain)}"


def _check_glue_strengths(tiles) -> None:
    seen: dict[str, int] = {}
    for t in tiles:
        for side in ("north", "east", "south", "west"):
            g = t.glue(side)
            if g is None:
                continue
            if seen.setdefault(g.label, g.strength) != g.strength:
                raise FormatError(
                    f"glue {g.label!r} used at two strengths "
                    f"({seen[g.label]} and {g.strength})"
                )
    # labels must be one global strength: required for well-defined
    # attachment and for the tile->monomer conversion


def _bounded_tiles(tm: TMSpec, s: int, pad: bool) -> list[TileType]:
    tiles: list[TileType] = []
    if s == 1:
        # solo columns: the single cell is both column ends
        for parity, wlab, elab in ((True, "tse", "tso"), (False, "tso", "tse")):
            for tok in _tokens(tm):
                tok2, chain2 = pass_step(tm, parity, PRE, tok, pad)
                if isinstance(chain2, tuple):
                    continue  # a fire escapes a height-1 tape
                east = None if chain2 == HALT else Glue(value_label(elab, tok2), 2)
                tiles.append(
                    TileType(
                        name=f"s{'e' if parity else 'o'}[{token_str(tok)}]",
                        west=Glue(value_label(wlab, tok), 2),
                        east=east,
                    )
                )
        return tiles

    for rec in role_records(tm, pad):
        name = tile_name(rec.role, rec.tok_in, rec.chain_in)
        up = rec.role.startswith("u")
        halted = rec.chain_out == HALT
        if rec.role == "uf":
            tiles.append(
                TileType(
                    name,
                    west=Glue(value_label("tu", rec.tok_in), 2),
                    east=Glue(value_label("vB", rec.tok_out), 1),
                    north=Glue(chain_label(True, rec.chain_out), 1),
                )
            )
        elif rec.role == "um":
            tiles.append(
                TileType(
                    name,
                    west=Glue(value_label("v", rec.tok_in), 1),
                    south=Glue(chain_label(True, rec.chain_in), 1),
                    east=Glue(value_label("v", rec.tok_out), 1),
                    north=Glue(chain_label(True, rec.chain_out), 1),
                )
            )
        elif rec.role == "ul":
            turn = None if halted else Glue(value_label("td", rec.tok_out), 2)
            tiles.append(
                TileType(
                    name,
                    west=Glue(value_label("vT", rec.tok_in), 1),
                    south=Glue(chain_label(True, rec.chain_in), 1),
                    east=turn,
                )
            )
        elif rec.role == "df":
            tiles.append(
                TileType(
                    name,
                    west=Glue(value_label("td", rec.tok_in), 2),
                    east=Glue(value_label("vT", rec.tok_out), 1),
                    south=Glue(chain_label(False, rec.chain_out), 1),
                )
            )
        elif rec.role == "dm":
            tiles.append(
                TileType(
                    name,
                    west=Glue(value_label("v", rec.tok_in), 1),
                    north=Glue(chain_label(False, rec.chain_in), 1),
                    east=Glue(value_label("v", rec.tok_out), 1),
                    south=Glue(chain_label(False, rec.chain_out), 1),
                )
            )
        elif rec.role == "dl":
            turn = None if halted else Glue(value_label("tu", rec.tok_out), 2)
            tiles.append(
                TileType(
                    name,
                    west=Glue(value_label("vB", rec.tok_in), 1),
                    north=Glue(chain_label(False, rec.chain_in), 1),
                    east=turn,
                )
            )
    # mids only exist for s >= 3
    if s == 2:
        tiles = [t for t in tiles if not t.name.startswith(("um", "dm"))]
    return tiles


def _unbounded_tiles(tm: TMSpec) -> list[TileType]:
    """Free-height variant: an edge-tagged west value makes the top
    tile emit a strength-2 grow glue, a blank cap extends the column by
    one cell (absorbing an arriving head into the fresh cell), and the
    cap's east is the turn.  Heights gain one cell per column pair."""
    tiles = list(_bounded_tiles(tm, 3, pad=False))
    # drop the bounded edge roles: ul reads vT (never emitted here) and
    # the bounded df is replaced by an edge-tagged variant below
    tiles = [t for t in tiles if not t.name.startswith(("ul", "df"))]
    for tok in _tokens(tm):
        # descending first: reads the turn at the current top; its east
        # is edge-tagged so the next ascending column knows where to grow
        tok2, chain2 = pass_step(tm, False, PRE, tok, pad=False)
        tiles.append(
            TileType(
                f"df[{token_str(tok)}]",
                west=Glue(value_label("td", tok), 2),
                east=Glue(value_label("vE", tok2), 1),
                south=Glue(chain_label(False, chain2), 1),
            )
        )
        # ascending edge reader at the old top: pass the cell, then
        # request the one-cell extension (a carry rides the grow glue
        # and is absorbed by the cap's fresh blank cell)
        for chain in _chains(tm, pad=False):
            if not _chain_valid(chain, tok):
                continue
            step = pass_step(tm, True, chain, tok, pad=False)
            if step is None:
                continue
            tok2, chain2 = step
            grow = None if chain2 == HALT else Glue(f"gr|{chain_str(chain2)}", 2)
            tiles.append(
                TileType(
                    f"ue[{token_str(tok)},{chain_str(chain)}]",
                    west=Glue(value_label("vE", tok), 1),
                    south=Glue(chain_label(True, chain), 1),
                    east=Glue(value_label("v", tok2), 1),
                    north=grow,
                )
            )
        # height-1 input column: the single first cell is also the edge
        tok2, chain2 = pass_step(tm, True, PRE, tok, pad=False)
        grow = None if chain2 == HALT else Glue(f"gr|{chain_str(chain2)}", 2)
        tiles.append(
            TileType(
                f"ufe[{token_str(tok)}]",
                west=Glue(value_label("tuE", tok), 2),
                east=Glue(value_label("vB", tok2), 1),
                north=grow,
            )
        )
    # the extension caps: a fresh blank cell at the new top
    for chain in _chains(tm, pad=False):
        if chain == HALT:
            continue
        step = pass_step(tm, True, chain, (tm.blank, None), pad=False)
        if step is None:
            continue
        tok2, chain2 = step
        turn = None if chain2 == HALT else Glue(value_label("td", tok2), 2)
        tiles.append(
            TileType(
                f"uc[{chain_str(chain)}]",
                south=Glue(f"gr|{chain_str(chain)}", 2),
                east=turn,
            )
        )
    return tiles


def build_zigzag_tileset(
    tm: TMSpec,
    space_bound: Optional[int] = None,
    pad_after_halt: bool = False,
) -> tuple[tuple[TileType, ...], Callable[[str], tuple[TileType, ...]]]:
    """Tile set plus the input-column family for a machine.

    With a space bound every column is exactly that tall; without one,
    ascending columns add a single fresh blank cell.  After the halt
    state appears, growth stops once the column completes, unless
    pad_after_halt keeps emitting no-op columns (the monomer compiler
    requests that variant so a simulation always fills its full time
    budget)."""
    if space_bound is not None and space_bound < 1:
        raise InvalidTM("space bound must be at least 1")
    if space_bound is None and pad_after_halt:
        raise InvalidTM("pad_after_halt needs a space bound")
    if space_bound is None:
        tiles = _unbounded_tiles(tm)
    else:
        tiles = _bounded_tiles(tm, space_bound, pad_after_halt)
    _check_glue_strengths(tiles)
    names = [t.name for t in tiles]
    if len(names) != len(set(names)):
        raise FormatError("duplicate tile names in generated set")

    def input_tiles(word: str) -> tuple[TileType, ...]:
        tm.check_input(word)
        s = space_bound
        if s is not None:
            if len(word) > s:
                raise InvalidTM(f"input longer than the space bound {s}")
            cells = list(word) + [tm.blank] * (s - len(word))
        else:
            cells = list(word) if word else [tm.blank]
        n = len(cells)
        head0: Token = (cells[0], tm.start_state)
        fam: list[TileType] = []
        for y, sym in enumerate(cells):
            north = Glue(f"ic|{y + 1}", 2) if y < n - 1 else None
            south = Glue(f"ic|{y}", 2) if y > 0 else None
            if y == 0:
                if s == 1:
                    east = Glue(value_label("tse", head0), 2)
                elif s is None and n == 1:
                    east = Glue(value_label("tuE", head0), 2)
                else:
                    east = Glue(value_label("tu", head0), 2)
            elif y == n - 1:
                tag = "vT" if s is not None else "vE"
                east = Glue(value_label(tag, (sym, None)), 1)
            else:
                east = Glue(value_label("v", (sym, None)), 1)
            fam.append(TileType(f"in[{y}]", north=north, east=east, south=south))
        _check_glue_strengths(list(tiles) + fam)
        return tuple(fam)

    return tuple(tiles), input_tiles


# -------------------------------------------------------------- assembly


@dataclass
class Assembly:
    placements: dict[tuple[int, int], TileType]
    order: list[tuple[int, int]]

    def name_at(self, x: int, y: int) -> Optional[str]:
        t = self.placements.get((x, y))
        return t.name if t else None

    def bounds(self) -> tuple[int, int, int, int]:
        xs = [x for x, _ in self.placements]
        ys = [y for _, y in self.placements]
        return min(xs), min(ys), max(xs), max(ys)

    def dump(self) -> str:
        lines = [
            f"{x} {y} {self.placements[(x, y)].name}"
            for (x, y) in sorted(self.placements)
        ]
        return "\n".join(lines) + "\n"


_SIDES = {
    "north": (0, 1, "south"),
    "east": (1, 0, "west"),
    "south": (0, -1, "north"),
    "west": (-1, 0, "east"),
}


def _binding_strength(
    placements: dict[tuple[int, int], TileType], pos: tuple[int, int], tile: TileType
) -> int:
    total = 0
    for side, (dx, dy, opposite) in _SIDES.items():
        mine = tile.glue(side)
        if mine is None:
            continue
        nb = placements.get((pos[0] + dx, pos[1] + dy))
        if nb is None:
            continue
        theirs = nb.glue(opposite)
        if theirs is not None and theirs.label == mine.label:
            total += mine.strength
    return total


def assemble(
    tile_set,
    seed: TileType,
    temperature: int = 2,
    max_tiles: int = 100_000,
) -> Assembly:
    """Grow the unique terminal assembly from a single seed at the
    origin.  Each round every frontier site is examined; a site that
    admits two distinct tile types is a nondeterministic attachment
    (generator bug), and exceeding max_tiles placements raises the
    budget error before returning a partial assembly."""
    placements = {(0, 0): seed}
    order = [(0, 0)]
    tiles = tuple(tile_set)
    while True:
        frontier: dict[tuple[int, int], list[TileType]] = {}
        for pos in placements:
            for dx, dy, _ in _SIDES.values():
                site = (pos[0] + dx, pos[1] + dy)
                if site in placements or site in frontier:
                    continue
                fits = [
                    t
                    for t in tiles
                    if _binding_strength(placements, site, t) >= temperature
                ]
                if fits:
                    frontier[site] = fits
        if not frontier:
            return Assembly(placements, order)
        for site in sorted(frontier):
            fits = frontier[site]
            if len({t.name for t in fits}) > 1:
                raise NondeterministicAttachment(
                    f"site {site} admits {sorted(t.name for t in fits)}"
                )
        site = min(frontier)
        if len(placements) >= max_tiles:
            raise BudgetExceeded(f"assembly exceeded {max_tiles} tiles")
        placements[site] = frontier[site][0]
        order.append(site)


# ---------------------------------------------------------- column trace


@dataclass(frozen=True)
class ColumnPass:
    """One column of the bounded rectangle: the roles placed bottom row
    first, the tape tokens after the pass, and the outgoing turn."""

    x: int
    ascending: bool
    rows: tuple[tuple[str, Token, object], ...]  # (role, tok_in, chain_in) per y
    tokens_out: tuple[Token, ...]  # per row, after this pass
    turn_out: Token
    fired: bool
    halted: bool  # a halt-state mark exists after this pass


@dataclass(frozen=True)
class ZigzagTrace:
    tm: TMSpec
    word: str
    space: int
    time: int
    columns: tuple[ColumnPass, ...]
    final_tokens: tuple[Token, ...]

    def tokens_after(self, x: int) -> tuple[Token, ...]:
        return self.columns[x].tokens_out


def zigzag_trace(tm: TMSpec, word: str, s: int, t: int) -> ZigzagTrace:
    """Simulate the 2t bounded columns of the padded tile set on input
    word (blank-padded to s cells).  Raises when the head leaves the
    tape, a pending move escapes, or the machine has not halted by the
    last column."""
    tm.check_input(word)
    if s < 2:
        raise InvalidTM("column trace needs a space bound of at least 2")
    if len(word) > s:
        raise InvalidTM(f"input longer than the space bound {s}")
    cells = list(word) + [tm.blank] * (s - len(word))
    tokens: list[Token] = [(sym, None) for sym in cells]
    tokens[0] = (tokens[0][0], tm.start_state)
    columns: list[ColumnPass] = []
    for x in range(2 * t):
        ascending = x % 2 == 0
        ys = range(s) if ascending else range(s - 1, -1, -1)
        chain: object = PRE
        rows: list[tuple[str, Token, object]] = [None] * s  # type: ignore
        out = list(tokens)
        fired = False
        for k, y in enumerate(ys):
            if ascending:
                role = "uf" if k == 0 else ("ul" if k == s - 1 else "um")
            else:
                role = "df" if k == 0 else ("dl" if k == s - 1 else "dm")
            step = pass_step(tm, ascending, chain, out[y], pad=True)
            if step is None:
                raise NotHaltingWithinBounds(
                    f"column {x}: two head marks meet at row {y}"
                )
            if chain == PRE and isinstance(step[1], tuple) and k == s - 1:
                raise NotHaltingWithinBounds(
                    f"column {x}: the head steps off the tape at row {y}"
                )
            rows[y] = (role, out[y], chain)
            out[y], chain = step
            if isinstance(chain, tuple):
                fired = True
        if isinstance(chain, tuple):
            raise NotHaltingWithinBounds(
                f"column {x}: pending move escapes the column"
            )
        tokens = out
        marks = [mk for _, mk in tokens if mk is not None]
        if len(marks) != 1:
            raise NotHaltingWithinBounds(f"column {x}: lost the head mark")
        turn_y = 0 if not ascending else s - 1
        columns.append(
            ColumnPass(
                x=x,
                ascending=ascending,
                rows=tuple(rows),
                tokens_out=tuple(tokens),
                turn_out=tokens[turn_y],
                fired=fired,
                halted=marks[0] == tm.halt_state,
            )
        )
    final = columns[-1]
    if not final.halted:
        raise NotHaltingWithinBounds(
            f"machine still running after {2 * t} columns (time bound {t})"
        )
    return ZigzagTrace(
        tm=tm,
        word=word,
        space=s,
        time=t,
        columns=tuple(columns),
        final_tokens=final.tokens_out,
    )
