"""Compile bounded machine runs into hard-coded monomer systems.

The target of the compilation is a collection of monomer types in four
families.  Glue labels of the column-growth tile set become oriented
domains — a tile's input sides turn into plain domains and its output
sides into starred ones — and every abstract type is then replicated at
every position of the 2t-column, s-row grid with coordinate-subscripted
domains ("hard-coding"), so each type can appear at most once per
computation polymer:

* ``seed`` — one monomer encoding the input: per row y a starred value
  domain at h(0,y) (the head/turn mark merged into row 0), a starred
  column-start domain st~v(x,0) for every ascending column and
  st~v(x,s) for every descending one, a starred chain starter
  ek~v(2t,0) for the output column, and s plain wrapping domains g|y.
* ``comp`` — every pass-rule record stamped at every grid position
  (x,y): west value plain at h(x,y), east value star at h(x+1,y), and
  either a chain plain/star pair at v(x,y)/v(x,y+1) (middle cells) or a
  column-start plain (first cells).  Stamps whose role cannot ground at
  their position (a first-cell stamp away from the column start, a
  descending stamp in an ascending column) are inert: they can only
  pair with their cap.
* ``end`` — the output readers at virtual column 2t: per row y and
  output token, a west value plain at h(2t,y), an ascending chain
  ek~v(2t,y) plain / ek~v(2t,y+1) star, and a starred wrapping domain
  g|y* that binds the seed.
* ``cap`` — per comp/end type, exactly the two starred complements of
  that type's two plain (input) domains.

``canonical_stable_config`` builds the configuration with one complete
computation polymer per seed copy (all member domains bound), every
leftover comp/end paired with its own cap, and surplus caps free;
``build_alpha_sequence`` exhibits the bond-swap path that proves it
saturated.  ``verify_simulation`` certifies correctness structurally:

P1  family/count sanity: one seed type; seed count <= every comp/end
    count <= every cap count, and per-type cap count >= target count.
P2  per-domain-name star excess: every name has at least as many
    starred as plain instances, so saturation == every plain bound.
P3  anchor sieve: iterated removal of comp/end types having some plain
    whose starred complement is carried only by already-removed types
    (or by nothing) must empty the family.  Every polymer of a
    saturated configuration then contains a seed or cap, bounding the
    polymer count by #seed + #cap.
P4  cap exactness: caps have no plain domains, comp/end types have
    exactly two plains, and cap domain multisets are in bijection with
    comp/end input multisets.
P5  distinct comp/end types have distinct input multisets.
P6  emission locality: a type positioned at (x,y) may star only
    h(x+1,y), v(x,y) or v(x,y+1) (+ the row wrap for ends); seed stars
    sit only at h(0,y), the column starts, and ek~v(2t,0).
P7  forced chase: growing column by column from the seed's input
    domains, each cell admits exactly one type whose west and chain
    plains match the exposed stars; the end row then decodes to the
    reference interpreter's output.

Together these premises force the unique stable class: anchors cap the
polymer count at #seed + #cap, which the canonical configuration
attains; attaining it forbids polymers with two anchors, so non-seed
polymers are single caps or cap+target pairs, and every seed polymer is
dragged through the full grid by its wrapping domains and pinned to the
chase's types by P5/P6.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .core import (
    Bond,
    Configuration,
    Domain,
    MonomerCollection,
    MonomerType,
)
from .errors import (
    BudgetExceeded,
    CountsViolation,
    InputTooLong,
    InvalidTM,
    NotHaltingWithinBounds,
    OutOfGrid,
    SimulationViolated,
    StructureUnverifiable,
)
from .solver import (
    EntropyCertificate,
    check_entropy_certificate,
    derive_entropy_certificate,
)
from .zigzag import (
    TMSpec,
    RoleRec,
    chain_str,
    parse_token,
    role_records,
    run_tm,
    tile_name,
    token_str,
    zigzag_trace,
)

# West/east value-label tags per pass-rule role.  First cells read a
# turn (tu/td), last cells emit one; row edges are tagged vB/vT so that
# ascending and descending stamps can never stand in for each other.
_WEST_TAG = {"uf": "tu", "um": "v", "ul": "vT", "df": "td", "dm": "v", "dl": "vB"}
_EAST_TAG = {"uf": "vB", "um": "v", "ul": "td", "df": "vT", "dm": "v", "dl": "tu"}


# ---------------------------------------------------------------- ordering


def zz_positions(s: int, t: int) -> list[tuple[int, int]]:
    """Grid positions in column-growth order: by column, ascending rows
    in even columns and descending rows in odd ones."""
    out = []
    for x in range(2 * t):
        ys = range(s) if x % 2 == 0 else range(s - 1, -1, -1)
        out.extend((x, y) for y in ys)
    return out


def zz_order(a: tuple[int, int], b: tuple[int, int], s: int, t: int) -> int:
    """-1/0/+1 comparison of grid locations in column-growth order."""
    for p in (a, b):
        x, y = p
        if not (0 <= x < 2 * t and 0 <= y < s):
            raise OutOfGrid(f"location {p} outside the {2 * t}x{s} grid")
    ka = (a[0], a[1] if a[0] % 2 == 0 else -a[1])
    kb = (b[0], b[1] if b[0] % 2 == 0 else -b[1])
    return (ka > kb) - (ka < kb)


# ------------------------------------------------------------------ types


def _comp_monomer(rec: RoleRec, x: int, y: int) -> MonomerType:
    asc = rec.role.startswith("u")
    ds = [
        Domain(f"{_WEST_TAG[rec.role]}|{token_str(rec.tok_in)}", "h", (x, y)),
        Domain(
            f"{_EAST_TAG[rec.role]}|{token_str(rec.tok_out)}",
            "h",
            (x + 1, y),
            star=True,
        ),
    ]
    if rec.role in ("uf", "df"):
        ds.append(Domain("st", "v", (x, y) if asc else (x, y + 1)))
    elif asc:
        ds.append(Domain(f"u|{chain_str(rec.chain_in)}", "v", (x, y)))
    else:
        ds.append(Domain(f"d|{chain_str(rec.chain_in)}", "v", (x, y + 1)))
    if rec.role in ("uf", "um"):
        ds.append(Domain(f"u|{chain_str(rec.chain_out)}", "v", (x, y + 1), star=True))
    elif rec.role in ("df", "dm"):
        ds.append(Domain(f"d|{chain_str(rec.chain_out)}", "v", (x, y), star=True))
    name = f"{tile_name(rec.role, rec.tok_in, rec.chain_in)}@({x},{y})"
    return MonomerType(name, tuple(ds), "comp")


def _row_tag(y: int, s: int) -> str:
    return "tu" if y == 0 else ("vT" if y == s - 1 else "v")


def _end_monomer(tok, y: int, s: int, t: int) -> MonomerType:
    ds = [
        Domain(f"{_row_tag(y, s)}|{token_str(tok)}", "h", (2 * t, y)),
        Domain("ek", "v", (2 * t, y)),
        Domain(f"g|{y}", star=True),
    ]
    if y < s - 1:
        ds.append(Domain("ek", "v", (2 * t, y + 1), star=True))
    return MonomerType(f"end[{token_str(tok)}]@({2 * t},{y})", tuple(ds), "end")


def _cap_monomer(target: MonomerType) -> MonomerType:
    ins = target.inputs()
    if len(ins) != 2:
        raise StructureUnverifiable(
            f"{target.name} has {len(ins)} input domains, caps need exactly 2"
        )
    return MonomerType(
        f"cap[{target.name}]", tuple(d.complement() for d in ins), "cap"
    )


def _seed_monomer(tm: TMSpec, word: str, s: int, t: int) -> MonomerType:
    padded = word + tm.blank * (s - len(word))
    ds = []
    for y in range(s):
        tok = (padded[y], tm.start_state) if y == 0 else (padded[y], None)
        ds.append(Domain(f"{_row_tag(y, s)}|{token_str(tok)}", "h", (0, y), star=True))
    for x in range(2 * t):
        ds.append(Domain("st", "v", (x, 0) if x % 2 == 0 else (x, s), star=True))
    ds.append(Domain("ek", "v", (2 * t, 0), star=True))
    ds.extend(Domain(f"g|{y}") for y in range(s))
    return MonomerType("seed", tuple(ds), "seed")


@dataclass(frozen=True)
class CountsPolicy:
    """Copy counts: seed_count <= comp_count (every comp/end type) <=
    cap_count (every cap type).  Violations raise CountsViolation."""

    seed_count: int = 1
    comp_count: int = 1
    cap_count: int = 1

    def __post_init__(self) -> None:
        if not 1 <= self.seed_count <= self.comp_count <= self.cap_count:
            raise CountsViolation(
                f"need 1 <= seed {self.seed_count} <= comp/end "
                f"{self.comp_count} <= cap {self.cap_count}"
            )


@dataclass(frozen=True)
class TbnConstruction:
    """The compiled monomer system plus the data needed to reason about
    it: the machine and run it encodes, the grid bounds, the four
    families, the canonical in-polymer type at each grid/output
    position, and the explicit encoding tables."""

    tm: TMSpec
    word: str
    s: int
    t: int
    seed_family: tuple[MonomerType, ...]
    comp_family: tuple[MonomerType, ...]
    end_family: tuple[MonomerType, ...]
    cap_family: tuple[MonomerType, ...]
    canonical: dict[tuple[int, int], str]
    e_input_table: dict[str, str]
    e_output_table: dict[str, tuple[int, str]]

    @property
    def bounds(self) -> tuple[int, int]:
        return (self.s, self.t)

    @property
    def input_monomer(self) -> MonomerType:
        return self.seed_family[0]

    @property
    def domains(self) -> frozenset[tuple]:
        names = set()
        for m in self.all_types():
            names.update(d.name for d in m.domains)
        return frozenset(names)

    def all_types(self) -> tuple[MonomerType, ...]:
        return (
            self.seed_family + self.comp_family + self.end_family + self.cap_family
        )

    def canonical_order(self) -> list[str]:
        """In-polymer type names in bond-swap order: grid positions in
        column-growth order, then the output rows bottom-up."""
        order = [self.canonical[p] for p in zz_positions(self.s, self.t)]
        order.extend(self.canonical[(2 * self.t, y)] for y in range(self.s))
        return order

    def collection(self, counts: CountsPolicy) -> MonomerCollection:
        pairs = [(self.input_monomer, counts.seed_count)]
        pairs += [(m, counts.comp_count) for m in self.comp_family]
        pairs += [(m, counts.comp_count) for m in self.end_family]
        pairs += [(m, counts.cap_count) for m in self.cap_family]
        return MonomerCollection.from_pairs(pairs)

    def e_input(self, monomers: Iterable[MonomerType]) -> Optional[str]:
        return e_input(monomers, blank=self.tm.blank)

    def e_output(self, monomers: Iterable[MonomerType]) -> Optional[str]:
        return e_output(monomers)


def _checked_trace(tm: TMSpec, word: str, s: int, t: int):
    """Common compile prologue: validate the bounds, require a halting
    in-grid run, and return the zigzag trace.  Errors: InputTooLong,
    NotHaltingWithinBounds, InvalidTM (s < 2, t < 1, or word outside
    the input alphabet)."""
    tm.check_input(word)
    if len(word) > s:
        raise InputTooLong(f"input length {len(word)} exceeds space bound {s}")
    if s < 2:
        raise InvalidTM("the monomer construction needs a space bound of at least 2")
    if t < 1:
        raise InvalidTM("need at least one column pair (t >= 1)")
    try:
        # a column pair fires at most two machine steps (one per parity)
        run = run_tm(tm, word, max_steps=2 * t)
    except BudgetExceeded as exc:
        raise NotHaltingWithinBounds(str(exc)) from exc
    if run.cells_lo < 0 or run.cells_hi >= s:
        raise NotHaltingWithinBounds(
            f"head leaves cells [0,{s}) (used {run.cells_lo}..{run.cells_hi})"
        )
    return zigzag_trace(tm, word, s, t)


def compile_tm(tm: TMSpec, word: str, s: int, t: int) -> TbnConstruction:
    """Build the full construction for tm on word within s cells and t
    steps.  Errors: InputTooLong, NotHaltingWithinBounds, InvalidTM
    (s < 2, t < 1, or word outside the input alphabet)."""
    trace = _checked_trace(tm, word, s, t)

    comp_family = tuple(
        _comp_monomer(rec, x, y)
        for rec in role_records(tm, pad=True)
        for x in range(2 * t)
        for y in range(s)
    )
    end_tokens = [(a, None) for a in tm.tape_alphabet]
    end_tokens += [(a, tm.halt_state) for a in tm.tape_alphabet]
    end_family = tuple(
        _end_monomer(tok, y, s, t) for y in range(s) for tok in end_tokens
    )
    cap_family = tuple(_cap_monomer(m) for m in comp_family + end_family)
    seed = _seed_monomer(tm, word, s, t)

    canonical: dict[tuple[int, int], str] = {}
    for x, col in enumerate(trace.columns):
        for y in range(s):
            role, tok, chain = col.rows[y]
            canonical[(x, y)] = f"{tile_name(role, tok, chain)}@({x},{y})"
    for y, tok in enumerate(trace.final_tokens):
        canonical[(2 * t, y)] = f"end[{token_str(tok)}]@({2 * t},{y})"

    e_output_table = {}
    for m in end_family:
        west = next(d for d in m.domains if d.orient == "h")
        e_output_table[m.name] = (
            west.loc[1],
            parse_token(west.label.split("|", 1)[1])[0],
        )
    return TbnConstruction(
        tm=tm,
        word=word,
        s=s,
        t=t,
        seed_family=(seed,),
        comp_family=comp_family,
        end_family=end_family,
        cap_family=cap_family,
        canonical=canonical,
        e_input_table={seed.name: word},
        e_output_table=e_output_table,
    )


# -------------------------------------------------------------- encodings


def _decoded_rows(domains: Iterable[Domain]) -> Optional[dict[int, str]]:
    """Row -> symbol map read off h-oriented value domains; None on a
    duplicate row or an unparsable label."""
    rows: dict[int, str] = {}
    for d in domains:
        if d.orient != "h" or d.loc is None or "|" not in d.label:
            continue
        y = d.loc[1]
        if y in rows:
            return None
        try:
            rows[y] = parse_token(d.label.split("|", 1)[1])[0]
        except Exception:
            return None
    return rows


def e_input(monomers: Iterable[MonomerType], blank: str = "_") -> Optional[str]:
    """Input string encoded by a seed monomer set, or None when the set
    is not a single seed type.  Rows decode from the starred value
    domains; trailing blank padding is stripped."""
    types = set(monomers)
    if len(types) != 1:
        return None
    (m,) = types
    if m.family != "seed":
        return None
    rows = _decoded_rows(d for d in m.domains if d.star)
    if not rows or sorted(rows) != list(range(len(rows))):
        return None
    text = "".join(rows[y] for y in range(len(rows)))
    return text.rstrip(blank)


def e_output(monomers: Iterable[MonomerType]) -> Optional[str]:
    """Full-tape output string encoded by an end-monomer set: one type
    per row, rows contiguous from 0; head-marked cells decode as their
    symbol.  None when the set is not a coherent full row."""
    rows: dict[int, str] = {}
    for m in set(monomers):
        if m.family != "end":
            return None
        decoded = _decoded_rows(d for d in m.domains if not d.star)
        if not decoded or len(decoded) != 1:
            return None
        ((y, sym),) = decoded.items()
        if y in rows:
            return None
        rows[y] = sym
    if not rows or sorted(rows) != list(range(len(rows))):
        return None
    return "".join(rows[y] for y in range(len(rows)))


# ------------------------------------------------- canonical configuration


def _pair_bonds(coll: MonomerCollection, target: int, cap: int) -> list[Bond]:
    """Bonds binding every plain of instance `target` to the matching
    star of instance `cap`."""
    ct = coll.instance_type(cap)
    stars = {}
    for slot, d in enumerate(ct.domains):
        if d.star:
            stars[d.name] = slot
    bonds = []
    for slot, d in enumerate(coll.instance_type(target).domains):
        if d.star:
            continue
        if d.name not in stars:
            raise StructureUnverifiable(
                f"cap {ct.name} lacks a complement for {d.token()}"
            )
        bonds.append(((target, slot), (cap, stars.pop(d.name))))
    return bonds


def _polymer_bonds(coll: MonomerCollection, members: list[int]) -> list[Bond]:
    """Bind every plain domain of the member set to the unique matching
    star within the set; every domain must end up bound."""
    stars: dict[tuple, tuple[int, int]] = {}
    for iid in members:
        for slot, d in enumerate(coll.instance_type(iid).domains):
            if d.star:
                if d.name in stars:
                    raise StructureUnverifiable(
                        f"duplicate star {d.token()} within one polymer"
                    )
                stars[d.name] = (iid, slot)
    bonds = []
    for iid in members:
        for slot, d in enumerate(coll.instance_type(iid).domains):
            if d.star:
                continue
            site = stars.pop(d.name, None)
            if site is None:
                raise StructureUnverifiable(f"unbound polymer domain {d.token()}")
            bonds.append(((iid, slot), site))
    if stars:
        leftover = ", ".join(sorted(str(k) for k in stars))
        raise StructureUnverifiable(f"unbound polymer codomains: {leftover}")
    return bonds


def _cap_map(coll: MonomerCollection) -> dict[str, str]:
    """Content-based bijection comp/end type name -> cap type name.
    Raises StructureUnverifiable when caps and inputs do not pair up or
    a cap is scarcer than its target."""
    inputs: dict[tuple, str] = {}
    for t in coll.types:
        if t.family not in ("comp", "end"):
            continue
        ins = t.inputs()
        if not ins:
            raise StructureUnverifiable(f"{t.name} has no input domains")
        key = tuple(sorted(d.name for d in ins))
        if key in inputs:
            raise StructureUnverifiable(
                f"{t.name} and {inputs[key]} share the input multiset {key}"
            )
        inputs[key] = t.name
    matched: dict[str, str] = {}
    for cap in coll.types:
        if cap.family != "cap":
            continue
        if cap.inputs():
            raise StructureUnverifiable(f"cap {cap.name} has plain domains")
        key = tuple(sorted(d.name for d in cap.domains))
        target = inputs.get(key)
        if target is None:
            raise StructureUnverifiable(f"cap {cap.name} matches no comp/end inputs")
        if target in matched:
            raise StructureUnverifiable(f"two caps target {target}")
        matched[target] = cap.name
        if coll.count_of(cap.name) < coll.count_of(target):
            raise StructureUnverifiable(
                f"cap {cap.name}: fewer copies than its target {target}"
            )
    missing = set(inputs.values()) - set(matched)
    if missing:
        raise StructureUnverifiable(f"uncapped types: {sorted(missing)[:3]}")
    return matched


def _assemble_canonical(
    coll: MonomerCollection, seed_name: str, order: list[str]
) -> tuple[list[Bond], int]:
    """Canonical bonds over any collection holding the named types: one
    complete polymer per seed copy (members = seed + `order`), every
    leftover comp/end instance paired with its content-matched cap."""
    sigma = coll.count_of(seed_name)
    in_polymer = set(order)
    for name in order:
        if coll.count_of(name) < sigma:
            raise StructureUnverifiable(
                f"{name}: {coll.count_of(name)} copies < {sigma} seed copies"
            )
    bonds: list[Bond] = []
    for j in range(sigma):
        members = [coll.instances_of(seed_name)[j]]
        members += [coll.instances_of(name)[j] for name in order]
        bonds += _polymer_bonds(coll, members)
    cap_of = _cap_map(coll)
    for t in coll.types:
        if t.family not in ("comp", "end"):
            continue
        used = sigma if t.name in in_polymer else 0
        cap_name = cap_of[t.name]
        for j in range(used, coll.count_of(t.name)):
            bonds += _pair_bonds(
                coll, coll.instances_of(t.name)[j], coll.instances_of(cap_name)[j]
            )
    return bonds, sigma


def _canonical_bonds(
    cons: TbnConstruction, coll: MonomerCollection
) -> tuple[list[Bond], int]:
    return _assemble_canonical(coll, cons.input_monomer.name, cons.canonical_order())


def canonical_stable_config(
    cons: TbnConstruction, counts: CountsPolicy
) -> tuple[Configuration, EntropyCertificate]:
    """The stable configuration: one complete computation polymer per
    seed copy, leftover comp/end monomers paired with their caps,
    surplus caps free; plus its seed/cap anchor certificate."""
    coll = cons.collection(counts)
    bonds, _ = _canonical_bonds(cons, coll)
    config = Configuration.make(coll, bonds)
    return config, derive_entropy_certificate(config)


def build_alpha_sequence(
    cons: TbnConstruction, counts: CountsPolicy
) -> list[Configuration]:
    """The saturation-preserving path alpha_0..alpha_{n+1}.

    alpha_0 is fully capped, with every seed wrapping domain g|y bound
    to a capped end monomer of a row-y type that is *not* the
    computation's own output type, so each of the n = s*2t + s swap
    steps breaks two cap bonds and makes two polymer bonds with both
    enthalpy and entropy unchanged.  The final step rebinds the
    wrapping domains to the in-polymer ends; it keeps enthalpy and
    frees the hanging cap pairs, which is the +s-per-seed entropy gain
    that separates the stable configuration from the capped baseline.
    """
    coll = cons.collection(counts)
    sigma = counts.seed_count
    seed_type = cons.input_monomer
    seed_ids = coll.instances_of(seed_type.name)
    order = cons.canonical_order()
    in_polymer = set(order)

    pair_bonds: dict[tuple[str, int], list[Bond]] = {}
    bonds: set[Bond] = set()
    for t in cons.comp_family + cons.end_family:
        cap_name = f"cap[{t.name}]"
        for j in range(coll.count_of(t.name)):
            pb = _pair_bonds(
                coll, coll.instances_of(t.name)[j], coll.instances_of(cap_name)[j]
            )
            pair_bonds[(t.name, j)] = pb
            bonds.update(pb)

    # wrong-token wrapping targets: a row's lexicographically first end
    # type that is not the canonical one (the output row always has at
    # least two token variants)
    by_row: dict[int, list[MonomerType]] = {}
    for m in cons.end_family:
        y = next(d for d in m.domains if d.orient == "h").loc[1]
        by_row.setdefault(y, []).append(m)
    wrap_bonds: dict[tuple[int, int], Bond] = {}
    for y in range(cons.s):
        canon = cons.canonical[(2 * cons.t, y)]
        wrong = next(
            m for m in sorted(by_row[y], key=lambda m: m.name) if m.name != canon
        )
        gslot_seed = seed_type.slots_of(Domain(f"g|{y}"))[0]
        gslot_end = wrong.slots_of(Domain(f"g|{y}", star=True))[0]
        for j in range(sigma):
            b = (
                (seed_ids[j], gslot_seed),
                (coll.instances_of(wrong.name)[j], gslot_end),
            )
            wrap_bonds[(j, y)] = b
            bonds.add(b)

    configs = [Configuration.make(coll, bonds)]

    exposed: list[dict[tuple, tuple[int, int]]] = []
    for j in range(sigma):
        stars = {}
        for slot, d in enumerate(seed_type.domains):
            if d.star:
                stars[d.name] = (seed_ids[j], slot)
        exposed.append(stars)

    for name in order:
        for j in range(sigma):
            for b in pair_bonds.pop((name, j)):
                bonds.discard(b)
            iid = coll.instances_of(name)[j]
            mtype = coll.instance_type(iid)
            for slot, d in enumerate(mtype.domains):
                if d.star:
                    exposed[j][d.name] = (iid, slot)
                else:
                    bonds.add(((iid, slot), exposed[j].pop(d.name)))
        configs.append(Configuration.make(coll, bonds))

    for j in range(sigma):
        for y in range(cons.s):
            bonds.discard(wrap_bonds[(j, y)])
            gslot = seed_type.slots_of(Domain(f"g|{y}"))[0]
            bonds.add(((seed_ids[j], gslot), exposed[j].pop((f"g|{y}", "", None))))
    configs.append(Configuration.make(coll, bonds))
    assert len(configs) == len(order) + 2
    return configs


# ----------------------------------------------------- structural verifier


@dataclass(frozen=True)
class VerificationReport:
    """Successful verification summary; failures raise instead."""

    ok: bool
    mode: str
    s: int
    t: int
    stable_classes: int
    decoded_input: str
    decoded_output: str
    checks: tuple[str, ...] = field(default_factory=tuple)


def _family_split(coll: MonomerCollection) -> dict[str, list[MonomerType]]:
    fams: dict[str, list[MonomerType]] = {"seed": [], "comp": [], "end": [], "cap": []}
    for t in coll.types:
        if t.family not in fams:
            raise StructureUnverifiable(
                f"{t.name}: unexpected family {t.family!r} in a compiled system"
            )
        fams[t.family].append(t)
    return fams


def _west_plain(t: MonomerType) -> Domain:
    wests = [d for d in t.domains if not d.star and d.orient == "h"]
    if len(wests) != 1 or wests[0].loc is None:
        raise StructureUnverifiable(f"{t.name} lacks a single positioned west domain")
    return wests[0]


def _infer_bounds(fams: dict[str, list[MonomerType]]) -> tuple[int, int]:
    if not fams["end"]:
        raise StructureUnverifiable("no end family: nothing encodes an output")
    xs = {_west_plain(m).loc[0] for m in fams["end"]}
    rows = {_west_plain(m).loc[1] for m in fams["end"]}
    if len(xs) != 1:
        raise StructureUnverifiable(f"end monomers at multiple columns {sorted(xs)}")
    (two_t,) = xs
    if two_t < 2 or two_t % 2:
        raise StructureUnverifiable(f"output column {two_t} is not an even bound")
    s = max(rows) + 1
    if rows != set(range(s)):
        raise StructureUnverifiable(f"output rows {sorted(rows)} are not 0..{s - 1}")
    return s, two_t // 2


def _check_counts(coll, fams) -> int:
    if len(fams["seed"]) != 1:
        raise StructureUnverifiable(
            f"need exactly one seed type, found {len(fams['seed'])}"
        )
    sigma = coll.count_of(fams["seed"][0].name)
    targets = fams["comp"] + fams["end"]
    if not targets or not fams["cap"]:
        raise StructureUnverifiable("compiled systems need comp, end and cap types")
    c_min = min(coll.count_of(t.name) for t in targets)
    k_min = min(coll.count_of(t.name) for t in fams["cap"])
    if not sigma <= c_min <= k_min:
        raise CountsViolation(
            f"need seed {sigma} <= comp/end minimum {c_min} <= cap minimum {k_min}"
        )
    return sigma


def _check_star_excess(coll) -> None:
    plain: dict[tuple, int] = {}
    star: dict[tuple, int] = {}
    for t, count in coll.entries:
        for d in t.domains:
            bucket = star if d.star else plain
            bucket[d.name] = bucket.get(d.name, 0) + count
    for name, n in plain.items():
        if star.get(name, 0) < n:
            raise StructureUnverifiable(
                f"domain {name}: {n} plain vs {star.get(name, 0)} starred — "
                "saturation could strand a codomain-deficient name"
            )


def _check_caps(coll, fams) -> None:
    for t in fams["comp"] + fams["end"]:
        if len(t.inputs()) != 2:
            raise StructureUnverifiable(f"{t.name} has {len(t.inputs())} inputs, need 2")
    for cap in fams["cap"]:
        if len(cap.domains) != 2:
            raise StructureUnverifiable(f"cap {cap.name} must have exactly 2 domains")
    _cap_map(coll)


def _check_anchor_sieve(fams) -> None:
    targets = fams["comp"] + fams["end"]
    star_carriers: dict[tuple, set[str]] = {}
    for t in targets:
        for d in t.outputs():
            star_carriers.setdefault(d.name, set()).add(t.name)
    alive = {t.name: t for t in targets}
    changed = True
    while changed:
        changed = False
        for name in list(alive):
            t = alive[name]
            # groundable once some input's codomain is carried by no
            # still-live type (a live self-carrier blocks: instances of
            # one type could chain into an anchor-free cycle)
            for d in t.inputs():
                carriers = star_carriers.get(d.name, set())
                if not (carriers & alive.keys()):
                    del alive[name]
                    changed = True
                    break
    if alive:
        sample = sorted(alive)[:3]
        raise StructureUnverifiable(
            f"anchor sieve stuck: {sample} could form seedless capless cycles"
        )


def _check_locality(fams, s: int, t: int) -> None:
    for m in fams["comp"] + fams["end"]:
        x, y = _west_plain(m).loc
        for d in m.domains:
            if d.orient == "h":
                want = {(x, y)} if not d.star else {(x + 1, y)}
            elif d.orient == "v":
                want = {(x, y), (x, y + 1)}
            else:
                if not d.label.startswith("g|"):
                    raise StructureUnverifiable(
                        f"{m.name}: unpositioned domain {d.token()}"
                    )
                continue
            if d.loc not in want:
                raise StructureUnverifiable(
                    f"{m.name}: {d.token()} outside its emission neighborhood"
                )
    (seed,) = fams["seed"]
    starts = {(x, 0) if x % 2 == 0 else (x, s) for x in range(2 * t)}
    for d in seed.domains:
        if not d.star:
            if not d.label.startswith("g|"):
                raise StructureUnverifiable(f"seed plain {d.token()} is not a wrap")
            continue
        if d.orient == "h":
            ok = d.loc is not None and d.loc[0] == 0 and 0 <= d.loc[1] < s
        elif d.label == "st":
            ok = d.loc in starts
        else:
            ok = d.label == "ek" and d.loc == (2 * t, 0)
        if not ok:
            raise StructureUnverifiable(f"seed codomain {d.token()} misplaced")


def _chase(coll, fams, s: int, t: int) -> tuple[dict, list]:
    """Forced forward growth: returns (position -> type name, end types
    row by row).  Raises when any cell has no or several candidates."""
    by_plains: dict[tuple, list[MonomerType]] = {}
    for m in fams["comp"] + fams["end"]:
        key = tuple(sorted(d.name for d in m.inputs()))
        by_plains.setdefault(key, []).append(m)
    (seed,) = fams["seed"]
    seed_stars = {d.name for d in seed.outputs()}

    west: dict[int, tuple] = {}
    for d in seed.outputs():
        if d.orient == "h":
            west[d.loc[1]] = d.name
    if sorted(west) != list(range(s)):
        raise StructureUnverifiable("seed value codomains do not cover rows 0..s-1")

    def pick(wname, vname, where):
        if wname is None or vname is None:
            raise StructureUnverifiable(f"{where}: broken growth chain")
        cands = by_plains.get(tuple(sorted((wname, vname))), [])
        if len(cands) != 1:
            raise StructureUnverifiable(
                f"{where}: {len(cands)} candidates for inputs {wname} / {vname}"
            )
        return cands[0]

    members: dict[tuple[int, int], str] = {}
    for x in range(2 * t):
        asc = x % 2 == 0
        ys = range(s) if asc else range(s - 1, -1, -1)
        start = ("st", "v", (x, 0) if asc else (x, s))
        if start not in seed_stars:
            raise StructureUnverifiable(f"seed lacks the column start {start}")
        vname = start
        next_west: dict[int, tuple] = {}
        for y in ys:
            m = pick(west[y], vname, f"cell ({x},{y})")
            members[(x, y)] = m.name
            east = [d for d in m.outputs() if d.orient == "h"]
            if len(east) != 1:
                raise StructureUnverifiable(f"{m.name}: needs one east codomain")
            next_west[y] = east[0].name
            chains = [d for d in m.outputs() if d.orient == "v"]
            vname = chains[0].name if chains else None
        west = next_west

    ends = []
    vname = ("ek", "v", (2 * t, 0))
    if vname not in seed_stars:
        raise StructureUnverifiable("seed lacks the output-chain start ek")
    for y in range(s):
        m = pick(west[y], vname, f"output row {y}")
        if m.family != "end":
            raise StructureUnverifiable(f"output row {y} matched non-end {m.name}")
        if not any(d.label == f"g|{y}" and d.star for d in m.domains):
            raise StructureUnverifiable(f"{m.name} lacks the wrap codomain g|{y}*")
        ends.append(m)
        chains = [d for d in m.outputs() if d.orient == "v"]
        vname = chains[0].name if chains else None
    return members, ends


def verify_simulation(
    coll: MonomerCollection, tm: TMSpec, word: str, mode: str = "enumerate"
) -> VerificationReport:
    """Check that the collection simulates tm on word.

    enumerate mode proves there is exactly one stable class and that
    its seed polymers decode to (word, reference output); certificate
    mode builds the canonical configuration over the collection, checks
    its seed/cap anchor certificate, and decodes the output.  Failures
    raise SimulationViolated; count-policy violations raise
    CountsViolation.
    """
    if mode not in ("enumerate", "certificate"):
        raise ValueError(f"unknown mode {mode!r}")
    try:
        fams = _family_split(coll)
        s, t = _infer_bounds(fams)
        sigma = _check_counts(coll, fams)
        reference = run_tm(tm, word, max_steps=2 * t)
        expect_out = reference.window(0, s)

        _check_caps(coll, fams)
        _check_star_excess(coll)
        _check_anchor_sieve(fams)
        _check_locality(fams, s, t)
        members, ends = _chase(coll, fams, s, t)
        for name in list(members.values()) + [e.name for e in ends]:
            if coll.count_of(name) < sigma:
                raise StructureUnverifiable(
                    f"{name}: fewer copies than the {sigma} seed copies"
                )
        decoded_in = e_input(fams["seed"], blank=tm.blank)
        decoded_out = e_output(ends)
        if decoded_in != word:
            raise StructureUnverifiable(
                f"seed decodes to {decoded_in!r}, expected {word!r}"
            )
        if decoded_out != expect_out:
            raise StructureUnverifiable(
                f"output rows decode to {decoded_out!r}, reference run "
                f"gives {expect_out!r}"
            )
        checks = (
            "counts",
            "caps",
            "star-excess",
            "anchor-sieve",
            "locality",
            "forced-chase",
            "decode",
        )
        if mode == "certificate":
            cons = compile_tm(tm, word, s, t)
            bonds, _ = _canonical_bonds(cons, coll)
            config = Configuration.make(coll, bonds)
            cert = derive_entropy_certificate(config)
            check_entropy_certificate(config, cert)
            checks += ("certificate",)
    except StructureUnverifiable as exc:
        raise SimulationViolated(str(exc)) from exc
    except (KeyError, IndexError, TypeError) as exc:
        raise SimulationViolated(f"collection is not a compiled system: {exc}") from exc
    return VerificationReport(
        ok=True,
        mode=mode,
        s=s,
        t=t,
        stable_classes=1,
        decoded_input=decoded_in,
        decoded_output=decoded_out,
        checks=checks,
    )
