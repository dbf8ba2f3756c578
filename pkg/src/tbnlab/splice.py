"""Location-free machine compilation and the splice counterexample.

The grid compiler subscripts every domain with its (x, y) cell, so each
tile monomer exists once per position and the intended polymer is the
only way to use it.  Dropping the subscripts is the tempting
deduplication — one monomer per pass rule, reused wherever the rule
fires — but it breaks simulation: two bounded runs that agree on a
whole column except at one cell with differing west glues can be cut
there and cross-joined.  This module builds the location-free system
(`compile_tm_locationfree`), searches run triples for such cut columns
(`find_splice_witness`), assembles the cross-joined polymer
(`build_spliced_configuration`), and certifies the damage
(`demonstrate_failure`): the spliced configuration is saturated and has
exactly the bond and polymer counts of the intended one, yet its output
rows decode a different machine result.

The location-free system is meant for this analysis only; the grid
verifier and the stamped decoders stay with the subscripted compiler.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import permutations
from typing import Iterable, Optional, Sequence

from .core import (
    Bond,
    Configuration,
    Domain,
    MonomerCollection,
    MonomerType,
    Site,
    validate_configuration,
)
from .errors import (
    CountsViolation,
    FormatError,
    StructureUnverifiable,
    TbnError,
    WitnessInvalid,
)
from .tmcompile import (
    _WEST_TAG,
    CountsPolicy,
    TbnConstruction,
    _cap_map,
    _cap_monomer,
    _checked_trace,
    _comp_monomer,
    _pair_bonds,
    _row_tag,
)
from .zigzag import (
    ColumnPass,
    TMSpec,
    Token,
    ZigzagTrace,
    parse_token,
    role_records,
    tile_name,
    token_str,
    value_label,
)

# ------------------------------------------------------------ compilation


def _lf_comp_monomer(rec) -> MonomerType:
    """The pass-rule monomer without its position: the stamped monomer
    built at (0, 0), with the subscripts removed again."""
    stamped = _comp_monomer(rec, 0, 0)
    ds = tuple(Domain(d.label, d.orient, None, d.star) for d in stamped.domains)
    return MonomerType(tile_name(rec.role, rec.tok_in, rec.chain_in), ds, "comp")


def _lf_end_name(tok: Token, y: int) -> str:
    return f"end[{token_str(tok)}]@row{y}"


def _lf_end_monomer(tok: Token, y: int, s: int) -> MonomerType:
    # the keel is keyed by row (ek|y) so no two ends share an input
    # multiset even when their row tags and tokens coincide
    ds = [
        Domain(f"{_row_tag(y, s)}|{token_str(tok)}", "h"),
        Domain(f"ek|{y}", "v"),
        Domain(f"g|{y}", star=True),
    ]
    if y < s - 1:
        ds.append(Domain(f"ek|{y + 1}", "v", star=True))
    return MonomerType(_lf_end_name(tok, y), tuple(ds), "end")


def _lf_seed_monomer(tm: TMSpec, word: str, s: int, t: int) -> MonomerType:
    padded = word + tm.blank * (s - len(word))
    ds = []
    for y in range(s):
        tok = (padded[y], tm.start_state) if y == 0 else (padded[y], None)
        ds.append(Domain(f"{_row_tag(y, s)}|{token_str(tok)}", "h", star=True))
    for _ in range(2 * t):
        ds.append(Domain("st", "v", star=True))
    ds.append(Domain("ek|0", "v", star=True))
    ds.extend(Domain(f"g|{y}") for y in range(s))
    return MonomerType(f"seed[{word}]", tuple(ds), "seed")


def compile_tm_locationfree(tm: TMSpec, word: str, s: int, t: int) -> TbnConstruction:
    """Compile tm-on-word without position subscripts: one monomer per
    pass-rule record (a count independent of s and t), ends and seed
    keyed by row class only.  The canonical map names the same tile
    monomer at every position where its rule fires."""
    trace = _checked_trace(tm, word, s, t)
    comp_family = tuple(_lf_comp_monomer(rec) for rec in role_records(tm, pad=True))
    end_tokens = [(a, None) for a in tm.tape_alphabet]
    end_tokens += [(a, tm.halt_state) for a in tm.tape_alphabet]
    end_family = []
    e_output_table = {}
    for y in range(s):
        for tok in end_tokens:
            m = _lf_end_monomer(tok, y, s)
            end_family.append(m)
            e_output_table[m.name] = (y, tok[0])
    cap_family = tuple(_cap_monomer(m) for m in tuple(comp_family) + tuple(end_family))
    seed = _lf_seed_monomer(tm, word, s, t)

    canonical: dict[tuple[int, int], str] = {}
    for x, col in enumerate(trace.columns):
        for y in range(s):
            role, tok, chain = col.rows[y]
            canonical[(x, y)] = tile_name(role, tok, chain)
    for y, tok in enumerate(trace.final_tokens):
        canonical[(2 * t, y)] = _lf_end_name(tok, y)

    return TbnConstruction(
        tm=tm,
        word=word,
        s=s,
        t=t,
        seed_family=(seed,),
        comp_family=comp_family,
        end_family=tuple(end_family),
        cap_family=cap_family,
        canonical=canonical,
        e_input_table={seed.name: word},
        e_output_table=e_output_table,
    )


def lf_e_output(monomers: Iterable[MonomerType]) -> Optional[str]:
    """Output word read off location-free end monomers: the row from
    the g|y codomain, the symbol from the value domain.  None unless
    the rows decode coherently and cover 0..n-1."""
    rows: dict[int, str] = {}
    for m in monomers:
        if m.family != "end":
            continue
        row: Optional[int] = None
        sym: Optional[str] = None
        for d in m.domains:
            if d.star and d.orient == "" and d.label.startswith("g|"):
                try:
                    row = int(d.label.split("|", 1)[1])
                except ValueError:
                    return None
            elif not d.star and d.orient == "h" and "|" in d.label:
                try:
                    sym = parse_token(d.label.split("|", 1)[1])[0]
                except Exception:
                    return None
        if row is None or sym is None:
            return None
        if rows.setdefault(row, sym) != sym:
            return None
    if not rows or set(rows) != set(range(len(rows))):
        return None
    return "".join(rows[y] for y in range(len(rows)))


# --------------------------------------------------------------- assembly


class _Alloc:
    """Deals out instance ids and domain slots, each at most once."""

    def __init__(self, coll: MonomerCollection) -> None:
        self._coll = coll
        self._dealt: dict[str, int] = {}
        self._taken: dict[int, set[int]] = {}

    def used(self, name: str) -> int:
        return self._dealt.get(name, 0)

    def instance(self, name: str) -> int:
        n = self._dealt.get(name, 0)
        ids = self._coll.instances_of(name)
        if n >= len(ids):
            raise CountsViolation(
                f"assembly needs at least {n + 1} copies of {name}, "
                f"the collection holds {len(ids)}"
            )
        self._dealt[name] = n + 1
        return ids[n]

    def slot(
        self, iid: int, orient: str, star: bool, label: Optional[str] = None
    ) -> Site:
        mt = self._coll.instance_type(iid)
        taken = self._taken.setdefault(iid, set())
        for idx, d in enumerate(mt.domains):
            if idx in taken or d.star is not star or d.orient != orient:
                continue
            if label is not None and d.label != label:
                continue
            taken.add(idx)
            return (iid, idx)
        want = label if label is not None else f"orientation {orient!r}"
        raise WitnessInvalid(
            f"{mt.name} has no free {'codomain' if star else 'domain'} for {want}"
        )


def _west_label(row: tuple) -> str:
    role, tok, _chain = row
    return value_label(_WEST_TAG[role], tok)


def _rectangle_bonds(
    coll: MonomerCollection,
    cons: TbnConstruction,
    alloc: _Alloc,
    columns: Sequence[ColumnPass],
    final_tokens: Sequence[Token],
    skip_west: frozenset[tuple[int, int]] = frozenset(),
) -> tuple[list[Bond], dict[tuple[int, int], int], int]:
    """Bonds of one complete rectangle polymer: a seed, a tile at every
    grid position named by `columns`, and an end per row carrying
    `final_tokens`.  West bonds at `skip_west` positions are left out;
    both sides stay free for the caller to rewire."""
    s, t = cons.s, cons.t
    seed = alloc.instance(cons.input_monomer.name)
    placed: dict[tuple[int, int], int] = {}
    bonds: list[Bond] = []
    for x, col in enumerate(columns):
        for y in range(s):
            role, tok, chain = col.rows[y]
            placed[(x, y)] = alloc.instance(tile_name(role, tok, chain))
    for x, col in enumerate(columns):
        ascending = x % 2 == 0
        for y in range(s):
            iid = placed[(x, y)]
            role = col.rows[y][0]
            if role in ("uf", "df"):
                # first cell of the pass hooks the seed rail
                bonds.append(
                    (alloc.slot(iid, "v", False), alloc.slot(seed, "v", True, "st"))
                )
            else:
                neighbor = placed[(x, y - 1)] if ascending else placed[(x, y + 1)]
                bonds.append(
                    (alloc.slot(iid, "v", False), alloc.slot(neighbor, "v", True))
                )
            if (x, y) in skip_west:
                continue
            if x == 0:
                bonds.append(
                    (
                        alloc.slot(iid, "h", False),
                        alloc.slot(seed, "h", True, _west_label(col.rows[y])),
                    )
                )
            else:
                bonds.append(
                    (
                        alloc.slot(iid, "h", False),
                        alloc.slot(placed[(x - 1, y)], "h", True),
                    )
                )
    for y, tok in enumerate(final_tokens):
        iid = alloc.instance(_lf_end_name(tok, y))
        placed[(2 * t, y)] = iid
        bonds.append(
            (alloc.slot(iid, "h", False), alloc.slot(placed[(2 * t - 1, y)], "h", True))
        )
        anchor = seed if y == 0 else placed[(2 * t, y - 1)]
        bonds.append(
            (alloc.slot(iid, "v", False), alloc.slot(anchor, "v", True, f"ek|{y}"))
        )
        bonds.append(
            (alloc.slot(seed, "", False, f"g|{y}"), alloc.slot(iid, "", True))
        )
    return bonds, placed, seed


def _leftover_bonds(coll: MonomerCollection, alloc: _Alloc) -> list[Bond]:
    """Cap every comp/end instance the polymer did not use."""
    bonds: list[Bond] = []
    cap_of = _cap_map(coll)
    for mt in coll.types:
        if mt.family not in ("comp", "end"):
            continue
        cap = cap_of[mt.name]
        for n in range(alloc.used(mt.name), coll.count_of(mt.name)):
            bonds += _pair_bonds(
                coll, coll.instances_of(mt.name)[n], coll.instances_of(cap)[n]
            )
    return bonds


def _require_locationfree(cons: TbnConstruction) -> None:
    for m in cons.all_types():
        for d in m.domains:
            if d.loc is not None:
                raise WitnessInvalid(
                    f"{m.name} carries the position subscript {d.loc}: a "
                    "grid-stamped system admits no cross-joined polymer "
                    "(neighbouring columns use disjoint domain names); "
                    "compile with compile_tm_locationfree"
                )


def _usage(columns: Sequence[ColumnPass], final_tokens, s: int) -> Counter:
    use: Counter = Counter()
    for col in columns:
        for y in range(s):
            role, tok, chain = col.rows[y]
            use[tile_name(role, tok, chain)] += 1
    for y, tok in enumerate(final_tokens):
        use[_lf_end_name(tok, y)] += 1
    return use


def _assembled(
    cons: TbnConstruction,
    counts: CountsPolicy,
    columns: Sequence[ColumnPass],
    final_tokens,
    skip_west: frozenset[tuple[int, int]] = frozenset(),
) -> tuple[MonomerCollection, _Alloc, list[Bond], dict[tuple[int, int], int], int]:
    coll = cons.collection(counts)
    alloc = _Alloc(coll)
    bonds, placed, seed = _rectangle_bonds(
        coll, cons, alloc, columns, final_tokens, skip_west
    )
    return coll, alloc, bonds, placed, seed


def _finish(coll: MonomerCollection, alloc: _Alloc, bonds: list[Bond]) -> Configuration:
    bonds = bonds + _leftover_bonds(coll, alloc)
    config = Configuration.make(coll, bonds)
    issues = validate_configuration(config)
    if issues:
        raise StructureUnverifiable(f"inconsistent assembly: {issues[0]}")
    return config


def canonical_lf_configuration(
    cons: TbnConstruction, counts: Optional[CountsPolicy] = None
) -> Configuration:
    """The intended configuration of a location-free construction: the
    complete rectangle polymer for cons.word, every leftover comp/end
    instance capped.  Default counts fit the polymer's own tile reuse."""
    _require_locationfree(cons)
    trace = _checked_trace(cons.tm, cons.word, cons.s, cons.t)
    if counts is None:
        top = max(_usage(trace.columns, trace.final_tokens, cons.s).values())
        counts = CountsPolicy(1, top, top)
    coll, alloc, bonds, _, _ = _assembled(
        cons, counts, trace.columns, trace.final_tokens
    )
    return _finish(coll, alloc, bonds)


# ---------------------------------------------------------------- witness


@dataclass(frozen=True)
class SpliceWitness:
    """A cross-join recipe over three bounded runs: columns c1 < c2 and
    rows l1, l2 such that runs i and j agree on column c1 except at l1
    (with differing west glues), runs j and k agree on column c2 except
    at l2 (likewise), the i-tile at (c1, l1) reappears as the k-tile at
    (c2, l2), the j-tile is the same at both cuts, runs i and k differ
    on column c2, and the two outputs differ."""

    i: str
    j: str
    k: str
    c1: int
    c2: int
    l1: int
    l2: int
    trace_i: ZigzagTrace
    trace_j: ZigzagTrace
    trace_k: ZigzagTrace


def _output(trace: ZigzagTrace) -> str:
    return "".join(tok[0] for tok in trace.final_tokens)


def _column_diff(a: ColumnPass, b: ColumnPass, s: int) -> list[int]:
    return [y for y in range(s) if a.rows[y] != b.rows[y]]


def find_splice_witness(
    tm: TMSpec, candidates: Sequence[str], s: int, t: int
) -> Optional[SpliceWitness]:
    """Scan ordered triples of distinct candidate words (list order,
    then cut columns ascending) for a splice witness; first hit wins.
    None when no scanned triple satisfies every condition — the scan
    checks this sufficient condition only, so None is no proof that the
    system simulates correctly.  Tracing errors (a word that does not
    halt inside the bounds) propagate."""
    words = list(dict.fromkeys(candidates))
    if len(words) < 3:
        return None
    traces = {w: _checked_trace(tm, w, s, t) for w in words}
    outs = {w: _output(traces[w]) for w in words}
    for i, j, k in permutations(words, 3):
        if outs[i] == outs[k]:
            continue
        ti, tj, tk = traces[i], traces[j], traces[k]
        for c1 in range(2 * t):
            d1 = _column_diff(ti.columns[c1], tj.columns[c1], s)
            if len(d1) != 1:
                continue
            l1 = d1[0]
            if _west_label(ti.columns[c1].rows[l1]) == _west_label(
                tj.columns[c1].rows[l1]
            ):
                continue
            for c2 in range(c1 + 1, 2 * t):
                d2 = _column_diff(tj.columns[c2], tk.columns[c2], s)
                if len(d2) != 1:
                    continue
                l2 = d2[0]
                if _west_label(tj.columns[c2].rows[l2]) == _west_label(
                    tk.columns[c2].rows[l2]
                ):
                    continue
                if ti.columns[c1].rows[l1] != tk.columns[c2].rows[l2]:
                    continue
                if tj.columns[c1].rows[l1] != tj.columns[c2].rows[l2]:
                    continue
                if ti.columns[c2].rows == tk.columns[c2].rows:
                    continue
                return SpliceWitness(i, j, k, c1, c2, l1, l2, ti, tj, tk)
    return None


def splice_condition_failures(tm: TMSpec, w: SpliceWitness) -> list[str]:
    """Check every witness condition literally against fresh runs of
    the three words; return the failures (empty means valid).  This
    re-derives everything from the machine and does not reuse the
    finder's scan."""
    failures: list[str] = []
    s, t = w.trace_i.space, w.trace_i.time
    fresh: dict[str, ZigzagTrace] = {}
    for label, word, stored in (
        ("i", w.i, w.trace_i),
        ("j", w.j, w.trace_j),
        ("k", w.k, w.trace_k),
    ):
        if (stored.space, stored.time) != (s, t):
            failures.append(f"trace {label} uses bounds {(stored.space, stored.time)}")
            continue
        if stored.word != word:
            failures.append(f"trace {label} simulates {stored.word!r}, not {word!r}")
            continue
        try:
            run = _checked_trace(tm, word, s, t)
        except TbnError as exc:
            failures.append(f"word {label}={word!r} cannot be traced: {exc}")
            continue
        if run.columns != stored.columns or run.final_tokens != stored.final_tokens:
            failures.append(f"stored trace {label} does not match a fresh run")
            continue
        fresh[label] = run
    if failures:
        return failures
    if not (0 <= w.c1 < w.c2 < 2 * t):
        failures.append(f"need 0 <= c1 < c2 < {2 * t}, got c1={w.c1} c2={w.c2}")
    if not (0 <= w.l1 < s and 0 <= w.l2 < s):
        failures.append(f"need rows inside 0..{s - 1}, got l1={w.l1} l2={w.l2}")
    if failures:
        return failures
    ti, tj, tk = fresh["i"], fresh["j"], fresh["k"]

    diff = _column_diff(ti.columns[w.c1], tj.columns[w.c1], s)
    if diff != [w.l1]:
        failures.append(
            f"columns {w.c1} of i and j differ at rows {diff}, "
            f"the witness cuts at row {w.l1} alone"
        )
    elif _west_label(ti.columns[w.c1].rows[w.l1]) == _west_label(
        tj.columns[w.c1].rows[w.l1]
    ):
        failures.append(f"the i- and j-tiles at ({w.c1},{w.l1}) share a west glue")

    diff = _column_diff(tj.columns[w.c2], tk.columns[w.c2], s)
    if diff != [w.l2]:
        failures.append(
            f"columns {w.c2} of j and k differ at rows {diff}, "
            f"the witness cuts at row {w.l2} alone"
        )
    elif _west_label(tj.columns[w.c2].rows[w.l2]) == _west_label(
        tk.columns[w.c2].rows[w.l2]
    ):
        failures.append(f"the j- and k-tiles at ({w.c2},{w.l2}) share a west glue")

    if ti.columns[w.c1].rows[w.l1] != tk.columns[w.c2].rows[w.l2]:
        failures.append(
            f"the i-tile at ({w.c1},{w.l1}) does not reappear "
            f"as the k-tile at ({w.c2},{w.l2})"
        )
    if tj.columns[w.c1].rows[w.l1] != tj.columns[w.c2].rows[w.l2]:
        failures.append(f"the j-tiles at ({w.c1},{w.l1}) and ({w.c2},{w.l2}) differ")
    if ti.columns[w.c2].rows == tk.columns[w.c2].rows:
        failures.append(f"runs i and k agree on the whole column {w.c2}")
    if _output(ti) == _output(tk):
        failures.append(f"outputs of i and k are both {_output(ti)!r}")
    return failures


# ----------------------------------------------------------- spliced build


def _spliced_columns(w: SpliceWitness) -> tuple[ColumnPass, ...]:
    return (
        w.trace_i.columns[: w.c1]
        + w.trace_j.columns[w.c1 : w.c2]
        + w.trace_k.columns[w.c2 :]
    )


def _fitted_counts(w: SpliceWitness, cons: TbnConstruction) -> CountsPolicy:
    """The smallest uniform counts serving both the intended and the
    spliced polymer (caps as scarce as the comps they pair with)."""
    u1 = _usage(w.trace_i.columns, w.trace_i.final_tokens, cons.s)
    u2 = _usage(_spliced_columns(w), w.trace_k.final_tokens, cons.s)
    top = max(max(u1.values()), max(u2.values()))
    return CountsPolicy(1, top, top)


def build_spliced_configuration(
    w: SpliceWitness,
    cons: TbnConstruction,
    counts: Optional[CountsPolicy] = None,
) -> Configuration:
    """Assemble the cross-joined polymer: run-i columns before c1, run-j
    columns from c1 to c2, run-k columns and ends from c2 on, all on
    run i's seed.  Exactly four sites change partners relative to the
    three source polymers, forming two fresh complementary pairs; the
    leftovers are capped as in the intended configuration.  Raises
    WitnessInvalid for a grid-stamped construction, a construction/
    witness mismatch, or a witness whose conditions fail."""
    _require_locationfree(cons)
    if cons.word != w.i:
        raise WitnessInvalid(
            f"the construction compiles {cons.word!r}, the witness splices i={w.i!r}"
        )
    if (cons.s, cons.t) != (w.trace_i.space, w.trace_i.time):
        raise WitnessInvalid(
            f"construction bounds {(cons.s, cons.t)} differ from witness "
            f"bounds {(w.trace_i.space, w.trace_i.time)}"
        )
    failures = splice_condition_failures(cons.tm, w)
    if failures:
        raise WitnessInvalid("; ".join(failures))
    if counts is None:
        counts = _fitted_counts(w, cons)
    coll, alloc, bonds, placed, seed = _assembled(
        cons,
        counts,
        _spliced_columns(w),
        w.trace_k.final_tokens,
        skip_west=frozenset({(w.c1, w.l1), (w.c2, w.l2)}),
    )
    # the four freed sites rewire into two cross pairs
    if w.c1 == 0:
        east_of_prefix = alloc.slot(
            seed, "h", True, _west_label(w.trace_i.columns[0].rows[w.l1])
        )
    else:
        east_of_prefix = alloc.slot(placed[(w.c1 - 1, w.l1)], "h", True)
    west_of_middle = alloc.slot(placed[(w.c1, w.l1)], "h", False)
    east_of_middle = alloc.slot(placed[(w.c2 - 1, w.l2)], "h", True)
    west_of_suffix = alloc.slot(placed[(w.c2, w.l2)], "h", False)
    bonds.append((east_of_prefix, west_of_suffix))
    bonds.append((west_of_middle, east_of_middle))
    return _finish(coll, alloc, bonds)


# ------------------------------------------------------------------ report


@dataclass(frozen=True)
class SpliceReport:
    """Bond/polymer bookkeeping of the intended configuration next to
    the spliced one, with the decoded outputs.  `ok` means the failure
    is demonstrated: both saturated, identical enthalpy and entropy,
    decoded outputs matching the two machine runs yet differing."""

    i: str
    j: str
    k: str
    c1: int
    c2: int
    l1: int
    l2: int
    h_correct: int
    s_correct: int
    h_spliced: int
    s_spliced: int
    saturated_correct: bool
    saturated_spliced: bool
    decoded_correct: str
    decoded_spliced: str
    ok: bool


def _seed_polymer_types(config: Configuration) -> list[MonomerType]:
    coll = config.collection
    seed = next(
        iid
        for iid in range(coll.total)
        if coll.instance_type(iid).family == "seed"
    )
    members = next(p for p in config.polymers if seed in p)
    return [coll.instance_type(iid) for iid in members]


def demonstrate_failure(
    w: SpliceWitness,
    cons: TbnConstruction,
    counts: Optional[CountsPolicy] = None,
) -> SpliceReport:
    """Build the intended and the spliced configuration over one shared
    collection and compare them."""
    if counts is None:
        counts = _fitted_counts(w, cons)
    spliced = build_spliced_configuration(w, cons, counts)
    correct = canonical_lf_configuration(cons, counts)
    decoded_correct = lf_e_output(_seed_polymer_types(correct)) or ""
    decoded_spliced = lf_e_output(_seed_polymer_types(spliced)) or ""
    ok = (
        correct.is_saturated()
        and spliced.is_saturated()
        and spliced.enthalpy == correct.enthalpy
        and spliced.entropy == correct.entropy
        and decoded_correct == _output(w.trace_i)
        and decoded_spliced == _output(w.trace_k)
        and decoded_correct != decoded_spliced
    )
    return SpliceReport(
        i=w.i,
        j=w.j,
        k=w.k,
        c1=w.c1,
        c2=w.c2,
        l1=w.l1,
        l2=w.l2,
        h_correct=correct.enthalpy,
        s_correct=correct.entropy,
        h_spliced=spliced.enthalpy,
        s_spliced=spliced.entropy,
        saturated_correct=correct.is_saturated(),
        saturated_spliced=spliced.is_saturated(),
        decoded_correct=decoded_correct,
        decoded_spliced=decoded_spliced,
        ok=ok,
    )


_REPORT_FIELDS: tuple[tuple[str, type], ...] = (
    ("i", str),
    ("j", str),
    ("k", str),
    ("c1", int),
    ("c2", int),
    ("l1", int),
    ("l2", int),
    ("h_correct", int),
    ("s_correct", int),
    ("h_spliced", int),
    ("s_spliced", int),
    ("saturated_correct", bool),
    ("saturated_spliced", bool),
    ("decoded_correct", str),
    ("decoded_spliced", str),
    ("ok", bool),
)


def dump_splice_report(report: SpliceReport) -> str:
    lines = []
    for name, kind in _REPORT_FIELDS:
        value = getattr(report, name)
        if kind is bool:
            value = "yes" if value else "no"
        lines.append(f"{name}: {value}")
    return "\n".join(lines) + "\n"


def parse_splice_report(text: str) -> SpliceReport:
    """Parse the `key: value` dump format; '#' starts a comment."""
    got: dict[str, str] = {}
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise FormatError(f"line {ln}: want 'key: value': {raw!r}")
        key, val = (p.strip() for p in line.split(":", 1))
        if key in got:
            raise FormatError(f"line {ln}: duplicate key {key!r}")
        got[key] = val
    fields: dict[str, object] = {}
    for name, kind in _REPORT_FIELDS:
        if name not in got:
            raise FormatError(f"missing key {name!r}")
        raw = got.pop(name)
        if kind is bool:
            if raw not in ("yes", "no"):
                raise FormatError(f"{name}: want yes or no, got {raw!r}")
            fields[name] = raw == "yes"
        elif kind is int:
            try:
                fields[name] = int(raw)
            except ValueError:
                raise FormatError(f"{name}: want an integer, got {raw!r}") from None
        else:
            fields[name] = raw
    if got:
        raise FormatError(f"unknown keys: {sorted(got)}")
    return SpliceReport(**fields)  # type: ignore[arg-type]
