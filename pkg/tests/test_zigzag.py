"""Machine interpreter, tile generator, and assembly tests."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tbnlab.errors import (
    BudgetExceeded,
    FormatError,
    InvalidTM,
    NondeterministicAttachment,
    NotHaltingWithinBounds,
)
from tbnlab.zigzag import (
    Assembly,
    Glue,
    TileType,
    TMSpec,
    assemble,
    build_zigzag_tileset,
    dump_tm,
    parse_tm,
    role_records,
    run_tm,
    tm_steps,
    zigzag_trace,
)

BITFLIP_TEXT = """\
states: A,H
input: 0,1
tape: 0,1,_
start: A
halt: H
A,0 -> H,1,R
A,1 -> H,0,R
A,_ -> H,_,R
"""

BITFLIP = parse_tm(BITFLIP_TEXT)

# walks right over its input and halts on the first blank
RIGHTER = parse_tm(
    """
states: A,H
input: 0,1
tape: 0,1,_
start: A
halt: H
A,0 -> A,0,R
A,1 -> A,1,R
A,_ -> H,_,R
"""
)

# bounces left once: needs a descending column to fire
BOUNCER = parse_tm(
    """
states: A,B,C,H
input: 0,1
tape: 0,1,_
start: A
halt: H
A,0 -> B,0,R
A,1 -> B,1,R
A,_ -> B,_,R
B,0 -> C,0,L
B,1 -> C,1,L
B,_ -> C,_,L
C,0 -> H,1,R
C,1 -> H,0,R
C,_ -> H,_,R
"""
)

# immediately halted machine (start state is the halt state)
IDLE = parse_tm(
    """
states: A,H
input: 0,1
tape: 0,1,_
start: H
halt: H
A,0 -> A,0,R
A,1 -> A,1,R
A,_ -> A,_,R
"""
)

# moves left off the tape edge
LEFTY = parse_tm(
    """
states: A,H
input: 0,1
tape: 0,1,_
start: A
halt: H
A,0 -> H,0,L
A,1 -> H,1,L
A,_ -> H,_,L
"""
)


# ------------------------------------------------------------ interpreter


def test_run_tm_bitflip():
    out = run_tm(BITFLIP, "1", max_steps=1)
    assert out.tape == "0_"
    assert out.halted and out.steps_used == 1 and out.cells_used == 2
    assert out.state == "H" and out.head == 1
    assert out.window(0, 2) == "0_"


def test_run_tm_budget_raises():
    with pytest.raises(BudgetExceeded):
        run_tm(RIGHTER, "11", max_steps=0)
    with pytest.raises(BudgetExceeded):
        run_tm(RIGHTER, "11", max_steps=2)
    assert run_tm(RIGHTER, "11", max_steps=3).steps_used == 3


def test_run_tm_empty_input_immediate_halt():
    out = run_tm(IDLE, "", max_steps=0)
    assert out.halted and out.steps_used == 0
    assert out.tape == "_" and out.cells_used == 1


def test_run_tm_rejects_bad_input_symbols():
    with pytest.raises(InvalidTM):
        run_tm(BITFLIP, "2", max_steps=5)


def test_run_tm_tracks_negative_cells():
    out = run_tm(LEFTY, "0", max_steps=1)
    assert out.cells_lo == -1 and out.head == -1
    assert out.tape == "_0"


# -------------------------------------------------------------- tm format


def test_parse_dump_round_trip():
    assert parse_tm(dump_tm(BITFLIP)) == BITFLIP
    assert parse_tm(dump_tm(BOUNCER)) == BOUNCER


def test_parse_rejects_partial_delta():
    bad = BITFLIP_TEXT.replace("A,_ -> H,_,R\n", "")
    with pytest.raises(InvalidTM):
        parse_tm(bad)


def test_parse_rejects_duplicate_transition():
    with pytest.raises(InvalidTM):
        parse_tm(BITFLIP_TEXT + "A,0 -> H,0,R\n")


def test_parse_rejects_bad_charset():
    with pytest.raises(InvalidTM):
        parse_tm(BITFLIP_TEXT.replace("states: A,H", "states: A!,H"))


def test_parse_rejects_input_outside_tape():
    with pytest.raises(InvalidTM):
        parse_tm(BITFLIP_TEXT.replace("input: 0,1", "input: 0,1,2"))


def test_parse_rejects_halt_state_transitions():
    with pytest.raises(InvalidTM):
        parse_tm(BITFLIP_TEXT + "H,0 -> H,0,R\n")


# ------------------------------------------------------------ column trace


def test_trace_bitflip_output():
    tr = zigzag_trace(BITFLIP, "1", s=2, t=1)
    assert tr.final_tokens == (("0", None), ("_", "H"))
    assert tr.columns[0].fired and tr.columns[0].halted
    assert not tr.columns[1].fired


def test_trace_tracks_interpreter_snapshots():
    cases = [
        (BITFLIP, "1", 2, 1),
        (RIGHTER, "11", 4, 3),
        (RIGHTER, "0", 3, 2),
        (BOUNCER, "01", 3, 4),
        (BOUNCER, "1", 2, 4),
    ]
    for tm, word, s, t in cases:
        tr = zigzag_trace(tm, word, s, t)
        configs = list(tm_steps(tm, word))
        moves = 0
        for col in tr.columns:
            moves += int(col.fired)
            state, head, tape = configs[moves]
            for y, (sym, mark) in enumerate(col.tokens_out):
                assert sym == tape.get(y, tm.blank), (word, col.x, y)
                assert (mark is not None) == (y == head)
                if mark is not None:
                    assert mark == state
        assert moves == len(configs) - 1  # every step simulated


def test_trace_requires_halt_within_columns():
    with pytest.raises(NotHaltingWithinBounds):
        zigzag_trace(RIGHTER, "11", s=4, t=1)


def test_trace_rejects_tape_escape():
    with pytest.raises(NotHaltingWithinBounds):
        zigzag_trace(LEFTY, "0", s=2, t=2)


def test_trace_rejects_long_input():
    with pytest.raises(InvalidTM):
        zigzag_trace(BITFLIP, "111", s=2, t=1)


def test_trace_descending_fire():
    # BOUNCER's second step is an L-move: it must fire in an odd column
    tr = zigzag_trace(BOUNCER, "1", s=2, t=4)
    assert [c.fired for c in tr.columns][:4] == [True, True, True, False]
    assert tr.columns[1].fired and not tr.columns[1].ascending


# ---------------------------------------------------------------- tileset


def test_tileset_size_bound():
    for tm in (BITFLIP, RIGHTER, BOUNCER):
        q, g = len(tm.states), len(tm.tape_alphabet)
        for space in (None, 2, 5):
            tiles, _ = build_zigzag_tileset(tm, space_bound=space)
            assert len(tiles) <= 24 * q * g


def test_role_record_count_formula():
    # tokens T = g·(q+1): each symbol plain or marked by one of q states.
    # Per direction: first roles T (fresh chain × token), mid roles 2T
    # (fresh × token, plus landed/copy chains × plain symbol), last roles
    # 2T minus the same-direction fires (they would escape the tape).
    # Two directions: 10·T − |delta|.
    for tm in (BITFLIP, RIGHTER, BOUNCER):
        q, g = len(tm.states), len(tm.tape_alphabet)
        recs = role_records(tm, pad=True)
        assert len(recs) == 10 * g * (q + 1) - len(tm.delta)
        roles = {}
        for r in recs:
            roles[r.role] = roles.get(r.role, 0) + 1
        assert roles["uf"] == roles["df"] == g * (q + 1)
        assert roles["um"] == roles["dm"] == 2 * g * (q + 1)


def test_glue_strengths_globally_consistent():
    tiles, family = build_zigzag_tileset(BOUNCER, space_bound=4)
    strengths = {}
    for t in tiles + family("01"):
        for side in ("north", "east", "south", "west"):
            glue = t.glue(side)
            if glue is None:
                continue
            assert strengths.setdefault(glue.label, glue.strength) == glue.strength
            tag = glue.label.split("|", 1)[0]
            want = 2 if tag in ("tu", "td", "tse", "tso", "tuE", "gr", "ic") else 1
            assert glue.strength == want, glue


def test_input_family_frozen_example():
    # input 1011 at space 6: seed turn, four values, blank padding, top tag
    _, family = build_zigzag_tileset(BITFLIP, space_bound=6)
    fam = family("1011")
    easts = [t.east.label for t in fam]
    assert easts == ["tu|1.A", "v|0", "v|1", "v|1", "v|_", "vT|_"]
    assert fam[0].east.strength == 2
    assert all(t.east.strength == 1 for t in fam[1:])
    spine = [(t.south, t.north) for t in fam]
    assert spine[0] == (None, Glue("ic|1", 2))
    assert spine[-1] == (Glue("ic|5", 2), None)


def test_input_family_rejects_long_or_bad_input():
    _, family = build_zigzag_tileset(BITFLIP, space_bound=2)
    with pytest.raises(InvalidTM):
        family("111")
    with pytest.raises(InvalidTM):
        family("2")


# --------------------------------------------------------------- assembly


def assemble_run(tm, word, s, pad=False, max_tiles=100_000):
    tiles, family = build_zigzag_tileset(tm, space_bound=s, pad_after_halt=pad)
    fam = family(word)
    return assemble(tiles + fam, fam[0], max_tiles=max_tiles)


def name_candidates(role, tok, chain):
    # traces always pad (halt landings ride as "post"); a non-padding
    # tile set names the same roles "halt" so growth can stop there
    from tbnlab.zigzag import tile_name

    padded = tile_name(role, tok, chain)
    return {padded, padded.replace(",post]", ",halt]")}


def test_seed_alone_with_empty_tileset():
    seed = TileType("lone", east=Glue("x", 2))
    out = assemble((), seed)
    assert out.placements == {(0, 0): seed}
    assert out.order == [(0, 0)]


def test_assembly_bitflip_halts_at_column_completion():
    out = assemble_run(BITFLIP, "1", s=2)
    assert set(out.placements) == {(0, 0), (0, 1), (1, 0), (1, 1)}
    assert out.name_at(1, 0) == "uf[1.A]"
    assert out.name_at(1, 1) == "ul[_,carry.H]"
    # the halting column-last tile emits no turn
    assert out.placements[(1, 1)].east is None


def test_assembly_fires_in_second_column():
    # the first fired transition sits in the column right of the input
    out = assemble_run(RIGHTER, "11", s=4)
    assert out.name_at(1, 0) == "uf[1.A]"


def test_assembly_matches_trace_columns():
    cases = [
        (BITFLIP, "1", 2, 1),
        (RIGHTER, "11", 4, 3),
        (BOUNCER, "01", 3, 4),
        (BOUNCER, "1", 2, 4),
    ]
    for tm, word, s, t in cases:
        tr = zigzag_trace(tm, word, s, t)
        out = assemble_run(tm, word, s)
        _, _, maxx, maxy = out.bounds()
        assert maxy == s - 1
        # grown columns agree with the trace roles and tokens
        for x in range(1, maxx + 1):
            col = tr.columns[x - 1]
            for y in range(s):
                role, tok, chain = col.rows[y]
                assert out.name_at(x, y) in name_candidates(role, tok, chain)
        # every grown column is complete: a full rectangle
        assert len(out.placements) == s * (maxx + 1)


def test_assembly_stops_after_halting_column():
    tr = zigzag_trace(RIGHTER, "11", s=4, t=3)
    halted_at = next(i for i, c in enumerate(tr.columns) if c.halted)
    out = assemble_run(RIGHTER, "11", s=4)
    _, _, maxx, _ = out.bounds()
    assert maxx == halted_at + 1  # input column shifts everything by one


def test_assembly_attachment_order_by_column():
    out = assemble_run(BOUNCER, "01", s=3)
    for k, pos in enumerate(out.order):
        assert pos[0] == k // 3


def test_assembly_one_state_glue_per_boundary():
    out = assemble_run(BOUNCER, "01", s=3)
    _, _, maxx, _ = out.bounds()
    for x in range(maxx):  # interior boundaries only
        marked = [
            t.east.label
            for (tx, _), t in out.placements.items()
            if tx == x and t.east is not None and "." in t.east.label.split("|")[1]
        ]
        assert len(marked) == 1, (x, marked)


def test_assembly_pad_mode_fills_time_budget():
    tiles, family = build_zigzag_tileset(BITFLIP, space_bound=2, pad_after_halt=True)
    fam = family("1")
    with pytest.raises(BudgetExceeded):
        assemble(tiles + fam, fam[0], max_tiles=40)  # no-ops grow forever


def test_assembly_budget():
    with pytest.raises(BudgetExceeded):
        assemble_run(BOUNCER, "01", s=3, max_tiles=5)


def test_nondeterministic_attachment_detected():
    seed = TileType("seed", east=Glue("x", 2))
    t1 = TileType("one", west=Glue("x", 2))
    t2 = TileType("two", west=Glue("x", 2))
    with pytest.raises(NondeterministicAttachment):
        assemble((t1, t2), seed)


def test_conflicting_glue_strengths_rejected():
    bad = [
        TileType("a", east=Glue("x", 2)),
        TileType("b", west=Glue("x", 1)),
    ]
    from tbnlab.zigzag import _check_glue_strengths

    with pytest.raises(FormatError):
        _check_glue_strengths(bad)


def test_solo_columns_height_one():
    tiles, family = build_zigzag_tileset(IDLE, space_bound=1)
    fam = family("1")
    out = assemble(tiles + fam, fam[0])
    # the already-halted head copies once, then stops (no turn emitted)
    assert out.name_at(1, 0) == "se[1.H]"
    assert len(out.placements) == 2


def test_solo_columns_cannot_run_a_real_machine():
    tiles, family = build_zigzag_tileset(BITFLIP, space_bound=1)
    fam = family("1")
    out = assemble(tiles + fam, fam[0])
    assert len(out.placements) == 1  # any move escapes a height-1 tape


# -------------------------------------------------------------- unbounded


def test_unbounded_bitflip():
    tiles, family = build_zigzag_tileset(BITFLIP)
    fam = family("1")
    out = assemble(tiles + fam, fam[0])
    assert out.name_at(1, 0) == "ufe[1.A]"
    assert out.name_at(1, 1) == "uc[carry.H]"
    assert len(out.placements) == 3


def test_unbounded_heights_grow_per_column_pair():
    tiles, family = build_zigzag_tileset(RIGHTER)
    fam = family("1")
    out = assemble(tiles + fam, fam[0])
    heights = {}
    for (x, y) in out.placements:
        heights[x] = max(heights.get(x, 0), y + 1)
    assert heights == {0: 1, 1: 2, 2: 2, 3: 3}
    # final column: the head halts on the fresh blank cell
    assert out.name_at(3, 2) == "uc[carry.H]"


def test_unbounded_empty_input_uses_blank_cell():
    tiles, family = build_zigzag_tileset(RIGHTER)
    fam = family("")
    assert fam[0].east.label == "tuE|_.A"
    out = assemble(tiles + fam, fam[0])
    assert out.name_at(1, 0) == "ufe[_.A]"


def test_unbounded_rejects_pad():
    with pytest.raises(InvalidTM):
        build_zigzag_tileset(BITFLIP, pad_after_halt=True)


# ------------------------------------------------------------- properties


@st.composite
def random_machines(draw):
    nq = draw(st.integers(2, 3))
    states = tuple(f"q{k}" for k in range(nq)) + ("H",)
    tape = ("0", "1", "_")
    delta = {}
    for s in states[:-1]:
        for a in tape:
            q2 = draw(st.sampled_from(states))
            a2 = draw(st.sampled_from(tape))
            d = draw(st.sampled_from(["L", "R"]))
            delta[(s, a)] = (q2, a2, d)
    return TMSpec(
        states=states,
        input_alphabet=("0", "1"),
        tape_alphabet=tape,
        delta=delta,
        start_state="q0",
        halt_state="H",
    )


@settings(max_examples=60, deadline=None)
@given(random_machines(), st.text(alphabet="01", min_size=0, max_size=3))
def test_trace_agrees_with_interpreter_when_bounded(tm, word):
    s, t = 4, 6
    try:
        run = run_tm(tm, word, max_steps=t)
    except BudgetExceeded:
        return  # not halting fast enough: trace must refuse too
    if run.cells_lo < 0 or run.cells_hi >= s:
        with pytest.raises(NotHaltingWithinBounds):
            zigzag_trace(tm, word, s, t)
        return
    tr = zigzag_trace(tm, word, s, t)
    syms = "".join(sym for sym, _ in tr.final_tokens)
    assert syms == run.window(0, s)
    mark = next((y, m) for y, (_, m) in enumerate(tr.final_tokens) if m)
    assert mark == (run.head, "H")


@settings(max_examples=25, deadline=None)
@given(random_machines(), st.text(alphabet="01", min_size=0, max_size=3))
def test_assembly_agrees_with_trace(tm, word):
    s, t = 3, 5
    try:
        run = run_tm(tm, word, max_steps=t)
    except BudgetExceeded:
        return
    if run.cells_lo < 0 or run.cells_hi >= s:
        return
    tr = zigzag_trace(tm, word, s, t)
    out = assemble_run(tm, word, s)
    _, _, maxx, _ = out.bounds()
    for x in range(1, maxx + 1):
        col = tr.columns[x - 1]
        for y in range(s):
            role, tok, chain = col.rows[y]
            assert out.name_at(x, y) in name_candidates(role, tok, chain)
