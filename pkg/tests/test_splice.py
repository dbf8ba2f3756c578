"""Location-free compilation and the splice counterexample: witness
search, independent condition checking, the cross-joined configuration,
and its bookkeeping next to the intended one."""

import dataclasses
import functools

import pytest

from tbnlab.errors import CountsViolation, FormatError, WitnessInvalid
from tbnlab.solver import check_entropy_certificate, derive_entropy_certificate
from tbnlab.splice import (
    SpliceWitness,
    build_spliced_configuration,
    canonical_lf_configuration,
    compile_tm_locationfree,
    demonstrate_failure,
    dump_splice_report,
    find_splice_witness,
    lf_e_output,
    parse_splice_report,
    splice_condition_failures,
    _seed_polymer_types,
)
from tbnlab.tmcompile import CountsPolicy, compile_tm
from tbnlab.zigzag import parse_tm, role_records, run_tm, zigzag_trace

# A write-then-restore machine: the first pass replaces cell 0 by a
# value-dependent scratch symbol, the second pass restores a value that
# collapses two of the three inputs.  Runs on x11 halt after 7 steps
# inside 4 cells, so columns 0..6 each fire one step and the rest copy.
# Inputs 011 and 111 agree everywhere except when the head sits on
# cell 0 in state A, which is exactly the single-location column
# difference the splice needs; 211 restores to a different output.
RESTORER = parse_tm(
    """
    states: A,W,X,Y,E,H
    input: 0,1,2
    tape: 0,1,2,_
    start: A
    halt: H
    A,0 -> W,2,R
    A,1 -> W,0,R
    A,2 -> W,1,R
    W,1 -> X,2,L
    W,2 -> E,2,L
    X,0 -> Y,1,R
    X,1 -> Y,0,R
    X,2 -> Y,1,R
    Y,2 -> A,2,L
    E,0 -> H,1,R
    E,2 -> H,0,R
    # unreached (state, symbol) pairs, present only to keep delta total
    A,_ -> H,_,R
    W,0 -> H,0,R
    W,_ -> H,_,R
    X,_ -> H,_,R
    Y,0 -> H,0,R
    Y,1 -> H,1,R
    Y,_ -> H,_,R
    E,1 -> H,1,R
    E,_ -> H,_,R
    """
)

# erases cell 0, so every one-letter input gives the same output
ERASER = parse_tm(
    """
    states: A,H
    input: 0,1,2
    tape: 0,1,2,_
    start: A
    halt: H
    A,0 -> H,_,R
    A,1 -> H,_,R
    A,2 -> H,_,R
    A,_ -> H,_,R
    """
)

WORDS = ("011", "111", "211")
S, T = 4, 5


@functools.cache
def witness():
    w = find_splice_witness(RESTORER, WORDS, S, T)
    assert w is not None
    return w


@functools.cache
def construction():
    return compile_tm_locationfree(RESTORER, "011", S, T)


@functools.cache
def report():
    return demonstrate_failure(witness(), construction())


def total_plains(coll):
    return sum(coll.count_of(t.name) * len(t.inputs()) for t in coll.types)


# ------------------------------------------------------------- the machine


def test_restorer_outputs_collapse_two_inputs():
    # hand-traced: A marks cell 0, W/X/Y rewrite and return, E restores;
    # 0 and 1 restore to 1, 2 restores to 0
    outs = {w: run_tm(RESTORER, w, max_steps=2 * T).window(0, S) for w in WORDS}
    assert outs == {"011": "121_", "111": "121_", "211": "021_"}
    assert all(run_tm(RESTORER, w, max_steps=2 * T).halted for w in WORDS)


# ----------------------------------------------------------- compilation


def test_comp_family_is_one_monomer_per_pass_rule():
    cons = construction()
    assert len(cons.comp_family) == len(role_records(RESTORER, pad=True))
    names = [m.name for m in cons.comp_family]
    assert len(set(names)) == len(names)


def test_comp_family_independent_of_bounds():
    small = compile_tm_locationfree(RESTORER, "011", S, T)
    large = compile_tm_locationfree(RESTORER, "011", S + 1, T + 2)
    assert small.comp_family == large.comp_family


def test_no_domain_carries_a_position():
    for m in construction().all_types():
        assert all(d.loc is None for d in m.domains), m.name


def test_same_tile_same_monomer_up_to_the_subscript():
    stamped = compile_tm(RESTORER, "011", S, T)
    free_by_name = {m.name: m for m in construction().comp_family}
    for m in stamped.comp_family:
        base, at = m.name.rsplit("@", 1)
        twin = free_by_name[base]
        assert at.startswith("(")
        stripped = sorted(
            (d.label, d.orient, d.star) for d in m.domains
        )
        assert stripped == sorted((d.label, d.orient, d.star) for d in twin.domains)


def test_canonical_map_reuses_tiles_across_positions():
    cons = construction()
    names = list(cons.canonical.values())
    assert len(set(names)) < len(names)  # the whole point of dropping locations
    grid = {p for p in cons.canonical if p[0] < 2 * T}
    assert len(grid) == 2 * T * S


def test_end_family_keyed_by_row_and_token():
    cons = construction()
    assert len(cons.end_family) == S * 2 * len(RESTORER.tape_alphabet)
    assert cons.e_output_table[f"end[2.H]@row1"] == (1, "2")


# ----------------------------------------------------------------- finder


def test_witness_found_at_the_two_head_visits_of_cell_zero():
    w = witness()
    assert (w.i, w.j, w.k) == WORDS
    assert (w.c1, w.c2, w.l1, w.l2) == (0, 4, 0, 0)


def test_witness_passes_the_independent_checker():
    assert splice_condition_failures(RESTORER, witness()) == []


def test_too_few_distinct_candidates_find_nothing():
    assert find_splice_witness(RESTORER, ["011"], S, T) is None
    assert find_splice_witness(RESTORER, ["011", "111"], S, T) is None
    assert find_splice_witness(RESTORER, ["011", "111", "011"], S, T) is None


def test_equal_outputs_find_nothing():
    assert find_splice_witness(ERASER, ["0", "1", "2"], 2, 1) is None


def test_checker_names_equal_outputs():
    traces = {w: zigzag_trace(ERASER, w, 2, 1) for w in ("0", "1", "2")}
    w = SpliceWitness("0", "1", "2", 0, 1, 0, 0, traces["0"], traces["1"], traces["2"])
    failures = splice_condition_failures(ERASER, w)
    assert any("outputs of i and k are both" in f for f in failures)


@pytest.mark.parametrize(
    "change,phrase",
    [
        (dict(c2=3), "does not reappear"),
        (dict(c1=4, c2=0), "need 0 <= c1 < c2"),
        (dict(l1=1), "cuts at row 1 alone"),
        (dict(l2=2), "cuts at row 2 alone"),
        (dict(c1=3), "differ at rows"),  # runs i and j coincide from step 3 on
    ],
)
def test_checker_rejects_mutated_witnesses(change, phrase):
    bad = dataclasses.replace(witness(), **change)
    failures = splice_condition_failures(RESTORER, bad)
    assert failures and any(phrase in f for f in failures)


def test_checker_rejects_stale_traces():
    bad = dataclasses.replace(witness(), trace_j=witness().trace_i)
    failures = splice_condition_failures(RESTORER, bad)
    assert any("simulates" in f for f in failures)


# ------------------------------------------------- intended configuration


def test_canonical_lf_configuration_books():
    cons = construction()
    config = canonical_lf_configuration(cons)
    assert config.is_saturated()
    assert config.enthalpy == total_plains(config.collection)
    copies = config.collection.count_of(cons.comp_family[0].name)
    n_types = len(cons.comp_family) + len(cons.end_family)
    assert config.entropy == 1 + copies * n_types
    members = _seed_polymer_types(config)
    assert len(members) == 1 + 2 * T * S + S
    assert lf_e_output(members) == "121_"
    assert check_entropy_certificate(config, derive_entropy_certificate(config))


# ------------------------------------------------- spliced configuration


def test_spliced_matches_intended_books_but_not_output():
    w, cons = witness(), construction()
    spliced = build_spliced_configuration(w, cons)
    copies = spliced.collection.count_of(cons.comp_family[0].name)
    correct = canonical_lf_configuration(cons, CountsPolicy(1, copies, copies))
    assert spliced.is_saturated() and correct.is_saturated()
    assert spliced.enthalpy == correct.enthalpy
    assert spliced.entropy == correct.entropy
    assert lf_e_output(_seed_polymer_types(spliced)) == "021_"
    assert lf_e_output(_seed_polymer_types(correct)) == "121_"
    assert check_entropy_certificate(spliced, derive_entropy_certificate(spliced))


def test_spliced_polymer_same_size_as_intended():
    spliced = build_spliced_configuration(witness(), construction())
    assert len(_seed_polymer_types(spliced)) == 1 + 2 * T * S + S


def test_spliced_rejects_the_stamped_construction():
    stamped = compile_tm(RESTORER, "011", S, T)
    with pytest.raises(WitnessInvalid, match="position subscript"):
        build_spliced_configuration(witness(), stamped)


def test_spliced_rejects_word_and_bounds_mismatches():
    other = compile_tm_locationfree(RESTORER, "111", S, T)
    with pytest.raises(WitnessInvalid, match="splices i="):
        build_spliced_configuration(witness(), other)
    wider = compile_tm_locationfree(RESTORER, "011", S + 1, T)
    with pytest.raises(WitnessInvalid, match="bounds"):
        build_spliced_configuration(witness(), wider)


def test_spliced_rejects_a_mutated_witness():
    bad = dataclasses.replace(witness(), c2=3)
    with pytest.raises(WitnessInvalid, match="does not reappear"):
        build_spliced_configuration(bad, construction())


def test_spliced_rejects_scarce_counts():
    with pytest.raises(CountsViolation, match="copies"):
        build_spliced_configuration(
            witness(), construction(), CountsPolicy(1, 1, 1)
        )


# ------------------------------------------------------------------ report


def test_demonstrate_failure_certifies_the_splice():
    r = report()
    assert r.ok
    assert r.saturated_correct and r.saturated_spliced
    assert r.h_correct == r.h_spliced
    assert r.s_correct == r.s_spliced
    assert (r.decoded_correct, r.decoded_spliced) == ("121_", "021_")
    assert (r.i, r.j, r.k, r.c1, r.c2) == (*WORDS, 0, 4)


def test_report_round_trips_through_the_dump_format():
    r = report()
    assert parse_splice_report(dump_splice_report(r)) == r


@pytest.mark.parametrize(
    "mangle",
    [
        lambda text: text.replace("ok: yes", "ok: maybe"),
        lambda text: text.replace("c1: 0", "c1: zero"),
        lambda text: text.replace("c1: 0", "c1 0"),
        lambda text: text + "extra: 1\n",
        lambda text: text + "ok: yes\n",
        lambda text: text.replace("k: 211\n", ""),
    ],
)
def test_report_parser_rejects_mangled_dumps(mangle):
    with pytest.raises(FormatError):
        parse_splice_report(mangle(dump_splice_report(report())))


# ------------------------------------------------------------------ decode


def test_lf_e_output_edge_cases():
    cons = construction()
    ends = {m.name: m for m in cons.end_family}
    good = [ends["end[1]@row0"], ends["end[2]@row1"]]
    assert lf_e_output(good) == "12"
    assert lf_e_output([]) is None
    assert lf_e_output([ends["end[1]@row0"], ends["end[2]@row0"]]) is None
    assert lf_e_output([ends["end[1]@row1"]]) is None  # row 0 missing
    assert lf_e_output([cons.input_monomer]) is None
