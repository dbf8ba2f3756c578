"""Solver: naive oracle vs pruned engine, classes, certificates."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tbnlab.core import Configuration, Domain, MonomerCollection, MonomerType
from tbnlab.errors import (
    BadAnchor,
    BudgetExceeded,
    EmptyCollection,
    EntropyBelowBound,
    NotSaturated,
)
from tbnlab.solver import (
    EntropyCertificate,
    SolveLimits,
    check_entropy_certificate,
    derive_entropy_certificate,
    enumerate_stable_configurations,
    equivalent_configurations,
    is_stable,
    naive_enumerate_stable,
)

from conftest import random_collection


def mono(name, tokens, family="", count=1):
    from tbnlab.core import parse_domain

    return (MonomerType(name, tuple(parse_domain(t) for t in tokens), family), count)


def coll(*entries):
    return MonomerCollection.from_pairs(entries)


def classes_agree(a, b):
    """Same class sets, checked with the independent equivalence search."""
    if len(a) != len(b):
        return False
    used = set()
    for x in a:
        hit = next(
            (
                k
                for k, y in enumerate(b)
                if k not in used and equivalent_configurations(x, y)
            ),
            None,
        )
        if hit is None:
            return False
        used.add(hit)
    return True


# ------------------------------------------------------- frozen hand cases


def test_single_pair():
    c = coll(mono("A", ["a"]), mono("B", ["a*"]))
    for solver in (naive_enumerate_stable, enumerate_stable_configurations):
        out = solver(c)
        assert len(out) == 1
        assert out[0].enthalpy == 1 and out[0].entropy == 1
        assert is_stable(out[0])


def test_excess_copies_collapse_to_one_class():
    c = coll(mono("A", ["a"], count=2), mono("B", ["a*"]))
    for solver in (naive_enumerate_stable, enumerate_stable_configurations):
        out = solver(c)
        assert len(out) == 1
        assert out[0].enthalpy == 1 and out[0].entropy == 2


def test_self_loop_monomer_prefers_self_bonds():
    # {a, a*} x2: each self-bonded (S=2) beats the 2-bond ring (S=1)
    c = coll(mono("L", ["a", "a*"], count=2))
    for solver in (naive_enumerate_stable, enumerate_stable_configurations):
        out = solver(c)
        assert len(out) == 1
        assert out[0].enthalpy == 2 and out[0].entropy == 2
        assert all((i, 0) in dict(out[0].bonds) or True for i in range(2))
        # both bonds are self-bonds
        assert all(x[0] == y[0] for x, y in out[0].bonds)


def test_ring_is_unique_stable_class():
    c = coll(mono("A", ["a", "b*"]), mono("B", ["b", "c*"]), mono("C", ["c", "a*"]))
    for solver in (naive_enumerate_stable, enumerate_stable_configurations):
        out = solver(c)
        assert len(out) == 1
        assert out[0].enthalpy == 3 and out[0].entropy == 1


def test_double_binding_maximizes_entropy():
    # T1={a,b}, T2={a*}, T3={b*}, T4={a*,b*}: binding both of T1's
    # domains to the one T4 frees T2 and T3 -> S=3, unique stable class.
    c = coll(
        mono("T1", ["a", "b"]),
        mono("T2", ["a*"]),
        mono("T3", ["b*"]),
        mono("T4", ["a*", "b*"]),
    )
    for solver in (naive_enumerate_stable, enumerate_stable_configurations):
        out = solver(c)
        assert len(out) == 1
        assert out[0].enthalpy == 2 and out[0].entropy == 3

    # the S=2 saturated configurations exist and are NOT all equivalent
    t1a, t1b = (0, 0), (0, 1)  # T1 sorted domains: a, b
    alt1 = Configuration.make(c, [(t1a, (1, 0)), (t1b, (3, 1))])
    alt2 = Configuration.make(c, [(t1a, (3, 0)), (t1b, (2, 0))])
    assert alt1.is_saturated() and alt2.is_saturated()
    assert alt1.entropy == alt2.entropy == 2
    assert not equivalent_configurations(alt1, alt2)
    assert not is_stable(alt1) and not is_stable(alt2)


def test_content_twins_permute_jointly():
    # capA/capB have different names but identical domain content, so
    # swapping which one serves which target is the SAME class: types
    # are multisets of domains, names carry no extra identity.
    c = coll(
        mono("capA", ["x*"], family="cap"),
        mono("capB", ["x*"], family="cap"),
        mono("tgtA", ["a", "x"]),
        mono("tgtB", ["b", "x"]),
    )
    # ids by sorted name: capA=0, capB=1, tgtA=2, tgtB=3; sorted domains
    # put the plain value first, x second.
    straight = Configuration.make(c, [((2, 1), (0, 0)), ((3, 1), (1, 0))])
    crossed = Configuration.make(c, [((2, 1), (1, 0)), ((3, 1), (0, 0))])
    assert straight.is_saturated() and crossed.is_saturated()
    assert equivalent_configurations(straight, crossed)
    from tbnlab.solver import canonical_class_key

    assert canonical_class_key(straight) == canonical_class_key(crossed)
    for solver in (naive_enumerate_stable, enumerate_stable_configurations):
        out = solver(c)
        assert len(out) == 1


def test_unbindable_collection_stays_apart():
    c = coll(mono("A", ["a"], count=3))
    for solver in (naive_enumerate_stable, enumerate_stable_configurations):
        out = solver(c)
        assert len(out) == 1
        assert out[0].enthalpy == 0 and out[0].entropy == 3


def test_equivalence_spots_permuted_copies():
    c = coll(mono("A", ["a"], count=2), mono("B", ["a*"], count=2))
    cfg1 = Configuration.make(c, [((0, 0), (2, 0)), ((1, 0), (3, 0))])
    cfg2 = Configuration.make(c, [((0, 0), (3, 0)), ((1, 0), (2, 0))])
    assert equivalent_configurations(cfg1, cfg2)
    half = Configuration.make(c, [((0, 0), (2, 0))])
    assert not equivalent_configurations(cfg1, half)


# ------------------------------------------------------------ cross-check


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000))
def test_pruned_matches_naive_on_random_collections(seed):
    rng = random.Random(seed)
    c = random_collection(rng, max_monomers=5, max_names=3)
    naive = naive_enumerate_stable(c)
    pruned = enumerate_stable_configurations(c)
    assert classes_agree(naive, pruned)
    assert naive[0].enthalpy == pruned[0].enthalpy
    assert naive[0].entropy == pruned[0].entropy
    for cfg in pruned:
        assert cfg.is_saturated()
        assert is_stable(cfg)


def test_budget_exceeded_is_loud():
    c = coll(mono("A", ["a"], count=4), mono("B", ["a*"], count=4))
    with pytest.raises(BudgetExceeded):
        naive_enumerate_stable(c, SolveLimits(max_branch_nodes=5))
    with pytest.raises(BudgetExceeded):
        enumerate_stable_configurations(c, SolveLimits(max_branch_nodes=2))
    with pytest.raises(BudgetExceeded):
        naive_enumerate_stable(c, SolveLimits(max_monomers=3))
    with pytest.raises(EmptyCollection):
        enumerate_stable_configurations(MonomerCollection(()))


def test_enumeration_is_deterministic():
    rng = random.Random(7)
    c = random_collection(rng)
    a = enumerate_stable_configurations(c)
    b = enumerate_stable_configurations(c)
    assert [x.dump() for x in a] == [y.dump() for y in b]


# ----------------------------------------------------------- certificates


def anchored_collection():
    return coll(
        mono("cap1", ["a*"], family="cap"),
        mono("mid", ["a"], family="comp"),
        mono("seed1", ["b*"], family="seed"),
        mono("who", ["b"], family="end"),
    )


def test_certificate_accepts_good_witness():
    c = anchored_collection()
    # cap1 binds mid, seed1 binds who: 2 polymers, both anchored
    cfg = Configuration.make(c, [((0, 0), (1, 0)), ((2, 0), (3, 0))])
    cert = derive_entropy_certificate(cfg)
    assert cert.claimed_entropy == 2
    assert check_entropy_certificate(cfg, cert) is True


def test_certificate_rejects_unsaturated():
    c = anchored_collection()
    cfg = Configuration.make(c, [((0, 0), (1, 0))])
    with pytest.raises(NotSaturated):
        check_entropy_certificate(cfg, EntropyCertificate({0: 0}, 2))


def test_certificate_rejects_entropy_below_bound():
    # one middle monomer bridges two anchors into a single polymer
    c = coll(
        mono("cap1", ["a*"], family="cap"),
        mono("mid", ["a", "a"], family="comp"),
        mono("seed1", ["a*"], family="seed"),
    )
    cfg = Configuration.make(c, [((1, 0), (0, 0)), ((1, 1), (2, 0))])
    assert cfg.is_saturated() and cfg.entropy == 1
    with pytest.raises(EntropyBelowBound):
        check_entropy_certificate(cfg, derive_entropy_certificate(cfg))


def test_certificate_rejects_anchorless_polymer():
    c = coll(
        mono("cap1", ["a*"], family="cap"),
        mono("mid", ["a"], family="comp"),
        mono("stray", ["d"], family="end"),
    )
    cfg = Configuration.make(c, [((0, 0), (1, 0))])
    assert cfg.is_saturated()
    with pytest.raises(BadAnchor):
        check_entropy_certificate(cfg, EntropyCertificate({0: 0, 2: 2}, 1))
    with pytest.raises(BadAnchor):
        derive_entropy_certificate(cfg)


def test_certificate_rejects_bad_assignments():
    c = anchored_collection()
    cfg = Configuration.make(c, [((0, 0), (1, 0)), ((2, 0), (3, 0))])
    with pytest.raises(BadAnchor):  # claimed count wrong
        check_entropy_certificate(cfg, EntropyCertificate({0: 0, 2: 2}, 3))
    with pytest.raises(BadAnchor):  # missing polymer key
        check_entropy_certificate(cfg, EntropyCertificate({0: 0}, 2))
    with pytest.raises(BadAnchor):  # anchor outside its polymer
        check_entropy_certificate(cfg, EntropyCertificate({0: 0, 2: 0}, 2))
    with pytest.raises(BadAnchor):  # anchor of a non-anchor family
        check_entropy_certificate(cfg, EntropyCertificate({0: 1, 2: 2}, 2))
    with pytest.raises(BadAnchor):  # unknown polymer key
        check_entropy_certificate(cfg, EntropyCertificate({0: 0, 2: 2, 9: 9}, 2))


def test_certificate_requires_valid_configuration():
    c = anchored_collection()
    bad = Configuration.make(c, [((0, 0), (3, 0))])  # a* vs b: not complements
    with pytest.raises(ValueError):
        check_entropy_certificate(bad, EntropyCertificate({}, 0))
