"""Exhaustive and branch-and-bound search for stable configurations.

A configuration is *stable* when it is saturated (reaches the
collection's maximum bond count) and, among saturated configurations,
has the maximum number of polymers.  Configurations are counted up to
permutation of same-type monomer instances; equal domains within one
monomer are physically interchangeable, so bond sets are compared as
multisets of (instance, domain) pairings rather than raw slot pairs.

`naive_enumerate_stable` walks every matching with no pruning and is
the frozen oracle; `enumerate_stable_configurations` is the pruned
branch-and-bound engine cross-checked against it.  Both are
deterministic and single-threaded.  Budgets are enforced via
`SolveLimits` and overruns always raise `BudgetExceeded`.

Entropy certificates witness stability of compiled systems: every
polymer of a saturated configuration names a distinct anchor monomer
drawn from the seed or cap families, which pins the polymer count to
the seed+cap instance total.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from itertools import permutations, product
from typing import Optional

from .core import (
    Configuration,
    MonomerCollection,
    Site,
    validate_configuration,
)
from .errors import (
    BadAnchor,
    BudgetExceeded,
    EmptyCollection,
    EntropyBelowBound,
    NotSaturated,
)

ANCHOR_FAMILIES = ("seed", "cap")


@dataclass(frozen=True)
class SolveLimits:
    """Budgets for the search engines; exceeding any raises BudgetExceeded."""

    max_monomers: int = 20
    max_branch_nodes: int = 2_000_000
    time_budget_s: float = 60.0


DEFAULT_LIMITS = SolveLimits()


class _Budget:
    def __init__(self, limits: SolveLimits, what: str) -> None:
        self.limits = limits
        self.what = what
        self.nodes = 0
        self.t0 = time.monotonic()

    def tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.limits.max_branch_nodes:
            raise BudgetExceeded(
                f"{self.what}: exceeded {self.limits.max_branch_nodes} search nodes"
            )
        if self.nodes % 4096 == 0:
            if time.monotonic() - self.t0 > self.limits.time_budget_s:
                raise BudgetExceeded(
                    f"{self.what}: exceeded {self.limits.time_budget_s}s time budget"
                )


def _guard(collection: MonomerCollection, limits: SolveLimits, what: str) -> None:
    if collection.total == 0:
        raise EmptyCollection(f"{what}: empty collection")
    if collection.total > limits.max_monomers:
        raise BudgetExceeded(
            f"{what}: {collection.total} monomers exceeds limit "
            f"{limits.max_monomers}"
        )


def _sites_by_name(collection: MonomerCollection):
    """(plain sites in canonical order, star sites grouped per name)."""
    plain: list[tuple[Site, tuple]] = []
    stars: dict[tuple, list[Site]] = {}
    for iid, t in collection.instances():
        for slot, d in enumerate(t.domains):
            if d.star:
                stars.setdefault(d.name, []).append((iid, slot))
            else:
                plain.append(((iid, slot), d.name))
    return plain, stars


def _slot_collapsed_bonds(config: Configuration):
    """Bonds as a sorted multiset of ((iid, domain token)) pairings."""
    coll = config.collection
    pairs = []
    for (i, s), (j, u) in config.bonds:
        a = (i, coll.instance_type(i).domains[s].token())
        b = (j, coll.instance_type(j).domains[u].token())
        pairs.append(tuple(sorted((a, b))))
    return sorted(pairs)


def _content_groups(collection: MonomerCollection) -> list[list[int]]:
    """Instance-id groups free to permute when comparing configurations.

    Types are multisets of domains, so instances of differently-named
    types with identical domain content are interchangeable and must
    permute jointly, not merely within each name.
    """
    groups: dict[tuple, list[int]] = {}
    for t in collection.types:
        sig = tuple(d.token() for d in t.domains)
        groups.setdefault(sig, []).extend(collection.instances_of(t.name))
    return [groups[k] for k in sorted(groups)]


def canonical_class_key(config: Configuration, perm_budget: int = 2_000_000):
    """Least slot-collapsed bond serialization over content-preserving
    instance permutations."""
    ranges = _content_groups(config.collection)
    total = 1
    for r in ranges:
        total *= math.factorial(len(r))
        if total > perm_budget:
            raise BudgetExceeded(
                f"canonicalization over {total}+ permutations exceeds budget"
            )
    base = _slot_collapsed_bonds(config)
    best = None
    for assignment in product(*(permutations(r) for r in ranges)):
        remap: dict[int, int] = {}
        for r, perm in zip(ranges, assignment):
            for src, dst in zip(r, perm):
                remap[src] = dst
        key = tuple(
            sorted(
                tuple(sorted(((remap[i], dt), (remap[j], du))))
                for (i, dt), (j, du) in base
            )
        )
        if best is None or key < best:
            best = key
    return best


def equivalent_configurations(
    a: Configuration, b: Configuration, perm_budget: int = 2_000_000
) -> bool:
    """Same stable class?  Searches content-preserving permutations
    directly (independent of the canonical-key minimization used for
    dedup)."""
    if a.collection != b.collection:
        return False
    if a.enthalpy != b.enthalpy:
        return False
    if sorted(map(len, a.polymers)) != sorted(map(len, b.polymers)):
        return False
    ranges = _content_groups(a.collection)
    total = 1
    for r in ranges:
        total *= math.factorial(len(r))
        if total > perm_budget:
            raise BudgetExceeded(
                f"equivalence search over {total}+ permutations exceeds budget"
            )
    target = _slot_collapsed_bonds(a)
    base = _slot_collapsed_bonds(b)
    for assignment in product(*(permutations(r) for r in ranges)):
        remap: dict[int, int] = {}
        for r, perm in zip(ranges, assignment):
            for src, dst in zip(r, perm):
                remap[src] = dst
        mapped = sorted(
            tuple(sorted(((remap[i], dt), (remap[j], du))))
            for (i, dt), (j, du) in base
        )
        if mapped == target:
            return True
    return False


def _dedup_classes(configs: list[Configuration]) -> list[Configuration]:
    seen: dict = {}
    for cfg in configs:
        key = canonical_class_key(cfg)
        if key not in seen:
            seen[key] = cfg
    return [seen[k] for k in sorted(seen)]


# ------------------------------------------------------------------ naive


def naive_enumerate_stable(
    collection: MonomerCollection, limits: Optional[SolveLimits] = None
) -> list[Configuration]:
    """Enumerate every matching, keep saturated ones, keep maximum-entropy
    ones, and return one representative per class.  No pruning at all —
    this is the oracle the branch-and-bound engine is checked against."""
    limits = limits or DEFAULT_LIMITS
    _guard(collection, limits, "naive enumeration")
    budget = _Budget(limits, "naive enumeration")
    plain, star_groups = _sites_by_name(collection)
    star_sites: list[tuple[Site, tuple]] = [
        (site, name) for name, sites in sorted(star_groups.items()) for site in sites
    ]
    free = [True] * len(star_sites)
    bonds: list[tuple[Site, Site]] = []
    saturated: list[Configuration] = []

    def walk(k: int) -> None:
        budget.tick()
        if k == len(plain):
            cfg = Configuration.make(collection, bonds)
            if cfg.is_saturated():
                saturated.append(cfg)
            return
        site, name = plain[k]
        walk(k + 1)  # leave unbound
        for idx, (ssite, sname) in enumerate(star_sites):
            if free[idx] and sname == name:
                free[idx] = False
                bonds.append((site, ssite))
                walk(k + 1)
                bonds.pop()
                free[idx] = True

    walk(0)
    best = max(c.entropy for c in saturated)
    return _dedup_classes([c for c in saturated if c.entropy == best])


# ------------------------------------------------------------- pruned b&b


class _RollbackDSU:
    def __init__(self, n: int) -> None:
        self.parent = list(range(n))
        self.rank = [0] * n
        self.count = n
        self.trail: list = []

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            self.trail.append(None)
            return
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.trail.append((rb, ra, self.rank[ra]))
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        self.count -= 1

    def rollback(self) -> None:
        op = self.trail.pop()
        if op is None:
            return
        rb, ra, old_rank = op
        self.parent[rb] = rb
        self.rank[ra] = old_rank
        self.count += 1


def enumerate_stable_configurations(
    collection: MonomerCollection, limits: Optional[SolveLimits] = None
) -> list[Configuration]:
    """Branch-and-bound enumeration of all stable classes.

    Branches per plain site (leave unbound within the per-name slack, or
    bind a free complementary star).  Prunes branches that cannot reach
    saturation (per-name capacity) or cannot match the best polymer
    count found so far (bonds only ever merge polymers).  Interchangeable
    choices — untouched instances of one type, equal free slots of one
    instance — are branched once.
    """
    limits = limits or DEFAULT_LIMITS
    _guard(collection, limits, "stable-configuration search")
    budget = _Budget(limits, "stable-configuration search")
    plain, star_groups = _sites_by_name(collection)

    names = sorted(star_groups.keys() | {name for _, name in plain})
    p_total = {n: 0 for n in names}
    for _, name in plain:
        p_total[name] += 1
    s_total = {n: len(star_groups.get(n, [])) for n in names}
    target = {n: min(p_total[n], s_total[n]) for n in names}
    slack = {n: p_total[n] - target[n] for n in names}

    rem_plain = dict(p_total)
    free_star = dict(s_total)
    bound = {n: 0 for n in names}
    unbound_used = {n: 0 for n in names}
    star_free = {
        name: [True] * len(sites) for name, sites in star_groups.items()
    }
    touched = [0] * collection.total
    dsu = _RollbackDSU(collection.total)
    bonds: list[tuple[Site, Site]] = []
    found: list[tuple[int, Configuration]] = []
    best_s = -1

    def feasible(n) -> bool:
        return bound[n] + min(rem_plain[n], free_star[n]) >= target[n]

    def walk(k: int) -> None:
        nonlocal best_s
        budget.tick()
        if dsu.count < best_s:
            return
        if k == len(plain):
            cfg = Configuration.make(collection, bonds)
            s = dsu.count
            if s > best_s:
                best_s = s
            found.append((s, cfg))
            return
        (site, name) = plain[k]
        iid = site[0]

        # choice: leave this plain site unbound (within the name's slack)
        if unbound_used[name] + 1 <= slack[name]:
            unbound_used[name] += 1
            rem_plain[name] -= 1
            if feasible(name):
                walk(k + 1)
            rem_plain[name] += 1
            unbound_used[name] -= 1

        # choice: bind to a free complementary star site
        group = star_groups.get(name, [])
        flags = star_free.get(name, [])
        seen_choice = set()
        for idx, ssite in enumerate(group):
            if not flags[idx]:
                continue
            sid = ssite[0]
            # untouched instances of one type are interchangeable, except
            # the plain site's own instance (a self-bond is structurally
            # different from a cross-bond)
            fresh = touched[sid] == 0 and sid != iid
            choice_key = (
                ("fresh", collection.instance_type(sid).name) if fresh else sid
            )
            if choice_key in seen_choice:
                continue
            seen_choice.add(choice_key)
            flags[idx] = False
            free_star[name] -= 1
            rem_plain[name] -= 1
            bound[name] += 1
            touched[iid] += 1
            touched[sid] += 1
            dsu.union(iid, sid)
            bonds.append((site, ssite))
            if feasible(name):
                walk(k + 1)
            bonds.pop()
            dsu.rollback()
            touched[sid] -= 1
            touched[iid] -= 1
            bound[name] -= 1
            rem_plain[name] += 1
            free_star[name] += 1
            flags[idx] = True

    if all(feasible(n) for n in names):
        walk(0)
    keep = [cfg for s, cfg in found if s == best_s]
    return _dedup_classes(keep)


def is_stable(
    config: Configuration, limits: Optional[SolveLimits] = None
) -> bool:
    """Saturated and of maximum entropy among saturated configurations."""
    problems = validate_configuration(config)
    if problems:
        raise ValueError("invalid configuration: " + "; ".join(problems))
    if not config.is_saturated():
        return False
    best = enumerate_stable_configurations(config.collection, limits)
    return config.entropy == best[0].entropy


# ------------------------------------------------------------ certificates


@dataclass
class EntropyCertificate:
    """Per-polymer anchors (keyed by least member id) plus the claimed
    polymer count; anchors must be seed- or cap-family members."""

    anchor_assignment: dict[int, int]
    claimed_entropy: int


def derive_entropy_certificate(config: Configuration) -> EntropyCertificate:
    """Pick the least seed/cap member of each polymer as its anchor."""
    anchors: dict[int, int] = {}
    coll = config.collection
    for poly in config.polymers:
        anchor = next(
            (
                iid
                for iid in poly
                if coll.instance_type(iid).family in ANCHOR_FAMILIES
            ),
            None,
        )
        if anchor is None:
            raise BadAnchor(f"polymer {poly} has no seed or cap member")
        anchors[poly[0]] = anchor
    return EntropyCertificate(anchors, config.entropy)


def check_entropy_certificate(
    config: Configuration, certificate: EntropyCertificate
) -> bool:
    """Verify a stability witness for a compiled system.

    Requires: the configuration is saturated; its entropy equals the
    claimed entropy, which equals the collection's seed+cap instance
    count; and every polymer contains the distinct seed/cap anchor the
    certificate assigns to it.  Raises NotSaturated, EntropyBelowBound
    (entropy below the anchor bound) or BadAnchor; returns True.
    """
    problems = validate_configuration(config)
    if problems:
        raise ValueError("invalid configuration: " + "; ".join(problems))
    if not config.is_saturated():
        raise NotSaturated(
            f"enthalpy {config.enthalpy} < maximum "
            f"{config.collection.max_bond_count()}"
        )
    coll = config.collection
    anchor_total = sum(
        count for t, count in coll.entries if t.family in ANCHOR_FAMILIES
    )
    actual = config.entropy
    if actual < anchor_total:
        raise EntropyBelowBound(
            f"entropy {actual} below seed+cap anchor count {anchor_total}"
        )
    if actual > anchor_total:
        raise BadAnchor(
            f"entropy {actual} exceeds anchors {anchor_total}: "
            "some polymer has no seed/cap anchor"
        )
    if certificate.claimed_entropy != anchor_total:
        raise BadAnchor(
            f"claimed entropy {certificate.claimed_entropy} != "
            f"seed+cap anchor count {anchor_total}"
        )
    polymers = config.polymers
    keys = {poly[0] for poly in polymers}
    extra = set(certificate.anchor_assignment) - keys
    if extra:
        raise BadAnchor(f"certificate names unknown polymers {sorted(extra)}")
    for poly in polymers:
        anchor = certificate.anchor_assignment.get(poly[0])
        if anchor is None:
            raise BadAnchor(f"polymer {poly} has no assigned anchor")
        if anchor not in poly:
            raise BadAnchor(f"anchor {anchor} is not a member of polymer {poly}")
        family = coll.instance_type(anchor).family
        if family not in ANCHOR_FAMILIES:
            raise BadAnchor(
                f"anchor {anchor} has family {family!r}, need seed or cap"
            )
    return True
