"""Bond-level model: domains, monomer types, collections, configurations.

A domain is a named binding site; a plain domain ``x`` binds only the
starred complement ``x*``.  Domain identity is the triple (label,
orientation tag, grid location); orientation (``h``/``v``) and location
are optional decorations used by the grid-shaped systems and are part of
the identity.  A monomer type is a named multiset of domains; a
collection is a multiset of monomer types with positive counts.  A
configuration over a collection is a set of pairwise bonds between
complementary domain instances (a monomer may bind itself on two
distinct slots).  Its enthalpy is the bond count; its entropy is the
number of connected components (polymers; free monomers count).  A
configuration is saturated when enthalpy reaches the collection's
maximum bond count, which is the sum over domain identities of
min(#plain, #starred).

Text formats: a domain token is ``label['~'orient['(x,y)']]['*']``; a
collection dump has one line per monomer instance in canonical order
(``name [family]: token,token,...``, family omitted when empty); a
configuration dump appends bond lines ``(#i.slot)-(#j.slot)`` with
instance ids equal to instance line order.
"""

from __future__ import annotations

import re
from bisect import bisect_right
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Optional

from .errors import EmptyCollection, FormatError

# Monomer-type families with dedicated roles in the compiled systems.
FAMILIES = ("", "seed", "comp", "end", "cap")

ORIENTS = ("", "h", "v")

# label: anything except separators/decorations/whitespace.
_TOKEN_RE = re.compile(
    r"^(?P<label>[^~*,:()\s]+)"
    r"(?:~(?P<orient>[hv])(?:\((?P<x>-?\d+),(?P<y>-?\d+)\))?)?"
    r"(?P<star>\*)?$"
)
_BOND_RE = re.compile(r"^\(#(\d+)\.(\d+)\)-\(#(\d+)\.(\d+)\)$")

Site = tuple[int, int]  # (instance id, slot index)
Bond = tuple[Site, Site]


@dataclass(frozen=True, order=True)
class Domain:
    """One binding site: label + optional orientation/location + star flag."""

    label: str
    orient: str = ""
    loc: Optional[tuple[int, int]] = None
    star: bool = False

    def __post_init__(self) -> None:
        if not self.label or re.search(r"[~*,:()\s]", self.label):
            raise ValueError(f"bad domain label {self.label!r}")
        if self.orient not in ORIENTS:
            raise ValueError(f"bad orientation {self.orient!r}")
        if self.loc is not None and not self.orient:
            raise ValueError("location requires an orientation")

    # Identity used for complement matching (everything but the star).
    @property
    def name(self) -> tuple[str, str, Optional[tuple[int, int]]]:
        return (self.label, self.orient, self.loc)

    def complement(self) -> "Domain":
        return Domain(self.label, self.orient, self.loc, not self.star)

    def token(self) -> str:
        text = self.label
        if self.orient:
            text += f"~{self.orient}"
            if self.loc is not None:
                text += f"({self.loc[0]},{self.loc[1]})"
        if self.star:
            text += "*"
        return text

    def __str__(self) -> str:  # pragma: no cover - convenience
        return self.token()


def parse_domain(text: str) -> Domain:
    """Parse one domain token; raises FormatError on bad grammar."""
    m = _TOKEN_RE.match(text.strip())
    if not m:
        raise FormatError(f"bad domain token {text!r}")
    loc = None
    if m["x"] is not None:
        loc = (int(m["x"]), int(m["y"]))
    return Domain(m["label"], m["orient"] or "", loc, m["star"] is not None)


def _domain_sort_key(d: Domain):
    return (d.label, d.orient, d.loc is not None, d.loc or (0, 0), d.star)


@dataclass(frozen=True)
class MonomerType:
    """A named multiset of domains; slots are indices into the sorted tuple."""

    name: str
    domains: tuple[Domain, ...]
    family: str = ""

    def __post_init__(self) -> None:
        if not self.name or re.search(r"[:\s]", self.name):
            raise ValueError(f"bad monomer-type name {self.name!r}")
        if self.name[0] in "#(":
            raise ValueError(f"monomer-type name may not start with {self.name[0]!r}")
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if not self.domains:
            raise ValueError(f"monomer type {self.name!r} has no domains")
        ordered = tuple(sorted(self.domains, key=_domain_sort_key))
        object.__setattr__(self, "domains", ordered)

    def slots_of(self, domain: Domain) -> tuple[int, ...]:
        return tuple(i for i, d in enumerate(self.domains) if d == domain)

    def inputs(self) -> tuple[Domain, ...]:
        """The plain (unstarred) domains — what this monomer reads."""
        return tuple(d for d in self.domains if not d.star)

    def outputs(self) -> tuple[Domain, ...]:
        """The starred domains — what this monomer offers."""
        return tuple(d for d in self.domains if d.star)

    def dump_line(self) -> str:
        head = self.name if not self.family else f"{self.name} [{self.family}]"
        return f"{head}: " + ",".join(d.token() for d in self.domains)


def _split_tokens(text: str) -> list[str]:
    """Split a token list on commas not nested in a location group."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth = max(0, depth - 1)
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts if p.strip()]


def parse_monomer_line(line: str) -> MonomerType:
    """Parse one instance line ``name [family]: token,token,...``."""
    head, sep, body = line.partition(":")
    if not sep:
        raise FormatError(f"missing ':' in monomer line {line!r}")
    pieces = head.split()
    if len(pieces) == 1:
        name, family = pieces[0], ""
    elif len(pieces) == 2 and pieces[1].startswith("[") and pieces[1].endswith("]"):
        name, family = pieces[0], pieces[1][1:-1]
    else:
        raise FormatError(f"bad monomer head {head!r}")
    tokens = _split_tokens(body)
    if not tokens:
        raise FormatError(f"monomer line {line!r} lists no domains")
    try:
        mtype = MonomerType(name, tuple(parse_domain(t) for t in tokens), family)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc
    listed = ",".join(tokens)
    canonical = ",".join(d.token() for d in mtype.domains)
    if listed != canonical:
        raise FormatError(
            f"domains of {name!r} must be listed in canonical order "
            f"({canonical!r}), got {listed!r}"
        )
    return mtype


@dataclass(frozen=True)
class MonomerCollection:
    """Multiset of monomer types; instances get canonical ids 0..total-1.

    Entries are sorted by type name (names must be unique); instance ids
    enumerate types in that order, copies of a type consecutively.
    """

    entries: tuple[tuple[MonomerType, int], ...]

    def __post_init__(self) -> None:
        ordered = tuple(sorted(self.entries, key=lambda e: e[0].name))
        names = [t.name for t, _ in ordered]
        if len(set(names)) != len(names):
            dup = sorted({n for n in names if names.count(n) > 1})
            raise ValueError(f"duplicate monomer-type names {dup}")
        for t, count in ordered:
            if count <= 0:
                raise ValueError(f"non-positive count {count} for {t.name!r}")
        object.__setattr__(self, "entries", ordered)

    @staticmethod
    def from_pairs(pairs: Iterable[tuple[MonomerType, int]]) -> "MonomerCollection":
        merged: dict[str, tuple[MonomerType, int]] = {}
        for mtype, count in pairs:
            if mtype.name in merged:
                prev, prev_count = merged[mtype.name]
                if prev != mtype:
                    raise ValueError(
                        f"conflicting definitions for monomer type {mtype.name!r}"
                    )
                merged[mtype.name] = (prev, prev_count + count)
            else:
                merged[mtype.name] = (mtype, count)
        return MonomerCollection(tuple(merged.values()))

    @property
    def types(self) -> tuple[MonomerType, ...]:
        return tuple(t for t, _ in self.entries)

    @cached_property
    def total(self) -> int:
        return sum(c for _, c in self.entries)

    @cached_property
    def _starts(self) -> tuple[int, ...]:
        starts, acc = [], 0
        for _, count in self.entries:
            starts.append(acc)
            acc += count
        return tuple(starts)

    def count_of(self, name: str) -> int:
        for t, c in self.entries:
            if t.name == name:
                return c
        return 0

    def type_by_name(self, name: str) -> MonomerType:
        for t, _ in self.entries:
            if t.name == name:
                return t
        raise KeyError(name)

    def instance_type(self, iid: int) -> MonomerType:
        if not 0 <= iid < self.total:
            raise IndexError(f"instance id {iid} out of range")
        k = bisect_right(self._starts, iid) - 1
        return self.entries[k][0]

    def instances_of(self, name: str) -> range:
        for k, (t, c) in enumerate(self.entries):
            if t.name == name:
                start = self._starts[k]
                return range(start, start + c)
        return range(0)

    def instance_ids(self) -> range:
        return range(self.total)

    def instances(self) -> Iterator[tuple[int, MonomerType]]:
        iid = 0
        for t, c in self.entries:
            for _ in range(c):
                yield iid, t
                iid += 1

    def max_bond_count(self) -> int:
        """Sum over domain identities of min(#plain, #starred)."""
        plain: dict[tuple, int] = {}
        star: dict[tuple, int] = {}
        for t, count in self.entries:
            for d in t.domains:
                bucket = star if d.star else plain
                bucket[d.name] = bucket.get(d.name, 0) + count
        return sum(min(n, star.get(key, 0)) for key, n in plain.items())


def normalize_bond(a: Site, b: Site) -> Bond:
    return (a, b) if a <= b else (b, a)


@dataclass(frozen=True)
class Configuration:
    """A set of bonds over a collection's domain instances.

    The constructor only normalizes; semantic checking (site ranges,
    complementarity, single use per site) is `validate_configuration`,
    which reports violations as data instead of raising.
    """

    collection: MonomerCollection
    bonds: frozenset[Bond] = field(default_factory=frozenset)

    @staticmethod
    def make(
        collection: MonomerCollection, bonds: Iterable[tuple[Site, Site]]
    ) -> "Configuration":
        return Configuration(
            collection, frozenset(normalize_bond(a, b) for a, b in bonds)
        )

    @property
    def enthalpy(self) -> int:
        return len(self.bonds)

    @cached_property
    def polymers(self) -> tuple[tuple[int, ...], ...]:
        """Connected components over instances, sorted by least member."""
        total = self.collection.total
        parent = list(range(total))

        def find(i: int) -> int:
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for (i, _), (j, _) in self.bonds:
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)
        groups: dict[int, list[int]] = {}
        for iid in range(total):
            groups.setdefault(find(iid), []).append(iid)
        return tuple(tuple(g) for _, g in sorted(groups.items()))

    @property
    def entropy(self) -> int:
        if self.collection.total == 0:
            raise EmptyCollection("entropy of an empty collection is undefined")
        return len(self.polymers)

    def is_saturated(self) -> bool:
        return self.enthalpy == self.collection.max_bond_count()

    @cached_property
    def partner(self) -> dict[Site, Site]:
        pairs: dict[Site, Site] = {}
        for a, b in self.bonds:
            pairs[a] = b
            pairs[b] = a
        return pairs

    def domain_at(self, site: Site) -> Domain:
        return self.collection.instance_type(site[0]).domains[site[1]]

    def dump(self) -> str:
        lines = [t.dump_line() for _, t in self.collection.instances()]
        for (i, s), (j, u) in sorted(self.bonds):
            lines.append(f"(#{i}.{s})-(#{j}.{u})")
        return "\n".join(lines) + "\n"


def validate_configuration(config: Configuration) -> list[str]:
    """Return all violations (empty list = well formed)."""
    problems: list[str] = []
    coll = config.collection
    seen: dict[Site, Bond] = {}
    for bond in sorted(config.bonds):
        a, b = bond
        if bond != normalize_bond(a, b):
            problems.append(f"bond {bond} is not normalized")
        if a == b:
            problems.append(f"bond {bond} joins a slot to itself")
            continue
        bad_site = False
        for site in (a, b):
            iid, slot = site
            if not 0 <= iid < coll.total:
                problems.append(f"bond {bond}: instance #{iid} does not exist")
                bad_site = True
                continue
            if not 0 <= slot < len(coll.instance_type(iid).domains):
                problems.append(f"bond {bond}: #{iid} has no slot {slot}")
                bad_site = True
        if bad_site:
            continue
        for site in (a, b):
            if site in seen and seen[site] != bond:
                problems.append(f"site (#{site[0]}.{site[1]}) used by two bonds")
            seen[site] = bond
        da, db = config.domain_at(a), config.domain_at(b)
        if da.name != db.name or da.star == db.star:
            problems.append(
                f"bond {bond}: {da.token()} and {db.token()} are not complements"
            )
    return problems


def dump_collection(collection: MonomerCollection) -> str:
    """One line per instance, canonical order; '#' lines are comments."""
    return "\n".join(t.dump_line() for _, t in collection.instances()) + "\n"


def _parse_lines(text: str) -> tuple[MonomerCollection, list[Bond], bool]:
    instance_types: list[MonomerType] = []
    bonds: list[Bond] = []
    saw_bonds = False
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = _BOND_RE.match(line)
        if m:
            saw_bonds = True
            i, s, j, u = map(int, m.groups())
            bonds.append(normalize_bond((i, s), (j, u)))
            continue
        if saw_bonds:
            raise FormatError("monomer line after bond lines")
        instance_types.append(parse_monomer_line(line))

    pairs: list[tuple[MonomerType, int]] = []
    for t in instance_types:
        if pairs and pairs[-1][0] == t:
            pairs[-1] = (t, pairs[-1][1] + 1)
        else:
            pairs.append((t, 1))
    names = [t.name for t, _ in pairs]
    if names != sorted(names) or len(set(names)) != len(names):
        raise FormatError(
            "instances must appear in canonical order "
            "(sorted by type name, copies of a type consecutive)"
        )
    collection = MonomerCollection(tuple(pairs))
    return collection, bonds, saw_bonds


def parse_collection(text: str) -> MonomerCollection:
    collection, _, saw_bonds = _parse_lines(text)
    if saw_bonds:
        raise FormatError("collection dump may not contain bond lines")
    return collection


def parse_configuration(text: str) -> Configuration:
    collection, bonds, _ = _parse_lines(text)
    return Configuration.make(collection, bonds)
