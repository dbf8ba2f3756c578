"""Compile feed-forward Boolean circuits into monomer collections.

A circuit is a DAG of named input nodes, gate nodes carrying arbitrary
truth tables, and output nodes that each read one upstream port.  Every
gate output port feeds exactly one downstream port, so a wire is the
pair (destination node, input slot) and fan-out is expressed by giving
a gate several output ports.  ``eval_circuit`` is the plain functional
semantics and serves as the decoding oracle everywhere else.

``compile_circuit`` turns a circuit plus a set of requested input words
into monomer families:

* one seed per requested word — starred value domains for every wire
  leaving an input node, plus one plain helper domain per output node;
* one gate monomer per (gate, input pattern) — plain domains spelling
  the pattern on the gate's in-wires, starred domains spelling the
  table row's bits on its out-wires (2^fanin monomers per gate);
* two end monomers per output node (one per bit), each pairing a plain
  value domain on the output's wire with the starred helper domain;
* one cap per gate/end monomer type: the starred complements of its
  plain domains.

Value domains are labelled ``bit@src.port>dst.slot`` so a label pins
both the wire and the bit travelling on it; saturation then forces the
seed's exposed codomains to recruit exactly the monomers that spell out
the circuit's evaluation, column by column up the DAG, while every
unused monomer pairs off with its cap.  Unlike the machine-simulation
systems, the whole configuration class is *not* unique: a monomer with
a single plain domain may migrate entropy-neutrally onto a dangling
codomain elsewhere.  The verifier therefore claims (and checks) the
content of the seed's polymer only.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional

from .core import Configuration, Domain, MonomerCollection, MonomerType
from .errors import (
    ArityMismatch,
    FormatError,
    InvalidCircuit,
    SimulationViolated,
    StructureUnverifiable,
)
from .solver import (
    EntropyCertificate,
    check_entropy_certificate,
    derive_entropy_certificate,
)
from .tmcompile import (
    CountsPolicy,
    _assemble_canonical,
    _cap_map,
    _check_anchor_sieve,
    _check_counts,
    _check_star_excess,
    _family_split,
)

_NODE_RE = re.compile(r"^[A-Za-z0-9_]+$")


class PortRef(NamedTuple):
    """A reference to one output port of an input or gate node."""

    node: str
    port: int


class OutputSpec(NamedTuple):
    """An output node: a name and the single port it reads."""

    name: str
    src: PortRef


class Edge(NamedTuple):
    """One wire: source port to (destination node, input slot)."""

    src: str
    port: int
    dst: str
    slot: int


@dataclass(frozen=True)
class Gate:
    """A gate node: ordered input references plus a complete truth table.

    The table is a tuple of (pattern, out) rows over {0,1}; every
    pattern of length fanin must appear exactly once and all out rows
    must share one length (the fanout).
    """

    name: str
    in_refs: tuple[PortRef, ...]
    table: tuple[tuple[str, str], ...]

    @property
    def fanin(self) -> int:
        return len(self.in_refs)

    @property
    def fanout(self) -> int:
        return len(self.table[0][1])

    def table_map(self) -> dict[str, str]:
        return dict(self.table)


@dataclass(frozen=True)
class CircuitSpec:
    """A validated feed-forward circuit.

    inputs: ordered input node names (word positions).
    gates: gate nodes, each port feeding exactly one downstream slot.
    outputs: ordered output nodes (result positions), in-degree one.
    """

    inputs: tuple[str, ...]
    gates: tuple[Gate, ...]
    outputs: tuple[OutputSpec, ...]

    def __post_init__(self) -> None:
        names = list(self.inputs) + [g.name for g in self.gates]
        names += [o.name for o in self.outputs]
        for name in names:
            if not _NODE_RE.match(name):
                raise InvalidCircuit(f"bad node name {name!r}")
        if len(set(names)) != len(names):
            dupe = next(n for n in names if names.count(n) > 1)
            raise InvalidCircuit(f"duplicate node name {dupe!r}")
        fanout = {g.name: self._check_table(g) for g in self.gates}
        refs: list[PortRef] = [r for g in self.gates for r in g.in_refs]
        refs += [o.src for o in self.outputs]
        for ref in refs:
            if ref.node in self.inputs:
                limit = 1
            elif ref.node in fanout:
                limit = fanout[ref.node]
            else:
                raise InvalidCircuit(f"reference to unknown node {ref.node!r}")
            if not 0 <= ref.port < limit:
                raise InvalidCircuit(f"{ref.node} has no port {ref.port}")
        # every gate port drives exactly one wire; every input drives >= 1
        uses = Counter(refs)
        for g in self.gates:
            for j in range(fanout[g.name]):
                if uses[PortRef(g.name, j)] != 1:
                    raise InvalidCircuit(
                        f"port {g.name}.{j} feeds {uses[PortRef(g.name, j)]} "
                        "wires, need exactly 1"
                    )
        for x in self.inputs:
            if uses[PortRef(x, 0)] < 1:
                raise InvalidCircuit(f"input {x!r} is never read")
        self.topo()  # raises on cycles

    def _check_table(self, g: Gate) -> int:
        if not g.table:
            raise InvalidCircuit(f"gate {g.name!r} has an empty table")
        outs = {out for _, out in g.table}
        if len({len(out) for out in outs}) != 1 or "" in outs:
            raise InvalidCircuit(f"gate {g.name!r}: output rows must share a length")
        want = {format(i, f"0{g.fanin}b") if g.fanin else "" for i in range(2**g.fanin)}
        got = [pat for pat, _ in g.table]
        if set(got) != want or len(got) != len(want):
            raise InvalidCircuit(
                f"gate {g.name!r}: table must list each {g.fanin}-bit "
                "pattern exactly once"
            )
        if any(set(pat + out) - set("01") for pat, out in g.table):
            raise InvalidCircuit(f"gate {g.name!r}: table entries must be over 0/1")
        return g.fanout

    def gate(self, name: str) -> Gate:
        for g in self.gates:
            if g.name == name:
                return g
        raise KeyError(name)

    def topo(self) -> list[str]:
        """Gate names in dependency order (inputs need no ordering)."""
        gate_names = {g.name for g in self.gates}
        pending = {
            g.name: {r.node for r in g.in_refs if r.node in gate_names}
            for g in self.gates
        }
        order: list[str] = []
        while pending:
            ready = [n for g in self.gates if (n := g.name) in pending and not pending[n]]
            if not ready:
                raise InvalidCircuit(f"cycle through gates {sorted(pending)}")
            for name in ready:
                del pending[name]
                order.append(name)
                for deps in pending.values():
                    deps.discard(name)
        return order

    def edges(self) -> list[Edge]:
        """Every wire, gates first (declaration order, slot order)."""
        out: list[Edge] = []
        for g in self.gates:
            out += [Edge(r.node, r.port, g.name, k) for k, r in enumerate(g.in_refs)]
        out += [Edge(o.src.node, o.src.port, o.name, 0) for o in self.outputs]
        return out


def _port_values(c: CircuitSpec, word: str) -> dict[PortRef, str]:
    if len(word) != len(c.inputs) or set(word) - set("01"):
        raise ArityMismatch(
            f"word {word!r} does not fit {len(c.inputs)} binary inputs"
        )
    vals = {PortRef(x, 0): bit for x, bit in zip(c.inputs, word)}
    for name in c.topo():
        g = c.gate(name)
        pattern = "".join(vals[r] for r in g.in_refs)
        for j, bit in enumerate(g.table_map()[pattern]):
            vals[PortRef(name, j)] = bit
    return vals


def eval_circuit(c: CircuitSpec, word: str) -> str:
    """Functional semantics: the output word for one input word."""
    vals = _port_values(c, word)
    return "".join(vals[o.src] for o in c.outputs)


def _edge_values(c: CircuitSpec, word: str) -> dict[Edge, str]:
    vals = _port_values(c, word)
    return {e: vals[PortRef(e.src, e.port)] for e in c.edges()}


def _edge_label(bit: str, e: Edge) -> str:
    return f"{bit}@{e.src}.{e.port}>{e.dst}.{e.slot}"


def _helper_label(output: str) -> str:
    return f"g|{output}"


# ---------------------------------------------------------------------------
# text format


def _parse_ref(text: str) -> PortRef:
    node, dot, port = text.partition(".")
    if not dot:
        return PortRef(node, 0)
    if not port.isdigit():
        raise FormatError(f"bad port reference {text!r}")
    return PortRef(node, int(port))


def _dump_ref(ref: PortRef, inputs: tuple[str, ...]) -> str:
    if ref.node in inputs and ref.port == 0:
        return ref.node
    return f"{ref.node}.{ref.port}"


def parse_circuit(text: str) -> CircuitSpec:
    """Parse the line format::

        input a
        gate d in=a,b.0 table=00:0,01:1,10:1,11:0
        output z from=d.0

    Blank lines and ``#`` comments are skipped; ``in=`` may be empty for
    a constant gate and bare references mean port 0.
    """
    inputs: list[str] = []
    gates: list[Gate] = []
    outputs: list[OutputSpec] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        kind, _, rest = line.partition(" ")
        try:
            if kind == "input":
                inputs.append(rest.strip())
            elif kind == "gate":
                name, fields = _parse_fields(rest, ("in", "table"))
                refs = tuple(
                    _parse_ref(tok) for tok in fields["in"].split(",") if tok
                )
                rows = []
                for item in fields["table"].split(","):
                    pat, colon, out = item.partition(":")
                    if not colon:
                        raise FormatError(f"bad table row {item!r}")
                    rows.append((pat, out))
                gates.append(Gate(name, refs, tuple(rows)))
            elif kind == "output":
                name, fields = _parse_fields(rest, ("from",))
                outputs.append(OutputSpec(name, _parse_ref(fields["from"])))
            else:
                raise FormatError(f"unknown directive {kind!r}")
        except FormatError as exc:
            raise FormatError(f"line {lineno}: {exc}") from None
    try:
        return CircuitSpec(tuple(inputs), tuple(gates), tuple(outputs))
    except InvalidCircuit as exc:
        raise FormatError(str(exc)) from None


def _parse_fields(rest: str, keys: tuple[str, ...]) -> tuple[str, dict[str, str]]:
    parts = rest.split()
    if not parts:
        raise FormatError("missing node name")
    name, fields = parts[0], {}
    for part in parts[1:]:
        key, eq, value = part.partition("=")
        if not eq or key not in keys:
            raise FormatError(f"bad field {part!r}")
        fields[key] = value
    missing = [k for k in keys if k not in fields]
    if missing:
        raise FormatError(f"{name}: missing field {missing[0]!r}")
    return name, fields


def dump_circuit(c: CircuitSpec) -> str:
    """Inverse of :func:`parse_circuit` (canonical spacing)."""
    lines = [f"input {x}" for x in c.inputs]
    for g in c.gates:
        refs = ",".join(_dump_ref(r, c.inputs) for r in g.in_refs)
        rows = ",".join(f"{pat}:{out}" for pat, out in g.table)
        lines.append(f"gate {g.name} in={refs} table={rows}")
    lines += [
        f"output {o.name} from={_dump_ref(o.src, c.inputs)}" for o in c.outputs
    ]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# compilation


@dataclass
class CircuitTbn:
    """Compiled families for one circuit and a set of requested words."""

    circuit: CircuitSpec
    seeds: dict[str, MonomerType]
    gate_family: tuple[MonomerType, ...]
    end_family: tuple[MonomerType, ...]
    cap_family: tuple[MonomerType, ...]
    e_input_table: dict[str, str]
    e_output_table: dict[str, tuple[str, str]]

    def seed_for(self, word: str) -> MonomerType:
        return self.seeds[word]

    def all_types(self, word: Optional[str] = None) -> list[MonomerType]:
        seeds = (
            list(self.seeds.values()) if word is None else [self.seed_for(word)]
        )
        return seeds + list(self.gate_family + self.end_family + self.cap_family)

    def canonical_types(self, word: str) -> list[str]:
        """Names of the monomers the seed's polymer recruits, in chase
        order (gates by dependency, then ends by output position)."""
        val = _edge_values(self.circuit, word)
        names = []
        for vname in self.circuit.topo():
            g = self.circuit.gate(vname)
            pattern = "".join(
                val[Edge(r.node, r.port, vname, k)] for k, r in enumerate(g.in_refs)
            )
            names.append(f"gate[{vname}|{pattern}]")
        for o in self.circuit.outputs:
            e = Edge(o.src.node, o.src.port, o.name, 0)
            names.append(f"end[{o.name}={val[e]}]")
        return names

    def collection(self, counts: CountsPolicy, word: str) -> MonomerCollection:
        pairs = [(self.seed_for(word), counts.seed_count)]
        pairs += [
            (t, counts.comp_count) for t in self.gate_family + self.end_family
        ]
        pairs += [(t, counts.cap_count) for t in self.cap_family]
        return MonomerCollection.from_pairs(pairs)


def compile_circuit(
    c: CircuitSpec, inputs: Iterable[str], max_fanin: int = 8
) -> CircuitTbn:
    """Build the monomer families for `c` and the requested input words.

    Gate and end families depend on the circuit only; each requested
    word adds one seed type.  Constant (fan-in 0) gates are rejected:
    their monomers would carry no plain domain, leaving nothing for a
    cap to silence.
    """
    if not c.inputs:
        raise InvalidCircuit("compilation needs at least one circuit input")
    for g in c.gates:
        if g.fanin == 0:
            raise InvalidCircuit(
                f"gate {g.name!r} is constant; fold constants into tables"
            )
        if g.fanin > max_fanin:
            raise InvalidCircuit(
                f"gate {g.name!r} fan-in {g.fanin} exceeds limit {max_fanin}"
            )
    edges = c.edges()
    in_edges = {e: c.inputs.index(e.src) for e in edges if e.src in set(c.inputs)}

    gate_family: list[MonomerType] = []
    for g in c.gates:
        own = [Edge(r.node, r.port, g.name, k) for k, r in enumerate(g.in_refs)]
        out_edges = {e.port: e for e in edges if e.src == g.name}
        for pattern, out in sorted(g.table):
            domains = [Domain(_edge_label(bit, e)) for bit, e in zip(pattern, own)]
            domains += [
                Domain(_edge_label(bit, out_edges[j]), star=True)
                for j, bit in enumerate(out)
            ]
            gate_family.append(
                MonomerType(f"gate[{g.name}|{pattern}]", tuple(domains), "comp")
            )

    end_family: list[MonomerType] = []
    e_output_table: dict[str, tuple[str, str]] = {}
    for o in c.outputs:
        e = Edge(o.src.node, o.src.port, o.name, 0)
        for bit in "01":
            name = f"end[{o.name}={bit}]"
            domains = (
                Domain(_edge_label(bit, e)),
                Domain(_helper_label(o.name), star=True),
            )
            end_family.append(MonomerType(name, domains, "end"))
            e_output_table[name] = (o.name, bit)

    cap_family = [
        MonomerType(
            f"cap[{t.name}]",
            tuple(d.complement() for d in t.inputs()),
            "cap",
        )
        for t in gate_family + end_family
    ]

    seeds: dict[str, MonomerType] = {}
    e_input_table: dict[str, str] = {}
    for word in dict.fromkeys(inputs):
        if len(word) != len(c.inputs) or set(word) - set("01"):
            raise ArityMismatch(
                f"word {word!r} does not fit {len(c.inputs)} binary inputs"
            )
        domains = tuple(
            Domain(_edge_label(word[i], e), star=True) for e, i in in_edges.items()
        ) + tuple(Domain(_helper_label(o.name)) for o in c.outputs)
        name = f"seed[{word}]"
        seeds[word] = MonomerType(name, domains, "seed")
        e_input_table[name] = word
    if not seeds:
        raise InvalidCircuit("no input words requested")

    return CircuitTbn(
        circuit=c,
        seeds=seeds,
        gate_family=tuple(gate_family),
        end_family=tuple(end_family),
        cap_family=tuple(cap_family),
        e_input_table=e_input_table,
        e_output_table=e_output_table,
    )


def circuit_canonical_config(
    cons: CircuitTbn, counts: CountsPolicy, word: str
) -> tuple[Configuration, EntropyCertificate]:
    """The intended stable configuration plus its checked certificate:
    every seed copy recruits the evaluation's monomers, every leftover
    gate/end instance pairs with its cap."""
    coll = cons.collection(counts, word)
    bonds, _ = _assemble_canonical(
        coll, cons.seed_for(word).name, cons.canonical_types(word)
    )
    config = Configuration.make(coll, bonds)
    cert = derive_entropy_certificate(config)
    check_entropy_certificate(config, cert)
    return config, cert


# ---------------------------------------------------------------------------
# decoding


def circuit_e_input(c: CircuitSpec, monomers: Iterable[MonomerType]) -> Optional[str]:
    """Read the input word a seed's codomains spell, or None if the
    monomers are not one coherent seed for `c`."""
    types = set(monomers)
    if len(types) != 1:
        return None
    (seed,) = types
    if seed.family != "seed":
        return None
    labels = Counter(d.label for d in seed.outputs())
    bits: dict[str, str] = {}
    for e in c.edges():
        if e.src not in set(c.inputs):
            continue
        hits = [b for b in "01" if labels.get(_edge_label(b, e))]
        if len(hits) != 1:
            return None
        labels[_edge_label(hits[0], e)] -= 1
        if bits.setdefault(e.src, hits[0]) != hits[0]:
            return None
    if +labels or set(bits) != set(c.inputs):
        return None
    return "".join(bits[x] for x in c.inputs)


def circuit_e_output(c: CircuitSpec, monomers: Iterable[MonomerType]) -> Optional[str]:
    """Read the output word a set of end monomers spells, or None if it
    is not exactly one coherent end per output node of `c`."""
    bits: dict[str, str] = {}
    for t in set(monomers):
        if t.family != "end" or len(t.domains) != 2:
            return None
        stars = [d.label for d in t.outputs()]
        plains = [d.label for d in t.inputs()]
        if len(stars) != 1 or not stars[0].startswith("g|"):
            return None
        node = stars[0][2:]
        if plains[0][:1] not in "01" or node in bits:
            return None
        bits[node] = plains[0][0]
    if set(bits) != {o.name for o in c.outputs}:
        return None
    return "".join(bits[o.name] for o in c.outputs)


# ---------------------------------------------------------------------------
# verification


@dataclass(frozen=True)
class CircuitVerificationReport:
    """Outcome of verify_circuit_simulation: what the seed's polymer
    must contain in any stable configuration, and how it decodes."""

    ok: bool
    mode: str
    seed_copies: int
    decoded_input: str
    decoded_output: str
    checks: tuple[str, ...]


def verify_circuit_simulation(
    coll: MonomerCollection,
    c: CircuitSpec,
    word: str,
    mode: str = "enumerate",
) -> CircuitVerificationReport:
    """Check that `coll` simulates circuit `c` on `word`.

    Premises mirror the machine verifier: family counts, content-matched
    caps for every gate/end type, per-name codomain excess, an anchor
    sieve, a rigid seed shape, and a forced chase up the DAG that must
    recruit exactly one monomer type per gate and output and decode to
    ``eval_circuit(c, word)``.  Monomers that pass the premises but stay
    off the seed polymer are necessarily capped and inert, so only the
    seed polymer's content is claimed.  ``certificate`` mode additionally
    assembles the canonical configuration over `coll` and checks its
    stability witness.  Violations raise SimulationViolated; count-order
    problems raise CountsViolation.
    """
    if mode not in ("enumerate", "certificate"):
        raise ValueError(f"unknown mode {mode!r}")
    expected = eval_circuit(c, word)
    checks = ["counts", "caps", "star-excess", "anchor-sieve", "seed-shape"]
    try:
        fams = _family_split(coll)
        sigma = _check_counts(coll, fams)
        for t in fams["comp"] + fams["end"]:
            if not t.inputs() or not t.outputs():
                raise StructureUnverifiable(
                    f"{t.name} needs plain and starred domains"
                )
        _cap_map(coll)
        _check_star_excess(coll)
        _check_anchor_sieve(fams)
        decoded_input, decoded_output, order = _chase(coll, fams, c)
        checks += ["forced-chase", "decode"]
        for name in order:
            if coll.count_of(name) < sigma:
                raise StructureUnverifiable(
                    f"{name}: {coll.count_of(name)} copies < {sigma} seed copies"
                )
        if decoded_input != word:
            raise StructureUnverifiable(
                f"seed encodes {decoded_input!r}, expected {word!r}"
            )
        if decoded_output != expected:
            raise StructureUnverifiable(
                f"polymer decodes {decoded_output!r}, evaluation gives {expected!r}"
            )
        if mode == "certificate":
            bonds, _ = _assemble_canonical(coll, fams["seed"][0].name, order)
            config = Configuration.make(coll, bonds)
            check_entropy_certificate(config, derive_entropy_certificate(config))
            checks.append("certificate")
    except StructureUnverifiable as exc:
        raise SimulationViolated(str(exc)) from exc
    except (KeyError, IndexError, TypeError) as exc:
        raise SimulationViolated(f"malformed collection: {exc!r}") from exc
    return CircuitVerificationReport(
        ok=True,
        mode=mode,
        seed_copies=sigma,
        decoded_input=decoded_input,
        decoded_output=decoded_output,
        checks=tuple(checks),
    )


def _chase(
    coll: MonomerCollection,
    fams: dict[str, list[MonomerType]],
    c: CircuitSpec,
) -> tuple[str, str, list[str]]:
    """Walk the DAG from the seed's codomains, demanding exactly one
    candidate monomer per gate (keyed by its full plain multiset) and
    per output, and read off both words."""
    (seed,) = fams["seed"]
    input_nodes = set(c.inputs)
    edges = c.edges()

    # seed shape: codomains = exactly one bit per input wire; plains =
    # exactly the helper domain of each output node
    labels = Counter(d.label for d in seed.outputs())
    val: dict[Edge, str] = {}
    for e in edges:
        if e.src not in input_nodes:
            continue
        hits = [b for b in "01" if labels.get(_edge_label(b, e))]
        if len(hits) != 1:
            raise StructureUnverifiable(
                f"seed offers {len(hits)} values on wire {e.src}.{e.port}>"
                f"{e.dst}.{e.slot}"
            )
        val[e] = hits[0]
        labels[_edge_label(hits[0], e)] -= 1
    if +labels:
        raise StructureUnverifiable(
            f"seed carries stray codomains {sorted((+labels).elements())[:3]}"
        )
    want_plains = sorted(_helper_label(o.name) for o in c.outputs)
    if sorted(d.label for d in seed.inputs()) != want_plains:
        raise StructureUnverifiable("seed plains are not the output helpers")
    per_input: dict[str, set[str]] = {}
    for e, bit in val.items():
        per_input.setdefault(e.src, set()).add(bit)
    if any(len(bits) != 1 for bits in per_input.values()):
        raise StructureUnverifiable("seed fans one input out with two values")
    decoded_input = "".join(per_input[x].pop() for x in c.inputs)

    by_key: dict[tuple[str, ...], list[MonomerType]] = {}
    for t in fams["comp"] + fams["end"]:
        key = tuple(sorted(d.label for d in t.inputs()))
        by_key.setdefault(key, []).append(t)

    order: list[str] = []
    for vname in c.topo():
        g = c.gate(vname)
        own = [Edge(r.node, r.port, vname, k) for k, r in enumerate(g.in_refs)]
        key = tuple(sorted(_edge_label(val[e], e) for e in own))
        cands = by_key.get(key, [])
        if len(cands) != 1 or cands[0].family != "comp":
            raise StructureUnverifiable(
                f"gate {vname}: need exactly one gate monomer reading {key}, "
                f"found {len(cands)}"
            )
        t = cands[0]
        stars = Counter(d.label for d in t.outputs())
        for e in edges:
            if e.src != vname:
                continue
            hits = [b for b in "01" if stars.get(_edge_label(b, e))]
            if len(hits) != 1:
                raise StructureUnverifiable(
                    f"{t.name} offers {len(hits)} values on port {vname}.{e.port}"
                )
            val[e] = hits[0]
            stars[_edge_label(hits[0], e)] -= 1
        if +stars:
            raise StructureUnverifiable(
                f"{t.name} carries stray codomains {sorted((+stars).elements())[:3]}"
            )
        order.append(t.name)

    out_bits = []
    for o in c.outputs:
        e = Edge(o.src.node, o.src.port, o.name, 0)
        key = (_edge_label(val[e], e),)
        cands = by_key.get(key, [])
        if len(cands) != 1 or cands[0].family != "end":
            raise StructureUnverifiable(
                f"output {o.name}: need exactly one end monomer reading "
                f"{key[0]}, found {len(cands)}"
            )
        t = cands[0]
        if [d.label for d in t.outputs()] != [_helper_label(o.name)]:
            raise StructureUnverifiable(
                f"{t.name} does not offer the {o.name} helper codomain"
            )
        order.append(t.name)
        out_bits.append(val[e])
    return decoded_input, "".join(out_bits), order
