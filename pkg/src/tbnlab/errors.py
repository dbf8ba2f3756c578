"""Typed exceptions shared across the workbench.

Every failure mode that callers are expected to catch and branch on gets its
own class here; modules raise these rather than bare ValueError so that the
CLI can map them onto exit codes uniformly.
"""

from __future__ import annotations


class TbnError(Exception):
    """Base class for all workbench errors."""


class FormatError(TbnError):
    """A text payload (domain token, machine file, dump) failed to parse."""


class EmptyCollection(TbnError):
    """An operation that needs at least one monomer got an empty collection."""


class BudgetExceeded(TbnError):
    """A search or growth loop hit its configured node/time/size budget."""


# Short alias used by a few call sites that predate the longer name.
Budget = BudgetExceeded


class NotSaturated(TbnError):
    """A configuration claimed saturation but left a bindable pair free."""


class EntropyBelowBound(TbnError):
    """A configuration's polymer count fell short of the certified bound."""


class BadAnchor(TbnError):
    """An entropy certificate named an anchor assignment that is not valid."""


class InvalidTM(TbnError):
    """A machine description violates the required shape (states, moves...)."""


class NondeterministicAttachment(TbnError):
    """Tile assembly found two distinct tiles attachable at one site."""


class InputTooLong(TbnError):
    """A machine input does not fit inside the declared space bound."""


class NotHaltingWithinBounds(TbnError):
    """A machine failed to halt within the declared time/space envelope."""


class CountsViolation(TbnError):
    """A requested count vector breaks the ordering the constructions need."""


class OutOfGrid(TbnError):
    """A grid coordinate fell outside the layout rectangle."""


class SimulationViolated(TbnError):
    """A compiled system's stable configurations disagree with the machine."""


class ArityMismatch(TbnError):
    """A circuit was evaluated on the wrong number of input bits."""


class InvalidCircuit(TbnError):
    """A circuit description violates the required DAG shape."""


class WitnessInvalid(TbnError):
    """A splice witness does not satisfy the agreement conditions."""


class NotComplete(TbnError):
    """A grown polymer was used where a finished computation is required."""


class MalformedPolymer(TbnError):
    """A polymer does not have the shape needed to read an answer off it."""


class NonDeterministicCorner(TbnError):
    """Geometric growth found more than one fillable corner step."""


class StructureUnverifiable(TbnError):
    """A compiled system failed the structural premises of certificate mode."""
