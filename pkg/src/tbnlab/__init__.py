"""Workbench for thermodynamic binding networks.

Compiles Turing machines and Boolean circuits into bond-counting
monomer systems, enumerates and certifies their stable configurations,
and runs geometric growth simulations of the square-tile variant.
"""

from .core import (
    Configuration,
    Domain,
    MonomerCollection,
    MonomerType,
    dump_collection,
    parse_collection,
    parse_configuration,
    parse_domain,
    validate_configuration,
)

__all__ = [
    "Configuration",
    "Domain",
    "MonomerCollection",
    "MonomerType",
    "dump_collection",
    "parse_collection",
    "parse_configuration",
    "parse_domain",
    "validate_configuration",
]
