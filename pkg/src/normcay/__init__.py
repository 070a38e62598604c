"""Integrality of normal mixed Cayley graphs: groups, characters, spectra and verifiers."""
from .group_core import GroupSpec, build_group, is_ambivalent, parse_spec
from .class_algebra import character_table, conjugacy_classes
from .context import GroupContext, load

__all__ = [
    "GroupContext", "GroupSpec", "build_group", "character_table", "conjugacy_classes",
    "is_ambivalent", "load", "parse_spec",
]
__version__ = "0.1.0"
