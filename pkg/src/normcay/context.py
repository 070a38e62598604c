"""Bundle of a group with its classes and character table."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from . import class_algebra
from .group_core import DEFAULT_MAX_ORDER, Group, build_group


@dataclass(eq=False)
class GroupContext:
    spec: str
    group: Group

    @cached_property
    def classes(self) -> class_algebra.ClassData:
        return class_algebra.conjugacy_classes(self.group)

    @cached_property
    def table(self) -> class_algebra.CharacterTable:
        # looked up through the module so tests can substitute a table
        return class_algebra.character_table(self.group, self.classes)

    @property
    def parts(self):
        return self.group, self.classes, self.table


def load(spec: str, max_order: int = DEFAULT_MAX_ORDER) -> GroupContext:
    G = build_group(spec, max_order=max_order)
    return GroupContext(G.name, G)
