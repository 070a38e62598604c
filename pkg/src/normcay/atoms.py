"""Equivalence relations on group elements and the set systems built from them.

``x ~ y``  iff  ``y = x**k`` with ``gcd(k, ord x) = 1``   (atoms of B(G))
``x ≈ y``  iff  additionally ``k = 1 (mod 3)``, on elements of order divisible by 3

Sets of elements are plain ``frozenset[int]`` of element indices.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import gcd
from typing import Iterable

import numpy as np

from .class_algebra import ClassData
from .errors import BadResidue, IdentityElement, IdentityInSet, NotADivisor, NotInGamma3
from .group_core import Group


def divisor_set(n: int, d: int) -> frozenset[int]:
    """``{k : 1 <= k <= n-1, gcd(k, n) = d}``."""
    if n < 2 or d < 1 or n % d:
        raise NotADivisor(f"{d} does not divide {n}")
    return frozenset(k for k in range(1, n) if gcd(k, n) == d)


def divisor_set_mod3(n: int, d: int, r: int) -> frozenset[int]:
    """Members ``m = d*k`` of ``divisor_set(n, d)`` with ``k = r (mod 3)``."""
    if r not in (1, 2):
        raise BadResidue(f"residue must be 1 or 2, got {r}")
    if n % 3 or d < 1 or (n // 3) % d:
        raise NotADivisor(f"{d} does not divide {n}/3")
    return frozenset(m for m in divisor_set(n, d) if (m // d) % 3 == r)


def in_gamma3(G: Group, x: int) -> bool:
    return G.element_order(x) % 3 == 0


def gamma3(G: Group) -> frozenset[int]:
    return frozenset(int(g) for g in np.flatnonzero(G.orders % 3 == 0))


def atom(G: Group, x: int) -> frozenset[int]:
    """The ~-class ``[x]``: all generators of the cyclic subgroup <x>."""
    m = G.element_order(x)
    if m == 1:
        raise IdentityElement("the identity has no atom")
    return frozenset(G.power(x, k) for k in divisor_set(m, 1))


def atom3(G: Group, x: int) -> frozenset[int]:
    """The ≈-class ``<<x>>``."""
    m = G.element_order(x)
    if m % 3:
        raise NotInGamma3(f"element {G.label(x)} has order {m}")
    return frozenset(G.power(x, k) for k in divisor_set_mod3(m, 1, 1))


def inverse_set(G: Group, s: Iterable[int]) -> frozenset[int]:
    inv = G.inv
    return frozenset(int(inv[g]) for g in s)


@dataclass(frozen=True)
class ConnectionSet:
    """Identity-free subset S with its symmetric part S \\ S̄ and skew part S̄."""

    members: frozenset[int]
    symmetric_part: frozenset[int]
    skew_part: frozenset[int]

    @classmethod
    def of(cls, G: Group, elements: Iterable[int]) -> "ConnectionSet":
        members = frozenset(int(g) for g in elements)
        if 0 in members:
            raise IdentityInSet("connection set contains the identity")
        inv = G.inv
        skew = frozenset(g for g in members if int(inv[g]) not in members)
        return cls(members, members - skew, skew)

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(sorted(self.members))

    @property
    def is_symmetric(self) -> bool:
        return not self.skew_part

    @property
    def is_skew(self) -> bool:
        return not self.symmetric_part


def as_set(S) -> frozenset[int]:
    if isinstance(S, ConnectionSet):
        return S.members
    return frozenset(int(g) for g in S)


def is_normal(cd: ClassData, S) -> bool:
    """True iff S is a union of whole conjugacy classes."""
    s = as_set(S)
    class_of = cd.class_of
    hit = {int(class_of[g]) for g in s}
    return sum(int(cd.sizes[c]) for c in hit) == len(s)


def in_boolean_algebra(G: Group, S) -> bool:
    """S is a union of atoms [x]."""
    s = as_set(S)
    if 0 in s:
        raise IdentityInSet("connection set contains the identity")
    return all(atom(G, x) <= s for x in s)


def in_e_algebra(G: Group, cd: ClassData, S) -> bool:
    """S is skew, inside Γ(3), and a union of both ≈-classes and conjugacy classes."""
    s = as_set(S)
    if not s:
        return True
    if 0 in s:
        raise IdentityInSet("connection set contains the identity")
    if s & inverse_set(G, s):
        return False
    if any(G.element_order(y) % 3 for y in s):
        return False
    return all(atom3(G, y) <= s and cd.class_set(int(cd.class_of[y])) <= s for y in s)


def _fixpoint(start: set[int], expand) -> frozenset[int]:
    result = set(start)
    frontier = list(start)
    while frontier:
        new = []
        for g in frontier:
            for h in expand(g):
                if h not in result:
                    result.add(h)
                    new.append(h)
        frontier = new
    return frozenset(result)


def closure_s1(G: Group, cd: ClassData, x: int) -> frozenset[int]:
    """Smallest symmetric, conjugation-closed, ~-closed set containing x."""
    if x == 0:
        raise IdentityElement("closure of the identity")

    def expand(g):
        return cd.class_set(int(cd.class_of[g])) | atom(G, g) | {int(G.inv[g])}

    return _fixpoint({int(x), int(G.inv[x])}, expand)


def closure_s2(G: Group, cd: ClassData, y: int) -> frozenset[int] | None:
    """Smallest skew, conjugation-closed, ≈-closed set containing y, or None.

    None means no such skew-symmetric set exists: the conjugation/≈ closure of
    y already meets its own inverse.
    """
    if G.element_order(y) % 3:
        raise NotInGamma3(f"element {G.label(y)} has order {G.element_order(y)}")

    def expand(g):
        return cd.class_set(int(cd.class_of[g])) | atom3(G, g)

    T = _fixpoint({int(y)}, expand)
    if T & inverse_set(G, T):
        return None
    return T


@dataclass(eq=False)
class AtomSystem:
    """Γ(3) together with the ~-partition of G \\ {1} and the ≈-partition of Γ(3)."""

    group: Group
    gamma3: frozenset[int]
    atom_of: dict[int, int]
    atom3_of: dict[int, int]

    @cached_property
    def atoms(self) -> list[frozenset[int]]:
        return _blocks(self.atom_of)

    @cached_property
    def atoms3(self) -> list[frozenset[int]]:
        return _blocks(self.atom3_of)


def _blocks(assignment: dict[int, int]) -> list[frozenset[int]]:
    out: dict[int, set[int]] = {}
    for g, b in assignment.items():
        out.setdefault(b, set()).add(g)
    return [frozenset(out[b]) for b in sorted(out)]


def atom_system(G: Group) -> AtomSystem:
    atom_of: dict[int, int] = {}
    atom3_of: dict[int, int] = {}
    for x in range(1, G.n):
        if x not in atom_of:
            block = len(set(atom_of.values()))
            for y in atom(G, x):
                atom_of[y] = block
        if G.element_order(x) % 3 == 0 and x not in atom3_of:
            block = len(set(atom3_of.values()))
            for y in atom3(G, x):
                atom3_of[y] = block
    return AtomSystem(G, gamma3(G), atom_of, atom3_of)


def class_partition(G: Group, cd: ClassData, relation: str = "atom") -> list[frozenset[int]]:
    """Group class indices into blocks closed under conjugation plus ~ (or ≈).

    Normal sets lying in B(G) (resp. satisfying the ≈ condition of E(G)) are
    exactly the unions of these blocks.  With ``relation="atom3"`` only
    classes inside Γ(3) are partitioned.
    """
    parent = list(range(cd.h))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    classes = range(1, cd.h)
    if relation == "atom3":
        classes = [c for c in classes if cd.rep_orders[c] % 3 == 0]
    for c in classes:
        rep = int(cd.reps[c])
        block = atom(G, rep) if relation == "atom" else atom3(G, rep)
        for y in block:
            a, b = find(c), find(int(cd.class_of[y]))
            if a != b:
                parent[a] = b
    groups: dict[int, set[int]] = {}
    for c in classes:
        groups.setdefault(find(c), set()).add(c)
    return sorted((frozenset(v) for v in groups.values()), key=min)
