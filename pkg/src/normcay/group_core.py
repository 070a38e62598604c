"""Finite groups as dense index sets with exact multiplication.

Elements are the integers ``0..n-1`` with ``0`` the identity.  Small groups
carry a full Cayley table; permutation groups also keep their faithful action
(one image tuple per element, sorted lexicographically) so that labels can be
printed and so that large groups such as ``alternating:10`` can be handled
without ever materialising an ``n x n`` table.

Group-spec grammar::

    cyclic:K  dihedral:K  dicyclic:K  symmetric:K  alternating:K
    perm:D:[(0 1 2)],[(0 1)(2 3)]
    product:SPEC,SPEC[,SPEC...]
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import cached_property, reduce

import numpy as np

from .errors import SizeExceeded, UnsupportedFamily

DEFAULT_MAX_ORDER = 2000
# largest order for which an explicit n x n multiplication table is built
TABLE_LIMIT = 5000
# permutation degree bound: D**D must fit in int64 for the code lookup
MAX_DEGREE = 15

SIMPLE_FAMILIES = ("cyclic", "dihedral", "dicyclic", "symmetric", "alternating")
FAMILIES = SIMPLE_FAMILIES + ("perm", "product")


# ---------------------------------------------------------------------------
# specs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GroupSpec:
    family: str
    params: tuple[int, ...] = ()
    # perm family only: each generator as the image tuple of 0..D-1
    generators: tuple[tuple[int, ...], ...] = ()
    factors: tuple["GroupSpec", ...] = ()

    def __str__(self) -> str:
        if self.family in SIMPLE_FAMILIES:
            return f"{self.family}:{self.params[0]}"
        if self.family == "perm":
            gens = ",".join(f"[{cycle_string(g, one_based=False)}]" for g in self.generators)
            return f"perm:{self.params[0]}:{gens}"
        return "product:" + ",".join(str(f) for f in self.factors)

    def expected_order(self) -> int | None:
        """Order predicted from the family formula; ``None`` for ``perm``."""
        k = self.params[0] if self.params else 0
        if self.family == "cyclic":
            return k
        if self.family == "dihedral":
            return 2 * k
        if self.family == "dicyclic":
            return 4 * k
        if self.family == "symmetric":
            return math.factorial(k)
        if self.family == "alternating":
            return max(1, math.factorial(k) // 2)
        if self.family == "product":
            orders = [f.expected_order() for f in self.factors]
            if any(o is None for o in orders):
                return None
            return math.prod(orders)
        return None


_SIMPLE_RE = re.compile(r"(cyclic|dihedral|dicyclic|symmetric|alternating):(\d+)")
_PERM_RE = re.compile(r"perm:(\d+):(.*)")
_GEN_LIST_RE = re.compile(r"\[[^\[\]]*\](?:,\[[^\[\]]*\])*")
_CYCLES_RE = re.compile(r"(?:\(\s*\d+(?:\s+\d+)*\s*\))*|\(\s*\)")
_FACTOR_SPLIT_RE = re.compile(r",(?=(?:%s):)" % "|".join(FAMILIES))


def parse_spec(text: str) -> GroupSpec:
    """Parse a group-spec string; anything outside the grammar raises UnsupportedFamily."""
    text = text.strip()
    if text.startswith("product:"):
        parts = _FACTOR_SPLIT_RE.split(text[len("product:"):])
        if len(parts) < 2:
            raise UnsupportedFamily(f"product needs at least two factors: {text!r}")
        factors = []
        for part in parts:
            if part.startswith("product:"):
                raise UnsupportedFamily("nested products are not supported; list all factors flat")
            factors.append(parse_spec(part))
        return GroupSpec("product", factors=tuple(factors))
    m = _SIMPLE_RE.fullmatch(text)
    if m:
        k = int(m.group(2))
        if k < 1:
            raise UnsupportedFamily(f"parameter must be positive: {text!r}")
        return GroupSpec(m.group(1), (k,))
    m = _PERM_RE.fullmatch(text)
    if m:
        degree = int(m.group(1))
        if not 1 <= degree <= MAX_DEGREE:
            raise UnsupportedFamily(f"permutation degree must be in 1..{MAX_DEGREE}")
        body = m.group(2)
        if not _GEN_LIST_RE.fullmatch(body):
            raise UnsupportedFamily(f"bad generator list: {body!r}")
        gens = tuple(_parse_cycles(g, degree) for g in re.findall(r"\[([^\]]*)\]", body))
        return GroupSpec("perm", (degree,), generators=gens)
    raise UnsupportedFamily(f"unrecognised group spec: {text!r}")


def _parse_cycles(text: str, degree: int) -> tuple[int, ...]:
    text = text.strip()
    if not _CYCLES_RE.fullmatch(text):
        raise UnsupportedFamily(f"bad cycle notation: {text!r}")
    image = list(range(degree))
    seen: set[int] = set()
    for cyc in re.findall(r"\(([^)]*)\)", text):
        pts = [int(p) for p in cyc.split()]
        for p in pts:
            if p >= degree or p in seen:
                raise UnsupportedFamily(f"bad point {p} in {text!r}")
            seen.add(p)
        for a, b in zip(pts, pts[1:] + pts[:1]):
            image[a] = b
    return tuple(image)


def cycle_string(perm, one_based: bool = True) -> str:
    """Cycle notation: ``(1,2,3)(4,5)`` one-based, ``(0 1 2)(3 4)`` zero-based."""
    perm = [int(p) for p in perm]
    seen = [False] * len(perm)
    out = []
    for start in range(len(perm)):
        if seen[start] or perm[start] == start:
            continue
        cyc = []
        p = start
        while not seen[p]:
            seen[p] = True
            cyc.append(p + 1 if one_based else p)
            p = perm[p]
        sep = "," if one_based else " "
        out.append("(" + sep.join(map(str, cyc)) + ")")
    return "".join(out) or "()"


# ---------------------------------------------------------------------------
# group
# ---------------------------------------------------------------------------

class Group:
    """A finite group on element indices ``0..n-1`` (identity at 0).

    Exactly one of ``table`` (n x n Cayley table) or ``perms`` (n x D image
    array, lexicographically sorted) must be supplied; the other is derived on
    demand when the order allows it.
    """

    def __init__(self, name: str, order: int, *, table=None, perms=None,
                 generators=(), labeler=None):
        if table is None and perms is None:
            raise ValueError("need a table or a permutation action")
        self.name = name
        self.n = int(order)
        self.generators = tuple(int(g) for g in generators)
        self._table = None if table is None else np.asarray(table, dtype=np.int32)
        self.perms = None if perms is None else np.asarray(perms, dtype=np.int8)
        self._labeler = labeler
        if self.perms is not None:
            d = self.perms.shape[1]
            self._weights = (d ** np.arange(d - 1, -1, -1, dtype=np.int64)).astype(np.int64)
            self._codes = self.perms.astype(np.int64) @ self._weights

    def __repr__(self):
        return f"Group({self.name!r}, n={self.n})"

    def __len__(self):
        return self.n

    # -- multiplication ---------------------------------------------------

    def _lookup(self, perms) -> np.ndarray:
        codes = np.asarray(perms, dtype=np.int64) @ self._weights
        idx = np.searchsorted(self._codes, codes)
        idx = np.minimum(idx, self.n - 1)
        if not np.all(self._codes[idx] == codes):
            raise ValueError("permutation is not an element of the group")
        return idx

    @property
    def has_table(self) -> bool:
        return self._table is not None or self.n <= TABLE_LIMIT

    @property
    def table(self) -> np.ndarray:
        if self._table is None:
            if self.n > TABLE_LIMIT:
                raise SizeExceeded(f"order {self.n} too large for a multiplication table")
            P = self.perms.astype(np.intp)
            rows = [self._lookup(P[a][P]) for a in range(self.n)]
            self._table = np.asarray(rows, dtype=np.int32)
        return self._table

    def mul(self, a, b):
        """Product ``a*b``; accepts ints or integer arrays (broadcast)."""
        if self._table is not None or self.n <= TABLE_LIMIT:
            out = self.table[a, b]
            return int(out) if np.ndim(out) == 0 else out
        pa = self.perms[np.asarray(a)].astype(np.intp)
        pb = self.perms[np.asarray(b)].astype(np.intp)
        pa, pb = np.broadcast_arrays(pa, pb)
        out = self._lookup(np.take_along_axis(pa, pb, axis=-1))
        return int(out) if np.ndim(out) == 0 else out

    @cached_property
    def inv(self) -> np.ndarray:
        if self._table is not None or self.perms is None:
            return np.argmax(self.table == 0, axis=1).astype(np.int32)
        return self._lookup(np.argsort(self.perms, axis=1)).astype(np.int32)

    def inverse(self, g: int) -> int:
        return int(self.inv[g])

    # -- orders and powers ------------------------------------------------

    @cached_property
    def orders(self) -> np.ndarray:
        n = self.n
        orders = np.zeros(n, dtype=np.int64)
        orders[0] = 1
        if self.perms is not None:
            P = self.perms.astype(np.intp)
            ident = np.arange(P.shape[1])
            cur = P.copy()
            k = 1
            while np.any(orders == 0):
                hit = (orders == 0) & np.all(cur == ident, axis=1)
                orders[hit] = k
                cur = np.take_along_axis(P, cur, axis=1)
                k += 1
            return orders
        tab = self.table
        idx = np.arange(n)
        cur = idx.copy()
        k = 1
        while np.any(orders == 0):
            orders[(orders == 0) & (cur == 0)] = k
            cur = tab[cur, idx]
            k += 1
        return orders

    def element_order(self, g: int) -> int:
        """Least ``m >= 1`` with ``g**m`` the identity."""
        return int(self.orders[g])

    @cached_property
    def exponent(self) -> int:
        return reduce(math.lcm, (int(o) for o in np.unique(self.orders)), 1)

    def power(self, g: int, k: int) -> int:
        """Exact ``g**k``; negative ``k`` allowed."""
        m = self.element_order(g)
        k %= m
        result, base = 0, int(g)
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def cyclic_subgroup(self, g: int) -> frozenset[int]:
        return frozenset(self.power(g, k) for k in range(self.element_order(g)))

    @cached_property
    def is_abelian(self) -> bool:
        gens = self.generators or tuple(range(self.n))
        return all(self.mul(a, b) == self.mul(b, a) for a in gens for b in gens)

    def conjugation_maps(self) -> list[np.ndarray]:
        """For each generator ``t`` the array ``g -> t^-1 g t``.

        Orbits under these maps are the conjugacy classes.
        """
        conjugators = self.generators or tuple(range(1, self.n))
        maps = []
        if self._table is None and self.perms is not None and self.n > TABLE_LIMIT:
            P = self.perms.astype(np.intp)
            for t in conjugators:
                pt = P[t]
                tinv = np.argsort(pt)
                maps.append(self._lookup(tinv[P[:, pt]]))
            return maps
        tab = self.table
        for t in conjugators:
            maps.append(tab[tab[self.inv[t], :], t])
        return maps

    # -- labels -----------------------------------------------------------

    def label(self, g: int) -> str:
        if self._labeler is None:
            return str(int(g))
        return self._labeler(int(g))

    @cached_property
    def labels(self) -> list[str]:
        return [self.label(g) for g in range(self.n)]

    @cached_property
    def _label_index(self) -> dict[str, int]:
        return {lab: i for i, lab in enumerate(self.labels)}

    def index(self, label: str) -> int:
        """Element index for a label; ``#k`` selects index ``k`` directly."""
        label = label.strip()
        if label.startswith("#") and label[1:].isdigit():
            g = int(label[1:])
            if g >= self.n:
                raise KeyError(label)
            return g
        try:
            return self._label_index[label]
        except KeyError:
            pass
        try:
            return self._normalized_index[normalize_label(label)]
        except KeyError:
            raise KeyError(f"no element labelled {label!r} in {self.name}") from None

    @cached_property
    def _normalized_index(self) -> dict[str, int]:
        return {normalize_label(lab): i for i, lab in enumerate(self.labels)}


_CYCLE_RE = re.compile(r"(?:\([^()<>]*\))+")


def _canonical_cycles(match: re.Match) -> str:
    cycles = []
    for body in re.findall(r"\(([^()]*)\)", match.group(0)):
        pts = [int(t) for t in re.split(r"[,\s]+", body.strip()) if t]
        if len(pts) > 1:
            k = pts.index(min(pts))
            cycles.append(pts[k:] + pts[:k])
    cycles.sort()
    return "".join("(" + ",".join(map(str, c)) + ")" for c in cycles) or "()"


def normalize_label(label: str) -> str:
    """Whitespace-free label with every cycle product rewritten canonically.

    Cycles are rotated to start at their least point and sorted, so that
    ``(4,2,1)`` and ``(1, 4, 2)`` compare equal.
    """
    return _CYCLE_RE.sub(_canonical_cycles, label.strip()).replace(" ", "")


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------

def _power_label(base: str, i: int) -> str:
    if i == 0:
        return ""
    return base if i == 1 else f"{base}^{i}"


def _cyclic(k: int) -> Group:
    idx = np.arange(k)
    table = (idx[:, None] + idx[None, :]) % k
    return Group(f"cyclic:{k}", k, table=table, generators=(1,) if k > 1 else ())


def _dihedral(k: int) -> Group:
    # index e*k + i  <->  s^e r^i
    n = 2 * k
    e = np.arange(n) // k
    i = np.arange(n) % k
    e1, e2 = e[:, None], e[None, :]
    i1, i2 = i[:, None], i[None, :]
    ii = (np.where(e2 == 1, -i1, i1) + i2) % k
    table = ((e1 + e2) % 2) * k + ii

    def label(g):
        s, r = divmod(g, k)
        text = ("s" if s else "") + _power_label("r", r)
        return text or "e"

    gens = (1 % k, k) if k > 1 else (k,)
    return Group(f"dihedral:{k}", n, table=table, generators=gens, labeler=label)


def _dicyclic(k: int) -> Group:
    # index e*2k + i  <->  a^i b^e ; a^{2k}=1, b^2=a^k, b a = a^{-1} b
    m = 2 * k
    n = 4 * k
    e = np.arange(n) // m
    i = np.arange(n) % m
    e1, e2 = e[:, None], e[None, :]
    i1, i2 = i[:, None], i[None, :]
    ii = i1 + np.where(e1 == 1, -i2, i2)
    ee = e1 + e2
    ii = (ii + np.where(ee == 2, k, 0)) % m
    table = (ee % 2) * m + ii

    def label(g):
        b, a = divmod(g, m)
        text = _power_label("a", a) + ("b" if b else "")
        return text or "e"

    return Group(f"dicyclic:{k}", n, table=table, generators=(1 % m, m), labeler=label)


def _lex_permutations(k: int) -> np.ndarray:
    """All permutations of 0..k-1 as rows, in lexicographic order."""
    P = np.zeros((1, 0), dtype=np.int8)
    for m in range(1, k + 1):
        blocks = []
        for first in range(m):
            rest = np.array([s for s in range(m) if s != first], dtype=np.int8)
            block = np.empty((len(P), m), dtype=np.int8)
            block[:, 0] = first
            block[:, 1:] = rest[P] if m > 1 else rest[:0]
            blocks.append(block)
        P = np.vstack(blocks)
    return P


def _parity(P: np.ndarray) -> np.ndarray:
    k = P.shape[1]
    inversions = np.zeros(len(P), dtype=np.int64)
    for a in range(k):
        for b in range(a + 1, k):
            inversions += P[:, a] > P[:, b]
    return inversions % 2


def _perm_group(name: str, perms: np.ndarray, gen_images, one_based: bool) -> Group:
    G = Group(name, len(perms), perms=perms,
              labeler=lambda g: cycle_string(G.perms[g], one_based=one_based))
    if gen_images:
        G.generators = tuple(int(x) for x in G._lookup(np.asarray(gen_images)))
    return G


def _cycle_image(k: int, cycles) -> tuple[int, ...]:
    image = list(range(k))
    for cyc in cycles:
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            image[a] = b
    return tuple(image)


def _symmetric(k: int) -> Group:
    perms = _lex_permutations(k)
    gens = []
    if k >= 2:
        gens = [_cycle_image(k, [[0, 1]]), _cycle_image(k, [list(range(k))])]
    return _perm_group(f"symmetric:{k}", perms, gens, one_based=True)


def _alternating(k: int) -> Group:
    perms = _lex_permutations(k)
    perms = perms[_parity(perms) == 0]
    gens = []
    if k >= 3:
        # (0 1 2) with the long odd cycle on 0..k-1 or 1..k-1
        long_cycle = list(range(k)) if k % 2 else list(range(1, k))
        gens = [_cycle_image(k, [[0, 1, 2]]), _cycle_image(k, [long_cycle])]
    return _perm_group(f"alternating:{k}", perms, gens, one_based=True)


def _closure(spec: GroupSpec, max_order: int) -> Group:
    degree = spec.params[0]
    ident = tuple(range(degree))
    gens = [g for g in spec.generators if g != ident]
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for t in gens:
                q = tuple(p[x] for x in t)
                if q not in seen:
                    seen.add(q)
                    if len(seen) > max_order:
                        raise SizeExceeded(f"{spec} has order > {max_order}")
                    nxt.append(q)
        frontier = nxt
    perms = np.array(sorted(seen), dtype=np.int8).reshape(len(seen), degree)
    return _perm_group(str(spec), perms, gens, one_based=False)


def _product(factors: list[Group]) -> Group:
    orders = [F.n for F in factors]
    n = math.prod(orders)
    # row-major flattening: index = sum(i_f * stride_f)
    strides = [math.prod(orders[f + 1:]) for f in range(len(orders))]
    idx = np.arange(n)
    comps = [(idx // s) % o for s, o in zip(strides, orders)]
    table = np.zeros((n, n), dtype=np.int64)
    for F, comp, s in zip(factors, comps, strides):
        table += F.table[comp[:, None], comp[None, :]].astype(np.int64) * s
    gens = []
    for F, s in zip(factors, strides):
        gens.extend(g * s for g in F.generators)

    def label(g):
        parts = [F.label((g // s) % F.n) for F, s in zip(factors, strides)]
        return "<" + ",".join(parts) + ">"

    name = "product:" + ",".join(F.name for F in factors)
    return Group(name, n, table=table, generators=gens, labeler=label)


def build_group(spec: GroupSpec | str, max_order: int = DEFAULT_MAX_ORDER) -> Group:
    """Materialise a group from its spec (string or parsed)."""
    if isinstance(spec, str):
        spec = parse_spec(spec)
    expected = spec.expected_order()
    if expected is not None and expected > max_order:
        raise SizeExceeded(f"{spec} has order {expected} > {max_order}")
    k = spec.params[0] if spec.params else 0
    if spec.family == "cyclic":
        G = _cyclic(k)
    elif spec.family == "dihedral":
        G = _dihedral(k)
    elif spec.family == "dicyclic":
        G = _dicyclic(k)
    elif spec.family == "symmetric":
        G = _symmetric(k)
    elif spec.family == "alternating":
        G = _alternating(k)
    elif spec.family == "perm":
        G = _closure(spec, max_order)
    elif spec.family == "product":
        G = _product([build_group(f, max_order) for f in spec.factors])
        if G.n > max_order:
            raise SizeExceeded(f"{spec} has order {G.n} > {max_order}")
    else:
        raise UnsupportedFamily(spec.family)
    G.name = str(spec)
    return G


def is_ambivalent(G: Group) -> bool:
    """True iff every element is conjugate to its inverse."""
    from .class_algebra import conjugacy_classes

    cd = conjugacy_classes(G)
    return bool(np.all(cd.inverse_class == np.arange(cd.h)))
