"""Enumeration of normal connection sets and catalog-wide classification.

Two engines live here.  ``classify`` walks connection sets one at a time and
runs every per-set check from :mod:`normcay.integrality`, which is what the CLI
reports.  ``exhaustive_sweep`` is the bulk engine: it tabulates per-class
contributions to the eigenvalue formulas once and evaluates millions of class
combinations with numpy, deciding the structural side with class bitmasks.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from . import context as _context
from .atoms import ConnectionSet, class_partition
from .class_algebra import CharacterTable, ClassData
from .errors import EnumerationTooLarge, InvariantViolation, SizeExceeded
from .group_core import DEFAULT_MAX_ORDER, Group
from .integrality import (
    OMEGA_G, TOL, decompose_check, eisenstein_coordinates, f_g_values, hs_integrality_report,
    is_eisenstein_integral,
)
from .spectra import (
    OMEGA6, OMEGA6_5, Spectrum, adjacency_eigenvalues, build_a_matrix, build_h_matrix,
    moment_check,
)

MODES = ("all", "mixed-only", "oriented-only", "symmetric-only")
DEFAULT_LIMIT = 2**20
MOMENT_MAX_ORDER = 24

# the groups on which every normal connection set is checked
EXHAUSTIVE_CATALOG = (
    [f"cyclic:{n}" for n in range(3, 25)]
    + [f"dihedral:{k}" for k in range(3, 9)]
    + ["symmetric:3", "symmetric:4", "alternating:4", "dicyclic:3", "dicyclic:2"]
)


def catalog(max_order: int) -> list[str]:
    """Every built-in family member (and product of two cyclic groups) of order <= max_order."""
    specs = [f"cyclic:{n}" for n in range(1, max_order + 1)]
    specs += [f"dihedral:{k}" for k in range(2, max_order // 2 + 1)]
    specs += [f"dicyclic:{k}" for k in range(2, max_order // 4 + 1)]
    specs += [f"symmetric:{k}" for k in range(3, 12) if math.factorial(k) <= max_order]
    specs += [f"alternating:{k}" for k in range(4, 12) if math.factorial(k) // 2 <= max_order]
    specs += [f"product:cyclic:{a},cyclic:{b}"
              for a in range(2, max_order + 1) for b in range(a, max_order // a + 1)]
    return specs


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------

def class_blocks(cd: ClassData) -> list[tuple[int, ...]]:
    """Non-identity classes grouped as ``(c,)`` if self-inverse, else ``(c, c^-1)``."""
    blocks = []
    for c in range(1, cd.h):
        ci = int(cd.inverse_class[c])
        if ci == c:
            blocks.append((c,))
        elif c < ci:
            blocks.append((c, ci))
    return blocks


def count_normal_sets(cd: ClassData) -> int:
    return 2 ** (cd.h - 1) - 1


def _mode_ok(S: ConnectionSet, mode: str) -> bool:
    if mode == "all":
        return True
    if mode == "symmetric-only":
        return S.is_symmetric
    if mode == "oriented-only":
        return S.is_skew
    if mode == "mixed-only":
        return bool(S.symmetric_part) and bool(S.skew_part)
    raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")


def mask_to_set(cd: ClassData, mask: int) -> ConnectionSet:
    """Connection set for a bitmask over classes (bit c selects class c)."""
    members = set()
    for c in range(1, cd.h):
        if mask >> c & 1:
            members.update(int(g) for g in cd.members[c])
    return ConnectionSet(frozenset(members), *_split(cd, mask))


def _split(cd: ClassData, mask: int) -> tuple[frozenset[int], frozenset[int]]:
    sym, skew = set(), set()
    for c in range(1, cd.h):
        if mask >> c & 1:
            target = sym if mask >> int(cd.inverse_class[c]) & 1 else skew
            target.update(int(g) for g in cd.members[c])
    return frozenset(sym), frozenset(skew)


def enumerate_normal_sets(G: Group, cd: ClassData, mode: str = "all",
                          limit: int = DEFAULT_LIMIT) -> Iterator[ConnectionSet]:
    """Every nonempty union of non-identity classes, filtered by ``mode``.

    Sets come out in increasing order of their class bitmask.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    total = count_normal_sets(cd)
    if total > limit:
        raise EnumerationTooLarge(f"{G.name} has {total} normal sets (limit {limit})")
    for m in range(1, total + 1):
        S = mask_to_set(cd, m << 1)
        if _mode_ok(S, mode):
            yield S


def set_mask(cd: ClassData, S) -> int:
    elements = S.members if isinstance(S, ConnectionSet) else S
    mask = 0
    for g in elements:
        mask |= 1 << int(cd.class_of[g])
    return mask


def describe(cd: ClassData, S) -> str:
    """``Cl[label]`` per class, with ``→`` marking a class whose inverse class is absent."""
    mask = set_mask(cd, S)
    parts = []
    for c in range(1, cd.h):
        if mask >> c & 1:
            arrow = "" if mask >> int(cd.inverse_class[c]) & 1 else "→"
            parts.append(f"Cl[{cd.class_label(c)}]{arrow}")
    return " + ".join(parts) if parts else "∅"


# ---------------------------------------------------------------------------
# row-by-row classification
# ---------------------------------------------------------------------------

def format_spectrum(spec: Spectrum, digits: int = 6) -> str:
    out = []
    for v, m in spec.entries:
        if abs(v.imag) < 10**-digits:
            x = round(v.real, digits)
            txt = str(int(x)) if x == int(x) else f"{x:.{digits}g}"
        else:
            txt = f"{v.real:.{digits}g}{v.imag:+.{digits}g}i"
        out.append(f"{txt}^{m}")
    return " ".join(out)


def format_eisenstein(a: int, b: int) -> str:
    if b == 0:
        return str(a)
    coeff = "" if abs(b) == 1 else str(abs(b))
    if a == 0:
        return f"{'-' if b < 0 else ''}{coeff}ω3"
    return f"{a}{'-' if b < 0 else '+'}{coeff}ω3"


@dataclass
class ClassificationRow:
    group: str
    descriptor: str
    symmetric_part: str
    skew_part: str
    size: int
    normal: bool
    hs_integral: bool
    eisenstein_integral: bool
    hs_spectrum: str
    adjacency_spectrum: str

    FIELDS = ("group", "descriptor", "symmetric_part", "skew_part", "size", "normal",
              "hs_integral", "eisenstein_integral", "hs_spectrum", "adjacency_spectrum")

    def to_json(self) -> dict:
        return {k: getattr(self, k) for k in self.FIELDS}

    def to_csv_row(self) -> list[str]:
        return [str(getattr(self, k)).lower() if isinstance(getattr(self, k), bool)
                else str(getattr(self, k)) for k in self.FIELDS]


def _reproducer(spec: str, descriptor: str) -> str:
    return f"normcay check --group '{spec}' --set '{descriptor}'"


def classify_set(G: Group, cd: ClassData, ct: CharacterTable, S: ConnectionSet,
                 tol: float = TOL, moments: bool | None = None) -> ClassificationRow:
    """One classification row, asserting every cross-route invariant on the way."""
    desc = describe(cd, S)

    def fail(msg):
        raise InvariantViolation(f"{G.name} {desc}: {msg}", reproducer=_reproducer(G.name, desc))

    report = hs_integrality_report(G, cd, ct, S, tol)
    if not report.agree:
        fail(f"structural={report.structural_verdict} spectral={report.spectral_verdict}")
    try:
        decompose_check(G, cd, ct, S, tol)
    except InvariantViolation as exc:
        fail(str(exc))
    eis = is_eisenstein_integral(G, cd, ct, S, tol)
    if not eis.routes_agree:
        fail("f/g route and adjacency-eigenvalue route disagree on Eisenstein integrality")
    if eis.verdict and not report.spectral_verdict:
        fail("Eisenstein integral but not HS-integral")
    fg = f_g_values(G, cd, ct, S)
    z = adjacency_eigenvalues(G, cd, ct, S)
    if np.abs(fg.reconstruct() - z).max(initial=0.0) > tol:
        fail("f + g + ω3 (g_j - g_k) does not reproduce the adjacency eigenvalues")

    values = np.array(report.eigenvalues)
    mults = ct.degrees**2
    hs_spec = Spectrum.from_values(values, mults)
    a_spec = Spectrum.from_values(z, mults)
    if moments is None:
        moments = G.n <= MOMENT_MAX_ORDER
    if moments:
        for name, M, spec in (("H", build_h_matrix(G, S), hs_spec), ("A", build_a_matrix(G, S), a_spec)):
            mc = moment_check(M, spec, ct.h)
            if not mc:
                fail(f"moment check on {name} fails at k={mc.failing_k}")

    if eis.verdict:
        a, b = eisenstein_coordinates([v for v, _ in a_spec.entries])
        adj = " ".join(f"{format_eisenstein(int(round(x)), int(round(y)))}^{m}"
                       for x, y, (_, m) in zip(a, b, a_spec.entries))
    else:
        adj = format_spectrum(a_spec)
    return ClassificationRow(
        group=G.name, descriptor=desc,
        symmetric_part=describe(cd, S.symmetric_part), skew_part=describe(cd, S.skew_part),
        size=len(S), normal=True, hs_integral=report.spectral_verdict,
        eisenstein_integral=eis.verdict, hs_spectrum=format_spectrum(hs_spec), adjacency_spectrum=adj,
    )


def classify(groups, mode: str = "all", limit: int = DEFAULT_LIMIT, tol: float = TOL,
             max_order: int = DEFAULT_MAX_ORDER, moments: bool | None = None) -> list[ClassificationRow]:
    rows = []
    for spec in groups:
        ctx = _context.load(str(spec), max_order)
        G, cd, ct = ctx.parts
        for S in enumerate_normal_sets(G, cd, mode, limit):
            rows.append(classify_set(G, cd, ct, S, tol, moments))
    return rows


def summarize(rows: list[ClassificationRow]) -> list[dict]:
    out: dict[str, dict] = {}
    for r in rows:
        s = out.setdefault(r.group, {"group": r.group, "sets": 0, "hs_integral": 0,
                                     "eisenstein_integral": 0})
        s["sets"] += 1
        s["hs_integral"] += r.hs_integral
        s["eisenstein_integral"] += r.eisenstein_integral
    return list(out.values())


# ---------------------------------------------------------------------------
# bulk sweep
# ---------------------------------------------------------------------------

INNER_ROWS = 2**16


@dataclass
class _Option:
    sym: int
    skew: int
    lam: np.ndarray
    mu: np.ndarray
    g: np.ndarray


def _block_options(cd: ClassData, ct: CharacterTable, block) -> list[_Option]:
    h = ct.h
    zero = np.zeros(h)

    def part(c):
        return ct.chi[:, c] * cd.sizes[c] / ct.degrees

    def skew_vectors(c, ci):
        mu = (OMEGA6 * part(c) + OMEGA6_5 * part(ci)).real
        g = (OMEGA_G * part(c) + OMEGA_G.conjugate() * part(ci)).real
        return mu, g

    if len(block) == 1:
        (c,) = block
        return [_Option(0, 0, zero, zero, zero), _Option(1 << c, 0, part(c).real, zero, zero)]
    c, ci = block
    mu_c, g_c = skew_vectors(c, ci)
    mu_i, g_i = skew_vectors(ci, c)
    both = (part(c) + part(ci)).real
    return [
        _Option(0, 0, zero, zero, zero),
        _Option(0, 1 << c, zero, mu_c, g_c),
        _Option(0, 1 << ci, zero, mu_i, g_i),
        _Option((1 << c) | (1 << ci), 0, both, zero, zero),
    ]


def _table(options: list[list[_Option]], h: int):
    """All combinations of the given blocks; value arrays are column-major, shape (h, rows)."""
    sym = np.zeros(1, dtype=np.uint64)
    skew = np.zeros(1, dtype=np.uint64)
    lam = np.zeros((h, 1))
    mu = np.zeros((h, 1))
    g = np.zeros((h, 1))
    for opts in options:
        k = len(opts)
        r = len(sym)
        o_sym = np.array([o.sym for o in opts], dtype=np.uint64)
        o_skew = np.array([o.skew for o in opts], dtype=np.uint64)
        sym = (sym[None, :] | o_sym[:, None]).reshape(k * r)
        skew = (skew[None, :] | o_skew[:, None]).reshape(k * r)
        lam = (lam[:, None, :] + np.array([o.lam for o in opts]).T[:, :, None]).reshape(h, k * r)
        mu = (mu[:, None, :] + np.array([o.mu for o in opts]).T[:, :, None]).reshape(h, k * r)
        g = (g[:, None, :] + np.array([o.g for o in opts]).T[:, :, None]).reshape(h, k * r)
    return sym, skew, lam, mu, g


def _integral_rows(x: np.ndarray, tol: float) -> tuple[np.ndarray, float]:
    """Rows (columns of ``x``) whose entries are all within ``tol`` of integers.

    Candidates are narrowed one character at a time, so rows are usually
    rejected after a single comparison.  Also returns the largest distance seen
    on an accepted row.
    """
    idx = np.arange(x.shape[1])
    for row in x:
        v = row[idx]
        idx = idx[np.abs(v - np.rint(v)) < tol]
        if not len(idx):
            break
    ok = np.zeros(x.shape[1], dtype=bool)
    ok[idx] = True
    worst = float(np.abs(x[:, idx] - np.rint(x[:, idx])).max()) if len(idx) else 0.0
    return ok, worst


def _closed(bits: np.ndarray, block_masks: list[int]) -> np.ndarray:
    ok = np.ones(len(bits), dtype=bool)
    for b in block_masks:
        b = np.uint64(b)
        inter = bits & b
        ok &= (inter == 0) | (inter == b)
    return ok


@dataclass
class SweepResult:
    group: str
    sets: int = 0
    hs_integral: int = 0
    eisenstein_integral: int = 0
    iff_disagreements: int = 0
    decomposition_failures: int = 0
    eisenstein_not_hs: int = 0
    worst_integral_distance: float = 0.0
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.iff_disagreements or self.decomposition_failures or self.eisenstein_not_hs)

    def to_json(self) -> dict:
        d = dict(self.__dict__)
        d["ok"] = self.ok
        return d


def exhaustive_sweep(G: Group, cd: ClassData, ct: CharacterTable, tol: float = TOL,
                     limit: int = 2**24, max_failures: int = 10) -> SweepResult:
    """Check the integrality theorems on every nonempty normal set of G.

    Per set: structural vs spectral HS-integrality, HS-integrality of S vs that
    of its two parts, and Eisenstein integrality implying HS-integrality.
    """
    if cd.h > 63:
        raise SizeExceeded(f"{G.name} has {cd.h} classes; the sweep uses 64-bit class masks")
    total = count_normal_sets(cd)
    if total > limit:
        raise EnumerationTooLarge(f"{G.name} has {total} normal sets (limit {limit})")
    blocks = class_blocks(cd)
    options = [_block_options(cd, ct, b) for b in blocks]
    atom_masks = [sum(1 << c for c in blk) for blk in class_partition(G, cd, "atom")]
    atom3_masks = [sum(1 << c for c in blk) for blk in class_partition(G, cd, "atom3")]
    outside3 = sum(1 << c for c in range(1, cd.h) if cd.rep_orders[c] % 3)

    # split blocks so the inner table stays around INNER_ROWS rows
    inner_count, rows = 0, 1
    for opts in reversed(options):
        if rows * len(opts) > INNER_ROWS:
            break
        rows *= len(opts)
        inner_count += 1
    split = len(options) - inner_count
    outer_opts, inner_opts = options[:split], options[split:]
    i_sym, i_skew, i_lam, i_mu, i_g = _table(inner_opts, ct.h)

    res = SweepResult(G.name)
    for choice in itertools.product(*outer_opts):
        sym = i_sym | np.uint64(sum(o.sym for o in choice))
        skew = i_skew | np.uint64(sum(o.skew for o in choice))
        lam = i_lam + sum((o.lam for o in choice), np.zeros(ct.h))[:, None]
        mu = i_mu + sum((o.mu for o in choice), np.zeros(ct.h))[:, None]
        g = i_g + sum((o.g for o in choice), np.zeros(ct.h))[:, None]
        keep = (sym | skew) != 0

        hs, worst = _integral_rows(lam + mu, tol)
        lam_ok, _ = _integral_rows(lam, tol)
        mu_ok, _ = _integral_rows(mu, tol)
        g_ok, _ = _integral_rows(g, tol)
        eis = lam_ok & g_ok
        structural = (_closed(sym, atom_masks) & ((skew & np.uint64(outside3)) == 0)
                      & _closed(skew, atom3_masks))

        bad_iff = keep & (structural != hs)
        bad_dec = keep & (hs != (lam_ok & mu_ok))
        bad_eis = keep & eis & ~hs
        res.sets += int(keep.sum())
        res.hs_integral += int((keep & hs).sum())
        res.eisenstein_integral += int((keep & eis).sum())
        res.iff_disagreements += int(bad_iff.sum())
        res.decomposition_failures += int(bad_dec.sum())
        res.eisenstein_not_hs += int(bad_eis.sum())
        res.worst_integral_distance = max(res.worst_integral_distance, worst)
        for idx in np.flatnonzero(bad_iff | bad_dec | bad_eis)[:max_failures - len(res.failures)]:
            mask = int(sym[idx] | skew[idx])
            res.failures.append(describe(cd, mask_to_set(cd, mask)))
    return res
