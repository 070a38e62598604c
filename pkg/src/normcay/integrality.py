"""Integrality decisions for normal mixed Cayley graphs.

Every decision is available along two independent routes: a structural one
(exact, from atoms and conjugacy classes) and a spectral one (numeric, from
character sums).  Theorems guarantee agreement; the report types carry both
answers so callers can assert it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import context as _context
from .atoms import (
    ConnectionSet, atom, atom3, closure_s1, closure_s2, divisor_set, divisor_set_mod3,
    in_boolean_algebra, in_e_algebra, is_normal,
)
from .class_algebra import CharacterTable, ClassData
from .errors import HypothesisFailed, InvariantViolation, NotNormal
from .group_core import DEFAULT_MAX_ORDER, Group
from .spectra import (
    OMEGA3, GroupAlgebraElement, class_indicator, class_sum_values, evaluate_character_sums,
    hs_components,
)

TOL = 1e-6
# ω = 1/2 - (√3/6) i
OMEGA_G = complex(0.5, -math.sqrt(3.0) / 6)
SQRT3 = math.sqrt(3.0)


def integer_distance(values) -> np.ndarray:
    """Distance of each (complex) value to the nearest rational integer."""
    v = np.asarray(values, dtype=complex)
    return np.maximum(np.abs(v.real - np.rint(v.real)), np.abs(v.imag))


def _as_connection_set(G: Group, cd: ClassData, S) -> ConnectionSet:
    S = S if isinstance(S, ConnectionSet) else ConnectionSet.of(G, S)
    if not is_normal(cd, S):
        raise NotNormal("connection set is not a union of conjugacy classes")
    return S


# ---------------------------------------------------------------------------
# rationality conditions
# ---------------------------------------------------------------------------

@dataclass
class RationalityReport:
    conjugate_symmetry: bool      # (i)
    approx_invariance: bool       # (ii)
    real_inverse_symmetry: bool   # (iii)
    imaginary_vanishing: bool     # (iv)
    # classwise sums constant along g -> g^k (k a unit mod ord g) outside Γ(3);
    # without it (i)-(iv) do not force rationality: x = 1 + 4 in Z_5 meets all
    # four yet chi_j(x) = 2cos(2πj/5)
    galois_invariance: bool = True
    failures: list[str] = field(default_factory=list)

    @property
    def four_conditions(self) -> bool:
        return (self.conjugate_symmetry and self.approx_invariance
                and self.real_inverse_symmetry and self.imaginary_vanishing)

    @property
    def holds(self) -> bool:
        return self.four_conditions and self.galois_invariance

    def __bool__(self):
        return self.holds


def check_rationality_conditions(G: Group, cd: ClassData, x: GroupAlgebraElement) -> RationalityReport:
    """Exact classwise test for every chi_j(x) being rational.

    Reports conditions (i)-(iv) separately, plus the invariance of classwise
    sums under g -> g^k outside Γ(3) that sufficiency also needs.
    """
    sums = x.class_sums(cd)
    fails: list[str] = []
    inv = cd.inverse_class
    cond_i = True
    for c in range(cd.h):
        if sums[c] != sums[inv[c]].conjugate():
            cond_i = False
            fails.append(f"(i) class {cd.class_label(c)}")
    cond_ii = True
    cond_iii = True
    cond_iv = True
    galois = True
    for c in range(cd.h):
        m = int(cd.rep_orders[c])
        if m % 3 == 0:
            for k in divisor_set_mod3(m, 1, 1):
                other = cd.power_class(c, k)
                if sums[c] != sums[other]:
                    cond_ii = False
                    fails.append(f"(ii) classes {cd.class_label(c)} / {cd.class_label(other)}")
                    break
        else:
            if sums[c].real != sums[inv[c]].real:
                cond_iii = False
                fails.append(f"(iii) class {cd.class_label(c)}")
            if sums[c].b != 0:
                cond_iv = False
                fails.append(f"(iv) class {cd.class_label(c)}")
            for k in divisor_set(m, 1) if m > 1 else ():
                other = cd.power_class(c, k)
                if sums[c] != sums[other]:
                    galois = False
                    fails.append(f"(galois) classes {cd.class_label(c)} / {cd.class_label(other)}")
                    break
    return RationalityReport(cond_i, cond_ii, cond_iii, cond_iv, galois, fails)


def characters_rational(ct: CharacterTable, cd: ClassData, x: GroupAlgebraElement,
                        tol: float = TOL) -> tuple[bool, float]:
    """Numeric counterpart: is every chi_j(x) within ``tol`` of a rational?

    If chi_j(x) is rational it is an integer divided by the common denominator
    D of the coefficients (D*chi_j(x) is a rational algebraic integer), so the
    distance is measured to the lattice (1/D)Z.
    """
    D = x.denominator
    z = evaluate_character_sums(ct, cd, x)
    dist = np.maximum(np.abs(z.imag), np.abs(z.real - np.rint(z.real * D) / D))
    worst = float(dist.max(initial=0.0))
    return worst < tol, worst


# ---------------------------------------------------------------------------
# HS-integrality
# ---------------------------------------------------------------------------

def structural_witness(G: Group, cd: ClassData, S) -> dict:
    """Structural verdict with the evidence behind it."""
    S = _as_connection_set(G, cd, S)
    sym, skew = S.symmetric_part, S.skew_part
    witness: dict = {"symmetric_in_B": True, "skew_in_E": True, "offending": None, "reason": None}
    for x in sorted(sym):
        if not atom(G, x) <= sym:
            witness.update(symmetric_in_B=False, offending=G.label(x),
                           reason="atom of element not contained in the symmetric part")
            break
    if not in_e_algebra(G, cd, skew):
        witness["skew_in_E"] = False
        if witness["offending"] is None:
            for y in sorted(skew):
                if G.element_order(y) % 3:
                    reason = "skew element of order prime to 3"
                elif not atom3(G, y) <= skew:
                    reason = "≈-class of element not contained in the skew part"
                else:
                    continue
                witness.update(offending=G.label(y), reason=reason)
                break
    witness["verdict"] = witness["symmetric_in_B"] and witness["skew_in_E"]
    return witness


def is_hs_integral_structural(G: Group, cd: ClassData, S) -> bool:
    """S \\ S̄ lies in B(G) and S̄ lies in E(G)."""
    S = _as_connection_set(G, cd, S)
    return in_boolean_algebra(G, S.symmetric_part) and in_e_algebra(G, cd, S.skew_part)


def hs_eigenvalues(G: Group, cd: ClassData, ct: CharacterTable, S) -> np.ndarray:
    lam, mu = hs_components(G, cd, ct, S)
    return lam + mu


def is_hs_integral_spectral(G: Group, cd: ClassData, ct: CharacterTable, S,
                            tol: float = TOL) -> tuple[bool, np.ndarray]:
    """Every HS-eigenvalue within ``tol`` of an integer; returns (verdict, distances)."""
    dist = integer_distance(hs_eigenvalues(G, cd, ct, S))
    return bool(np.all(dist < tol)), dist


@dataclass
class IntegralityReport:
    structural_verdict: bool
    witness: dict
    spectral_verdict: bool
    distances: list[float]
    eigenvalues: list[float]

    @property
    def agree(self) -> bool:
        return self.structural_verdict == self.spectral_verdict

    def to_json(self) -> dict:
        return {
            "structural": {"verdict": self.structural_verdict, "witness": self.witness},
            "spectral": {"verdict": self.spectral_verdict, "distances": self.distances,
                         "eigenvalues": self.eigenvalues},
            "agree": self.agree,
        }


def hs_integrality_report(G: Group, cd: ClassData, ct: CharacterTable, S,
                          tol: float = TOL) -> IntegralityReport:
    witness = structural_witness(G, cd, S)
    values = hs_eigenvalues(G, cd, ct, S)
    dist = integer_distance(values)
    return IntegralityReport(bool(witness["verdict"]), witness, bool(np.all(dist < tol)),
                             [float(d) for d in dist], [float(v.real) for v in values])


def decompose_check(G: Group, cd: ClassData, ct: CharacterTable, S, tol: float = TOL) -> bool:
    """HS-integrality of S against that of S \\ S̄ and S̄ separately.

    Raises InvariantViolation if the equivalence fails; returns the conjunction.
    """
    S = _as_connection_set(G, cd, S)
    whole, _ = is_hs_integral_spectral(G, cd, ct, S, tol)
    sym, _ = is_hs_integral_spectral(G, cd, ct, ConnectionSet.of(G, S.symmetric_part), tol)
    skew, _ = is_hs_integral_spectral(G, cd, ct, ConnectionSet.of(G, S.skew_part), tol)
    if whole != (sym and skew):
        raise InvariantViolation(
            f"HS-integral(S)={whole} but HS-integral(S\\S̄)={sym}, HS-integral(S̄)={skew}")
    return sym and skew


# ---------------------------------------------------------------------------
# Eisenstein integrality
# ---------------------------------------------------------------------------

@dataclass
class FGValues:
    f: np.ndarray
    g: np.ndarray
    conj_pair: np.ndarray

    @property
    def g_diff(self) -> np.ndarray:
        """g_j - g_k with chi_k the complex conjugate of chi_j."""
        return self.g - self.g[self.conj_pair]

    def reconstruct(self) -> np.ndarray:
        """Adjacency eigenvalues f_j + g_j + ω3 (g_j - g_k)."""
        return self.f + self.g + OMEGA3 * self.g_diff


def f_g_values(G: Group, cd: ClassData, ct: CharacterTable, S) -> FGValues:
    S = _as_connection_set(G, cd, S)
    f = class_sum_values(cd, ct, class_indicator(cd, S.symmetric_part))
    skew = class_indicator(cd, S.skew_part)
    sizes = cd.sizes[skew].astype(float)
    inv_classes = cd.inverse_class[np.flatnonzero(skew)]
    g = (OMEGA_G * (ct.chi[:, skew] @ sizes)
         + OMEGA_G.conjugate() * (ct.chi[:, inv_classes] @ sizes)) / ct.degrees
    return FGValues(f.real.copy(), g.real.copy(), ct.conj_pair.copy())


def eisenstein_coordinates(z) -> tuple[np.ndarray, np.ndarray]:
    """(a, b) with z = a + b ω3."""
    z = np.asarray(z, dtype=complex)
    b = z.imag / (SQRT3 / 2)
    return z.real + b / 2, b


@dataclass
class EisensteinReport:
    f: list[float]
    g: list[float]
    f_distances: list[float]
    g_distances: list[float]
    verdict: bool
    adjacency_verdict: bool
    eigenvalues: list[tuple[int, int]] | None
    implied_hs: bool

    @property
    def routes_agree(self) -> bool:
        return self.verdict == self.adjacency_verdict

    def to_json(self) -> dict:
        return {
            "f": self.f, "g": self.g,
            "f_snapped": [round(v) for v in self.f], "g_snapped": [round(v) for v in self.g],
            "f_distances": self.f_distances, "g_distances": self.g_distances,
            "verdict": self.verdict, "adjacency_verdict": self.adjacency_verdict,
            "routes_agree": self.routes_agree,
            "eisenstein_eigenvalues": self.eigenvalues,
            "implied_hs_integral": self.implied_hs,
        }


def is_eisenstein_integral(G: Group, cd: ClassData, ct: CharacterTable, S,
                           tol: float = TOL) -> EisensteinReport:
    S = _as_connection_set(G, cd, S)
    fg = f_g_values(G, cd, ct, S)
    fd, gd = integer_distance(fg.f), integer_distance(fg.g)
    verdict = bool(np.all(fd < tol) and np.all(gd < tol))
    z = class_sum_values(cd, ct, class_indicator(cd, S.members))
    a, b = eisenstein_coordinates(z)
    adj = bool(np.all(integer_distance(a) < tol) and np.all(integer_distance(b) < tol))
    coords = [(int(round(x)), int(round(y))) for x, y in zip(a, b)] if adj else None
    implied = is_hs_integral_structural(G, cd, S) if verdict else False
    return EisensteinReport([float(v) for v in fg.f], [float(v) for v in fg.g],
                            [float(v) for v in fd], [float(v) for v in gd],
                            verdict, adj, coords, implied)


# ---------------------------------------------------------------------------
# C_x(j), T_y(j)
# ---------------------------------------------------------------------------

def c_values(G: Group, cd: ClassData, ct: CharacterTable, x: int) -> np.ndarray:
    """C_x(j) for every j: character sums over the closure S¹_x."""
    s1 = closure_s1(G, cd, x)
    return class_sum_values(cd, ct, class_indicator(cd, s1)).real


def c_value(G: Group, cd: ClassData, ct: CharacterTable, x: int, j: int) -> float:
    return float(c_values(G, cd, ct, x)[j])


def t_values_for_set(cd: ClassData, ct: CharacterTable, s2) -> np.ndarray:
    mask = class_indicator(cd, s2)
    sizes = cd.sizes[mask].astype(float)
    inv_classes = cd.inverse_class[np.flatnonzero(mask)]
    diff = ct.chi[:, mask] @ sizes - ct.chi[:, inv_classes] @ sizes
    return (SQRT3 * 1j * diff / ct.degrees).real


def t_values(G: Group, cd: ClassData, ct: CharacterTable, y: int) -> np.ndarray | None:
    """T_y(j) for every j, or None when S²_y does not exist."""
    s2 = closure_s2(G, cd, y)
    if s2 is None:
        return None
    return t_values_for_set(cd, ct, s2)


def t_value(G: Group, cd: ClassData, ct: CharacterTable, y: int, j: int) -> float | None:
    t = t_values(G, cd, ct, y)
    return None if t is None else float(t[j])


# ---------------------------------------------------------------------------
# divisibility conjecture
# ---------------------------------------------------------------------------

@dataclass
class ScanRecord:
    group: str
    y: int
    y_label: str
    j: int
    t: float
    c: float
    t_over_3_distance: float
    t_distance: float
    c_distance: float
    parity_ok: bool

    def to_json(self) -> dict:
        return dict(self.__dict__)


@dataclass
class ConjectureScanResult:
    records: list[ScanRecord] = field(default_factory=list)
    groups: list[str] = field(default_factory=list)
    tol: float = TOL

    @property
    def counterexamples(self) -> list[ScanRecord]:
        return [r for r in self.records if r.t_over_3_distance >= self.tol]

    @property
    def invariant_failures(self) -> list[ScanRecord]:
        """Records breaking facts that are theorems (T, C integral, same parity)."""
        return [r for r in self.records
                if r.t_distance >= self.tol or r.c_distance >= self.tol or not r.parity_ok]

    @property
    def verdict(self) -> bool:
        return not self.counterexamples

    @property
    def pairs_scanned(self) -> int:
        return len(self.records)

    def to_json(self) -> dict:
        return {
            "groups": self.groups,
            "pairs_scanned": self.pairs_scanned,
            "elements_scanned": len({(r.group, r.y) for r in self.records}),
            "verdict": self.verdict,
            "max_t_over_3_distance": max((r.t_over_3_distance for r in self.records), default=0.0),
            "counterexamples": [r.to_json() for r in self.counterexamples],
            "invariant_failures": [r.to_json() for r in self.invariant_failures],
        }


def scan_group(G: Group, cd: ClassData, ct: CharacterTable, tol: float = TOL) -> list[ScanRecord]:
    """T_y(j)/3 for one y per ≈-class of Γ(3) whose S²_y exists."""
    records = []
    covered: set[int] = set()
    for y in np.flatnonzero(G.orders % 3 == 0):
        y = int(y)
        if y in covered:
            continue
        covered |= atom3(G, y)
        s2 = closure_s2(G, cd, y)
        if s2 is None:
            continue
        t = t_values_for_set(cd, ct, s2)
        c = c_values(G, cd, ct, y)
        for j in range(ct.h):
            t3 = t[j] / 3
            records.append(ScanRecord(
                group=G.name, y=y, y_label=G.label(y), j=j, t=float(t[j]), c=float(c[j]),
                t_over_3_distance=float(abs(t3 - round(t3))),
                t_distance=float(abs(t[j] - round(t[j]))),
                c_distance=float(abs(c[j] - round(c[j]))),
                parity_ok=(round(t[j]) - round(c[j])) % 2 == 0,
            ))
    return records


def conjecture_scan(groups, max_order: int = DEFAULT_MAX_ORDER, tol: float = TOL) -> ConjectureScanResult:
    result = ConjectureScanResult(tol=tol)
    for spec in groups:
        ctx = _context.load(str(spec), max_order)
        result.groups.append(ctx.spec)
        result.records.extend(scan_group(ctx.group, ctx.classes, ctx.table, tol))
    return result


# ---------------------------------------------------------------------------
# HS-integral => Eisenstein integral, under the divisibility hypothesis
# ---------------------------------------------------------------------------

def s2_decomposition(G: Group, cd: ClassData, skew) -> list[tuple[int, frozenset[int]]] | None:
    """Greedy partition of a skew set into blocks S²_y; None if impossible."""
    remaining = set(skew)
    blocks = []
    while remaining:
        y = min(remaining)
        if G.element_order(y) % 3:
            return None
        block = closure_s2(G, cd, y)
        if block is None or not block <= remaining:
            return None
        blocks.append((y, block))
        remaining -= block
    return blocks


@dataclass
class EisensteinFromHSResult:
    hypothesis_holds: bool
    hypothesis_failures: list[tuple[str, int, float]]
    hs_integral: bool
    eisenstein_integral: bool
    g_direct: list[float]
    g_from_blocks: list[float] | None
    blocks: list[str]
    tol: float = TOL

    @property
    def implication_ok(self) -> bool:
        if self.hypothesis_holds and self.hs_integral:
            return self.eisenstein_integral
        return True

    @property
    def routes_agree(self) -> bool:
        if self.g_from_blocks is None:
            return True
        return bool(np.max(np.abs(np.subtract(self.g_direct, self.g_from_blocks)), initial=0.0) < self.tol)

    def __bool__(self):
        return self.implication_ok and self.routes_agree


def eisenstein_from_hs_check(G: Group, cd: ClassData, ct: CharacterTable, S, tol: float = TOL,
                    strict: bool = False) -> EisensteinFromHSResult:
    """Check HS-integral => Eisenstein integral when every T_y/3 (y in S̄) is integral.

    Also recomputes g_j as (1/2) sum_l (C_{y_l}(j) - T_{y_l}(j)/3) over the
    greedy decomposition of S̄ into S²_y blocks.  A non-integral T_y/3 is
    reported in the result (or raised as HypothesisFailed when ``strict``).
    """
    S = _as_connection_set(G, cd, S)
    failures = []
    covered: set[int] = set()
    for y in sorted(S.skew_part):
        if y in covered or G.element_order(y) % 3:
            continue
        covered |= atom3(G, y)
        t = t_values(G, cd, ct, y)
        if t is None:
            continue
        for j, tj in enumerate(t):
            if abs(tj / 3 - round(tj / 3)) >= tol:
                failures.append((G.label(y), j, float(tj)))
    if failures and strict:
        raise HypothesisFailed(f"non-integral T_y(j)/3: {failures[:3]}")
    hs = is_hs_integral_structural(G, cd, S)
    eis = is_eisenstein_integral(G, cd, ct, S, tol).verdict
    fg = f_g_values(G, cd, ct, S)
    g_blocks = None
    labels = []
    blocks = s2_decomposition(G, cd, S.skew_part) if in_e_algebra(G, cd, S.skew_part) else None
    if blocks is not None:
        acc = np.zeros(ct.h)
        for y, block in blocks:
            c = c_values(G, cd, ct, y)
            acc += c - t_values_for_set(cd, ct, block) / 3
            labels.append(G.label(y))
        g_blocks = [float(v) for v in acc / 2]
    return EisensteinFromHSResult(not failures, failures, hs, eis, [float(v) for v in fg.g],
                           g_blocks, labels, tol)
