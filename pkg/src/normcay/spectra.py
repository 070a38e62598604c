"""Adjacency matrices of mixed Cayley graphs and their spectra.

Two routes are provided for the Hermitian matrix of the second kind: the
character-sum formula for normal connection sets and a direct dense
eigen-decomposition.  The non-Hermitian 0/1 matrix is only ever handled by the
character route; ``moment_check`` validates it against power traces.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .atoms import ConnectionSet, as_set, inverse_set, is_normal
from .class_algebra import CharacterTable, ClassData
from .eisenstein import EisensteinRational
from .errors import ConvergenceFailure, IdentityInSet, NotNormal
from .group_core import Group

OMEGA3 = cmath.exp(2j * math.pi / 3)
OMEGA6 = complex(0.5, math.sqrt(3.0) / 2)
OMEGA6_5 = OMEGA6.conjugate()

MERGE_TOL = 1e-6
RESIDUAL_TOL = 1e-9
REAL_TOL = 1e-9


def omega(m: int) -> complex:
    """Primitive m-th root of unity exp(2πi/m)."""
    return cmath.exp(2j * math.pi / m)


# ---------------------------------------------------------------------------
# spectrum container
# ---------------------------------------------------------------------------

@dataclass
class Spectrum:
    """Multiset of eigenvalues as sorted ``(value, multiplicity)`` pairs.

    ``per_character`` keeps the unmerged ``(j, value, d_j**2)`` view when the
    spectrum came from a character table.
    """

    entries: list[tuple[complex, int]]
    per_character: list[tuple[int, complex, int]] | None = field(default=None, repr=False)

    @classmethod
    def from_values(cls, values, mults=None, merge_tol: float = MERGE_TOL, per_character=None):
        values = [complex(v) for v in values]
        mults = [1] * len(values) if mults is None else [int(m) for m in mults]
        clusters: list[list] = []   # [weighted sum, multiplicity, first value]
        for v, m in sorted(zip(values, mults), key=lambda p: (p[0].real, p[0].imag)):
            for cl in clusters:
                if abs(v - cl[2]) <= merge_tol:
                    cl[0] += v * m
                    cl[1] += m
                    break
            else:
                clusters.append([v * m, m, v])
        entries = []
        for total, m, _ in clusters:
            v = total / m
            v = complex(v.real + 0.0, v.imag + 0.0)
            entries.append((v, m))
        entries.sort(key=lambda e: (round(e[0].real, 9), round(e[0].imag, 9)))
        return cls(entries, per_character)

    @property
    def total(self) -> int:
        return sum(m for _, m in self.entries)

    def expanded(self) -> np.ndarray:
        return np.array([v for v, m in self.entries for _ in range(m)], dtype=complex)

    def is_real(self, tol: float = REAL_TOL) -> bool:
        return all(abs(v.imag) <= tol for v, _ in self.entries)

    def snapped(self) -> list[tuple[int, int]]:
        """Entries with real values rounded to integers."""
        return [(int(round(v.real)), m) for v, m in self.entries]

    def max_abs(self) -> float:
        return max((abs(v) for v, _ in self.entries), default=0.0)

    def matches(self, other: "Spectrum", tol: float = MERGE_TOL) -> bool:
        """Multiset equality up to ``tol`` (greedy nearest matching)."""
        a, b = self.expanded(), list(other.expanded())
        if len(a) != len(b):
            return False
        for v in a:
            dist = [abs(v - w) for w in b]
            i = int(np.argmin(dist))
            if dist[i] > tol:
                return False
            b.pop(i)
        return True

    def to_json(self) -> list[dict]:
        return [{"value_re": v.real, "value_im": v.imag, "multiplicity": m} for v, m in self.entries]


# ---------------------------------------------------------------------------
# matrices
# ---------------------------------------------------------------------------

def difference_matrix(G: Group) -> np.ndarray:
    """``D[u, v] = v u^-1``."""
    return G.table[:, G.inv].T


def _check_identity_free(S) -> frozenset[int]:
    s = as_set(S)
    if 0 in s:
        raise IdentityInSet("connection set contains the identity")
    return s


def build_h_matrix(G: Group, S) -> np.ndarray:
    """Hermitian adjacency matrix of the second kind of Cay(G, S)."""
    S = S if isinstance(S, ConnectionSet) else ConnectionSet.of(G, _check_identity_free(S))
    weights = np.zeros(G.n, dtype=complex)
    weights[list(S.symmetric_part)] = 1.0
    weights[list(S.skew_part)] = OMEGA6
    weights[list(inverse_set(G, S.skew_part))] = OMEGA6_5
    return weights[difference_matrix(G)]


def build_a_matrix(G: Group, S) -> np.ndarray:
    """0/1 adjacency matrix: ``a[u, v] = 1`` iff ``v u^-1`` lies in S."""
    s = _check_identity_free(S)
    weights = np.zeros(G.n, dtype=np.int64)
    weights[list(s)] = 1
    return weights[difference_matrix(G)]


# ---------------------------------------------------------------------------
# character route
# ---------------------------------------------------------------------------

def class_indicator(cd: ClassData, elements) -> np.ndarray:
    """Boolean mask over classes for a union of classes."""
    mask = np.zeros(cd.h, dtype=bool)
    for g in elements:
        mask[cd.class_of[g]] = True
    return mask


def _require_normal(G: Group, cd: ClassData, S) -> ConnectionSet:
    S = S if isinstance(S, ConnectionSet) else ConnectionSet.of(G, _check_identity_free(S))
    if not is_normal(cd, S):
        raise NotNormal("connection set is not a union of conjugacy classes")
    return S


def class_sum_values(cd: ClassData, ct: CharacterTable, mask: np.ndarray) -> np.ndarray:
    """``(1/d_j) * sum_{s in union of masked classes} chi_j(s)`` for every j."""
    return (ct.chi[:, mask] @ cd.sizes[mask].astype(float)) / ct.degrees


def hs_components(G: Group, cd: ClassData, ct: CharacterTable, S) -> tuple[np.ndarray, np.ndarray]:
    """Per-character parts (λ_j, μ_j) of the HS-eigenvalues γ_j = λ_j + μ_j."""
    S = _require_normal(G, cd, S)
    lam = class_sum_values(cd, ct, class_indicator(cd, S.symmetric_part))
    skew = class_indicator(cd, S.skew_part)
    sizes = cd.sizes[skew].astype(float)
    inv_classes = cd.inverse_class[np.flatnonzero(skew)]
    mu = (OMEGA6 * (ct.chi[:, skew] @ sizes) + OMEGA6_5 * (ct.chi[:, inv_classes] @ sizes)) / ct.degrees
    return lam, mu


def _real_or_raise(values: np.ndarray) -> np.ndarray:
    if values.size and np.abs(values.imag).max() > REAL_TOL:
        raise ArithmeticError(f"HS-eigenvalue with imaginary part {np.abs(values.imag).max():.3g}")
    return values.real.astype(complex)


def _from_characters(values: np.ndarray, ct: CharacterTable) -> Spectrum:
    mults = ct.degrees**2
    per = [(j, complex(values[j]), int(mults[j])) for j in range(ct.h)]
    return Spectrum.from_values(values, mults, per_character=per)


def hs_spectrum_by_characters(G: Group, cd: ClassData, ct: CharacterTable, S) -> Spectrum:
    lam, mu = hs_components(G, cd, ct, S)
    return _from_characters(_real_or_raise(lam + mu), ct)


def adjacency_eigenvalues(G: Group, cd: ClassData, ct: CharacterTable, S) -> np.ndarray:
    """Per-character eigenvalues ``(1/d_j) sum_{s in S} chi_j(s)`` of the 0/1 matrix."""
    S = _require_normal(G, cd, S)
    return class_sum_values(cd, ct, class_indicator(cd, S.members))


def adjacency_spectrum_by_characters(G: Group, cd: ClassData, ct: CharacterTable, S) -> Spectrum:
    return _from_characters(adjacency_eigenvalues(G, cd, ct, S), ct)


# ---------------------------------------------------------------------------
# direct route and moments
# ---------------------------------------------------------------------------

def hs_spectrum_direct(H: np.ndarray) -> Spectrum:
    H = np.asarray(H, dtype=complex)
    n = len(H)
    if n == 0:
        return Spectrum([])
    if np.abs(H - H.conj().T).max() > 1e-12:
        raise ValueError("matrix is not Hermitian")
    try:
        w, V = np.linalg.eigh(H)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    scale = max(np.abs(H).max(), 1.0)
    residual = np.linalg.norm(H @ V - V * w, axis=0).max()
    if residual > RESIDUAL_TOL * n * scale:
        raise ConvergenceFailure(f"eigen residual {residual:.3g}")
    return Spectrum.from_values(w)


@dataclass
class MomentCheck:
    ok: bool
    failing_k: int | None = None
    max_error: float = 0.0

    def __bool__(self):
        return self.ok


def moment_check(M: np.ndarray, spec: Spectrum, kmax: int, rtol: float = 1e-6) -> MomentCheck:
    """Compare ``trace(M^k)`` with ``sum mult * value^k`` for k = 1..kmax."""
    M = np.asarray(M, dtype=complex)
    n = len(M)
    values = np.array([v for v, _ in spec.entries], dtype=complex)
    mults = np.array([m for _, m in spec.entries], dtype=float)
    base = max(spec.max_abs(), 1.0)
    P = M.copy()
    worst = 0.0
    for k in range(1, kmax + 1):
        err = abs(np.trace(P) - (mults * values**k).sum())
        scale = rtol * n * base**k
        worst = max(worst, err / scale)
        if err > scale:
            return MomentCheck(False, k, worst)
        P = P @ M
    return MomentCheck(True, None, worst)


# ---------------------------------------------------------------------------
# group-algebra elements
# ---------------------------------------------------------------------------

@dataclass
class GroupAlgebraElement:
    """Finitely supported ``sum c_g g`` with exact coefficients in Q(ω3)."""

    coeffs: dict[int, EisensteinRational] = field(default_factory=dict)

    @classmethod
    def from_pairs(cls, pairs: dict) -> "GroupAlgebraElement":
        return cls({int(g): EisensteinRational.coerce(c) for g, c in pairs.items()})

    def class_sums(self, cd: ClassData) -> list[EisensteinRational]:
        sums = [EisensteinRational() for _ in range(cd.h)]
        for g, c in self.coeffs.items():
            k = int(cd.class_of[g])
            sums[k] = sums[k] + c
        return sums

    @property
    def denominator(self) -> int:
        return math.lcm(*(c.denominator for c in self.coeffs.values())) if self.coeffs else 1


def evaluate_character_sum(ct: CharacterTable, cd: ClassData, x: GroupAlgebraElement, j: int) -> complex:
    """``chi_j(x)`` evaluated classwise from exact class-coefficient sums."""
    sums = x.class_sums(cd)
    return complex(sum(complex(s) * ct.chi[j, c] for c, s in enumerate(sums) if s))


def evaluate_character_sums(ct: CharacterTable, cd: ClassData, x: GroupAlgebraElement) -> np.ndarray:
    """``chi_j(x)`` for every j at once."""
    sums = np.array([complex(s) for s in x.class_sums(cd)])
    return ct.chi @ sums
