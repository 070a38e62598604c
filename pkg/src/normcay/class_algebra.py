"""Conjugacy classes and irreducible character tables.

Character tables are computed with Burnside's class-matrix method: the
class-multiplication matrices ``M_i[j, k] = a_ijk`` commute and share the
central characters as right eigenvectors, so one eigen-decomposition of a
random integer combination ``sum t_i M_i`` recovers every character.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import DegenerateCombination, OrthogonalityFailure
from .group_core import Group

TOL_CHAR = 1e-8
RETRIES = 8


@dataclass(eq=False)
class ClassData:
    group: Group
    class_of: np.ndarray
    reps: np.ndarray
    sizes: np.ndarray
    inverse_class: np.ndarray
    centralizer_order: np.ndarray

    @property
    def h(self) -> int:
        return len(self.reps)

    @cached_property
    def members(self) -> list[np.ndarray]:
        order = np.argsort(self.class_of, kind="stable")
        bounds = np.cumsum(self.sizes)[:-1]
        return np.split(order, bounds)

    @cached_property
    def rep_orders(self) -> np.ndarray:
        return self.group.orders[self.reps]

    def power_class(self, c: int, k: int) -> int:
        """Class of ``g**k`` for ``g`` in class ``c``."""
        return int(self.class_of[self.group.power(int(self.reps[c]), k)])

    def class_label(self, c: int) -> str:
        return self.group.label(int(self.reps[c]))

    def class_set(self, c: int) -> frozenset[int]:
        return frozenset(int(g) for g in self.members[c])


def conjugacy_classes(G: Group) -> ClassData:
    """Partition ``G`` into conjugacy classes by orbit closure.

    Classes are numbered by their least element, so class 0 is the identity.
    """
    n = G.n
    maps = G.conjugation_maps()
    if maps:
        src = np.concatenate([np.arange(n)] * len(maps))
        dst = np.concatenate(maps)
        graph = coo_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(n, n))
        _, comp = connected_components(graph, directed=True, connection="weak")
    else:
        comp = np.arange(n)
    # relabel components by least member
    first = np.full(comp.max() + 1, n, dtype=np.int64)
    np.minimum.at(first, comp, np.arange(n))
    order = np.argsort(first)
    relabel = np.empty_like(order)
    relabel[order] = np.arange(len(order))
    class_of = relabel[comp].astype(np.int64)
    reps = first[order]
    sizes = np.bincount(class_of, minlength=len(reps))
    inverse_class = class_of[G.inv[reps]]
    return ClassData(G, class_of, reps, sizes, inverse_class, n // sizes)


def structure_constants(cd: ClassData, i: int, j: int, k: int) -> int:
    """Number of ``(x, y)`` with ``x`` in class i, ``y`` in class j and ``xy = z``
    for a fixed ``z`` in class k."""
    G = cd.group
    xs = cd.members[i]

    def count(z):
        ys = G.mul(G.inv[xs], z)
        return int(np.count_nonzero(cd.class_of[ys] == j))

    value = count(int(cd.reps[k]))
    if cd.sizes[k] > 1:
        other = count(int(cd.members[k][-1]))
        assert other == value, "structure constant depends on the choice of z"
    return value


def class_matrices(cd: ClassData) -> np.ndarray:
    """Array ``M[i, j, k] = a_ijk`` of all structure constants."""
    G = cd.group
    h = cd.h
    M = np.zeros((h, h, h), dtype=np.int64)
    inv = G.inv
    reps = np.asarray(cd.reps)
    cols = np.arange(h)
    for i in range(h):
        ys = G.mul(inv[cd.members[i]][:, None], reps[None, :])    # ys[x, k] = x^-1 z_k
        flat = (cd.class_of[ys] * h + cols[None, :]).ravel()
        M[i] = np.bincount(flat, minlength=h * h).reshape(h, h)
    return M


@dataclass(eq=False)
class CharacterTable:
    classes: ClassData
    chi: np.ndarray          # (h, h) complex, chi[j, c]
    degrees: np.ndarray      # (h,) int
    conj_pair: np.ndarray    # (h,) int, chi[conj_pair[j]] == conj(chi[j])
    checks: dict = field(default_factory=dict)

    @property
    def h(self) -> int:
        return len(self.degrees)

    def value(self, j: int, g: int) -> complex:
        """Character value at an arbitrary element."""
        return complex(self.chi[j, self.classes.class_of[g]])

    def to_rows(self) -> list[list[str]]:
        cd = self.classes
        header = ["character"] + [cd.class_label(c) for c in range(cd.h)]
        rows = [header]
        for j in range(self.h):
            rows.append([f"chi{j + 1}"] + [format_complex(z) for z in self.chi[j]])
        return rows


def format_complex(z: complex, digits: int = 6) -> str:
    re_, im_ = round(z.real, digits) + 0.0, round(z.imag, digits) + 0.0
    return f"{re_:.{digits}f}{im_:+.{digits}f}i"


def orthogonality_errors(cd: ClassData, chi: np.ndarray) -> tuple[float, float]:
    """Max deviations of row and column orthogonality relations."""
    n = cd.group.n
    rows = (chi * cd.sizes) @ chi.conj().T
    row_err = np.abs(rows - n * np.eye(len(chi))).max()
    cols = chi.T @ chi.conj()
    col_err = np.abs(cols - np.diag(cd.centralizer_order.astype(float))).max()
    return float(row_err), float(col_err)


def _row_order(degrees: np.ndarray, chi: np.ndarray) -> np.ndarray:
    """Degree ascending, then values descending, so the trivial character leads."""
    keys = [degrees]
    for c in range(chi.shape[1]):
        keys.append(-(np.round(chi[:, c].real, 6) + 0.0))
        keys.append(-(np.round(chi[:, c].imag, 6) + 0.0))
    return np.lexsort(keys[::-1])


def _attempt(cd: ClassData, M: np.ndarray, rng: np.random.Generator) -> CharacterTable:
    n, h = cd.group.n, cd.h
    t = rng.integers(1, 10**6 + 1, size=h)
    A = np.tensordot(t, M, axes=1).astype(float)
    w, V = np.linalg.eig(A)
    scale = max(1.0, np.abs(A).max())
    if h > 1:
        gaps = np.abs(w[:, None] - w[None, :])
        np.fill_diagonal(gaps, np.inf)
        if gaps.min() < 1e-9 * scale:
            raise DegenerateCombination(f"min eigenvalue gap {gaps.min():.3g}")
    # one inverse-iteration sweep tightens each eigenvector
    for a in range(h):
        shift = w[a] + 1e-10 * scale
        try:
            v = np.linalg.solve(A - shift * np.eye(h), V[:, a])
        except np.linalg.LinAlgError:
            continue
        V[:, a] = v / np.linalg.norm(v)
    if np.any(np.abs(V[0]) < 1e-12):
        raise DegenerateCombination("eigenvector vanishes on the identity class")
    central = (V / V[0]).T                       # central[j, c] = omega_j(K_c)
    sizes = cd.sizes.astype(float)
    norm = (np.abs(central) ** 2 / sizes).sum(axis=1)
    raw_deg = np.sqrt(n / norm)
    degrees = np.rint(raw_deg).astype(np.int64)
    if np.any(np.abs(raw_deg - degrees) > 1e-6) or np.any(degrees < 1):
        raise OrthogonalityFailure(f"degrees not integral: {raw_deg}")
    if int((degrees**2).sum()) != n:
        raise OrthogonalityFailure("sum of squared degrees differs from the group order")
    chi = degrees[:, None] * central / sizes
    order = _row_order(degrees, chi)
    chi = chi[order]
    degrees = degrees[order]
    chi[:, 0] = degrees                           # identity class value is the degree exactly
    return _verified(cd, chi, degrees)


def _verified(cd: ClassData, chi: np.ndarray, degrees: np.ndarray) -> CharacterTable:
    row_err, col_err = orthogonality_errors(cd, chi)
    if row_err > TOL_CHAR or col_err > TOL_CHAR:
        raise OrthogonalityFailure(f"orthogonality error row={row_err:.3g} col={col_err:.3g}")
    conj = chi.conj()
    dist = np.abs(conj[:, None, :] - chi[None, :, :]).max(axis=2)   # dist[j, k]
    conj_pair = dist.argmin(axis=1)
    if dist[np.arange(len(chi)), conj_pair].max() > TOL_CHAR:
        raise OrthogonalityFailure("no conjugate partner for some character")
    if np.any(conj_pair[conj_pair] != np.arange(len(chi))):
        raise OrthogonalityFailure("conjugate pairing is not an involution")
    inv_err = np.abs(chi[:, cd.inverse_class] - conj).max()
    if inv_err > TOL_CHAR:
        raise OrthogonalityFailure("chi(g^-1) != conj(chi(g))")
    if np.any(np.abs(chi) > degrees[:, None] + TOL_CHAR):
        raise OrthogonalityFailure("character value exceeds degree")
    checks = {"row_orthogonality": row_err, "column_orthogonality": col_err}
    return CharacterTable(cd, chi, degrees, conj_pair, checks)


def character_table(G: Group, cd: ClassData | None = None, seed: int = 0,
                    retries: int = RETRIES) -> CharacterTable:
    """Irreducible character table of ``G`` (rows: characters, columns: classes)."""
    if cd is None:
        cd = conjugacy_classes(G)
    M = class_matrices(cd)
    rng = np.random.default_rng(seed)
    last = None
    for _ in range(retries):
        try:
            return _attempt(cd, M, rng)
        except (DegenerateCombination, OrthogonalityFailure, np.linalg.LinAlgError) as exc:
            last = exc
    if isinstance(last, DegenerateCombination):
        raise last
    raise OrthogonalityFailure(f"character table failed after {retries} attempts: {last}")
