import itertools
import math

import numpy as np
import pytest

from normcay.errors import SizeExceeded, UnsupportedFamily
from normcay.group_core import build_group, is_ambivalent, normalize_label, parse_spec


def brute_table(G):
    return np.array([[G.mul(a, b) for b in range(G.n)] for a in range(G.n)])


def check_axioms(G):
    T = brute_table(G)
    n = G.n
    assert np.all(T[0] == np.arange(n)) and np.all(T[:, 0] == np.arange(n))
    for row in T:
        assert sorted(row) == list(range(n))            # Latin square
    a, b, c = np.meshgrid(np.arange(n), np.arange(n), np.arange(n), indexing="ij")
    assert np.array_equal(T[T[a, b], c], T[a, T[b, c]])  # associativity
    assert np.all(T[np.arange(n), G.inv] == 0)


@pytest.mark.parametrize("spec,order", [
    ("cyclic:1", 1), ("cyclic:12", 12), ("dihedral:2", 4), ("dihedral:6", 12),
    ("dicyclic:2", 8), ("dicyclic:3", 12), ("symmetric:3", 6), ("symmetric:4", 24),
    ("alternating:4", 12), ("alternating:5", 60), ("product:cyclic:3,cyclic:4", 12),
    ("perm:4:[(0 1 2)],[(0 1)(2 3)]", 12), ("perm:5:[(0 1 2 3 4)],[(1 4)(2 3)]", 10),
])
def test_orders_and_axioms(spec, order):
    G = build_group(spec)
    assert G.n == order
    assert len(G.labels) == len(set(G.labels)) == order
    if order <= 60:
        check_axioms(G)


def test_spec_roundtrip():
    for text in ["cyclic:12", "dihedral:6", "dicyclic:3", "symmetric:4", "alternating:4",
                 "product:cyclic:3,cyclic:4", "perm:4:[(0 1 2)],[(0 1)(2 3)]"]:
        assert str(parse_spec(text)) == text
        assert build_group(text).name == text


@pytest.mark.parametrize("bad", ["foo:3", "cyclic:0", "cyclic", "cyclic:-2", "perm:4:[(0 4)]",
                                 "perm:4:[(0 1)(1 2)]", "product:cyclic:3", "product:product:cyclic:2,cyclic:2,cyclic:3",
                                 "perm:99:[(0 1)]"])
def test_bad_specs(bad):
    with pytest.raises(UnsupportedFamily):
        parse_spec(bad)


def test_size_bound():
    with pytest.raises(SizeExceeded):
        build_group("symmetric:8", max_order=1000)
    with pytest.raises(SizeExceeded):
        build_group("perm:6:[(0 1 2 3 4 5)],[(0 1)]", max_order=100)


def test_dicyclic_relations():
    k = 3
    G = build_group(f"dicyclic:{k}")
    a, b = G.index("a"), G.index("b")
    assert G.element_order(a) == 2 * k
    assert G.power(b, 2) == G.power(a, k)
    assert G.mul(b, a) == G.mul(G.inverse(a), b)
    # quaternion group: a single involution
    Q = build_group("dicyclic:2")
    assert int(np.sum(Q.orders == 2)) == 1


def test_dihedral_relations():
    G = build_group("dihedral:5")
    r, s = G.index("r"), G.index("s")
    assert G.element_order(r) == 5 and G.element_order(s) == 2
    assert G.mul(G.mul(s, r), s) == G.inverse(r)


def _isomorphic(G, H):
    """Brute-force search over bijections preserving products."""
    TG, TH = brute_table(G), brute_table(H)
    if sorted(G.orders) != sorted(H.orders):
        return False
    for perm in itertools.permutations(range(1, H.n)):
        f = np.array((0,) + perm)
        if np.array_equal(f[TG], TH[f[:, None], f[None, :]]):
            return True
    return False


def test_d3_isomorphic_to_s3():
    assert _isomorphic(build_group("dihedral:3"), build_group("symmetric:3"))
    assert not _isomorphic(build_group("cyclic:6"), build_group("symmetric:3"))


def test_permutation_family_matches_named():
    A = build_group("alternating:4")
    P = build_group("perm:4:[(0 1 2)],[(0 1)(2 3)]")
    assert sorted(A.orders.tolist()) == sorted(P.orders.tolist())
    assert A.is_abelian is False and build_group("cyclic:7").is_abelian


def test_powers_and_exponent():
    G = build_group("symmetric:4")
    for g in range(G.n):
        m = G.element_order(g)
        assert G.power(g, m) == 0
        assert G.power(g, -1) == G.inverse(g)
        assert len(G.cyclic_subgroup(g)) == m
    assert G.exponent == 12


def test_labels_and_lookup():
    A = build_group("alternating:4")
    assert A.label(0) == "()"
    assert A.index("(4,2,1)") == A.index("(1,4,2)")
    assert A.index("(3, 4, 1)") == A.index("(1,3,4)")
    assert A.index("#5") == 5
    with pytest.raises(KeyError):
        A.index("(1,2)")
    assert normalize_label("(3 4)(2 0 1)") == "(0,1,2)(3,4)"


def test_large_permutation_group_without_table():
    G = build_group("alternating:8", max_order=30000)
    assert G.n == math.factorial(8) // 2
    g = G.index("(1,2,3)")
    assert G.element_order(g) == 3
    assert G.mul(g, G.inverse(g)) == 0


@pytest.mark.parametrize("k,expected", [(1, True), (2, True), (3, False), (4, False), (5, True),
                                        (6, True), (7, False)])
def test_alternating_ambivalence(k, expected):
    assert is_ambivalent(build_group(f"alternating:{k}", max_order=10000)) is expected


def test_ambivalence_other_families():
    assert is_ambivalent(build_group("dihedral:7"))
    # b^-1 = a^k b, while the conjugates of b are the a^(2i) b
    assert is_ambivalent(build_group("dicyclic:2"))
    assert not is_ambivalent(build_group("dicyclic:3"))
    assert not is_ambivalent(build_group("cyclic:3"))
    assert is_ambivalent(build_group("product:cyclic:2,cyclic:2"))
