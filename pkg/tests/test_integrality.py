import numpy as np
import pytest

from normcay.atoms import ConnectionSet, gamma3, in_boolean_algebra, in_e_algebra, inverse_set
from normcay.classify import enumerate_normal_sets, exhaustive_sweep
from normcay.eisenstein import EisensteinRational
from normcay.errors import HypothesisFailed, NotInGamma3, NotNormal
from normcay.integrality import (
    c_value, c_values, characters_rational, check_rationality_conditions, conjecture_scan,
    decompose_check, f_g_values, hs_integrality_report, is_eisenstein_integral,
    is_hs_integral_spectral, is_hs_integral_structural, structural_witness, t_value, t_values,
    eisenstein_from_hs_check,
)
from normcay.spectra import GroupAlgebraElement, adjacency_eigenvalues, evaluate_character_sum

from algebra_samples import random_element
from conftest import ctx

SMALL = ["cyclic:9", "cyclic:12", "dihedral:6", "dicyclic:3", "alternating:4", "symmetric:4",
         "product:cyclic:3,cyclic:3", "product:cyclic:2,cyclic:6"]


def cls(c, label):
    G, cd = c.group, c.classes
    return cd.class_set(int(cd.class_of[G.index(label)]))


def mixed_example(a4):
    return cls(a4, "(1,2,3)") | cls(a4, "(1,2)(3,4)")


def by_trivial_first(values, ct):
    """Reorder per-character values to the reference A4 ordering used in the tests.

    Reference order: trivial, the character with value ω3 at (1,2,3), its
    conjugate, the degree 3 character.
    """
    G, cd = ct.classes.group, ct.classes
    c = int(cd.class_of[G.index("(1,2,3)")])
    w = np.exp(2j * np.pi / 3)
    order = [int(np.argmin(np.abs(ct.chi[:, c] - target) + 10 * (ct.degrees != 1))) for target in (1, w, w.conjugate())]
    order.append(int(np.flatnonzero(ct.degrees == 3)[0]))
    return [values[j] for j in order]


# -- rationality conditions ---------------------------------------------------

def test_rationality_zero(a4):
    G, cd, ct = a4.parts
    report = check_rationality_conditions(G, cd, GroupAlgebraElement())
    assert report.holds and not report.failures


def test_rationality_oriented_assignment(a4):
    G, cd, ct = a4.parts
    S = cls(a4, "(1,2,3)")
    coeffs = {g: EisensteinRational(1, 1) for g in S}                           # -ω3^2 on S
    coeffs.update({g: EisensteinRational(0, -1) for g in inverse_set(G, S)})    # -ω3 on S^-1
    x = GroupAlgebraElement(coeffs)
    report = check_rationality_conditions(G, cd, x)
    assert report.holds
    values = [evaluate_character_sum(ct, cd, x, j) / ct.degrees[j] for j in range(ct.h)]
    assert sorted(round(v.real) for v in values) == [-8, 0, 4, 4]
    assert max(abs(v.imag) for v in values) < 1e-9
    assert characters_rational(ct, cd, x)[0]


def test_rationality_condition_i_fails(a4):
    G, cd, ct = a4.parts
    x = GroupAlgebraElement({g: EisensteinRational(1, 2) for g in cls(a4, "(1,2,3)")})   # i√3
    report = check_rationality_conditions(G, cd, x)
    assert not report.conjugate_symmetry and not report.holds
    assert not characters_rational(ct, cd, x)[0]


def test_rationality_conditions_iii_iv():
    c = ctx("cyclic:4")
    G, cd, ct = c.parts
    x = GroupAlgebraElement({1: EisensteinRational(0, 1), 3: EisensteinRational(-1, -1)})
    report = check_rationality_conditions(G, cd, x)
    assert report.conjugate_symmetry and not report.imaginary_vanishing
    assert not characters_rational(ct, cd, x)[0]
    x = GroupAlgebraElement({1: 2, 3: 1})
    report = check_rationality_conditions(G, cd, x)
    assert report.conjugate_symmetry is False and not report.real_inverse_symmetry


def test_rationality_condition_ii():
    c = ctx("cyclic:9")
    G, cd, ct = c.parts
    x = GroupAlgebraElement({1: 1, 8: 1})        # 1 ≈ 4 ≈ 7 are missing
    report = check_rationality_conditions(G, cd, x)
    assert report.conjugate_symmetry and not report.approx_invariance
    assert not characters_rational(ct, cd, x)[0]


def test_four_conditions_alone_are_not_sufficient():
    c = ctx("cyclic:5")
    G, cd, ct = c.parts
    x = GroupAlgebraElement({1: 1, 4: 1})
    report = check_rationality_conditions(G, cd, x)
    assert report.four_conditions
    assert not report.galois_invariance and not report.holds
    rational, worst = characters_rational(ct, cd, x)
    assert not rational and worst > 0.1
    x = GroupAlgebraElement({g: 1 for g in range(1, 5)})
    assert check_rationality_conditions(G, cd, x).holds and characters_rational(ct, cd, x)[0]


@pytest.mark.parametrize("spec", SMALL)
def test_rationality_random_agreement(spec):
    c = ctx(spec)
    G, cd, ct = c.parts
    rng = np.random.default_rng(7)
    seen = set()
    for i in range(40):
        x = random_element(cd, G, rng, rational=i % 2 == 0, four_only=i % 4 >= 2)
        exact = check_rationality_conditions(G, cd, x).holds
        numeric, _ = characters_rational(ct, cd, x)
        assert exact == numeric
        seen.add(exact)
    assert seen == {True, False}


# -- HS-integrality -----------------------------------------------------------

def test_structural_examples(a4):
    G, cd, ct = a4.parts
    S = mixed_example(a4)
    assert is_hs_integral_structural(G, cd, S)
    report = hs_integrality_report(G, cd, ct, S)
    assert report.agree and report.spectral_verdict
    c = ctx("cyclic:12")
    assert not is_hs_integral_structural(c.group, c.classes, {5, 7})
    assert not is_hs_integral_spectral(*c.parts, {5, 7})[0]
    assert is_hs_integral_structural(c.group, c.classes, {5, 11})
    witness = structural_witness(c.group, c.classes, {5})
    assert not witness["verdict"] and witness["offending"] == "5"


def test_symmetric_group_transpositions():
    c = ctx("symmetric:3")
    G, cd, ct = c.parts
    S = cls(c, "(1,2)")
    ok, dist = is_hs_integral_spectral(G, cd, ct, S)
    assert ok and dist.max() < 1e-9
    assert is_hs_integral_structural(G, cd, S)


def test_not_normal(a4):
    G, cd, ct = a4.parts
    S = {G.index("(1,2,3)"), G.index("(1,3,2)")}
    with pytest.raises(NotNormal):
        is_hs_integral_structural(G, cd, S)
    with pytest.raises(NotNormal):
        is_hs_integral_spectral(G, cd, ct, S)
    with pytest.raises(NotNormal):
        decompose_check(G, cd, ct, S)


def test_decompose_all_a4(a4):
    G, cd, ct = a4.parts
    sets = list(enumerate_normal_sets(G, cd))
    assert len(sets) == 7
    for S in sets:
        assert decompose_check(G, cd, ct, S) == is_hs_integral_spectral(G, cd, ct, S)[0]


@pytest.mark.parametrize("spec", SMALL)
def test_specializations(spec):
    """Symmetric sets: HS-integral iff in B(G).  Skew sets: iff in E(G)."""
    c = ctx(spec)
    G, cd, ct = c.parts
    for S in enumerate_normal_sets(G, cd, "symmetric-only"):
        assert is_hs_integral_spectral(G, cd, ct, S)[0] == in_boolean_algebra(G, S)
    for S in enumerate_normal_sets(G, cd, "oriented-only"):
        assert is_hs_integral_spectral(G, cd, ct, S)[0] == in_e_algebra(G, cd, S)


# -- Eisenstein integrality ---------------------------------------------------

def test_f_g_mixed_example(a4):
    G, cd, ct = a4.parts
    fg = f_g_values(G, cd, ct, mixed_example(a4))
    assert [round(v) for v in by_trivial_first(fg.f, ct)] == [3, 3, 3, -1]
    assert [round(v) for v in by_trivial_first(fg.g, ct)] == [4, 0, -4, 0]
    assert np.allclose(fg.reconstruct(), adjacency_eigenvalues(G, cd, ct, mixed_example(a4)))
    report = is_eisenstein_integral(G, cd, ct, mixed_example(a4))
    assert report.verdict and report.adjacency_verdict and report.implied_hs
    assert sorted(report.eigenvalues) == [(-1, -4), (-1, 0), (3, 4), (7, 0)]


def test_f_g_symmetric_set(a4):
    G, cd, ct = a4.parts
    fg = f_g_values(G, cd, ct, cls(a4, "(1,2)(3,4)"))
    assert np.allclose(fg.g, 0)


def test_oriented_example_implication(a4):
    G, cd, ct = a4.parts
    S = cls(a4, "(1,2,3)")
    report = is_eisenstein_integral(G, cd, ct, S)
    assert np.allclose(report.f, 0)
    if report.verdict:
        assert is_hs_integral_spectral(G, cd, ct, S)[0]
    empty = is_eisenstein_integral(G, cd, ct, ConnectionSet.of(G, ()))
    assert empty.verdict


@pytest.mark.parametrize("spec", SMALL)
def test_reconstruction_and_implication(spec):
    c = ctx(spec)
    G, cd, ct = c.parts
    for S in enumerate_normal_sets(G, cd):
        fg = f_g_values(G, cd, ct, S)
        assert np.abs(fg.reconstruct() - adjacency_eigenvalues(G, cd, ct, S)).max() < 1e-6
        report = is_eisenstein_integral(G, cd, ct, S)
        assert report.routes_agree
        if report.verdict:
            assert is_hs_integral_spectral(G, cd, ct, S)[0]


# -- C and T ------------------------------------------------------------------

def test_c_and_t_a4(a4):
    G, cd, ct = a4.parts
    y = G.index("(1,2,3)")
    assert [round(v) for v in by_trivial_first(c_values(G, cd, ct, y), ct)] == [8, -4, -4, 0]
    assert [round(v) for v in by_trivial_first(t_values(G, cd, ct, y), ct)] == [0, -12, 12, 0]
    assert c_value(G, cd, ct, y, 0) == pytest.approx(8)
    assert t_value(G, cd, ct, y, 0) == pytest.approx(0)


def test_c_value_special_cases():
    c = ctx("cyclic:10")
    G, cd, ct = c.parts
    values = c_values(G, cd, ct, 5)                  # central involution, S1 = {5}
    assert np.allclose(np.sort(values), [-1] * 5 + [1] * 5)
    for x in range(1, G.n):
        from normcay.atoms import closure_s1
        assert c_value(G, cd, ct, x, 0) == pytest.approx(len(closure_s1(G, cd, x)))


def test_t_value_errors_and_nonexistence():
    c = ctx("cyclic:12")
    G, cd, ct = c.parts
    with pytest.raises(NotInGamma3):
        t_values(G, cd, ct, 3)
    t = t_values(G, cd, ct, 5)
    assert np.allclose(t / 3, np.rint(t / 3))
    s4 = ctx("symmetric:4")
    assert t_values(*s4.parts, s4.group.index("(1,2,3)")) is None


@pytest.mark.parametrize("spec", SMALL)
def test_parity_and_integrality_of_c_t(spec):
    c = ctx(spec)
    G, cd, ct = c.parts
    for y in gamma3(G):
        t = t_values(G, cd, ct, y)
        if t is None:
            continue
        cv = c_values(G, cd, ct, y)
        assert np.abs(t - np.rint(t)).max() < 1e-6 and np.abs(cv - np.rint(cv)).max() < 1e-6
        assert np.all((np.rint(t) - np.rint(cv)) % 2 == 0)
        hs = (cv + t) / 2
        assert np.abs(hs - np.rint(hs)).max() < 1e-6


def test_conjecture_scan_examples():
    result = conjecture_scan(["alternating:4"])
    assert result.verdict and result.pairs_scanned > 0
    assert {round(r.t / 3) for r in result.records} == {0, 4, -4}
    assert conjecture_scan(["symmetric:4", "symmetric:3"]).pairs_scanned == 0
    many = conjecture_scan([f"cyclic:{n}" for n in range(1, 40)])
    assert many.verdict and not many.invariant_failures


# -- Eisenstein integrality from HS-integrality -------------------------------

def test_eisenstein_from_hs_mixed_example(a4):
    G, cd, ct = a4.parts
    r = eisenstein_from_hs_check(G, cd, ct, mixed_example(a4))
    assert r.hypothesis_holds and r.hs_integral and r.eisenstein_integral
    assert r.routes_agree and r.implication_ok
    assert [round(v) for v in by_trivial_first(r.g_from_blocks, ct)] == [4, 0, -4, 0]


def test_eisenstein_from_hs_symmetric_set(a4):
    G, cd, ct = a4.parts
    r = eisenstein_from_hs_check(G, cd, ct, cls(a4, "(1,2)(3,4)"))
    assert r.g_from_blocks == [0.0] * 4 or np.allclose(r.g_from_blocks, 0)
    assert r.implication_ok and r.eisenstein_integral


@pytest.mark.parametrize("spec", ["cyclic:9", "cyclic:12", "dicyclic:3", "product:cyclic:3,cyclic:3"])
def test_eisenstein_from_hs_exhaustive(spec):
    c = ctx(spec)
    G, cd, ct = c.parts
    for S in enumerate_normal_sets(G, cd):
        r = eisenstein_from_hs_check(G, cd, ct, S)
        assert r.implication_ok and r.routes_agree


def test_eisenstein_from_hs_strict_reports_hypothesis_failure(a4, monkeypatch):
    import normcay.integrality as integ
    G, cd, ct = a4.parts
    monkeypatch.setattr(integ, "t_values", lambda *a: np.array([0.0, 1.0, -1.0, 0.0]))
    r = integ.eisenstein_from_hs_check(G, cd, ct, mixed_example(a4))
    assert not r.hypothesis_holds
    with pytest.raises(HypothesisFailed):
        integ.eisenstein_from_hs_check(G, cd, ct, mixed_example(a4), strict=True)


# -- the bulk sweep against the per-set route ---------------------------------

@pytest.mark.parametrize("spec", SMALL + ["dihedral:7", "cyclic:14"])
def test_sweep_agrees_with_per_set_route(spec):
    c = ctx(spec)
    G, cd, ct = c.parts
    sweep = exhaustive_sweep(G, cd, ct)
    hs = eis = 0
    for S in enumerate_normal_sets(G, cd):
        hs += is_hs_integral_structural(G, cd, S)
        eis += is_eisenstein_integral(G, cd, ct, S).verdict
    assert sweep.ok
    assert (sweep.sets, sweep.hs_integral, sweep.eisenstein_integral) == (2 ** (cd.h - 1) - 1, hs, eis)
