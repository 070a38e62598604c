"""Acceptance suite: one marked group of tests per criterion.

The summary section "acceptance criteria" at the end of the pytest run
prints a PASS/FAIL line for each criterion number.
"""
import itertools

import numpy as np
import pytest

import normcay.class_algebra as class_algebra
from normcay.classify import (
    EXHAUSTIVE_CATALOG, catalog, classify, classify_set, count_normal_sets, exhaustive_sweep, mask_to_set,
)
from normcay.cli import EXIT_VIOLATION, main
from normcay.group_core import build_group, is_ambivalent
from normcay.integrality import (
    c_values, characters_rational, check_rationality_conditions, conjecture_scan, f_g_values,
    is_eisenstein_integral, t_values,
)
from normcay.spectra import (
    OMEGA3, Spectrum, adjacency_spectrum_by_characters, build_h_matrix, hs_spectrum_by_characters,
    hs_spectrum_direct, moment_check,
)

from algebra_samples import random_element
from conftest import ctx
from test_cli import perturbed_table

W = np.exp(2j * np.pi / 3)
CONJECTURE_GROUPS = list(dict.fromkeys(catalog(64) + [f"cyclic:{n}" for n in range(1, 101)]))
SMALL_GROUPS = catalog(24)


def criterion(n, text):
    return pytest.mark.criterion(n, text)


def a4_class(a4, label):
    G, cd = a4.group, a4.classes
    return cd.class_set(int(cd.class_of[G.index(label)]))


def reference_order(ct, G):
    """Our row index for each reference row: trivial, ω3 at (1,2,3), ω3² at (1,2,3), degree 3."""
    c = int(ct.classes.class_of[G.index("(1,2,3)")])
    linear = np.flatnonzero(ct.degrees == 1)
    pick = [int(linear[np.argmin(np.abs(ct.chi[linear, c] - z))]) for z in (1, W, W**2)]
    return pick + [int(np.flatnonzero(ct.degrees == 3)[0])]


# -- 1 ------------------------------------------------------------------------

@criterion(1, "A4 character table matches the reference up to row permutation; degrees (1,1,1,3)")
def test_a4_character_table(a4):
    G, cd, ct = a4.parts
    columns = ["()", "(1,2)(3,4)", "(1,2,3)", "(1,3,2)"]
    reference = np.array([[1, 1, 1, 1],
                          [1, 1, W, W**2],
                          [1, 1, W**2, W],
                          [3, -1, 0, 0]])
    ours = ct.chi[:, [int(cd.class_of[G.index(x)]) for x in columns]]
    assert any(np.abs(ours[list(p)] - reference).max() < 1e-8 for p in itertools.permutations(range(4)))
    assert sorted(ct.degrees.tolist()) == [1, 1, 1, 3]


# -- 2 ------------------------------------------------------------------------

@criterion(2, "A4 oriented example: HS-spectrum {-8^1, 0^9, 4^2}; direct eigensolver agrees")
def test_a4_oriented(a4):
    G, cd, ct = a4.parts
    S = a4_class(a4, "(1,2,3)")
    chars = hs_spectrum_by_characters(G, cd, ct, S)
    assert chars.snapped() == [(-8, 1), (0, 9), (4, 2)]
    assert max(abs(v - round(v.real)) for v, _ in chars.entries) < 1e-6
    direct = hs_spectrum_direct(build_h_matrix(G, S))
    assert direct.matches(chars, 1e-6)
    assert direct.snapped() == [(-8, 1), (0, 9), (4, 2)]


# -- 3 ------------------------------------------------------------------------

@criterion(3, "A4 mixed example: HS and Eisenstein spectra, f, g, C_y and T_y")
def test_a4_mixed(a4):
    G, cd, ct = a4.parts
    S = a4_class(a4, "(1,2,3)") | a4_class(a4, "(1,2)(3,4)")
    hs = hs_spectrum_by_characters(G, cd, ct, S)
    assert hs.snapped() == [(-5, 1), (-1, 9), (7, 2)]
    adj = adjacency_spectrum_by_characters(G, cd, ct, S)
    assert adj.matches(Spectrum.from_values([7, 3 + 4 * OMEGA3, -1 - 4 * OMEGA3] + [-1] * 9), 1e-6)
    eis = is_eisenstein_integral(G, cd, ct, S)
    assert eis.verdict and sorted(eis.eigenvalues) == [(-1, -4), (-1, 0), (3, 4), (7, 0)]

    order = reference_order(ct, G)
    fg = f_g_values(G, cd, ct, S)
    y = G.index("(1,2,3)")
    expected = {
        "f": (fg.f, [3, 3, 3, -1]),
        "g": (fg.g, [4, 0, -4, 0]),
        "C": (c_values(G, cd, ct, y), [8, -4, -4, 0]),
        "T": (t_values(G, cd, ct, y), [0, -12, 12, 0]),
    }
    for name, (values, want) in expected.items():
        got = np.asarray(values, dtype=float)[order]
        assert np.abs(got - want).max() < 1e-6, name


# -- 4, 5, 6 ------------------------------------------------------------------

@pytest.fixture(scope="module")
def sweeps():
    out = {}
    for spec in EXHAUSTIVE_CATALOG:
        G, cd, ct = ctx(spec).parts
        out[spec] = exhaustive_sweep(G, cd, ct)
    return out


@criterion(4, "structural and spectral HS-integrality agree on every normal set of the catalog")
def test_iff(sweeps):
    for spec, r in sweeps.items():
        assert r.sets == count_normal_sets(ctx(spec).classes)
        assert r.iff_disagreements == 0, (spec, r.failures)
    assert sum(r.sets for r in sweeps.values()) > 10**7


@criterion(5, "HS-integrality of S equals the conjunction over its symmetric and skew parts")
def test_decomposition(sweeps):
    for spec, r in sweeps.items():
        assert r.decomposition_failures == 0, (spec, r.failures)


@criterion(6, "every Eisenstein-integral instance in the catalog is HS-integral")
def test_eisenstein_implies_hs(sweeps):
    for spec, r in sweeps.items():
        assert r.eisenstein_not_hs == 0, (spec, r.failures)
    assert all(r.eisenstein_integral <= r.hs_integral for r in sweeps.values())
    assert sum(r.eisenstein_integral for r in sweeps.values()) > 0


# -- 7 ------------------------------------------------------------------------

@criterion(7, "T_y(j)/3 is integral wherever S^2_y exists (catalog plus cyclic n <= 100)")
def test_conjecture_scan():
    result = conjecture_scan(CONJECTURE_GROUPS)
    assert not result.invariant_failures
    assert result.verdict, result.counterexamples[:3]
    assert result.pairs_scanned > 10000


@criterion(7, "a perturbed character table is flagged with a nonzero exit")
def test_conjecture_flags_planted_violation(monkeypatch, capsys):
    monkeypatch.setattr(class_algebra, "character_table", perturbed_table)
    assert main(["conjecture", "--groups", "alternating:4"]) == EXIT_VIOLATION
    assert "counterexample" in capsys.readouterr().err


# -- 8 ------------------------------------------------------------------------

@criterion(8, "exact rationality verdict (conditions (i)-(iv) plus invariance along atoms outside Γ(3)) equals the numeric all-characters-rational verdict")
@pytest.mark.parametrize("spec", SMALL_GROUPS)
def test_rationality_checker(spec):
    G, cd, ct = ctx(spec).parts
    rng = np.random.default_rng(sum(map(ord, spec)))
    verdicts = []
    for i in range(200):
        # cycle through: rational, perturbed, and both again with sums that
        # only meet (i)-(iv) outside Γ(3)
        x = random_element(cd, G, rng, rational=i % 2 == 0, four_only=i % 4 >= 2)
        exact = check_rationality_conditions(G, cd, x).holds
        numeric, worst = characters_rational(ct, cd, x, 1e-6)
        assert exact == numeric, (spec, i, worst)
        if i % 4 == 0:
            assert exact
        verdicts.append(exact)
    if G.n > 1:
        assert not all(verdicts)


# -- 9 ------------------------------------------------------------------------

@criterion(9, "every computed character table is orthogonal at 1e-8")
def test_orthogonality():
    for spec in dict.fromkeys(CONJECTURE_GROUPS + SMALL_GROUPS + list(EXHAUSTIVE_CATALOG)):
        G, cd, ct = ctx(spec).parts
        sizes = cd.sizes.astype(float)
        rows = (ct.chi * sizes) @ ct.chi.conj().T
        assert np.abs(rows - G.n * np.eye(ct.h)).max() < 1e-8, spec
        cols = ct.chi.conj().T @ ct.chi
        assert np.abs(cols - np.diag(G.n / sizes)).max() < 1e-8, spec


MOMENT_FULL = 1024
MOMENT_SAMPLE = 200


@criterion(9, "every reported spectrum passes the moment check for k = 1..h")
@pytest.mark.parametrize("spec", EXHAUSTIVE_CATALOG)
def test_moments(spec):
    c = ctx(spec)
    G, cd, ct = c.parts
    total = count_normal_sets(cd)
    if total <= MOMENT_FULL:
        rows = classify([spec], moments=True)        # raises InvariantViolation on a failed moment check
        assert len(rows) == total
        return
    rng = np.random.default_rng(total)
    masks = sorted(set(int(m) for m in rng.integers(1, total + 1, size=MOMENT_SAMPLE)))
    for m in masks:
        S = mask_to_set(cd, m << 1)
        classify_set(G, cd, ct, S, moments=True)
        spec_h = hs_spectrum_by_characters(G, cd, ct, S)
        assert moment_check(build_h_matrix(G, S), spec_h, ct.h)


# -- 10 -----------------------------------------------------------------------

@criterion(10, "A_n is ambivalent exactly for n in {1,2,5,6,10} (n <= 10); S_n ambivalent for n <= 6")
def test_ambivalence():
    found = {n for n in range(1, 11) if is_ambivalent(build_group(f"alternating:{n}", max_order=2_000_000))}
    assert found == {1, 2, 5, 6, 10}
    assert all(is_ambivalent(build_group(f"symmetric:{n}")) for n in range(1, 7))
