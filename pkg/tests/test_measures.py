from fractions import Fraction

import numpy as np
import pytest

from toeplitz_lab import decks, measures
from toeplitz_lab.lattice import SpecError, folner_ratio
from toeplitz_lab.toeplitz import BETA


def dihedral():
    return decks.construction(decks.bundled_deck("dihedral-m2"))


def z2():
    return decks.construction(decks.bundled_deck("z2-m2"))


def test_marker_mass():
    cons = dihedral()
    assert measures.marker_mass_closed(cons) == Fraction(1, 10)
    for n in (1, 2, 3, 4):
        assert measures.mu_freq_counted(cons, n)[BETA] == Fraction(1, 10)
    # first-level frequencies: the step symbol eats the fresh cells
    f1 = measures.mu_freq_counted(cons, 1)
    assert f1[2] >= Fraction(8, 10)
    assert f1[1] == Fraction(1, 10)
    assert sum(f1.values()) == 1


def test_no_marker_without_reps():
    f = measures.mu_freq_counted(z2(), 2)
    assert BETA not in f
    assert sum(f.values()) == 1


def test_counted_equals_closed_frequencies():
    for cons in (dihedral(), z2()):
        for n in (1, 2, 3, 4):
            assert measures.mu_freq_counted(cons, n) == \
                measures.mu_freq_closed(cons, n)


def test_density_product_examples():
    cons = dihedral()
    c = measures.density_product_check(cons, 0)
    assert c.counted == c.closed == Fraction(1, 5)
    c = measures.density_product_check(cons, 1)
    assert c.counted == c.closed == Fraction(9, 25)  # 1 - (4/5)(1 - 5/25)
    densities = [measures.periodic_density_closed(cons, n) for n in (1, 2, 3, 4)]
    assert all(a <= b for a, b in zip(densities, densities[1:]))


def test_transition_matrix_shape():
    cons = dihedral()
    q = 5
    assert measures.transition_matrix(cons, 2) == ((q, 1), (0, q - 1))
    assert measures.transition_matrix(cons, 1) == ((q - 1, 0), (1, q))
    for n in (1, 2, 3):
        assert measures.transition_det(cons, n) != 0


def test_transition_identities():
    for cons in (dihedral(), z2()):
        assert measures.verify_transition(cons, 1, 4)
        assert measures.verify_transition(cons, 2, 4)
        assert measures.verify_projection(cons, 4)
        assert measures.transition_chain_check(cons, 3, 4)


def test_projection_matrix_examples():
    cons = dihedral()
    A0 = measures.projection_matrix(cons)
    assert A0 == ((9, 1), (0, 8), (1, 1))
    cells = cons.domains.size(1) * cons.group.finite_order
    for j in range(2):
        assert sum(row[j] for row in A0) == cells  # columns sum to |D_1 R|
    flat = measures.projection_matrix(z2())
    assert all(x == 0 for x in flat[-1])  # no marker row without reps


def test_simplex_vertices():
    cons = dihedral()
    for N in (2, 3, 4):
        verts = measures.simplex_vertices(cons, N)
        assert len(verts) == 2
        for v in verts:
            assert sum(v) == 1
            assert v[-1] == Fraction(1, 10)  # marker coordinate is level-1 fixed
        d = measures.periodic_density_closed(cons, N)
        gap = verts[0][0] - verts[1][0]
        assert gap == (1 - d) == verts[1][1] - verts[0][1]


def test_limit_measure_estimates():
    cons = dihedral()
    vec1 = measures.estimate_limit_measures(cons, 1, [1, 2])
    vec2 = measures.estimate_limit_measures(cons, 2, [1, 2])
    # matched-depth vectors are distinct and dominated in their own symbol
    for s, (a, b) in enumerate(zip(vec1, vec2), start=1):
        assert a != b
        assert a[1] > a[2] and b[2] > b[1]
        assert a[BETA] == b[BETA] == Fraction(1, 10)
        n = 2 * s  # deck depth used by the estimate for i = 1
        d = measures.periodic_density_closed(cons, n)
        assert a[1] - a[2] >= 1 - 2 * d


def test_dominant_class_mass_values():
    cons = dihedral()
    mass, bound = measures.dominant_class_mass(cons, 1, 1, 2)
    assert mass == Fraction(21, 25) and bound == Fraction(1, 50)
    mass, bound = measures.dominant_class_mass(cons, 1, 1, 3)
    assert mass == Fraction(461, 625) and mass >= bound
    with pytest.raises(SpecError):
        measures.dominant_class_mass(cons, 1, 2, 2)  # needs s > k


def test_cell_symbols_constancy_and_counts():
    cons = dihedral()
    cells = measures.cell_symbols(cons, 1, 3)
    assert len(cells) == 25
    from collections import Counter
    hist = Counter(sym for _, sym in cells)
    assert hist == {1: 4, 2: 21}


def test_shift_invariance_gap_bounded():
    deck = decks.bundled_deck("dihedral-m2")
    cons = decks.construction(deck)
    for g in (((1,), 0), ((2,), 1)):
        gap, correction = measures.translated_frequency_gap(cons, 3, g)
        assert gap <= correction
        assert correction <= 2 * folner_ratio(deck.group, deck.domains, 3, g)


def test_complexity_profile():
    flat = np.zeros(1000, dtype=np.int16)
    prof = measures.complexity_profile(flat, [2, 3, 4])
    assert [c for _, c, _ in prof] == [1, 1, 1]
    with pytest.raises(SpecError):
        measures.complexity_profile(flat[:20], [5])
    rng = np.random.default_rng(1)
    noisy = rng.integers(0, 2, size=2000).astype(np.int16)
    prof = measures.complexity_profile(noisy, [2])
    assert prof[0][1] == 32  # all length-5 words occur


def test_fresh_count_matches_enumeration():
    for cons in (dihedral(), z2()):
        for n in (1, 2, 3):
            assert measures.fresh_count(cons, n) == len(cons.fresh_cells(n))
