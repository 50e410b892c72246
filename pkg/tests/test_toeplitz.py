import pytest

from toeplitz_lab import decks
from toeplitz_lab.lattice import DepthExhausted, SpecError
from toeplitz_lab.measures import fresh_count
from toeplitz_lab.periods import per_set_exact
from toeplitz_lab.toeplitz import BETA, Construction, ConstructionParams


def dihedral():
    return decks.construction(decks.bundled_deck("dihedral-m2"))


def z2():
    return decks.construction(decks.bundled_deck("z2-m2"))


def test_fresh_cells_base_cases():
    cons = dihedral()
    assert sorted(cons.fresh_cells(0)) == [(0,)]
    assert sorted(cons.fresh_cells(1)) == [(-2,), (-1,), (1,), (2,)]


def test_fresh_cells_dual_routes_small():
    cons = dihedral()
    for n in (1, 2, 3, 4):
        cells = cons.fresh_cells_checked(n)
        assert len(cells) == fresh_count(cons, n)


def test_normal_variant_requires_trivial_finite_part():
    deck = decks.bundled_deck("dihedral-m2")
    params = ConstructionParams(deck.group, deck.chain, deck.domains, 2, "normal")
    with pytest.raises(SpecError):
        Construction(params)


def test_eta_values_first_strata():
    cons = dihedral()
    assert cons.value(((0,), 0)) == (1, 1)      # alpha_1 on the subgroup
    assert cons.value(((0,), 1)) == (BETA, 1)   # marker on the other rep
    for cell in cons.fresh_cells(1):
        for f in (0, 1):
            assert cons.value((cell, f)) == (2, 2)


def test_eta_value_deep_stratum():
    cons = dihedral()
    spec = cons.group
    # gamma in Gamma_2 \ Gamma_3 times a level-1 fresh cell lands in stratum 2
    g = spec.mul(spec.mul(((25,), 0), ((1,), 0)), ((0,), 1))
    assert cons.value(g) == (2, 2)


def test_eta_value_depth_exhaustion():
    cons = dihedral()
    depth = cons.depth
    fresh_top = min(cons.fresh_cells(depth))[0]
    p_top = cons.chain.level(depth)[0]
    # a nontrivial chain translate of a top-level fresh cell sits in a deeper
    # stratum than the configured prefix can name
    with pytest.raises(DepthExhausted):
        cons.value(((fresh_top + p_top,), 0))


def test_alphabets():
    assert dihedral().alphabet == (BETA, 1, 2)
    assert z2().alphabet == (1, 2)
    win = z2().window(2)
    assert BETA not in set(win.symbol_counts())


def test_periodized_value():
    cons = dihedral()
    spec = cons.group
    n = 2
    for g in (((3,), 0), ((-7,), 1), ((0,), 1)):
        # periodicity: any Gamma_n translate reads the same value
        for gamma in (((25,), 0), ((-50,), 0)):
            assert cons.periodized_value(n, spec.mul(gamma, g)) == \
                cons.periodized_value(n, g)
    # inside the window the periodization agrees with the array
    for v in cons.domains.enumerate_box(n):
        for f in (0, 1):
            assert cons.periodized_value(n, (v, f)) == cons.value((v, f))[0]


def test_translate_constancy():
    cons = dihedral()
    ok, sym = cons.translate_constant(1, ((0,), 0))
    assert ok and sym == 2
    # every level-1 subgroup element in the level-3 box gives one constant
    for v in cons.domains.enumerate_box(3):
        if v[0] % 5 == 0:
            ok, sym = cons.translate_constant(1, (v, 0))
            assert ok and sym in (1, 2)


def test_period_set_union_discrepancy_is_level_one():
    # the computed period set equals the stated stratum union plus the
    # level-1 strata, which the stated union omits
    cons = dihedral()
    N = 3
    win = cons.window(N)
    for n in (2, 3):
        exact = per_set_exact(win, n)
        stated = cons.stated_period_union(n, N)
        level1 = {g for g, _, lvl in win.items() if lvl == 1}
        assert exact == stated | level1
        assert level1 and not (stated & level1)


def test_rep_factorization_of_period_sets():
    # Per cap D_n R = (Per cap D_n) R for the plain symbols, n <= 4.  The
    # level-1 stratum is the lone exception: it splits by finite part into
    # the first symbol and the marker, so the factorization holds verbatim
    # on the strata from level 2 up and fails on level 1 exactly.
    cons = dihedral()
    for n in (2, 3, 4):
        win = cons.window(n)
        level1 = {g for g, _, lvl in win.items() if lvl == 1}
        for alpha in (1, 2):
            per = per_set_exact(win, n, alpha)
            base = {g[0] for g in per if g[1] == 0}
            rebuilt = {(v, f) for v in base for f in (0, 1)}
            if alpha == cons.alpha(1):
                assert rebuilt - per == {g for g in level1 if g[1] != 0}
                assert per - {g for g in level1 if g[1] == 0} == \
                    rebuilt - level1
            else:
                assert per == rebuilt


def test_essentiality_spot_check():
    # shifting by anything in D_2 R outside Gamma_1 changes some level-1
    # period class on a window
    cons = dihedral()
    spec = cons.group
    win = cons.window(3)
    for w in cons.domains.enumerate_box(2):
        for f in (0, 1):
            g = (w, f)
            if f == 0 and w[0] % 5 == 0:
                continue  # inside Gamma_1
            witness = False
            for alpha in cons.alphabet:
                exact = {h for h in per_set_exact(win, 1, alpha)}
                for h in exact:
                    val = win.get(spec.mul(spec.inv(g), h))
                    if val is not None and val != alpha:
                        witness = True
                        break
                if witness:
                    break
            assert witness, (w, f)


def test_williams_reduction_level_sets_are_residue_classes():
    # with r = 1 and trivial F both constructions stratify by residue classes
    deck = decks.bundled_deck("williams-m2")
    cons = decks.construction(deck)
    win = cons.window(3)
    for l in (1, 2, 3):
        p = deck.chain.level(l)[0]
        residues = {}
        for (v, _), _, lvl in win.items():
            residues.setdefault(v[0] % p, set()).add(lvl == l)
        classes = {r for r, flags in residues.items() if flags == {True}}
        mixed = [r for r, flags in residues.items() if len(flags) > 1]
        assert not mixed
        assert len(classes) == fresh_count(cons, l - 1)

    from toeplitz_lab.williams import generate
    eta = generate(deck.williams, 3 * deck.williams.periods[2])
    p2 = deck.williams.periods[1]
    flags = {}
    for n in range(-2 * p2 * 6, 2 * p2 * 6):
        flags.setdefault(n % p2, set()).add(eta.level(n) == 2)
    assert all(len(v) == 1 for v in flags.values())
