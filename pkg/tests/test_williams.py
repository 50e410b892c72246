from fractions import Fraction

import pytest

from toeplitz_lab import decks
from toeplitz_lab.lattice import SpecError
from toeplitz_lab.williams import (
    WilliamsParams,
    convergence_partial_sums,
    coords_of_int,
    fiber_patches,
    generate,
    max_safe_fiber_radius,
)


def small_params():
    return WilliamsParams(2, (3, 18))


def test_step_one_residues():
    eta = generate(small_params(), 40)
    for n in (0, 2, 3, -1):
        assert eta.symbol(n) == 1
        assert eta.level(n) == 1
    # every window position congruent to 0 or -1 mod 3 carries level 1
    for n in eta.positions():
        assert (eta.level(n) == 1) == (n % 3 in (0, 2))


def test_step_two_and_undefined():
    eta = generate(small_params(), 40)
    assert eta.symbol(1) == 0 and eta.level(1) == 2
    assert eta.symbol(16) == 0 and eta.level(16) == 2  # block 5 = -1 mod 6
    assert eta.symbol(4) is None  # block 1 is interior at depth 2


def test_param_validation():
    with pytest.raises(SpecError):
        WilliamsParams(2, (2, 6)).validate()
    with pytest.raises(SpecError):
        WilliamsParams(2, (3, 6)).validate()  # ratio 2 < 3
    with pytest.raises(SpecError):
        WilliamsParams(1, (3, 9)).validate()


def test_fill_steps_disjoint_and_level_map():
    eta = generate(WilliamsParams(2, (3, 18, 216)), 500)
    # a position carries a symbol exactly when it carries a level
    for n in eta.positions():
        assert (eta.symbol(n) is None) == (eta.level(n) == 0)
        if eta.level(n):
            assert eta.symbol(n) == eta.level(n) % 2


def test_period_sets_match_levels():
    # positions of level <= k are exactly the p_k-periodic ones on the window
    params = WilliamsParams(2, (3, 18, 216))
    eta = generate(params, 700)
    k, p = 2, 18
    core = range(-200, 201)
    for n in core:
        translates = [eta.symbol(n + t * p) for t in range(-20, 21)]
        vals = {v for v in translates if v is not None}
        periodic = len(vals) == 1 and None not in translates
        assert periodic == (1 <= eta.level(n) <= k), n


def test_convergence_partial_sums():
    assert convergence_partial_sums(WilliamsParams(2, (3, 18, 216))) == \
        [Fraction(1, 6), Fraction(1, 4)]
    assert convergence_partial_sums(WilliamsParams(2, (3, 9, 27))) == \
        [Fraction(1, 3), Fraction(2, 3)]
    assert convergence_partial_sums(WilliamsParams(2, (3, 18))) == [Fraction(1, 6)]


def test_undefined_density_is_block_local():
    params = WilliamsParams(2, (3, 18, 216))
    N = 600
    eta = generate(params, N)
    # undefined cells live inside interior deepest-level blocks only
    undef = [n for n in eta.positions() if eta.symbol(n) is None]
    assert len(undef) == eta.undefined_count()
    p_last = params.periods[-1]
    ratio = Fraction(eta.undefined_count(), 2 * N + 1)
    blocks = 2 * N // p_last + 2
    assert ratio <= Fraction(2 * blocks * (p_last - 2), 2 * N + 1)


def test_freeness_proxy():
    deck = decks.bundled_deck("williams-m2")
    eta = generate(deck.williams, 2000)
    for t in range(1, 1001):
        mismatch = any(
            eta.symbol(n) is not None and eta.symbol(n + t) is not None
            and eta.symbol(n) != eta.symbol(n + t)
            for n in range(-2000, 2000 - t + 1))
        assert mismatch, f"shift {t} fixes the window"


def test_toeplitz_coords_have_singleton_fiber():
    deck = decks.bundled_deck("williams-m2")
    wp = deck.williams
    radius = max_safe_fiber_radius(wp, 2)
    eta = generate(wp, wp.periods[-1] + radius + 10)
    coords = coords_of_int(wp, 0, wp.depth)  # full-depth coords of the array
    patches, _ = fiber_patches(wp, eta, coords, radius)
    assert len(patches) == 1


def test_depth2_fiber_scan_bound_and_split():
    deck = decks.bundled_deck("williams-m2")
    wp = deck.williams
    radius = max_safe_fiber_radius(wp, 2)
    eta = generate(wp, wp.periods[-1] + radius + 10)
    split = 0
    for g2 in range(wp.periods[1]):
        patches, _ = fiber_patches(wp, eta, coords_of_int(wp, g2, 2), radius)
        assert len(patches) <= wp.m
        if len(patches) == 2:
            syms = {p.aperiodic_symbol for p in patches}
            assert syms == {0, 1}
            split += 1
    assert split > 0


def test_incompatible_coords_rejected():
    deck = decks.bundled_deck("williams-m2")
    wp = deck.williams
    eta = generate(wp, wp.periods[-1] + 20)
    with pytest.raises(SpecError):
        fiber_patches(wp, eta, (1, 5), 6)  # 5 mod 6 is not 1
